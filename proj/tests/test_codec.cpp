#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pmalloc/codec.hpp"

using namespace pmalloc;

namespace {

// Enumerates all size-m subsets of {1..k} in colexicographic order: compare by
// the largest differing element. Independent of the codec.
std::vector<std::vector<int>> all_subsets_colex(int k, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == m) {
            out.push_back(cur);
            return;
        }
        if (next > k) return;
        self(self, next + 1);
        cur.push_back(next);
        self(self, next + 1);
        cur.pop_back();
    };
    rec(rec, 1);
    auto colex_less = [](const std::vector<int>& a, const std::vector<int>& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    };
    std::sort(out.begin(), out.end(), colex_less);
    return out;
}

// Log-gamma route to log2 C(k, m), an independent cross-check.
double log2_binom_lgamma(int k, int m) {
    return (std::lgamma(k + 1.0) - std::lgamma(m + 1.0) - std::lgamma(k - m + 1.0)) /
           std::log(2.0);
}

}  // namespace

TEST_CASE("encode: frozen examples") {
    CHECK(encode_subset({4, {}}).value == 0);
    CHECK(encode_subset({4, {1, 2}}).value == 0);
    CHECK(encode_subset({4, {3, 4}}).value == 5);
}

TEST_CASE("decode: frozen examples") {
    CHECK(decode_subset({0, 4, 0}).members.empty());
    CHECK(decode_subset({0, 4, 2}).members == std::vector<int>{1, 2});
    CHECK(decode_subset({5, 4, 2}).members == std::vector<int>{3, 4});
}

TEST_CASE("encode rejects invalid subsets") {
    CHECK_THROWS_AS(encode_subset({4, {0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(encode_subset({4, {2, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(encode_subset({4, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(encode_subset({4, {3, 2}}), std::invalid_argument);
}

TEST_CASE("decode rejects out-of-range indices") {
    CHECK_THROWS_AS(decode_subset({6, 4, 2}), std::out_of_range);
    CHECK_THROWS_AS(decode_subset({-1, 4, 2}), std::out_of_range);
}

TEST_CASE("bijection and colex monotonicity, exhaustive small K") {
    BinomialTable binom(10);
    for (int k = 1; k <= 10; ++k) {
        for (int m = 0; m <= k; ++m) {
            auto subsets = all_subsets_colex(k, m);
            REQUIRE(subsets.size() == binom.choose(k, m).convert_to<size_t>());
            for (size_t rank = 0; rank < subsets.size(); ++rank) {
                ChannelSubset s{k, subsets[rank]};
                FeedbackIndex e = encode_subset(s, binom);
                // encode is exactly the colex rank, so the image is [0, C(k,m))
                // and strictly increasing in colex order.
                CHECK(e.value == rank);
                CHECK(decode_subset(e, binom) == s);
            }
        }
    }
}

TEST_CASE("random roundtrip at K=512, M=40") {
    BinomialTable binom(512);
    std::mt19937_64 gen(7);
    std::vector<int> universe(512);
    std::iota(universe.begin(), universe.end(), 1);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int> pick;
        std::sample(universe.begin(), universe.end(), std::back_inserter(pick), 40, gen);
        ChannelSubset s{512, pick};
        FeedbackIndex e = encode_subset(s, binom);
        CHECK(e.value < binom.choose(512, 40));
        CHECK(decode_subset(e, binom) == s);
    }
}

TEST_CASE("feedback_bits: frozen examples") {
    CHECK(feedback_bits(20, 9) == doctest::Approx(17.358).epsilon(1e-3));
    CHECK(feedback_bits(20, 9) / 20 == doctest::Approx(0.868).epsilon(1e-3));
    CHECK(feedback_bits(4, 0) == 0.0);
    CHECK(feedback_bits(4, 4) == 0.0);
    CHECK(feedback_bits(100, 14) == doctest::Approx(55.294).epsilon(1e-3));
    CHECK(feedback_bits(512, 47) / 512 == doctest::Approx(0.4346).epsilon(1e-3));
}

TEST_CASE("feedback_bits agrees with the log-gamma route") {
    for (auto [k, m] : {std::pair{20, 9}, {100, 14}, {512, 40}, {512, 47}, {37, 3}})
        CHECK(feedback_bits(k, m) ==
              doctest::Approx(log2_binom_lgamma(k, m)).epsilon(1e-10));
}

TEST_CASE("feedback_bits <= m log2 k") {
    for (int k : {2, 5, 16, 64}) {
        for (int m = 1; m <= k; ++m)
            CHECK(feedback_bits(k, m) <= m * std::log2(static_cast<double>(k)) + 1e-9);
    }
}

TEST_CASE("select_m: frozen examples") {
    CHECK(select_m(20, {1, 0.5, Rounding::Ceil}) == 9);   // ceil(3 ln 20)
    CHECK(select_m(40, {4, 0.5, Rounding::Floor}) == 27); // floor(7.5 ln 40)
    CHECK(select_m(2, {1, 0.1, Rounding::Ceil}) == 2);    // clamped to k
    CHECK_THROWS_AS(select_m(1, {1, 0.5, Rounding::Ceil}), std::invalid_argument);
}

TEST_CASE("m_log_rule matches the table rules") {
    CHECK(m_log_rule(40, 4.0, Rounding::Floor) == 14);     // floor(4 ln 40)
    CHECK(m_log_rule(400, 7.5, Rounding::Floor) == 44);    // floor(7.5 ln 400)
    CHECK(m_log_rule(20, 3.0, Rounding::Ceil) == 9);
}
