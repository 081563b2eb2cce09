#include "pmalloc/codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmalloc {

BinomialTable::BinomialTable(int k_max) : k_max_(k_max), zero_(0) {
    if (k_max < 0) throw std::invalid_argument("BinomialTable: negative k_max");
    rows_.resize(k_max + 1);
    for (int n = 0; n <= k_max; ++n) {
        rows_[n].resize(n + 1);
        rows_[n][0] = 1;
        rows_[n][n] = 1;
        for (int r = 1; r < n; ++r)
            rows_[n][r] = rows_[n - 1][r - 1] + rows_[n - 1][r];
    }
}

const BigInt& BinomialTable::choose(int n, int r) const {
    if (n < 0 || n > k_max_) throw std::out_of_range("BinomialTable::choose: n out of range");
    if (r < 0 || r > n) return zero_;
    return rows_[n][r];
}

void validate_subset(const ChannelSubset& s) {
    if (s.k < 0) throw std::invalid_argument("ChannelSubset: negative universe size");
    int prev = 0;
    for (int c : s.members) {
        if (c < 1 || c > s.k)
            throw std::invalid_argument("ChannelSubset: member out of [1, K]");
        if (c <= prev)
            throw std::invalid_argument("ChannelSubset: members must be strictly ascending");
        prev = c;
    }
}

// Unrolled form of the recursion: walking K down to 1, each member c_i (the
// i-th smallest) contributes C(c_i - 1, i) when it is removed from the set.
FeedbackIndex encode_subset(const ChannelSubset& s, const BinomialTable& binom) {
    validate_subset(s);
    if (s.k > binom.max_n())
        throw std::out_of_range("encode_subset: table smaller than K");
    FeedbackIndex out;
    out.k = s.k;
    out.m = s.size();
    for (int i = 1; i <= s.size(); ++i)
        out.value += binom.choose(s.members[i - 1] - 1, i);
    return out;
}

ChannelSubset decode_subset(const FeedbackIndex& e, const BinomialTable& binom) {
    if (e.k > binom.max_n())
        throw std::out_of_range("decode_subset: table smaller than K");
    if (e.m < 0 || e.m > e.k || e.value < 0 || e.value >= binom.choose(e.k, e.m))
        throw std::out_of_range("decode_subset: index outside [0, C(K,M))");
    ChannelSubset out;
    out.k = e.k;
    BigInt rem = e.value;
    int m = e.m;
    for (int k = e.k; k >= 1 && m > 0; --k) {
        // k goes into the subset iff the residual index skips all subsets
        // of {1..k-1}, i.e. rem >= C(k-1, m).
        const BigInt& below = binom.choose(k - 1, m);
        if (rem >= below) {
            out.members.push_back(k);
            rem -= below;
            --m;
        }
    }
    std::reverse(out.members.begin(), out.members.end());
    return out;
}

FeedbackIndex encode_subset(const ChannelSubset& s) {
    BinomialTable binom(s.k);
    return encode_subset(s, binom);
}

ChannelSubset decode_subset(const FeedbackIndex& e) {
    BinomialTable binom(e.k);
    return decode_subset(e, binom);
}

double log2_big(const BigInt& v) {
    if (v <= 0) throw std::invalid_argument("log2_big: nonpositive value");
    const auto bits = boost::multiprecision::msb(v);  // index of highest set bit
    if (bits <= 52) return std::log2(v.convert_to<double>());
    BigInt top = v >> (bits - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

double feedback_bits(int k, int m) {
    if (m < 0 || m > k) throw std::invalid_argument("feedback_bits: need 0 <= m <= k");
    if (m == 0 || m == k) return 0.0;
    BinomialTable binom(k);
    return log2_big(binom.choose(k, m));
}

namespace {
int round_mode(double x, Rounding r) {
    return static_cast<int>(r == Rounding::Ceil ? std::ceil(x) : std::floor(x));
}
}  // namespace

int select_m(int k, const MPolicy& policy) {
    if (k < 2) throw std::invalid_argument("select_m: need k >= 2");
    if (policy.epsilon <= 0 || policy.b < 1)
        throw std::invalid_argument("select_m: invalid policy");
    double raw = (policy.b + 1) * (1.0 + policy.epsilon) * std::log(k);
    return std::clamp(round_mode(raw, policy.rounding), 1, k);
}

int m_log_rule(int k, double coeff, Rounding rounding) {
    if (k < 2) throw std::invalid_argument("m_log_rule: need k >= 2");
    return std::clamp(round_mode(coeff * std::log(k), rounding), 1, k);
}

}  // namespace pmalloc
