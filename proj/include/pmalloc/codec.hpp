// Subset ranking/unranking codec for M-best channel feedback.
//
// A size-M subset of {1..K} is mapped to an integer in [0, C(K,M)) using the
// combinatorial number system, so the feedback costs exactly log2 C(K,M) bits.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pmalloc {

using BigInt = boost::multiprecision::cpp_int;

// Size-M subset of {1..K}. Members are 1-based and strictly ascending.
struct ChannelSubset {
    int k = 0;                     // universe size
    std::vector<int> members;      // sorted ascending, values in [1, k]

    int size() const { return static_cast<int>(members.size()); }
    bool operator==(const ChannelSubset&) const = default;
};

struct FeedbackIndex {
    BigInt value;
    int k = 0;   // universe size
    int m = 0;   // subset size
};

enum class Rounding { Ceil, Floor };

// Rule M = round((b+1)(1+epsilon) ln K).
struct MPolicy {
    int b = 1;
    double epsilon = 0.5;
    Rounding rounding = Rounding::Ceil;
};

// Immutable Pascal triangle up to row k_max. Built once, read-only afterwards.
class BinomialTable {
public:
    explicit BinomialTable(int k_max);

    // C(n, r); zero outside the valid range.
    const BigInt& choose(int n, int r) const;
    int max_n() const { return k_max_; }

private:
    int k_max_;
    std::vector<std::vector<BigInt>> rows_;
    BigInt zero_;
};

// Validates subset invariants; throws std::invalid_argument on violation.
void validate_subset(const ChannelSubset& s);

FeedbackIndex encode_subset(const ChannelSubset& s, const BinomialTable& binom);
ChannelSubset decode_subset(const FeedbackIndex& e, const BinomialTable& binom);

// Convenience overloads that build a table internally (fine for small K).
FeedbackIndex encode_subset(const ChannelSubset& s);
ChannelSubset decode_subset(const FeedbackIndex& e);

// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& v);

// log2 C(k, m) bits needed to feed back one subset.
double feedback_bits(int k, int m);

// M selection, clamped to [1, k].
int select_m(int k, const MPolicy& policy);

// M = round(coeff * ln k), clamped to [1, k]. Used for rules like floor(b ln K).
int m_log_rule(int k, double coeff, Rounding rounding);

}  // namespace pmalloc
