// Closed-form bounds on perfect-matching and channel-coverage failure
// probabilities in the random user-channel graph.
#pragma once

#include <optional>
#include <utility>

namespace pmalloc {

struct BoundInput {
    int k = 0;                  // channels, k = b * n
    int b = 1;                  // channels per user
    double epsilon = 0.5;
    std::optional<int> m;       // override; default ceil((b+1)(1+eps) ln k)
};

// Two-term power-law bound on Pr(no PM):
//   K^-(eps + (eps+1)/b) + (pi sqrt(b) e^3 / 12) K^-(1.5 eps + (1.5 eps+1)/b).
double theorem1_bound(const BoundInput& inp);

// Binary entropy in bits, with 0 log 0 = 0 and a series fallback near 0 and 1.
double entropy_b(double p);

// f(x) = K (1 + 1/b) h_b((x+1)/K) ln 2 - (M / (K b)) (K - x)(x + 1),
// the exponent of the per-l covering-count bound.
double lemma4_f(double x, int k, int m, int b);

// Finite-K union bound: K e^{-M/b} plus the sum over l = M..K-2 of
//   sqrt(b) / (2 pi (K-l)(1-(l+1)/K)) e^{f(l)},
// accumulated with log-sum-exp.
double finite_k_union_bound(const BoundInput& inp);

// (upper, lower) bounds on Pr(some channel is in no user's M-best):
//   upper = K (1 - M/K)^N,  lower = upper - (K^2/2)(1 - 2/K)^{M K / b}.
std::pair<double, double> lemma2_bounds(int k, int b, int m);

}  // namespace pmalloc
