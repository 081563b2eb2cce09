#include "pmalloc/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pmalloc {

namespace {

void check_input(const BoundInput& inp) {
    if (inp.b < 1 || inp.k < inp.b || inp.k % inp.b != 0)
        throw std::invalid_argument("BoundInput: k must be a positive multiple of b");
    if (inp.epsilon <= 0 && !inp.m)
        throw std::invalid_argument("BoundInput: epsilon must be > 0");
}

int effective_m(const BoundInput& inp) {
    if (inp.m) return *inp.m;
    return static_cast<int>(
        std::ceil((inp.b + 1) * (1.0 + inp.epsilon) * std::log(inp.k)));
}

double log_sum_exp(const std::vector<double>& logs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double l : logs) mx = std::max(mx, l);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return mx + std::log(s);
}

}  // namespace

double theorem1_bound(const BoundInput& inp) {
    check_input(inp);
    const double k = inp.k;
    const double b = inp.b;
    const double eps = inp.epsilon;
    double first = std::pow(k, -(eps + (eps + 1.0) / b));
    double coeff = std::numbers::pi * std::sqrt(b) * std::exp(3.0) / 12.0;
    double second =
        coeff * std::pow(k, -(1.5 * eps + (1.5 * eps + 1.0) / b));
    return first + second;
}

double entropy_b(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("entropy_b: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    double q = std::min(p, 1.0 - p);
    if (q < 1e-12) {
        // -(1-q) log2(1-q) ~ (q + q^2/2) / ln 2
        return -q * std::log2(q) + (q + q * q / 2.0) / std::numbers::ln2;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double lemma4_f(double x, int k, int m, int b) {
    if (x < m || x > k - 1) throw std::domain_error("lemma4_f: need M <= x <= K-1");
    double kd = k;
    return kd * (1.0 + 1.0 / b) * entropy_b((x + 1.0) / kd) * std::numbers::ln2 -
           (static_cast<double>(m) / (kd * b)) * (kd - x) * (x + 1.0);
}

double finite_k_union_bound(const BoundInput& inp) {
    check_input(inp);
    const int k = inp.k;
    const int b = inp.b;
    const int m = effective_m(inp);
    std::vector<double> log_terms;
    log_terms.reserve(k - m + 1);
    // l = K-1 term: K e^{-M/b}
    log_terms.push_back(std::log(static_cast<double>(k)) -
                        static_cast<double>(m) / b);
    for (int l = m; l <= k - 2; ++l) {
        double prefac = std::log(std::sqrt(static_cast<double>(b))) -
                        std::log(2.0 * std::numbers::pi * (k - l) *
                                 (1.0 - (l + 1.0) / k));
        log_terms.push_back(prefac + lemma4_f(l, k, m, b));
    }
    return std::exp(log_sum_exp(log_terms));
}

std::pair<double, double> lemma2_bounds(int k, int b, int m) {
    if (m < 1 || m > k) throw std::invalid_argument("lemma2_bounds: need 1 <= m <= k");
    if (b < 1 || k % b != 0) throw std::invalid_argument("lemma2_bounds: k must be multiple of b");
    const double n = static_cast<double>(k) / b;
    double upper = k * std::pow(1.0 - static_cast<double>(m) / k, n);
    double lower = upper - (static_cast<double>(k) * k / 2.0) *
                               std::pow(1.0 - 2.0 / k, static_cast<double>(m) * k / b);
    return {upper, lower};
}

}  // namespace pmalloc
