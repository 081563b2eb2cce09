#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "pmalloc/channel.hpp"

using namespace pmalloc;

namespace {

// Simpson's rule on [a, b].
template <typename F>
double simpson(F f, double a, double b, int panels) {
    double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Survival probability by integrating the amplitude pdf from x outward.
// Independent of the closed forms used by log_survival.
double survival_by_quadrature(const FadingSpec& spec, double x) {
    auto pdf = [&](double t) -> double {
        double s2 = spec.sigma * spec.sigma;
        switch (spec.kind) {
            case FadingSpec::Kind::Nakagami: {
                double m = spec.nakagami_m, w = spec.omega;
                return 2.0 * std::pow(m, m) * std::pow(t, 2 * m - 1) *
                       std::exp(-m * t * t / w) / (std::tgamma(m) * std::pow(w, m));
            }
            case FadingSpec::Kind::Rician: {
                // pdf of (R - v): shift the Rice pdf left by v.
                double r = t + spec.rice_v;
                return (r / s2) *
                       std::exp(-(r * r + spec.rice_v * spec.rice_v) / (2 * s2)) *
                       boost::math::cyl_bessel_i(0, r * spec.rice_v / s2);
            }
            case FadingSpec::Kind::HalfNormal:
                return std::sqrt(2.0 / std::numbers::pi) / spec.sigma *
                       std::exp(-t * t / (2 * s2));
            default:
                return 0.0;
        }
    };
    // The tails here decay at least as fast as exp(-c t^2); x + 15 sigma-units
    // is far past any mass that matters at the tolerances used below.
    return simpson(pdf, x, x + 15.0 * std::max(1.0, spec.sigma), 20000);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("epa profile shape") {
    TapProfile p = epa_profile();
    REQUIRE(p.delays_ns.size() == 7);
    REQUIRE(p.powers_db.size() == 7);
    CHECK(p.delays_ns.front() == 0.0);
    CHECK(p.powers_db.front() == 0.0);
    CHECK(std::is_sorted(p.delays_ns.begin(), p.delays_ns.end()));
}

TEST_CASE("mean_square_gain per model") {
    CHECK(FadingSpec::rayleigh(0.5).mean_square_gain() == doctest::Approx(0.5));
    CHECK(FadingSpec::nakagami(2.0, 1.5).mean_square_gain() == doctest::Approx(1.5));
    CHECK(FadingSpec::rician(1.0, 1.0).mean_square_gain() == doctest::Approx(3.0));
    CHECK(FadingSpec::half_normal(2.0).mean_square_gain() == doctest::Approx(4.0));
    CHECK(FadingSpec::correlated_tdl().mean_square_gain() == doctest::Approx(1.0));
}

TEST_CASE("validate rejects bad parameters") {
    FadingSpec s = FadingSpec::rayleigh(0.0);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS(FadingSpec::nakagami(0.3, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FadingSpec::nakagami(1.0, -1.0).validate(), std::invalid_argument);
    FadingSpec r = FadingSpec::rayleigh(1.0);
    r.user_scale = {1.0, -2.0};
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    FadingSpec t = FadingSpec::correlated_tdl();
    t.subcarriers_per_block = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("sample_gains: shape, determinism, positivity") {
    for (FadingSpec spec : {FadingSpec::rayleigh(1.0), FadingSpec::nakagami(2.0, 1.0),
                            FadingSpec::rician(1.0, 0.7), FadingSpec::half_normal(1.0),
                            FadingSpec::correlated_tdl()}) {
        auto g1 = sample_gains(spec, 4, 6, 42);
        auto g2 = sample_gains(spec, 4, 6, 42);
        auto g3 = sample_gains(spec, 4, 6, 43);
        REQUIRE(g1.gains.size() == 24);
        CHECK(g1.gains == g2.gains);
        CHECK(g1.gains != g3.gains);
        for (double v : g1.gains) CHECK(v > 0.0);
    }
    CHECK_THROWS_AS(sample_gains(FadingSpec::rayleigh(1.0), 0, 3, 1), std::invalid_argument);
}

TEST_CASE("user_scale multiplies rows") {
    FadingSpec base = FadingSpec::rayleigh(1.0);
    FadingSpec scaled = base;
    scaled.user_scale = {1.0, 3.0};
    auto g0 = sample_gains(base, 2, 5, 9);
    auto g1 = sample_gains(scaled, 2, 5, 9);
    for (int c = 0; c < 5; ++c) {
        CHECK(g1.at(0, c) == doctest::Approx(g0.at(0, c)));
        CHECK(g1.at(1, c) == doctest::Approx(3.0 * g0.at(1, c)));
    }
    scaled.user_scale = {1.0};
    CHECK_THROWS_AS(sample_gains(scaled, 2, 5, 9), std::invalid_argument);
}

TEST_CASE("Rayleigh squared gains pass a KS test against Exp(1)") {
    // sigma = 1/sqrt(2) makes g^2 exponential with unit rate.
    const int n = 100000;
    auto g = sample_gains(FadingSpec::rayleigh(std::sqrt(0.5)), 1, n, 2024);
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = g.gains[i] * g.gains[i];
    std::sort(sq.begin(), sq.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        double cdf = 1.0 - std::exp(-sq[i]);
        d = std::max(d, std::abs(cdf - (i + 1.0) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    // alpha = 0.01 critical value: 1.628 / sqrt(n).
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sample second moments match mean_square_gain") {
    for (FadingSpec spec : {FadingSpec::nakagami(2.0, 1.5), FadingSpec::rician(1.0, 0.7),
                            FadingSpec::half_normal(1.3)}) {
        auto g = sample_gains(spec, 10, 20000, 77);
        double m2 = 0.0;
        for (double v : g.gains) m2 += v * v;
        m2 /= g.gains.size();
        CHECK(m2 == doctest::Approx(spec.mean_square_gain()).epsilon(0.02));
    }
    // TDL blocks within one user share a tap draw, so average across many users.
    FadingSpec tdl = FadingSpec::correlated_tdl();
    auto g = sample_gains(tdl, 4000, 10, 77);
    double m2 = 0.0;
    for (double v : g.gains) m2 += v * v;
    m2 /= g.gains.size();
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("rows are mutually independent") {
    // Correlate the first channel of users 0 and 1 across many seeds.
    const int trials = 10000;
    std::vector<double> a(trials), b(trials);
    for (int t = 0; t < trials; ++t) {
        auto g = sample_gains(FadingSpec::rayleigh(1.0), 2, 1, 5000 + t);
        a[t] = g.at(0, 0);
        b[t] = g.at(1, 0);
    }
    CHECK(std::abs(pearson(a, b)) < 0.03);
}

TEST_CASE("correlated TDL blocks: adjacent correlation exceeds distant") {
    const int users = 4000, blocks = 12;
    auto g = sample_gains(FadingSpec::correlated_tdl(), users, blocks, 321);
    std::vector<double> c0(users), c1(users), c11(users);
    for (int u = 0; u < users; ++u) {
        c0[u] = g.at(u, 0);
        c1[u] = g.at(u, 1);
        c11[u] = g.at(u, 11);
    }
    double adj = pearson(c0, c1);
    double far = pearson(c0, c11);
    CHECK(adj > 0.8);       // ~180 kHz apart, far inside the coherence bandwidth
    CHECK(adj > far + 0.1);
    // Center-subcarrier aggregation is a distinct statistic of the same fade.
    FadingSpec center = FadingSpec::correlated_tdl();
    center.aggregation = BlockAggregation::CenterSubcarrier;
    auto gc = sample_gains(center, 1, blocks, 321);
    CHECK(gc.gains != std::vector<double>(g.gains.begin(), g.gains.begin() + blocks));
}

TEST_CASE("m_best: frozen examples and tie-break") {
    std::vector<double> row{0.5, 2.0, 1.0, 2.0};
    CHECK(m_best(row, 1).members == std::vector<int>{2});
    CHECK(m_best(row, 2).members == std::vector<int>{2, 4});
    CHECK(m_best(row, 3).members == std::vector<int>{2, 3, 4});
    CHECK(m_best(row, 4).members == std::vector<int>{1, 2, 3, 4});
    CHECK_THROWS_AS(m_best(row, 0), std::invalid_argument);
    CHECK_THROWS_AS(m_best(row, 5), std::invalid_argument);
    std::vector<double> ties{1.0, 1.0, 1.0};
    CHECK(m_best(ties, 2).members == std::vector<int>{1, 2});
}

TEST_CASE("order_statistic and its link to m_best") {
    std::vector<double> row{3.0, 1.0, 2.0};
    CHECK(order_statistic(row, 1) == 1.0);
    CHECK(order_statistic(row, 2) == 2.0);
    CHECK(order_statistic(row, 3) == 3.0);
    CHECK_THROWS_AS(order_statistic(row, 0), std::out_of_range);

    auto g = sample_gains(FadingSpec::rayleigh(1.0), 1, 50, 8);
    for (int m : {1, 5, 20, 50}) {
        auto best = m_best(g.row(0), m);
        double weakest = 1e300;
        for (int ch : best.members) weakest = std::min(weakest, g.at(0, ch - 1));
        CHECK(weakest == doctest::Approx(order_statistic(g.row(0), 50 - m + 1)));
    }
}

TEST_CASE("log_survival matches quadrature oracles at moderate x") {
    for (FadingSpec spec : {FadingSpec::nakagami(2.0, 1.5), FadingSpec::rician(1.0, 1.0),
                            FadingSpec::half_normal(1.2)}) {
        for (double x : {0.5, 1.5, 3.0}) {
            double oracle = std::log(survival_by_quadrature(spec, x));
            CHECK(log_survival(spec, x) == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
    CHECK(log_survival(FadingSpec::rayleigh(1.0), 2.0) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(log_survival(FadingSpec::rayleigh(1.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(log_survival(FadingSpec::correlated_tdl(), 1.0), std::invalid_argument);
}

TEST_CASE("Rayleigh tail ratio is exactly one") {
    for (double sigma : {0.5, 1.0, 2.0}) {
        FadingSpec spec = FadingSpec::rayleigh(sigma);
        TailParams p = canonical_tail_params(spec);
        for (double x : {0.1, 1.0, 5.0, 20.0}) {
            auto r = tail_ratio(spec, p, x);
            CHECK(!r.underflow);
            CHECK(r.value == 1.0);
        }
    }
}

TEST_CASE("Nakagami m=1 reduces to Rayleigh") {
    FadingSpec nak = FadingSpec::nakagami(1.0, 1.0);
    FadingSpec ray = FadingSpec::rayleigh(std::sqrt(0.5));
    TailParams pn = canonical_tail_params(nak);
    TailParams pr = canonical_tail_params(ray);
    CHECK(pn.alpha == doctest::Approx(pr.alpha));
    CHECK(pn.beta == doctest::Approx(pr.beta));
    CHECK(pn.lambda == doctest::Approx(pr.lambda));
    for (double x : {0.5, 2.0, 6.0})
        CHECK(log_survival(nak, x) == doctest::Approx(log_survival(ray, x)));
}

TEST_CASE("canonical tail ratios approach one far out") {
    struct Row {
        FadingSpec spec;
        double x_far;
        double tol;
    };
    for (const Row& row : {Row{FadingSpec::nakagami(2.0, 1.0), 8.0, 0.05},
                           Row{FadingSpec::rician(1.0, 1.0), 25.0, 0.05},
                           Row{FadingSpec::half_normal(1.0), 25.0, 0.05}}) {
        TailParams p = canonical_tail_params(row.spec);
        auto near = tail_ratio(row.spec, p, row.x_far / 4.0);
        auto far = tail_ratio(row.spec, p, row.x_far);
        REQUIRE(!far.underflow);
        CHECK(std::abs(far.value - 1.0) < row.tol);
        CHECK(std::abs(far.value - 1.0) < std::abs(near.value - 1.0));
    }
}

TEST_CASE("tail ratio reports underflow instead of lying") {
    FadingSpec spec = FadingSpec::half_normal(1.0);
    auto r = tail_ratio(spec, canonical_tail_params(spec), 40.0);  // erfc underflows
    CHECK(r.underflow);
    CHECK_THROWS_AS(tail_ratio(spec, TailParams{-1.0, 0.0, 1.0, 2.0}, 1.0),
                    std::invalid_argument);
}
