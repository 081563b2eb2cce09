#include "pmalloc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace pmalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform in (0,1), 53-bit resolution. Kept explicit so sampling is
// reproducible independently of library distribution internals.
double next_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

double next_normal(std::mt19937_64& gen) {
    double u1 = next_uniform(gen);
    double u2 = next_uniform(gen);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TapProfile epa_profile() {
    return TapProfile{
        {0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0},
        {0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8},
    };
}

FadingSpec FadingSpec::rayleigh(double sigma) {
    FadingSpec s;
    s.kind = Kind::Rayleigh;
    s.sigma = sigma;
    return s;
}

FadingSpec FadingSpec::nakagami(double m, double omega) {
    FadingSpec s;
    s.kind = Kind::Nakagami;
    s.nakagami_m = m;
    s.omega = omega;
    return s;
}

FadingSpec FadingSpec::rician(double v, double sigma) {
    FadingSpec s;
    s.kind = Kind::Rician;
    s.rice_v = v;
    s.sigma = sigma;
    return s;
}

FadingSpec FadingSpec::half_normal(double sigma) {
    FadingSpec s;
    s.kind = Kind::HalfNormal;
    s.sigma = sigma;
    return s;
}

FadingSpec FadingSpec::correlated_tdl() {
    FadingSpec s;
    s.kind = Kind::CorrelatedTdl;
    return s;
}

double FadingSpec::mean_square_gain() const {
    switch (kind) {
        case Kind::Rayleigh: return 2.0 * sigma * sigma;
        case Kind::Nakagami: return omega;
        case Kind::Rician: return rice_v * rice_v + 2.0 * sigma * sigma;
        case Kind::HalfNormal: return sigma * sigma;
        case Kind::CorrelatedTdl: return 1.0;  // tap powers normalised to 1
    }
    return 0.0;
}

void FadingSpec::validate() const {
    if (sigma <= 0) throw std::invalid_argument("FadingSpec: sigma must be > 0");
    if (kind == Kind::Nakagami) {
        if (nakagami_m < 0.5) throw std::invalid_argument("FadingSpec: Nakagami m >= 0.5 required");
        if (omega <= 0) throw std::invalid_argument("FadingSpec: omega must be > 0");
    }
    if (kind == Kind::Rician && rice_v < 0)
        throw std::invalid_argument("FadingSpec: rice_v must be >= 0");
    if (kind == Kind::CorrelatedTdl) {
        if (taps.delays_ns.size() != taps.powers_db.size() || taps.delays_ns.empty())
            throw std::invalid_argument("FadingSpec: malformed tap profile");
        if (subcarriers_per_block < 1)
            throw std::invalid_argument("FadingSpec: subcarriers_per_block must be >= 1");
        if (subcarrier_spacing_hz <= 0)
            throw std::invalid_argument("FadingSpec: subcarrier spacing must be > 0");
    }
    for (double s : user_scale)
        if (s <= 0) throw std::invalid_argument("FadingSpec: user scales must be > 0");
}

namespace {

void sample_tdl_row(const FadingSpec& spec, int k, std::mt19937_64& gen, double* out) {
    const size_t taps = spec.taps.delays_ns.size();
    // Normalise relative tap powers to unit total energy.
    std::vector<double> power(taps);
    double total = 0.0;
    for (size_t i = 0; i < taps; ++i) {
        power[i] = std::pow(10.0, spec.taps.powers_db[i] / 10.0);
        total += power[i];
    }
    std::vector<std::complex<double>> h(taps);
    for (size_t i = 0; i < taps; ++i) {
        double sd = std::sqrt(power[i] / total / 2.0);
        h[i] = {sd * next_normal(gen), sd * next_normal(gen)};
    }
    const int spb = spec.subcarriers_per_block;
    for (int c = 0; c < k; ++c) {
        double energy = 0.0;
        double center_mag = 0.0;
        for (int s = 0; s < spb; ++s) {
            double f = (static_cast<double>(c) * spb + s) * spec.subcarrier_spacing_hz;
            std::complex<double> resp{0.0, 0.0};
            for (size_t i = 0; i < taps; ++i) {
                double phase = -2.0 * std::numbers::pi * f * spec.taps.delays_ns[i] * 1e-9;
                resp += h[i] * std::complex<double>{std::cos(phase), std::sin(phase)};
            }
            energy += std::norm(resp);
            if (s == spb / 2) center_mag = std::abs(resp);
        }
        out[c] = spec.aggregation == BlockAggregation::RmsEnergy
                     ? std::sqrt(energy / spb)
                     : center_mag;
    }
}

}  // namespace

ChannelGainMatrix sample_gains(const FadingSpec& spec, int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) throw std::invalid_argument("sample_gains: need n, k >= 1");
    spec.validate();
    if (!spec.user_scale.empty() && static_cast<int>(spec.user_scale.size()) != n)
        throw std::invalid_argument("sample_gains: user_scale length must equal n");

    ChannelGainMatrix g;
    g.n_users = n;
    g.k_channels = k;
    g.gains.resize(static_cast<size_t>(n) * k);
    std::mt19937_64 gen(seed);
    std::gamma_distribution<double> gamma_dist(spec.nakagami_m,
                                               spec.omega / spec.nakagami_m);
    for (int u = 0; u < n; ++u) {
        double* row = g.gains.data() + static_cast<size_t>(u) * k;
        switch (spec.kind) {
            case FadingSpec::Kind::Rayleigh:
                for (int c = 0; c < k; ++c)
                    row[c] = spec.sigma * std::sqrt(-2.0 * std::log(next_uniform(gen)));
                break;
            case FadingSpec::Kind::Nakagami:
                for (int c = 0; c < k; ++c)
                    row[c] = std::sqrt(gamma_dist(gen));
                break;
            case FadingSpec::Kind::Rician:
                for (int c = 0; c < k; ++c) {
                    double re = spec.rice_v + spec.sigma * next_normal(gen);
                    double im = spec.sigma * next_normal(gen);
                    row[c] = std::hypot(re, im);
                }
                break;
            case FadingSpec::Kind::HalfNormal:
                for (int c = 0; c < k; ++c)
                    row[c] = spec.sigma * std::abs(next_normal(gen));
                break;
            case FadingSpec::Kind::CorrelatedTdl:
                sample_tdl_row(spec, k, gen, row);
                break;
        }
        if (!spec.user_scale.empty())
            for (int c = 0; c < k; ++c) row[c] *= spec.user_scale[u];
    }
    return g;
}

ChannelSubset m_best(std::span<const double> row, int m) {
    const int k = static_cast<int>(row.size());
    if (m < 1 || m > k) throw std::invalid_argument("m_best: m out of range");
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + (m - 1), idx.end(),
                     [&](int a, int b) {
                         return row[a] > row[b] || (row[a] == row[b] && a < b);
                     });
    ChannelSubset out;
    out.k = k;
    out.members.reserve(m);
    for (int i = 0; i < m; ++i) out.members.push_back(idx[i] + 1);
    std::sort(out.members.begin(), out.members.end());
    return out;
}

double order_statistic(std::span<const double> row, int i) {
    const int k = static_cast<int>(row.size());
    if (i < 1 || i > k) throw std::out_of_range("order_statistic: index out of range");
    std::vector<double> tmp(row.begin(), row.end());
    std::nth_element(tmp.begin(), tmp.begin() + (i - 1), tmp.end());
    return tmp[i - 1];
}

TailParams canonical_tail_params(const FadingSpec& spec) {
    const double s2 = spec.sigma * spec.sigma;
    switch (spec.kind) {
        case FadingSpec::Kind::Rayleigh:
            return {1.0, 0.0, 1.0 / (2.0 * s2), 2.0};
        case FadingSpec::Kind::Nakagami: {
            double m = spec.nakagami_m;
            double alpha = std::pow(m, m - 1.0) /
                           (std::tgamma(m) * std::pow(spec.omega, m - 1.0));
            return {alpha, 2.0 * m - 2.0, m / spec.omega, 2.0};
        }
        case FadingSpec::Kind::Rician: {
            if (spec.rice_v <= 0)  // degenerates to Rayleigh
                return {1.0, 0.0, 1.0 / (2.0 * s2), 2.0};
            double alpha = spec.sigma / std::sqrt(2.0 * std::numbers::pi * spec.rice_v);
            return {alpha, -0.5, 1.0 / (2.0 * s2), 2.0};
        }
        case FadingSpec::Kind::HalfNormal: {
            double alpha = spec.sigma * std::sqrt(2.0 / std::numbers::pi);
            return {alpha, -1.0, 1.0 / (2.0 * s2), 2.0};
        }
        case FadingSpec::Kind::CorrelatedTdl:
            throw std::invalid_argument("canonical_tail_params: no closed form for TDL blocks");
    }
    return {};
}

namespace {

// Marcum Q_1(a, b) = e^{-(a^2+b^2)/2} sum_k (a/b)^k I_k(ab).
// Returned in log domain; -inf once the prefactor underflows.
double log_marcum_q1(double a, double b) {
    if (a == 0.0) return -b * b / 2.0;
    const double ab = a * b;
    double sum = 0.0;
    double ratio_pow = 1.0;
    for (int k = 0; k < 2000; ++k) {
        double term = ratio_pow * boost::math::cyl_bessel_i(k, ab);
        sum += term;
        if (term < sum * 1e-17) break;
        ratio_pow *= a / b;
    }
    double log_q = -(a * a + b * b) / 2.0 + std::log(sum);
    return log_q < -745.0 ? -kInf : log_q;
}

}  // namespace

double log_survival(const FadingSpec& spec, double x) {
    if (x <= 0) throw std::invalid_argument("log_survival: need x > 0");
    const double s2 = spec.sigma * spec.sigma;
    switch (spec.kind) {
        case FadingSpec::Kind::Rayleigh:
            return -(x * x) * (1.0 / (2.0 * s2));
        case FadingSpec::Kind::Nakagami: {
            double m = spec.nakagami_m;
            if (m == 1.0) return -(x * x) * (1.0 / spec.omega);
            double q = boost::math::gamma_q(m, m * x * x / spec.omega);
            // Subnormal results carry almost no precision; report underflow.
            return q >= std::numeric_limits<double>::min() ? std::log(q) : -kInf;
        }
        case FadingSpec::Kind::Rician:
            // Survival of the mean-shifted amplitude (R - v) at x.
            return log_marcum_q1(spec.rice_v / spec.sigma, (x + spec.rice_v) / spec.sigma);
        case FadingSpec::Kind::HalfNormal: {
            double e = std::erfc(x / (spec.sigma * std::numbers::sqrt2));
            return e >= std::numeric_limits<double>::min() ? std::log(e) : -kInf;
        }
        case FadingSpec::Kind::CorrelatedTdl:
            throw std::invalid_argument("log_survival: unsupported for TDL blocks");
    }
    return -kInf;
}

TailRatioResult tail_ratio(const FadingSpec& spec, const TailParams& params, double x) {
    if (params.alpha <= 0 || params.lambda <= 0 || params.gamma <= 0)
        throw std::invalid_argument("tail_ratio: invalid params");
    double log_surv = log_survival(spec, x);
    if (log_surv == -kInf) return {0.0, true};
    double xg = params.gamma == 2.0 ? x * x : std::pow(x, params.gamma);
    double log_den = std::log(params.alpha) + params.beta * std::log(x) -
                     params.lambda * xg;
    return {std::exp(log_surv - log_den), false};
}

}  // namespace pmalloc
