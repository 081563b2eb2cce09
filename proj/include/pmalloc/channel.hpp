// Fading channel models: gain matrix sampling, M-best extraction and
// exponentially-dominated tail evaluation.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pmalloc/codec.hpp"

namespace pmalloc {

// LTE EPA multipath profile: excess tap delays [ns] and relative powers [dB].
struct TapProfile {
    std::vector<double> delays_ns;
    std::vector<double> powers_db;
};

TapProfile epa_profile();

enum class BlockAggregation {
    RmsEnergy,          // sqrt(mean of squared subcarrier magnitudes)
    CenterSubcarrier,
};

struct FadingSpec {
    enum class Kind { Rayleigh, Nakagami, Rician, HalfNormal, CorrelatedTdl };

    Kind kind = Kind::Rayleigh;
    double sigma = 1.0;                 // Rayleigh / Rician / HalfNormal scale
    double nakagami_m = 1.0;
    double omega = 1.0;                 // Nakagami spread, E[g^2]
    double rice_v = 0.0;                // Rician line-of-sight amplitude

    // CorrelatedTdl parameters; "channel" = one resource block.
    TapProfile taps = epa_profile();
    int subcarriers_per_block = 12;
    double subcarrier_spacing_hz = 15e3;
    BlockAggregation aggregation = BlockAggregation::RmsEnergy;

    // Optional per-user gain multipliers (non-identically distributed users).
    std::vector<double> user_scale;

    static FadingSpec rayleigh(double sigma = 1.0);
    static FadingSpec nakagami(double m, double omega);
    static FadingSpec rician(double v, double sigma);
    static FadingSpec half_normal(double sigma);
    static FadingSpec correlated_tdl();

    // E[g^2] of the base (unscaled) distribution, used for SNR calibration.
    double mean_square_gain() const;

    void validate() const;  // throws std::invalid_argument
};

struct ChannelGainMatrix {
    int n_users = 0;
    int k_channels = 0;
    std::vector<double> gains;  // row-major, n_users x k_channels

    double at(int n, int k) const { return gains[static_cast<size_t>(n) * k_channels + k]; }
    double& at(int n, int k) { return gains[static_cast<size_t>(n) * k_channels + k]; }
    std::span<const double> row(int n) const {
        return {gains.data() + static_cast<size_t>(n) * k_channels,
                static_cast<size_t>(k_channels)};
    }
};

struct MBestReport {
    int user = 0;               // 0-based
    ChannelSubset channels;     // |channels| = M
};

// Deterministic for a given seed. Rows (users) are mutually independent.
ChannelGainMatrix sample_gains(const FadingSpec& spec, int n, int k, std::uint64_t seed);

// Indices (1-based) of the m largest entries; ties go to the lower index.
ChannelSubset m_best(std::span<const double> row, int m);

// i-th smallest value, i in [1, len].
double order_statistic(std::span<const double> row, int i);

// Survival-function parameterisation 1-F(x) ~ alpha x^beta e^{-lambda x^gamma}.
struct TailParams {
    double alpha = 1.0;
    double beta = 0.0;
    double lambda = 1.0;
    double gamma = 2.0;
};

// Canonical parameters making tail_ratio -> 1 for the supported distributions.
TailParams canonical_tail_params(const FadingSpec& spec);

struct TailRatioResult {
    double value = 0.0;
    bool underflow = false;  // survival probability underflowed; value unreliable
};

// ln(1 - F(x)) of the fading amplitude. For Rician this is the survival of the
// mean-shifted variable (amplitude minus rice_v), matching the tail analysis.
// Returns -inf on underflow.
double log_survival(const FadingSpec& spec, double x);

// (1 - F(x)) / (alpha x^beta e^{-lambda x^gamma}), evaluated in log domain.
TailRatioResult tail_ratio(const FadingSpec& spec, const TailParams& params, double x);

}  // namespace pmalloc
