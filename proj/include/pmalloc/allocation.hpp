// Channel allocation strategies and rate computation.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmalloc/matching.hpp"

namespace pmalloc {

enum class AllocMethod { Pm, Hungarian, Random, Threshold, LeinonenSet, LeinonenOrdered };

std::string to_string(AllocMethod m);

struct Allocation {
    std::vector<std::vector<int>> per_user;  // disjoint 1-based channel sets
    AllocMethod method = AllocMethod::Pm;
    bool pm_flag = false;  // true iff every user got only M-best channels, fully served
};

struct LinkBudget {
    double p_max = 1.0;  // total per-user transmit power
    double n0 = 1.0;     // receiver noise variance
    int b = 1;           // channels per user (power split p_max / b)
};

// Per-channel transmit power p_max/b so that mean link SNR (on E[g^2]) equals
// snr_db. With n0 = 1 this sets p_max = b * 10^(snr_db/10) / E[g^2].
LinkBudget calibrated_budget(double mean_square_gain, int b, double snr_db);

struct RateReport {
    std::vector<double> per_user;
    double sum_rate = 0.0;
    double min_rate = 0.0;
    double mean_rate = 0.0;
};

// Sum over allocated channels of log2(1 + g^2 p_max / (b n0)).
double rate(std::span<const double> gains_of_user, const LinkBudget& budget);

// Rates of a full allocation; per-user b taken from the allocated set size.
RateReport evaluate(const ChannelGainMatrix& gains, const Allocation& alloc,
                    double p_max, double n0);

// Rates with a fixed per-channel SNR scale rho (rate = sum log2(1 + g^2 rho)).
// This is the "equal mean SNR per link" calibration: rho = 10^(SNR_dB/10)/E[g^2]
// regardless of how many channels a user holds.
RateReport evaluate_per_channel_snr(const ChannelGainMatrix& gains,
                                    const Allocation& alloc, double snr_scale);

// Algorithm: M-best reports -> bipartite graph -> maximum matching. Unmatched
// agents are assigned the free channels in ascending index order (pm_flag then
// stays false).
std::pair<Allocation, Matching> pm_allocate(const ChannelGainMatrix& gains, int m,
                                            const std::vector<int>& b_per_user);

// Max-sum-rate allocation via the Hungarian method on the agent-replicated
// K x K rate matrix.
Allocation optimal_allocate(const ChannelGainMatrix& gains, const LinkBudget& budget,
                            const std::vector<int>& b_per_user);

// Same, with a fixed per-channel SNR scale (see evaluate_per_channel_snr).
Allocation optimal_allocate_per_channel_snr(const ChannelGainMatrix& gains,
                                            double snr_scale,
                                            const std::vector<int>& b_per_user);

// Uniform random partition respecting the per-user set sizes.
Allocation random_allocate(int k, const std::vector<int>& b_per_user, std::uint64_t seed);

// Opportunistic thresholding baseline: each channel (ascending) goes to the
// least-loaded user whose gain exceeds the threshold; least-loaded fallback.
Allocation threshold_allocate(const ChannelGainMatrix& gains, double threshold,
                              const std::vector<int>& b_per_user);

// Sequential M-best baseline (b = 1 only). `ordered` variant picks the best
// available reported channel by gain; set variant the lowest-indexed one.
// Fallback: lowest-indexed free channel.
Allocation sequential_mbest_allocate(const ChannelGainMatrix& gains, int m,
                                     const std::vector<int>& queue_order, bool ordered);

struct WaterFillResult {
    std::vector<double> powers;
    double rate = 0.0;
};

// Water-filling over one user's allocated channels: maximise
// sum log2(1 + g^2 p / n0) subject to sum p = p_total, p >= 0.
WaterFillResult water_fill(std::span<const double> gains_of_user, double p_total,
                           double n0);

}  // namespace pmalloc
