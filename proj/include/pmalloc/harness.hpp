// Seeded Monte Carlo experiment runner: trial records, CSV emission and the
// table/figure sweeps.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pmalloc/allocation.hpp"
#include "pmalloc/bounds.hpp"

namespace pmalloc {

struct ExperimentConfig {
    FadingSpec fading = FadingSpec::rayleigh(1.0 / std::numbers::sqrt2);
    std::vector<int> n_list;
    int b = 4;
    std::vector<int> class_b;        // unequal classes, cycled over users; empty = uniform b
    double epsilon = 0.5;
    Rounding rounding = Rounding::Ceil;
    std::optional<double> m_coeff;   // override: M = round(m_coeff * ln K)
    double snr_db = 20.0;
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<AllocMethod> methods{AllocMethod::Pm, AllocMethod::Hungarian};
    double bandwidth_hz = 15000.0;
    bool rates_in_kbps = true;       // scale bits/use by bandwidth/1000
    bool with_water_fill = false;
    double user_scale_spread_db = 0.0;  // per-user mean-gain spread (non-iid users)
    int threshold_grid = 30;
    int threshold_pilot_trials = 20;

    void validate() const;  // throws std::invalid_argument naming the field
};

struct TrialRecord {
    std::string method;
    int n = 0, k = 0, b = 0, m = 0;
    std::uint64_t seed = 0;
    double sum_rate = 0.0, min_rate = 0.0, mean_rate = 0.0;
    bool pm_exists = false;
    double feedback_bits = 0.0;
    double wf_gain = 0.0;
};

// SplitMix64-style mix of (master_seed, n, trial_index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial);

// Per-user b pattern for one N (uniform b or cycled classes).
std::vector<int> b_pattern(const ExperimentConfig& cfg, int n);

// M for a given K under the config's rule.
int m_for(const ExperimentConfig& cfg, int k);

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);

// Mean / standard-error aggregate of one method at one N.
struct Aggregate {
    std::string method;
    int n = 0, k = 0, m = 0;
    int trials = 0;
    double mean_rate = 0.0, mean_rate_se = 0.0;
    double min_rate = 0.0, min_rate_se = 0.0;
    double sum_rate = 0.0, sum_rate_se = 0.0;
    double pm_fail_fraction = 0.0;
    double feedback_bits = 0.0;
    double wf_gain = 0.0;  // (mean wf rate - mean rate) / mean rate
};

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records);

void write_aggregate_csv(std::ostream& os, const std::vector<Aggregate>& rows);

// Pr(no PM) for both M rules (floor b ln K, floor 1.5(b+1) ln K) plus the
// analytic bound, for each N.
struct Table2Row {
    int n = 0, k = 0;
    int m_low = 0, m_high = 0;
    double pr_no_pm_low = 0.0;
    double pr_no_pm_high = 0.0;
    double bound = 0.0;
};

std::vector<Table2Row> table2(const ExperimentConfig& cfg);
void write_table2_csv(std::ostream& os, const std::vector<Table2Row>& rows);

// Empirical Pr(no PM). PM existence depends on gains only through per-row
// ranks, so with rank_equivalence the simulator draws uniform gains instead of
// the configured distribution (identical in law, much cheaper).
double pm_failure_probability(const FadingSpec& spec, int n, int b, int m, int trials,
                              std::uint64_t master_seed, bool rank_equivalence = true);

// Empirical Pr(some channel is in no user's M-best); same rank equivalence.
double coverage_failure_probability(const FadingSpec& spec, int n, int b, int m,
                                    int trials, std::uint64_t master_seed,
                                    bool rank_equivalence = true);

// Threshold maximising empirical mean rate over a pilot run; grid over
// [0, F^-1(0.999)] with the quantile taken empirically.
double optimize_threshold(const ExperimentConfig& cfg, int n);

// Water-filling relative mean-rate gain sweep over b values (N and SNR from cfg).
struct WfGainRow {
    int b = 0, k = 0, m = 0;
    double gain_pm = 0.0;
    double gain_hungarian = 0.0;
};

std::vector<WfGainRow> wf_gain_sweep(const ExperimentConfig& cfg,
                                     const std::vector<int>& b_values);
void write_wf_csv(std::ostream& os, const std::vector<WfGainRow>& rows);

// Minimal SVG polyline chart; one series per (label, points) pair.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

void write_svg_plot(std::ostream& os, const std::string& title,
                    const std::vector<PlotSeries>& series);

// Parses a JSON config file; throws std::runtime_error naming any bad field.
ExperimentConfig load_config(const std::string& path);

}  // namespace pmalloc
