#include "pmalloc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace pmalloc {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(master) ^ n) ^ (trial * 0x9E3779B97F4A7C15ULL + 1));
}

void ExperimentConfig::validate() const {
    fading.validate();
    if (n_list.empty()) throw std::invalid_argument("config.n_list: must be nonempty");
    for (int n : n_list)
        if (n < 1) throw std::invalid_argument("config.n_list: entries must be >= 1");
    if (b < 1 && class_b.empty()) throw std::invalid_argument("config.b: must be >= 1");
    for (int cb : class_b)
        if (cb < 1) throw std::invalid_argument("config.class_b: entries must be >= 1");
    if (!class_b.empty() && !m_coeff)
        throw std::invalid_argument("config.m_coeff: required with unequal classes");
    if (trials < 1) throw std::invalid_argument("config.trials: must be >= 1");
    if (bandwidth_hz <= 0) throw std::invalid_argument("config.bandwidth_hz: must be > 0");
    if (epsilon <= 0 && !m_coeff) throw std::invalid_argument("config.epsilon: must be > 0");
    if (methods.empty()) throw std::invalid_argument("config.methods: must be nonempty");
    if (threshold_grid < 2) throw std::invalid_argument("config.threshold_grid: must be >= 2");
    if (user_scale_spread_db < 0)
        throw std::invalid_argument("config.user_scale_spread_db: must be >= 0");
}

std::vector<int> b_pattern(const ExperimentConfig& cfg, int n) {
    std::vector<int> bp(n);
    if (cfg.class_b.empty()) {
        std::fill(bp.begin(), bp.end(), cfg.b);
    } else {
        for (int u = 0; u < n; ++u) bp[u] = cfg.class_b[u % cfg.class_b.size()];
    }
    return bp;
}

int m_for(const ExperimentConfig& cfg, int k) {
    if (cfg.m_coeff) return m_log_rule(k, *cfg.m_coeff, cfg.rounding);
    return select_m(k, MPolicy{cfg.b, cfg.epsilon, cfg.rounding});
}

namespace {

FadingSpec spec_for_n(const ExperimentConfig& cfg, int n) {
    FadingSpec spec = cfg.fading;
    if (cfg.user_scale_spread_db > 0.0 && n > 1) {
        spec.user_scale.resize(n);
        for (int u = 0; u < n; ++u) {
            double db = cfg.user_scale_spread_db * (static_cast<double>(u) / (n - 1) - 0.5);
            spec.user_scale[u] = std::pow(10.0, db / 20.0);
        }
    }
    return spec;
}

double per_channel_snr(const ExperimentConfig& cfg) {
    return std::pow(10.0, cfg.snr_db / 10.0) / cfg.fading.mean_square_gain();
}

// Total water-filled rate given the same per-user power totals as the
// equal-split baseline.
double water_filled_sum(const ChannelGainMatrix& gains, const Allocation& alloc,
                        double snr_scale) {
    double total = 0.0;
    for (size_t u = 0; u < alloc.per_user.size(); ++u) {
        const auto& set = alloc.per_user[u];
        std::vector<double> g;
        g.reserve(set.size());
        for (int c : set) g.push_back(gains.at(static_cast<int>(u), c - 1));
        total += water_fill(g, snr_scale * set.size(), 1.0).rate;
    }
    return total;
}

}  // namespace

double optimize_threshold(const ExperimentConfig& cfg, int n) {
    std::vector<int> bp = b_pattern(cfg, n);
    const int k = std::accumulate(bp.begin(), bp.end(), 0);
    FadingSpec spec = spec_for_n(cfg, n);
    const double rho = per_channel_snr(cfg);

    // Empirical F^-1(0.999) from a pooled pilot draw.
    const std::uint64_t salt = derive_seed(cfg.master_seed, 0xC0FFEEULL, 0);
    ChannelGainMatrix pool = sample_gains(spec, n, std::max(1, 100000 / n), salt);
    std::vector<double> sorted = pool.gains;
    std::sort(sorted.begin(), sorted.end());
    double q999 = sorted[static_cast<size_t>(0.999 * (sorted.size() - 1))];

    std::vector<double> grid(cfg.threshold_grid);
    for (int i = 0; i < cfg.threshold_grid; ++i)
        grid[i] = q999 * i / (cfg.threshold_grid - 1);
    std::vector<double> mean_rate(grid.size(), 0.0);
    for (int t = 0; t < cfg.threshold_pilot_trials; ++t) {
        std::uint64_t seed = derive_seed(cfg.master_seed ^ 0x7155D01DULL, n, t);
        ChannelGainMatrix gains = sample_gains(spec, n, k, seed);
        for (size_t i = 0; i < grid.size(); ++i) {
            Allocation alloc = threshold_allocate(gains, grid[i], bp);
            mean_rate[i] += evaluate_per_channel_snr(gains, alloc, rho).mean_rate;
        }
    }
    size_t best = std::max_element(mean_rate.begin(), mean_rate.end()) - mean_rate.begin();
    return grid[best];
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<TrialRecord> records;
    const double rate_scale = cfg.rates_in_kbps ? cfg.bandwidth_hz / 1000.0 : 1.0;
    const double rho = per_channel_snr(cfg);

    for (int n : cfg.n_list) {
        std::vector<int> bp = b_pattern(cfg, n);
        const int k = std::accumulate(bp.begin(), bp.end(), 0);
        const int m = m_for(cfg, k);
        const double fb_bits = feedback_bits(k, m);
        FadingSpec spec = spec_for_n(cfg, n);
        const bool want_threshold =
            std::find(cfg.methods.begin(), cfg.methods.end(), AllocMethod::Threshold) !=
            cfg.methods.end();
        const double threshold = want_threshold ? optimize_threshold(cfg, n) : 0.0;
        std::vector<int> queue(n);
        std::iota(queue.begin(), queue.end(), 0);

        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t seed = derive_seed(cfg.master_seed, n, t);
            ChannelGainMatrix gains = sample_gains(spec, n, k, seed);
            for (AllocMethod method : cfg.methods) {
                TrialRecord rec;
                rec.method = to_string(method);
                rec.n = n;
                rec.k = k;
                rec.b = cfg.class_b.empty() ? cfg.b : 0;
                rec.m = m;
                rec.seed = seed;
                rec.feedback_bits = fb_bits;

                Allocation alloc;
                switch (method) {
                    case AllocMethod::Pm: {
                        auto [a, matching] = pm_allocate(gains, m, bp);
                        alloc = std::move(a);
                        rec.pm_exists = matching.is_perfect;
                        break;
                    }
                    case AllocMethod::Hungarian:
                        alloc = optimal_allocate_per_channel_snr(gains, rho, bp);
                        break;
                    case AllocMethod::Random:
                        alloc = random_allocate(k, bp, splitmix64(seed ^ 0xA110CULL));
                        break;
                    case AllocMethod::Threshold:
                        alloc = threshold_allocate(gains, threshold, bp);
                        break;
                    case AllocMethod::LeinonenSet:
                        alloc = sequential_mbest_allocate(gains, m, queue, false);
                        break;
                    case AllocMethod::LeinonenOrdered:
                        alloc = sequential_mbest_allocate(gains, m, queue, true);
                        break;
                }
                RateReport rep = evaluate_per_channel_snr(gains, alloc, rho);
                if (cfg.with_water_fill &&
                    (method == AllocMethod::Pm || method == AllocMethod::Hungarian)) {
                    double wf = water_filled_sum(gains, alloc, rho);
                    rec.wf_gain = rep.sum_rate > 0 ? (wf - rep.sum_rate) / rep.sum_rate : 0.0;
                }
                rec.sum_rate = rep.sum_rate * rate_scale;
                rec.min_rate = rep.min_rate * rate_scale;
                rec.mean_rate = rep.mean_rate * rate_scale;
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << "method,n,k,b,m,seed,sum_rate,min_rate,mean_rate,pm_exists,feedback_bits,wf_gain\n";
    for (const auto& r : records) {
        os << r.method << ',' << r.n << ',' << r.k << ',' << r.b << ',' << r.m << ','
           << r.seed << ',' << fmt(r.sum_rate) << ',' << fmt(r.min_rate) << ','
           << fmt(r.mean_rate) << ',' << (r.pm_exists ? 1 : 0) << ','
           << fmt(r.feedback_bits) << ',' << fmt(r.wf_gain) << '\n';
    }
}

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records) {
    std::vector<Aggregate> out;
    std::map<std::pair<std::string, int>, std::vector<const TrialRecord*>> groups;
    std::vector<std::pair<std::string, int>> order;
    for (const auto& r : records) {
        auto key = std::make_pair(r.method, r.n);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    auto mean_se = [](const std::vector<const TrialRecord*>& g, auto field) {
        double mean = 0.0;
        for (auto* r : g) mean += field(*r);
        mean /= g.size();
        double var = 0.0;
        for (auto* r : g) var += (field(*r) - mean) * (field(*r) - mean);
        double se = g.size() > 1 ? std::sqrt(var / (g.size() - 1) / g.size()) : 0.0;
        return std::make_pair(mean, se);
    };
    for (const auto& key : order) {
        const auto& g = groups[key];
        Aggregate a;
        a.method = key.first;
        a.n = key.second;
        a.k = g.front()->k;
        a.m = g.front()->m;
        a.trials = static_cast<int>(g.size());
        std::tie(a.mean_rate, a.mean_rate_se) =
            mean_se(g, [](const TrialRecord& r) { return r.mean_rate; });
        std::tie(a.min_rate, a.min_rate_se) =
            mean_se(g, [](const TrialRecord& r) { return r.min_rate; });
        std::tie(a.sum_rate, a.sum_rate_se) =
            mean_se(g, [](const TrialRecord& r) { return r.sum_rate; });
        a.feedback_bits = g.front()->feedback_bits;
        int fails = 0;
        double wf_num = 0.0, rate_sum = 0.0;
        for (auto* r : g) {
            if (!r->pm_exists) ++fails;
            wf_num += r->wf_gain * r->sum_rate;
            rate_sum += r->sum_rate;
        }
        a.pm_fail_fraction = static_cast<double>(fails) / g.size();
        a.wf_gain = rate_sum > 0 ? wf_num / rate_sum : 0.0;
        out.push_back(std::move(a));
    }
    return out;
}

void write_aggregate_csv(std::ostream& os, const std::vector<Aggregate>& rows) {
    os << "method,n,k,m,trials,mean_rate,mean_rate_se,min_rate,min_rate_se,"
          "sum_rate,sum_rate_se,pm_fail_fraction,feedback_bits,wf_gain\n";
    for (const auto& a : rows) {
        os << a.method << ',' << a.n << ',' << a.k << ',' << a.m << ',' << a.trials << ','
           << fmt(a.mean_rate) << ',' << fmt(a.mean_rate_se) << ',' << fmt(a.min_rate)
           << ',' << fmt(a.min_rate_se) << ',' << fmt(a.sum_rate) << ','
           << fmt(a.sum_rate_se) << ',' << fmt(a.pm_fail_fraction) << ','
           << fmt(a.feedback_bits) << ',' << fmt(a.wf_gain) << '\n';
    }
}

namespace {

// Top-m indices (0-based) of a gain row; ties to the lower index. Small-heap
// selection, cheap for m << k.
void top_m_indices(const double* row, int k, int m, std::vector<int>& out) {
    struct Entry {
        double g;
        int idx;
    };
    auto worse = [](const Entry& a, const Entry& b) {
        return a.g > b.g || (a.g == b.g && a.idx < b.idx);  // min-heap on quality
    };
    std::vector<Entry> heap;
    heap.reserve(m);
    for (int c = 0; c < k; ++c) {
        Entry e{row[c], c};
        if (static_cast<int>(heap.size()) < m) {
            heap.push_back(e);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (worse(e, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = e;
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
    out.clear();
    for (const Entry& e : heap) out.push_back(e.idx);
    std::sort(out.begin(), out.end());
}

void sample_row(const FadingSpec& spec, bool rank_equivalence, int k,
                std::mt19937_64& gen, std::vector<double>& row) {
    if (rank_equivalence) {
        for (int c = 0; c < k; ++c) row[c] = uniform01(gen);
    } else {
        ChannelGainMatrix m = sample_gains(spec, 1, k, gen());
        row = m.gains;
    }
}

}  // namespace

double pm_failure_probability(const FadingSpec& spec, int n, int b, int m, int trials,
                              std::uint64_t master_seed, bool rank_equivalence) {
    const int k = n * b;
    std::vector<int> bp(n, b);
    std::vector<double> row(k);
    std::vector<int> best;
    int fails = 0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 gen(derive_seed(master_seed, n, t));
        std::vector<MBestReport> reports(n);
        for (int u = 0; u < n; ++u) {
            sample_row(spec, rank_equivalence, k, gen, row);
            top_m_indices(row.data(), k, m, best);
            reports[u].user = u;
            reports[u].channels.k = k;
            reports[u].channels.members.resize(m);
            for (int i = 0; i < m; ++i) reports[u].channels.members[i] = best[i] + 1;
        }
        if (!maximum_matching(build_graph(reports, bp)).is_perfect) ++fails;
    }
    return static_cast<double>(fails) / trials;
}

double coverage_failure_probability(const FadingSpec& spec, int n, int b, int m,
                                    int trials, std::uint64_t master_seed,
                                    bool rank_equivalence) {
    const int k = n * b;
    std::vector<double> row(k);
    std::vector<int> best;
    std::vector<bool> covered(k);
    int fails = 0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 gen(derive_seed(master_seed, n, t));
        std::fill(covered.begin(), covered.end(), false);
        for (int u = 0; u < n; ++u) {
            sample_row(spec, rank_equivalence, k, gen, row);
            top_m_indices(row.data(), k, m, best);
            for (int c : best) covered[c] = true;
        }
        if (std::find(covered.begin(), covered.end(), false) != covered.end()) ++fails;
    }
    return static_cast<double>(fails) / trials;
}

std::vector<Table2Row> table2(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<Table2Row> rows;
    for (int n : cfg.n_list) {
        Table2Row row;
        row.n = n;
        row.k = n * cfg.b;
        row.m_low = m_log_rule(row.k, cfg.b, Rounding::Floor);
        row.m_high = m_log_rule(row.k, 1.5 * (cfg.b + 1), Rounding::Floor);
        row.pr_no_pm_low = pm_failure_probability(cfg.fading, n, cfg.b, row.m_low,
                                                  cfg.trials, cfg.master_seed * 2 + 0);
        row.pr_no_pm_high = pm_failure_probability(cfg.fading, n, cfg.b, row.m_high,
                                                   cfg.trials, cfg.master_seed * 2 + 1);
        row.bound = theorem1_bound(BoundInput{row.k, cfg.b, cfg.epsilon, std::nullopt});
        rows.push_back(row);
    }
    return rows;
}

void write_table2_csv(std::ostream& os, const std::vector<Table2Row>& rows) {
    os << "n,k,m_low,pr_no_pm_low,m_high,pr_no_pm_high,bound\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.k << ',' << r.m_low << ',' << fmt(r.pr_no_pm_low) << ','
           << r.m_high << ',' << fmt(r.pr_no_pm_high) << ',' << fmt(r.bound) << '\n';
    }
}

std::vector<WfGainRow> wf_gain_sweep(const ExperimentConfig& cfg,
                                     const std::vector<int>& b_values) {
    cfg.validate();
    const int n = cfg.n_list.front();
    const double rho = per_channel_snr(cfg);
    std::vector<WfGainRow> rows;
    for (int b : b_values) {
        const int k = n * b;
        ExperimentConfig sub = cfg;
        sub.b = b;
        const int m = m_for(sub, k);
        std::vector<int> bp(n, b);
        FadingSpec spec = spec_for_n(cfg, n);
        double pm_rate = 0.0, pm_wf = 0.0, hu_rate = 0.0, hu_wf = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            std::uint64_t seed = derive_seed(cfg.master_seed, k, t);
            ChannelGainMatrix gains = sample_gains(spec, n, k, seed);
            auto [pm_alloc, matching] = pm_allocate(gains, m, bp);
            Allocation hu_alloc = optimal_allocate_per_channel_snr(gains, rho, bp);
            pm_rate += evaluate_per_channel_snr(gains, pm_alloc, rho).sum_rate;
            hu_rate += evaluate_per_channel_snr(gains, hu_alloc, rho).sum_rate;
            pm_wf += water_filled_sum(gains, pm_alloc, rho);
            hu_wf += water_filled_sum(gains, hu_alloc, rho);
        }
        WfGainRow row;
        row.b = b;
        row.k = k;
        row.m = m;
        row.gain_pm = (pm_wf - pm_rate) / pm_rate;
        row.gain_hungarian = (hu_wf - hu_rate) / hu_rate;
        rows.push_back(row);
    }
    return rows;
}

void write_wf_csv(std::ostream& os, const std::vector<WfGainRow>& rows) {
    os << "b,k,m,wf_gain_pm,wf_gain_hungarian\n";
    for (const auto& r : rows)
        os << r.b << ',' << r.k << ',' << r.m << ',' << fmt(r.gain_pm) << ','
           << fmt(r.gain_hungarian) << '\n';
}

void write_svg_plot(std::ostream& os, const std::string& title,
                    const std::vector<PlotSeries>& series) {
    const int w = 640, h = 420, margin = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto py = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
       << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
       << "<text x='" << w / 2 << "' y='20' text-anchor='middle'>" << title << "</text>\n";
    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % 6];
        os << "<polyline fill='none' stroke='" << color << "' points='";
        for (auto [x, y] : series[i].points) os << px(x) << ',' << py(y) << ' ';
        os << "'/>\n<text x='" << w - margin + 4 << "' y='" << 40 + 16 * i
           << "' fill='" << color << "' font-size='12'>" << series[i].label << "</text>\n";
    }
    os << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - margin
       << "' y2='" << h - margin << "' stroke='black'/>\n"
       << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
       << h - margin << "' stroke='black'/>\n"
       << "<text x='" << margin << "' y='" << h - margin + 16 << "' font-size='11'>"
       << fmt(xmin) << "</text>\n<text x='" << w - margin << "' y='" << h - margin + 16
       << "' text-anchor='end' font-size='11'>" << fmt(xmax) << "</text>\n"
       << "<text x='" << margin - 4 << "' y='" << h - margin << "' text-anchor='end' font-size='11'>"
       << fmt(ymin) << "</text>\n<text x='" << margin - 4 << "' y='" << margin
       << "' text-anchor='end' font-size='11'>" << fmt(ymax) << "</text>\n</svg>\n";
}

namespace {

using nlohmann::json;

FadingSpec fading_from_json(const json& j) {
    std::string kind = j.value("kind", "rayleigh");
    FadingSpec spec;
    if (kind == "rayleigh") {
        spec = FadingSpec::rayleigh(j.value("sigma", 1.0 / std::numbers::sqrt2));
    } else if (kind == "nakagami") {
        spec = FadingSpec::nakagami(j.value("m", 1.0), j.value("omega", 1.0));
    } else if (kind == "rician") {
        spec = FadingSpec::rician(j.value("v", 1.0), j.value("sigma", 1.0));
    } else if (kind == "half_normal") {
        spec = FadingSpec::half_normal(j.value("sigma", 1.0));
    } else if (kind == "correlated_tdl") {
        spec = FadingSpec::correlated_tdl();
        if (j.contains("delays_ns")) spec.taps.delays_ns = j["delays_ns"].get<std::vector<double>>();
        if (j.contains("powers_db")) spec.taps.powers_db = j["powers_db"].get<std::vector<double>>();
        spec.subcarriers_per_block = j.value("subcarriers_per_block", 12);
        spec.subcarrier_spacing_hz = j.value("subcarrier_spacing_hz", 15e3);
        if (j.value("aggregation", "rms") == "center")
            spec.aggregation = BlockAggregation::CenterSubcarrier;
    } else {
        throw std::runtime_error("config.fading.kind: unknown kind '" + kind + "'");
    }
    if (j.contains("user_scale")) spec.user_scale = j["user_scale"].get<std::vector<double>>();
    return spec;
}

AllocMethod method_from_string(const std::string& s) {
    if (s == "pm") return AllocMethod::Pm;
    if (s == "hungarian") return AllocMethod::Hungarian;
    if (s == "random") return AllocMethod::Random;
    if (s == "threshold") return AllocMethod::Threshold;
    if (s == "leinonen_set") return AllocMethod::LeinonenSet;
    if (s == "leinonen_ordered") return AllocMethod::LeinonenOrdered;
    throw std::runtime_error("config.methods: unknown method '" + s + "'");
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error: " + std::string(e.what()));
    }
    ExperimentConfig cfg;
    if (j.contains("fading")) cfg.fading = fading_from_json(j["fading"]);
    if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
    cfg.b = j.value("b", cfg.b);
    if (j.contains("class_b")) cfg.class_b = j["class_b"].get<std::vector<int>>();
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    if (j.contains("rounding"))
        cfg.rounding = j["rounding"] == "floor" ? Rounding::Floor : Rounding::Ceil;
    if (j.contains("m_coeff")) cfg.m_coeff = j["m_coeff"].get<double>();
    cfg.snr_db = j.value("snr_db", cfg.snr_db);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& m : j["methods"]) cfg.methods.push_back(method_from_string(m));
    }
    cfg.bandwidth_hz = j.value("bandwidth_hz", cfg.bandwidth_hz);
    cfg.rates_in_kbps = j.value("rates_in_kbps", cfg.rates_in_kbps);
    cfg.with_water_fill = j.value("with_water_fill", cfg.with_water_fill);
    cfg.user_scale_spread_db = j.value("user_scale_spread_db", cfg.user_scale_spread_db);
    cfg.threshold_grid = j.value("threshold_grid", cfg.threshold_grid);
    cfg.threshold_pilot_trials = j.value("threshold_pilot_trials", cfg.threshold_pilot_trials);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(e.what());
    }
    return cfg;
}

}  // namespace pmalloc
