#include "pmalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pmalloc {

std::string to_string(AllocMethod m) {
    switch (m) {
        case AllocMethod::Pm: return "pm";
        case AllocMethod::Hungarian: return "hungarian";
        case AllocMethod::Random: return "random";
        case AllocMethod::Threshold: return "threshold";
        case AllocMethod::LeinonenSet: return "leinonen_set";
        case AllocMethod::LeinonenOrdered: return "leinonen_ordered";
    }
    return "?";
}

LinkBudget calibrated_budget(double mean_square_gain, int b, double snr_db) {
    if (mean_square_gain <= 0 || b < 1)
        throw std::invalid_argument("calibrated_budget: invalid arguments");
    LinkBudget budget;
    budget.b = b;
    budget.n0 = 1.0;
    budget.p_max = b * std::pow(10.0, snr_db / 10.0) / mean_square_gain;
    return budget;
}

double rate(std::span<const double> gains_of_user, const LinkBudget& budget) {
    if (budget.p_max <= 0 || budget.n0 <= 0 || budget.b < 1)
        throw std::invalid_argument("rate: invalid budget");
    double snr_scale = budget.p_max / (budget.b * budget.n0);
    double r = 0.0;
    for (double g : gains_of_user) r += std::log2(1.0 + g * g * snr_scale);
    return r;
}

RateReport evaluate(const ChannelGainMatrix& gains, const Allocation& alloc,
                    double p_max, double n0) {
    RateReport rep;
    rep.per_user.reserve(alloc.per_user.size());
    for (size_t n = 0; n < alloc.per_user.size(); ++n) {
        const auto& set = alloc.per_user[n];
        std::vector<double> g;
        g.reserve(set.size());
        for (int c : set) g.push_back(gains.at(static_cast<int>(n), c - 1));
        LinkBudget budget{p_max, n0, std::max<int>(1, static_cast<int>(set.size()))};
        rep.per_user.push_back(rate(g, budget));
    }
    rep.sum_rate = std::accumulate(rep.per_user.begin(), rep.per_user.end(), 0.0);
    rep.min_rate = rep.per_user.empty()
                       ? 0.0
                       : *std::min_element(rep.per_user.begin(), rep.per_user.end());
    rep.mean_rate = rep.per_user.empty() ? 0.0 : rep.sum_rate / rep.per_user.size();
    return rep;
}

RateReport evaluate_per_channel_snr(const ChannelGainMatrix& gains,
                                    const Allocation& alloc, double snr_scale) {
    RateReport rep;
    rep.per_user.reserve(alloc.per_user.size());
    for (size_t n = 0; n < alloc.per_user.size(); ++n) {
        double r = 0.0;
        for (int c : alloc.per_user[n]) {
            double g = gains.at(static_cast<int>(n), c - 1);
            r += std::log2(1.0 + g * g * snr_scale);
        }
        rep.per_user.push_back(r);
    }
    rep.sum_rate = std::accumulate(rep.per_user.begin(), rep.per_user.end(), 0.0);
    rep.min_rate = rep.per_user.empty()
                       ? 0.0
                       : *std::min_element(rep.per_user.begin(), rep.per_user.end());
    rep.mean_rate = rep.per_user.empty() ? 0.0 : rep.sum_rate / rep.per_user.size();
    return rep;
}

std::pair<Allocation, Matching> pm_allocate(const ChannelGainMatrix& gains, int m,
                                            const std::vector<int>& b_per_user) {
    const int n = gains.n_users;
    const int k = gains.k_channels;
    if (static_cast<int>(b_per_user.size()) != n)
        throw std::invalid_argument("pm_allocate: b_per_user size mismatch");
    if (std::accumulate(b_per_user.begin(), b_per_user.end(), 0) != k)
        throw std::invalid_argument("pm_allocate: sum(b_per_user) != K");

    std::vector<MBestReport> reports(n);
    for (int u = 0; u < n; ++u) reports[u] = {u, m_best(gains.row(u), m)};
    UserChannelGraph graph = build_graph(reports, b_per_user);
    Matching matching = maximum_matching(graph);

    Allocation alloc;
    alloc.method = AllocMethod::Pm;
    alloc.pm_flag = matching.is_perfect;
    alloc.per_user.resize(n);
    std::vector<bool> taken(k, false);
    for (int a = 0; a < graph.total_agents(); ++a) {
        int c = matching.agent_to_channel[a];
        if (c >= 0) {
            alloc.per_user[graph.agent_user[a]].push_back(c + 1);
            taken[c] = true;
        }
    }
    // Unmatched agents take the free channels in ascending index order.
    int next_free = 0;
    for (int a = 0; a < graph.total_agents(); ++a) {
        if (matching.agent_to_channel[a] != -1) continue;
        while (taken[next_free]) ++next_free;
        taken[next_free] = true;
        alloc.per_user[graph.agent_user[a]].push_back(next_free + 1);
    }
    for (auto& set : alloc.per_user) std::sort(set.begin(), set.end());
    return {std::move(alloc), std::move(matching)};
}

namespace {

// Replicate user n into b_n agent rows; entry = single-channel rate with the
// given per-user SNR scale.
Allocation hungarian_core(const ChannelGainMatrix& gains,
                          const std::vector<int>& b_per_user,
                          const std::vector<double>& user_snr_scale) {
    const int n = gains.n_users;
    const int k = gains.k_channels;
    if (static_cast<int>(b_per_user.size()) != n ||
        std::accumulate(b_per_user.begin(), b_per_user.end(), 0) != k)
        throw std::invalid_argument("optimal_allocate: inconsistent dimensions");

    std::vector<std::vector<double>> w(k, std::vector<double>(k));
    std::vector<int> row_user(k);
    int row = 0;
    for (int u = 0; u < n; ++u) {
        for (int a = 0; a < b_per_user[u]; ++a, ++row) {
            row_user[row] = u;
            for (int c = 0; c < k; ++c) {
                double g = gains.at(u, c);
                w[row][c] = std::log2(1.0 + g * g * user_snr_scale[u]);
            }
        }
    }
    AssignmentResult res = optimal_assignment(w, /*maximize=*/true);
    Allocation alloc;
    alloc.method = AllocMethod::Hungarian;
    alloc.per_user.resize(n);
    for (int r = 0; r < k; ++r)
        alloc.per_user[row_user[r]].push_back(res.row_to_col[r] + 1);
    for (auto& set : alloc.per_user) std::sort(set.begin(), set.end());
    return alloc;
}

}  // namespace

Allocation optimal_allocate(const ChannelGainMatrix& gains, const LinkBudget& budget,
                            const std::vector<int>& b_per_user) {
    std::vector<double> scale(b_per_user.size());
    for (size_t u = 0; u < b_per_user.size(); ++u)
        scale[u] = budget.p_max / (b_per_user[u] * budget.n0);
    return hungarian_core(gains, b_per_user, scale);
}

Allocation optimal_allocate_per_channel_snr(const ChannelGainMatrix& gains,
                                            double snr_scale,
                                            const std::vector<int>& b_per_user) {
    std::vector<double> scale(b_per_user.size(), snr_scale);
    return hungarian_core(gains, b_per_user, scale);
}

Allocation random_allocate(int k, const std::vector<int>& b_per_user,
                           std::uint64_t seed) {
    if (std::accumulate(b_per_user.begin(), b_per_user.end(), 0) != k)
        throw std::invalid_argument("random_allocate: sum(b_per_user) != K");
    std::vector<int> channels(k);
    std::iota(channels.begin(), channels.end(), 1);
    std::mt19937_64 gen(seed);
    std::shuffle(channels.begin(), channels.end(), gen);
    Allocation alloc;
    alloc.method = AllocMethod::Random;
    alloc.per_user.resize(b_per_user.size());
    int pos = 0;
    for (size_t u = 0; u < b_per_user.size(); ++u) {
        alloc.per_user[u].assign(channels.begin() + pos,
                                 channels.begin() + pos + b_per_user[u]);
        std::sort(alloc.per_user[u].begin(), alloc.per_user[u].end());
        pos += b_per_user[u];
    }
    return alloc;
}

Allocation threshold_allocate(const ChannelGainMatrix& gains, double threshold,
                              const std::vector<int>& b_per_user) {
    const int n = gains.n_users;
    const int k = gains.k_channels;
    if (threshold < 0) throw std::invalid_argument("threshold_allocate: threshold < 0");
    if (static_cast<int>(b_per_user.size()) != n ||
        std::accumulate(b_per_user.begin(), b_per_user.end(), 0) != k)
        throw std::invalid_argument("threshold_allocate: inconsistent dimensions");

    Allocation alloc;
    alloc.method = AllocMethod::Threshold;
    alloc.per_user.resize(n);
    std::vector<int> load(n, 0);
    auto least_loaded = [&](auto&& eligible) {
        int best = -1;
        for (int u = 0; u < n; ++u) {
            if (load[u] >= b_per_user[u] || !eligible(u)) continue;
            if (best == -1 || load[u] < load[best]) best = u;
        }
        return best;
    };
    for (int c = 0; c < k; ++c) {
        int u = least_loaded([&](int v) { return gains.at(v, c) > threshold; });
        if (u == -1) u = least_loaded([](int) { return true; });
        alloc.per_user[u].push_back(c + 1);
        ++load[u];
    }
    return alloc;
}

Allocation sequential_mbest_allocate(const ChannelGainMatrix& gains, int m,
                                     const std::vector<int>& queue_order,
                                     bool ordered) {
    const int n = gains.n_users;
    const int k = gains.k_channels;
    if (n != k)
        throw std::invalid_argument(
            "sequential_mbest_allocate: baseline supports b = 1 only (N must equal K)");
    if (static_cast<int>(queue_order.size()) != n)
        throw std::invalid_argument("sequential_mbest_allocate: queue_order size mismatch");

    Allocation alloc;
    alloc.method = ordered ? AllocMethod::LeinonenOrdered : AllocMethod::LeinonenSet;
    alloc.per_user.resize(n);
    std::vector<bool> taken(k, false);
    for (int u : queue_order) {
        ChannelSubset report = m_best(gains.row(u), m);
        int pick = -1;
        if (ordered) {
            double best_gain = -1.0;
            for (int c : report.members) {
                if (taken[c - 1]) continue;
                double g = gains.at(u, c - 1);
                if (g > best_gain) {
                    best_gain = g;
                    pick = c;
                }
            }
        } else {
            for (int c : report.members) {
                if (!taken[c - 1]) {
                    pick = c;
                    break;
                }
            }
        }
        if (pick == -1) {
            for (int c = 1; c <= k; ++c) {
                if (!taken[c - 1]) {
                    pick = c;
                    break;
                }
            }
        }
        taken[pick - 1] = true;
        alloc.per_user[u].push_back(pick);
    }
    return alloc;
}

WaterFillResult water_fill(std::span<const double> gains_of_user, double p_total,
                           double n0) {
    if (p_total <= 0 || n0 <= 0)
        throw std::invalid_argument("water_fill: need positive power and noise");
    const int b = static_cast<int>(gains_of_user.size());
    WaterFillResult res;
    res.powers.assign(b, 0.0);

    std::vector<int> order(b);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
        return gains_of_user[a] > gains_of_user[c];
    });
    int positive = 0;
    while (positive < b && gains_of_user[order[positive]] > 0.0) ++positive;
    if (positive == 0) {  // all channels dead: rate zero, split power uniformly
        for (double& p : res.powers) p = p_total / b;
        return res;
    }

    // Shrink the active set until the water level covers its weakest channel.
    std::vector<double> inv(b, 0.0);
    for (int i = 0; i < positive; ++i) {
        double g = gains_of_user[order[i]];
        inv[i] = n0 / (g * g);
    }
    int active = positive;
    double level = 0.0;
    while (active > 0) {
        double sum_inv = std::accumulate(inv.begin(), inv.begin() + active, 0.0);
        level = (p_total + sum_inv) / active;
        if (level >= inv[active - 1]) break;
        --active;
    }
    for (int i = 0; i < active; ++i) {
        res.powers[order[i]] = level - inv[i];
        res.rate += std::log2(level / inv[i]);
    }
    return res;
}

}  // namespace pmalloc
