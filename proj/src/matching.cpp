#include "pmalloc/matching.hpp"

#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace pmalloc {

UserChannelGraph build_graph(const std::vector<MBestReport>& reports,
                             const std::vector<int>& b_per_user) {
    UserChannelGraph g;
    g.n_users = static_cast<int>(b_per_user.size());
    g.b_per_user = b_per_user;
    g.k_channels = std::accumulate(b_per_user.begin(), b_per_user.end(), 0);
    if (static_cast<int>(reports.size()) != g.n_users)
        throw std::invalid_argument("build_graph: reports must cover all users");
    g.user_adjacency.resize(g.n_users);
    std::vector<bool> seen(g.n_users, false);
    for (const auto& r : reports) {
        if (r.user < 0 || r.user >= g.n_users)
            throw std::invalid_argument("build_graph: report user out of range");
        if (seen[r.user])
            throw std::invalid_argument("build_graph: duplicate user report");
        seen[r.user] = true;
        validate_subset(r.channels);
        if (r.channels.k != g.k_channels)
            throw std::invalid_argument("build_graph: report universe != K");
        g.user_adjacency[r.user] = r.channels;
    }
    for (int n = 0; n < g.n_users; ++n) {
        if (b_per_user[n] < 1)
            throw std::invalid_argument("build_graph: b_per_user entries must be >= 1");
        for (int a = 0; a < b_per_user[n]; ++a) g.agent_user.push_back(n);
    }
    return g;
}

namespace {

constexpr int kInfDist = std::numeric_limits<int>::max();

struct HopcroftKarp {
    const UserChannelGraph& g;
    int agents, channels;
    std::vector<int> match_agent;    // agent -> channel (0-based), -1 free
    std::vector<int> match_channel;  // channel -> agent, -1 free
    std::vector<int> dist;

    explicit HopcroftKarp(const UserChannelGraph& graph)
        : g(graph),
          agents(graph.total_agents()),
          channels(graph.k_channels),
          match_agent(agents, -1),
          match_channel(channels, -1),
          dist(agents) {}

    const std::vector<int>& adj(int agent) const {
        return g.user_adjacency[g.agent_user[agent]].members;  // 1-based
    }

    bool bfs() {
        std::queue<int> q;
        for (int a = 0; a < agents; ++a) {
            if (match_agent[a] == -1) {
                dist[a] = 0;
                q.push(a);
            } else {
                dist[a] = kInfDist;
            }
        }
        bool found_free = false;
        while (!q.empty()) {
            int a = q.front();
            q.pop();
            for (int c1 : adj(a)) {
                int owner = match_channel[c1 - 1];
                if (owner == -1) {
                    found_free = true;
                } else if (dist[owner] == kInfDist) {
                    dist[owner] = dist[a] + 1;
                    q.push(owner);
                }
            }
        }
        return found_free;
    }

    bool dfs(int a) {
        for (int c1 : adj(a)) {
            int c = c1 - 1;
            int owner = match_channel[c];
            if (owner == -1 || (dist[owner] == dist[a] + 1 && dfs(owner))) {
                match_agent[a] = c;
                match_channel[c] = a;
                return true;
            }
        }
        dist[a] = kInfDist;
        return false;
    }

    int run() {
        int size = 0;
        while (bfs())
            for (int a = 0; a < agents; ++a)
                if (match_agent[a] == -1 && dfs(a)) ++size;
        return size;
    }
};

}  // namespace

Matching maximum_matching(const UserChannelGraph& g) {
    HopcroftKarp hk(g);
    Matching m;
    m.cardinality = hk.run();
    m.agent_to_channel = std::move(hk.match_agent);
    m.is_perfect = m.cardinality == g.k_channels;
    return m;
}

std::vector<int> hall_violation(const UserChannelGraph& g) {
    HopcroftKarp hk(g);
    int card = hk.run();
    if (card == g.k_channels) return {};

    // Alternating reachability from free agents: unmatched edges agent->channel,
    // matched edges channel->agent. The reachable agents S have all their
    // neighbours matched back into S, so |N(S)| = |S| - (#free agents in S) < |S|.
    std::vector<bool> agent_seen(hk.agents, false);
    std::vector<bool> chan_seen(hk.channels, false);
    std::queue<int> q;
    for (int a = 0; a < hk.agents; ++a) {
        if (hk.match_agent[a] == -1) {
            agent_seen[a] = true;
            q.push(a);
        }
    }
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int c1 : hk.adj(a)) {
            int c = c1 - 1;
            if (chan_seen[c]) continue;
            chan_seen[c] = true;
            int owner = hk.match_channel[c];
            if (owner != -1 && !agent_seen[owner]) {
                agent_seen[owner] = true;
                q.push(owner);
            }
        }
    }
    std::vector<int> deficient;
    for (int a = 0; a < hk.agents; ++a)
        if (agent_seen[a]) deficient.push_back(a);
    return deficient;
}

std::string to_edge_list(const UserChannelGraph& g) {
    std::string out;
    for (int a = 0; a < g.total_agents(); ++a)
        for (int c : g.user_adjacency[g.agent_user[a]].members)
            out += std::to_string(a) + " " + std::to_string(c) + "\n";
    return out;
}

AssignmentResult optimal_assignment(const std::vector<std::vector<double>>& w,
                                    bool maximize) {
    const int n = static_cast<int>(w.size());
    for (const auto& row : w)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("optimal_assignment: matrix must be square");
    if (n == 0) return {};

    // O(n^3) Hungarian method with potentials, minimising; maximise by negation.
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](int i, int j) { return maximize ? -w[i][j] : w[i][j]; };

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    AssignmentResult res;
    res.row_to_col.assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) res.row_to_col[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) res.total += w[i][res.row_to_col[i]];
    return res;
}

}  // namespace pmalloc
