// User-channel bipartite graph, maximum-cardinality matching and optimal
// weighted assignment.
#pragma once

#include <string>
#include <vector>

#include "pmalloc/channel.hpp"

namespace pmalloc {

// Balanced bipartite graph: each user n contributes b_n agent nodes, all
// adjacent to that user's reported channel subset. sum(b_n) == k_channels.
struct UserChannelGraph {
    int n_users = 0;
    std::vector<int> b_per_user;
    int k_channels = 0;
    std::vector<ChannelSubset> user_adjacency;  // one subset per user
    std::vector<int> agent_user;                // agent index -> user index

    int total_agents() const { return static_cast<int>(agent_user.size()); }
};

struct Matching {
    std::vector<int> agent_to_channel;  // 0-based channel, -1 if unmatched
    int cardinality = 0;
    bool is_perfect = false;
};

UserChannelGraph build_graph(const std::vector<MBestReport>& reports,
                             const std::vector<int>& b_per_user);

// Hopcroft-Karp. Deterministic: agents and channels scanned in ascending order.
Matching maximum_matching(const UserChannelGraph& g);

// When no PM exists, returns a Hall-deficient agent set (|N(S)| < |S|)
// extracted from the final alternating-reachability layers. Empty otherwise.
std::vector<int> hall_violation(const UserChannelGraph& g);

// One "agent channel" pair per line, for debugging dumps.
std::string to_edge_list(const UserChannelGraph& g);

struct AssignmentResult {
    std::vector<int> row_to_col;
    double total = 0.0;
};

// Hungarian method on a square weight matrix.
AssignmentResult optimal_assignment(const std::vector<std::vector<double>>& w,
                                    bool maximize);

}  // namespace pmalloc
