#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "edgeval/attributions.hpp"

namespace edgeval {

namespace {

using NodeSet = std::vector<std::size_t>; // sorted

std::size_t induced_edge_count(const GraphSample& g, const std::vector<char>& in_set) {
    std::size_t n = 0;
    for (const Edge& e : g.edges)
        if (in_set[e.u] && in_set[e.v]) ++n;
    return n;
}

std::vector<char> to_flags(const NodeSet& nodes, std::size_t n) {
    std::vector<char> f(n, 0);
    for (std::size_t v : nodes) f[v] = 1;
    return f;
}

bool connected_within(const GraphSample& g, const std::vector<char>& in_set,
                      std::size_t skip = static_cast<std::size_t>(-1)) {
    std::size_t start = static_cast<std::size_t>(-1), count = 0;
    for (std::size_t v = 0; v < g.node_count; ++v)
        if (in_set[v] && v != skip) {
            if (start == static_cast<std::size_t>(-1)) start = v;
            ++count;
        }
    if (count == 0) return false;
    std::vector<std::vector<std::size_t>> adj(g.node_count);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(g.node_count, 0);
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop();
        for (std::size_t w : adj[v])
            if (in_set[w] && w != skip && !seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
    }
    return reached == count;
}

struct TreeNode {
    NodeSet nodes;
    std::size_t edge_count = 0;
    bool terminal = false;
    bool expanded = false;
    std::vector<std::size_t> children; // indices into the tree
    std::size_t visits = 0;
    double total_reward = 0.0;
    bool evaluated = false;
    double shapley = 0.0;
};

} // namespace

SubgraphXResult subgraphx_search(const ModelParams& model, const GraphSample& g,
                                 std::size_t target_edges, const SubgraphXConfig& cfg) {
    if (cfg.mcts_iterations == 0 || cfg.expansions_per_node == 0 || cfg.shapley_samples == 0)
        throw ParameterError("subgraphx_search: all counts must be positive");
    if (target_edges > g.edges.size())
        throw ParameterError("subgraphx_search: target exceeds the graph's edge count");

    SubgraphXResult result;
    if (g.node_count > cfg.max_nodes_guard) {
        result.skipped = true;
        return result;
    }

    std::mt19937_64 rng(cfg.rng_seed);
    const int target_class = evaluate(model, {&g}).predictions[0];

    std::map<NodeSet, double> shapley_cache;
    auto shapley_of = [&](const NodeSet& nodes) {
        auto it = shapley_cache.find(nodes);
        if (it != shapley_cache.end()) return it->second;
        GraphGame game = make_graph_game(model, g, nodes, cfg.l_hop, target_class);
        std::mt19937_64 srng(rng()); // one sub-stream per evaluation, order-deterministic
        double phi = shapley_mc(game.value, game.n_players, 0, cfg.shapley_samples, srng);
        shapley_cache.emplace(nodes, phi);
        return phi;
    };

    std::vector<TreeNode> tree;
    std::map<NodeSet, std::size_t> index_of;
    auto intern = [&](NodeSet nodes) {
        auto it = index_of.find(nodes);
        if (it != index_of.end()) return it->second;
        TreeNode t;
        t.edge_count = induced_edge_count(g, to_flags(nodes, g.node_count));
        t.terminal = t.edge_count <= target_edges || nodes.size() <= cfg.min_size;
        t.nodes = std::move(nodes);
        tree.push_back(std::move(t));
        index_of.emplace(tree.back().nodes, tree.size() - 1);
        return tree.size() - 1;
    };

    NodeSet all(g.node_count);
    for (std::size_t v = 0; v < g.node_count; ++v) all[v] = v;
    const std::size_t root = intern(std::move(all));

    auto expand = [&](std::size_t idx) {
        if (tree[idx].expanded || tree[idx].terminal) return;
        const NodeSet nodes = tree[idx].nodes; // copy: intern() may grow the tree
        std::vector<char> flags = to_flags(nodes, g.node_count);
        // degree within the current subgraph
        std::vector<std::size_t> deg(g.node_count, 0);
        for (const Edge& e : g.edges)
            if (flags[e.u] && flags[e.v]) {
                ++deg[e.u];
                ++deg[e.v];
            }
        NodeSet candidates = nodes;
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&deg](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
        std::vector<std::size_t> children;
        for (std::size_t v : candidates) {
            if (children.size() >= cfg.expansions_per_node) break;
            if (nodes.size() <= 1) break;
            if (!connected_within(g, flags, v)) continue;
            NodeSet child = nodes;
            child.erase(std::find(child.begin(), child.end(), v));
            children.push_back(intern(std::move(child)));
        }
        tree[idx].children = std::move(children);
        tree[idx].expanded = true;
        if (tree[idx].children.empty()) tree[idx].terminal = true;
    };

    for (std::size_t iter = 0; iter < cfg.mcts_iterations; ++iter) {
        std::vector<std::size_t> path{root};
        std::size_t cur = root;
        while (!tree[cur].terminal) {
            expand(cur);
            if (tree[cur].terminal) break;
            // UCT over Shapley-reward averages; unvisited children explored
            // in random order
            double best = -1e300;
            std::size_t pick = tree[cur].children.front();
            const double logn =
                std::log(static_cast<double>(tree[cur].visits) + 1.0);
            std::vector<std::size_t> order = tree[cur].children;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t c : order) {
                const TreeNode& ch = tree[c];
                const double q =
                    ch.visits ? ch.total_reward / static_cast<double>(ch.visits) : 0.0;
                const double u = cfg.exploration *
                                 std::sqrt(logn / (static_cast<double>(ch.visits) + 1.0));
                if (q + u > best) {
                    best = q + u;
                    pick = c;
                }
            }
            cur = pick;
            path.push_back(cur);
        }
        if (!tree[cur].evaluated) {
            tree[cur].shapley = shapley_of(tree[cur].nodes);
            tree[cur].evaluated = true;
        }
        const double reward = tree[cur].shapley;
        for (std::size_t idx : path) {
            ++tree[idx].visits;
            tree[idx].total_reward += reward;
        }
    }

    // best evaluated subgraph within the edge budget
    bool found = false;
    double best_score = -1e300;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const TreeNode& t = tree[i];
        if (!t.evaluated || t.edge_count > target_edges) continue;
        if (!found || t.shapley > best_score) {
            found = true;
            best_score = t.shapley;
            best_idx = i;
        }
    }
    if (!found) throw OptimizationError("subgraphx_search: no candidate within budget");

    const std::vector<char> flags = to_flags(tree[best_idx].nodes, g.node_count);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (flags[g.edges[e].u] && flags[g.edges[e].v]) result.kept.kept.push_back(e);
    result.score = best_score;
    return result;
}

} // namespace edgeval
