#include "edgeval/graph.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <queue>
#include <random>

namespace edgeval {

void validate_graph(const GraphSample& g) {
    if (g.node_count > 0) {
        if (g.features.rank() != 2 || g.features.rows() != g.node_count)
            throw ParameterError("graph: feature row count must equal node count");
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u >= e.v) throw ParameterError("graph: edge not canonical (u < v required)");
        if (e.v >= g.node_count) throw ParameterError("graph: edge endpoint out of range");
        if (i > 0 && !(g.edges[i - 1] < e))
            throw ParameterError("graph: edges must be sorted and unique");
    }
}

std::vector<Edge> canonicalize_edges(std::vector<Edge> edges) {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (Edge e : edges) {
        if (e.u == e.v) continue;
        if (e.u > e.v) std::swap(e.u, e.v);
        out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> degrees(const GraphSample& g) {
    std::vector<std::size_t> deg(g.node_count, 0);
    for (const Edge& e : g.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

bool is_connected(const GraphSample& g) {
    if (g.node_count == 0) return true;
    std::vector<std::vector<std::size_t>> adj(g.node_count);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(g.node_count, 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop();
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    return count == g.node_count;
}

GraphSample apply_edge_subset(const GraphSample& g, const EdgeSubset& kept,
                              bool eliminate_isolated) {
    for (std::size_t k : kept.kept)
        if (k >= g.edges.size()) throw ParameterError("apply_edge_subset: edge index out of range");

    GraphSample out;
    out.label = g.label;
    out.features_dim_hint = g.node_count ? g.features.cols() : g.features_dim_hint;
    std::vector<Edge> edges;
    edges.reserve(kept.kept.size());
    for (std::size_t k : kept.kept) edges.push_back(g.edges[k]);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    if (!eliminate_isolated) {
        out.node_count = g.node_count;
        out.features = g.features;
        out.edges = std::move(edges);
        return out;
    }

    std::vector<char> alive(g.node_count, 0);
    for (const Edge& e : edges) {
        alive[e.u] = 1;
        alive[e.v] = 1;
    }
    // renumber survivors preserving original order
    std::vector<std::size_t> remap(g.node_count, 0);
    std::size_t next = 0;
    for (std::size_t v = 0; v < g.node_count; ++v)
        if (alive[v]) remap[v] = next++;
    out.node_count = next;
    const std::size_t d = g.node_count ? g.features.cols() : g.features_dim_hint;
    out.features = Tensor::zeros({next, d});
    for (std::size_t v = 0; v < g.node_count; ++v)
        if (alive[v])
            std::copy(&g.features.data[v * d], &g.features.data[(v + 1) * d],
                      &out.features.data[remap[v] * d]);
    out.edges.reserve(edges.size());
    for (const Edge& e : edges) out.edges.push_back({remap[e.u], remap[e.v]});
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

double sparsity(const GraphSample& g_s, const GraphSample& g_o) {
    if (g_o.edges.empty())
        throw std::domain_error("sparsity: original graph has no edges");
    return 100.0 * static_cast<double>(g_s.edges.size()) /
           static_cast<double>(g_o.edges.size());
}

Splits split_dataset(const Dataset& ds, double train_frac, double val_frac,
                     double test_frac, std::uint64_t rng_seed) {
    const double total = train_frac + val_frac + test_frac;
    if (std::abs(total - 1.0) > 1e-9)
        throw ParameterError("split_dataset: fractions must sum to 1");

    std::vector<std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        const int y = ds.graphs[i].label;
        if (y < 0) throw ParameterError("split_dataset: unlabeled graph");
        if (static_cast<std::size_t>(y) >= by_class.size()) by_class.resize(y + 1);
        by_class[y].push_back(i);
    }

    std::mt19937_64 rng(rng_seed);
    Splits s;
    for (auto& idxs : by_class) {
        if (idxs.empty()) continue;
        std::shuffle(idxs.begin(), idxs.end(), rng);
        const std::size_t n = idxs.size();
        std::size_t n_train = static_cast<std::size_t>(std::llround(train_frac * n));
        std::size_t n_val = static_cast<std::size_t>(std::llround(val_frac * n));
        n_train = std::min(n_train, n);
        n_val = std::min(n_val, n - n_train);
        const std::size_t n_test = n - n_train - n_val;
        if ((train_frac > 0.0 && n_train == 0) || (val_frac > 0.0 && n_val == 0) ||
            (test_frac > 0.0 && n_test == 0))
            throw SplitError("split_dataset: class too small for requested fractions");
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_train)
                s.train.push_back(idxs[i]);
            else if (i < n_train + n_val)
                s.val.push_back(idxs[i]);
            else
                s.test.push_back(idxs[i]);
        }
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

namespace {

void fnv_mix(std::uint64_t& h, const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ULL;
    }
}

} // namespace

std::uint64_t graph_checksum(const GraphSample& g) {
    std::uint64_t h = 1469598103934665603ULL;
    std::uint64_t nc = g.node_count;
    fnv_mix(h, &nc, sizeof nc);
    for (const Edge& e : g.edges) {
        std::uint64_t u = e.u, v = e.v;
        fnv_mix(h, &u, sizeof u);
        fnv_mix(h, &v, sizeof v);
    }
    fnv_mix(h, g.features.data.data(), g.features.data.size() * sizeof(double));
    fnv_mix(h, &g.label, sizeof g.label);
    return h;
}

} // namespace edgeval
