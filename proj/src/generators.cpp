#include "edgeval/generators.hpp"

#include <algorithm>
#include <random>

namespace edgeval {

std::size_t motif_node_count(Motif m) {
    switch (m) {
        case Motif::Cycle5: return 5;
        case Motif::House5: return 5;
        case Motif::Triangle3: return 3;
    }
    throw ParameterError("unknown motif");
}

std::size_t motif_edge_count(Motif m) {
    switch (m) {
        case Motif::Cycle5: return 5;
        case Motif::House5: return 6;
        case Motif::Triangle3: return 3;
    }
    throw ParameterError("unknown motif");
}

const char* motif_name(Motif m) {
    switch (m) {
        case Motif::Cycle5: return "cycle5";
        case Motif::House5: return "house5";
        case Motif::Triangle3: return "triangle3";
    }
    throw ParameterError("unknown motif");
}

GraphSample generate_ba_graph(std::size_t n_nodes, std::size_t attach_m,
                              std::uint64_t rng_seed) {
    if (attach_m < 1 || n_nodes <= attach_m)
        throw ParameterError("generate_ba_graph: need n_nodes > attach_m >= 1");

    std::mt19937_64 rng(rng_seed);
    std::vector<Edge> edges;
    // endpoint multiset; node v appears deg(v) times
    std::vector<std::size_t> endpoints;

    // seed graph: a path over the first attach_m + 1 nodes
    for (std::size_t v = 1; v <= attach_m; ++v) {
        edges.push_back({v - 1, v});
        endpoints.push_back(v - 1);
        endpoints.push_back(v);
    }
    for (std::size_t v = attach_m + 1; v < n_nodes; ++v) {
        std::vector<std::size_t> targets;
        while (targets.size() < attach_m) {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            std::size_t u = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), u) == targets.end())
                targets.push_back(u);
        }
        for (std::size_t u : targets) {
            edges.push_back({std::min(u, v), std::max(u, v)});
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    GraphSample g;
    g.node_count = n_nodes;
    g.edges = canonicalize_edges(std::move(edges));
    g.features_dim_hint = 0;
    return g;
}

GraphSample attach_motif(const GraphSample& base, Motif motif, std::uint64_t rng_seed) {
    if (!is_connected(base)) throw ParameterError("attach_motif: base must be connected");

    const std::size_t b = base.node_count;
    std::vector<Edge> motif_internal;
    switch (motif) {
        case Motif::Cycle5:
            motif_internal = {{b, b + 1}, {b + 1, b + 2}, {b + 2, b + 3}, {b + 3, b + 4}, {b, b + 4}};
            break;
        case Motif::House5:
            // 4-cycle (b, b+1, b+2, b+3) with roof apex b+4 on the b--b+1 wall
            motif_internal = {{b, b + 1}, {b + 1, b + 2}, {b + 2, b + 3}, {b, b + 3},
                              {b, b + 4},  {b + 1, b + 4}};
            break;
        case Motif::Triangle3:
            motif_internal = {{b, b + 1}, {b + 1, b + 2}, {b, b + 2}};
            break;
    }

    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::size_t> base_pick(0, b - 1);
    std::uniform_int_distribution<std::size_t> motif_pick(0, motif_node_count(motif) - 1);
    const std::size_t attach_from = base_pick(rng);
    const std::size_t attach_to = b + motif_pick(rng);

    GraphSample g;
    g.node_count = b + motif_node_count(motif);
    std::vector<Edge> edges = base.edges;
    edges.insert(edges.end(), motif_internal.begin(), motif_internal.end());
    edges.push_back({std::min(attach_from, attach_to), std::max(attach_from, attach_to)});
    g.edges = canonicalize_edges(std::move(edges));

    for (const Edge& me : motif_internal) {
        auto it = std::lower_bound(g.edges.begin(), g.edges.end(), me);
        g.motif_edges.push_back(static_cast<std::size_t>(it - g.edges.begin()));
    }
    std::sort(g.motif_edges.begin(), g.motif_edges.end());
    return g;
}

namespace {

GraphSample make_motif_graph(std::size_t base_nodes, Motif motif, std::size_t feature_dim,
                             int label, std::mt19937_64& seeds) {
    const std::uint64_t s1 = seeds(), s2 = seeds();
    GraphSample base = generate_ba_graph(base_nodes, 1, s1);
    GraphSample g = attach_motif(base, motif, s2);
    g.features = Tensor::full({g.node_count, feature_dim}, 1.0);
    g.label = label;
    return g;
}

} // namespace

Dataset generate_ba2motifs(std::uint64_t rng_seed, std::size_t feature_dim) {
    std::mt19937_64 seeds(rng_seed);
    Dataset ds;
    ds.name = "BA2Motifs";
    ds.class_count = 2;
    ds.provenance = "generated seed=" + std::to_string(rng_seed);
    ds.graphs.reserve(1000);
    for (int i = 0; i < 500; ++i)
        ds.graphs.push_back(make_motif_graph(20, Motif::Cycle5, feature_dim, 0, seeds));
    for (int i = 0; i < 500; ++i)
        ds.graphs.push_back(make_motif_graph(20, Motif::House5, feature_dim, 1, seeds));
    return ds;
}

Dataset generate_ba3motifs(std::uint64_t rng_seed, std::size_t feature_dim) {
    std::mt19937_64 seeds(rng_seed);
    Dataset ds;
    ds.name = "BA3Motifs";
    ds.class_count = 3;
    ds.provenance = "generated seed=" + std::to_string(rng_seed);
    ds.graphs.reserve(1500);
    for (int i = 0; i < 500; ++i)
        ds.graphs.push_back(make_motif_graph(20, Motif::Cycle5, feature_dim, 0, seeds));
    for (int i = 0; i < 500; ++i)
        ds.graphs.push_back(make_motif_graph(20, Motif::House5, feature_dim, 1, seeds));
    for (int i = 0; i < 500; ++i)
        ds.graphs.push_back(make_motif_graph(20, Motif::Triangle3, feature_dim, 2, seeds));
    return ds;
}

} // namespace edgeval
