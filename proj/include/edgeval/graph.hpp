#ifndef EDGEVAL_GRAPH_HPP
#define EDGEVAL_GRAPH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "edgeval/tensor.hpp"

namespace edgeval {

/// Canonical undirected edge, u < v.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One graph-classification instance. Edges are canonical (u < v, no
/// self-loops, no duplicates) and sorted lexicographically; the position in
/// `edges` is the graph's global edge index.
struct GraphSample {
    std::size_t node_count = 0;
    std::vector<Edge> edges;
    Tensor features; // node_count x d
    int label = -1;
    std::vector<std::size_t> motif_edges; // ground-truth metadata, may be empty

    std::size_t feature_dim() const { return node_count == 0 ? features_dim_hint : features.cols(); }
    std::size_t features_dim_hint = 0; // carries d through empty graphs
};

struct Splits {
    std::vector<std::size_t> train, val, test;
    bool empty() const { return train.empty() && val.empty() && test.empty(); }
};

struct Dataset {
    std::vector<GraphSample> graphs;
    int class_count = 0;
    Splits split;
    std::string name;
    std::string provenance;
};

/// Kept canonical edge indices of a parent graph, sorted ascending.
struct EdgeSubset {
    std::vector<std::size_t> kept;
};

struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& m) : std::runtime_error(m) {}
};
struct SplitError : std::runtime_error {
    explicit SplitError(const std::string& m) : std::runtime_error(m) {}
};

/// Throws if the sample violates the canonical-edge invariants.
void validate_graph(const GraphSample& g);

/// Sorts, canonicalizes (u<v) and deduplicates an edge list in place,
/// dropping self-loops.
std::vector<Edge> canonicalize_edges(std::vector<Edge> edges);

bool is_connected(const GraphSample& g); // BFS over undirected edges

std::vector<std::size_t> degrees(const GraphSample& g);

/// Keeps only the given edges. With eliminate_isolated, degree-0 nodes of the
/// result are dropped and the survivors renumbered in their original order.
GraphSample apply_edge_subset(const GraphSample& g, const EdgeSubset& kept,
                              bool eliminate_isolated);

/// Percentage of edges kept: 100 * |E(g_s)| / |E(g_o)|.
double sparsity(const GraphSample& g_s, const GraphSample& g_o);

/// Stratified split with the given fractions (train, val, test).
Splits split_dataset(const Dataset& ds, double train_frac, double val_frac,
                     double test_frac, std::uint64_t rng_seed);

/// FNV-1a over the structural content of a graph (nodes, edges, features,
/// label); used for unperturbed-test-set checks.
std::uint64_t graph_checksum(const GraphSample& g);

} // namespace edgeval

#endif
