#ifndef EDGEVAL_GENERATORS_HPP
#define EDGEVAL_GENERATORS_HPP

#include <cstdint>

#include "edgeval/graph.hpp"

namespace edgeval {

enum class Motif { Cycle5, House5, Triangle3 };

std::size_t motif_node_count(Motif m);
std::size_t motif_edge_count(Motif m);
const char* motif_name(Motif m);

/// Preferential-attachment base graph: starts from a single edge and attaches
/// each new node to `attach_m` distinct existing nodes, degree-proportional.
/// Always connected; features and label are left unset.
GraphSample generate_ba_graph(std::size_t n_nodes, std::size_t attach_m,
                              std::uint64_t rng_seed);

/// Appends the motif's nodes and internal edges plus one attachment edge from
/// a uniformly chosen base node to a uniformly chosen motif node. The
/// canonical indices of the internal motif edges are recorded in motif_edges.
GraphSample attach_motif(const GraphSample& base, Motif motif, std::uint64_t rng_seed);

/// 1000 graphs, 500 cycle (class 0) + 500 house (class 1) on 20-node bases;
/// constant all-ones node features of dimension `feature_dim`.
Dataset generate_ba2motifs(std::uint64_t rng_seed, std::size_t feature_dim = 10);

/// 1500 graphs, 500 each of cycle / house / triangle (classes 0/1/2).
Dataset generate_ba3motifs(std::uint64_t rng_seed, std::size_t feature_dim = 10);

} // namespace edgeval

#endif
