#ifndef EDGEVAL_TU_IO_HPP
#define EDGEVAL_TU_IO_HPP

#include <string>

#include "edgeval/graph.hpp"

namespace edgeval {

struct LoadError : std::runtime_error {
    explicit LoadError(const std::string& m) : std::runtime_error(m) {}
};
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

/// Loads a dataset in the TU graph-kernel layout: <NAME>_A.txt,
/// <NAME>_graph_indicator.txt, <NAME>_graph_labels.txt and optionally
/// <NAME>_node_labels.txt (one-hot encoded as features). Node indexing in the
/// files is global and 1-based; edges are collapsed to canonical undirected
/// form. Without node labels, constant all-ones features of
/// `default_feature_dim` are attached (overridable by the sidecar).
/// Graphs above `max_nodes` nodes are rejected.
Dataset load_tu_dataset(const std::string& dir, std::size_t default_feature_dim = 10,
                        std::size_t max_nodes = 3000);

/// Writes the dataset back in the same layout plus a <NAME>_meta.txt sidecar
/// (key=value lines: provenance, feature dimensioning, per-graph motif edges,
/// splits when present).
void save_tu_dataset(const Dataset& ds, const std::string& dir);

} // namespace edgeval

#endif
