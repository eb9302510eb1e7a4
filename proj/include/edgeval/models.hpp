#ifndef EDGEVAL_MODELS_HPP
#define EDGEVAL_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "edgeval/graph.hpp"
#include "edgeval/tape.hpp"

namespace edgeval {

enum class ArchKind { GCN, GIN };

const char* arch_name(ArchKind k);
ArchKind arch_from_name(const std::string& s);

struct ArchConfig {
    ArchKind kind = ArchKind::GCN;
    std::size_t hidden_dim = 64;
    std::size_t layer_count = 3;
    int class_count = 2;
    std::size_t input_dim = 10;
};

/// All trainable weights of a classifier. GCN layers use W/b; GIN layers use
/// the 2-layer MLP (W/b, W2/b2) plus the trainable eps scalar.
struct ModelParams {
    struct Layer {
        Tensor W, b;
        Tensor W2, b2; // GIN only
        Tensor eps;    // GIN only, scalar
    };
    ArchConfig arch;
    std::vector<Layer> layers;
    Tensor head_W, head_b;

    std::vector<std::pair<std::string, Tensor*>> named();
    std::vector<std::pair<std::string, const Tensor*>> named() const;
    std::uint64_t checksum() const;
};

ModelParams init_params(const ArchConfig& arch, std::uint64_t seed);

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    double learning_rate = 0.001;
    std::size_t early_stop_patience = 0; // 0 = off
    std::uint64_t rng_seed = 0;
};

/// Block-diagonal batch of graphs as a directed edge list. Every canonical
/// undirected edge appears as two directed edges referencing one shared
/// weight slot, so per-direction weights stay symmetric by construction.
struct EdgeWeightedBatch {
    std::size_t node_count = 0;
    Tensor features; // node_count x d
    std::vector<DirEdge> dir_edges;
    std::vector<std::size_t> dir_canon;          // directed edge -> canonical slot
    std::size_t canon_edge_count = 0;            // weight-vector length
    std::vector<std::pair<std::size_t, std::size_t>> graph_ranges;
    std::vector<std::size_t> labels;
    std::vector<double> nonempty; // 1.0 per non-empty graph, else 0.0
};

EdgeWeightedBatch make_batch(const std::vector<const GraphSample*>& graphs,
                             std::size_t feature_dim);

/// Tape handles for one bound parameter set, in ModelParams::named() order.
struct BoundParams {
    std::vector<Var> vars;
};

BoundParams bind_params(Tape& tape, const ModelParams& params);

struct ForwardVars {
    Var logits;                 // graphs x classes, empty-graph rows zeroed
    Var node_embeddings;        // last message-passing layer output
    std::vector<Var> layer_acts;
};

/// Differentiable forward pass. `edge_weights` is a tape node holding one
/// weight in [0,1] per canonical edge of the batch.
ForwardVars forward_on_tape(Tape& tape, const ModelParams& params, const BoundParams& bound,
                            const EdgeWeightedBatch& batch, Var edge_weights);

/// Convenience: unweighted logits of a batch (weights all 1), no tape kept.
Tensor forward_logits(const ModelParams& params, const EdgeWeightedBatch& batch);

struct TrainLogEntry {
    std::size_t epoch;
    double train_loss;
    double val_accuracy;
};

struct TrainResult {
    ModelParams params;
    std::vector<TrainLogEntry> log;
    double best_val_accuracy = 0.0;
};

struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& m) : std::runtime_error(m) {}
};

/// Minimizes softmax cross-entropy on the train split with Adam; with
/// early_stop_patience > 0 monitors validation accuracy (ties resolved by
/// lower validation loss) and returns the best-validation checkpoint.
TrainResult train(const Dataset& ds, const ArchConfig& arch, const TrainConfig& cfg);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<int> predictions;
};

/// Accuracy = N_correct / |graphs|; argmax ties break toward the lower index.
EvalResult evaluate(const ModelParams& params, const std::vector<const GraphSample*>& graphs);
EvalResult evaluate_split(const ModelParams& params, const Dataset& ds,
                          const std::vector<std::size_t>& indices);

/// Last message-passing-layer embeddings of a single graph, pre-readout.
Tensor node_embeddings(const ModelParams& params, const GraphSample& g);

void save_model(const ModelParams& params, const std::string& path); // bit-exact text format
ModelParams load_model(const std::string& path);

} // namespace edgeval

#endif
