#ifndef EDGEVAL_ATTRIBUTIONS_HPP
#define EDGEVAL_ATTRIBUTIONS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "edgeval/graph.hpp"
#include "edgeval/models.hpp"

namespace edgeval {

/// One real importance score per canonical edge; higher means more important.
struct EdgeScores {
    std::size_t graph_id = 0;
    std::vector<double> scores;
    std::string method;
    std::map<std::string, std::string> metadata;
};

struct OptimizationError : std::runtime_error {
    explicit OptimizationError(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateInputError : std::runtime_error {
    explicit DegenerateInputError(const std::string& m) : std::runtime_error(m) {}
};

/// I.i.d. uniform [0,1) per canonical edge, deterministic per seed.
EdgeScores random_scores(const GraphSample& g, std::uint64_t rng_seed);

/// Class-activation attribution: per-node weights from the last
/// message-passing layer's activations and target-logit gradients,
/// relu-clamped; edge score is the endpoint mean.
EdgeScores gradcam_scores(const ModelParams& model, const GraphSample& g, int target_class);

struct GnnExplainerConfig {
    std::size_t epochs = 300;
    double learning_rate = 0.01;
    double lambda_size = 0.005;
    double lambda_entropy = 1.0;
};

/// Optimizes a per-edge latent mask against the model's own prediction;
/// returns sigmoid of the best-objective mask.
EdgeScores gnnexplainer_scores(const ModelParams& model, const GraphSample& g,
                               const GnnExplainerConfig& cfg = {});

struct PGExplainerConfig {
    std::size_t epochs = 30;
    double learning_rate = 0.003;
    std::size_t scorer_hidden = 64;
    double temperature_start = 5.0;
    double temperature_end = 1.0;
    std::size_t samples_per_graph = 1; // K
    double lambda_size = 0.005;
    double lambda_entropy = 1.0;
    std::uint64_t rng_seed = 0;
};

/// Two-layer edge scorer over concatenated endpoint embeddings.
struct PGExplainerParams {
    Tensor W1, b1, W2, b2;
    std::size_t embedding_dim = 0;
};

PGExplainerParams pgexplainer_fit(const ModelParams& model, const Dataset& ds,
                                  const std::vector<std::size_t>& train_indices,
                                  const PGExplainerConfig& cfg = {});

/// Deterministic sigmoid of the scorer logits (no sampling at inference).
EdgeScores pgexplainer_scores(const PGExplainerParams& pg, const ModelParams& model,
                              const GraphSample& g);

// ---- Shapley values over an abstract coalition game ----

/// Characteristic function; argument marks which players are present.
using CharacteristicFn = std::function<double(const std::vector<bool>&)>;

/// Exact Shapley by subset enumeration, n_players <= 10.
std::vector<double> shapley_exact(const CharacteristicFn& value, std::size_t n_players);

/// Monte-Carlo estimate of one player's Shapley value over T sampled
/// permutations.
double shapley_mc(const CharacteristicFn& value, std::size_t n_players, std::size_t player,
                  std::size_t samples, std::mt19937_64& rng);

/// Coalition game on a graph: player 0 is the candidate subgraph (as a node
/// set), players 1..r its l_hop neighbor nodes. The characteristic value is
/// the model's target-class probability with the features of every node not
/// covered by a present player zeroed.
struct GraphGame {
    CharacteristicFn value;
    std::size_t n_players = 0;
    std::vector<std::vector<std::size_t>> player_nodes; // player -> node ids
};

GraphGame make_graph_game(const ModelParams& model, const GraphSample& g,
                          const std::vector<std::size_t>& subgraph_nodes, std::size_t l_hop,
                          int target_class);

/// phi estimate for the subgraph player.
double shapley_mc_subgraph(const ModelParams& model, const GraphSample& g,
                           const std::vector<std::size_t>& subgraph_nodes,
                           std::size_t samples, std::size_t l_hop, std::uint64_t rng_seed);

// ---- MCTS subgraph search ----

struct SubgraphXConfig {
    std::size_t mcts_iterations = 10;
    std::size_t expansions_per_node = 14; // children per expansion step
    std::size_t shapley_samples = 20;     // T
    std::size_t l_hop = 1;                // L
    std::size_t min_size = 1;             // node-count lower bound while pruning
    double exploration = 5.0;             // UCT constant
    std::uint64_t rng_seed = 0;
    std::size_t max_nodes_guard = 200;    // skip marker above this size
};

struct SubgraphXResult {
    EdgeSubset kept;     // canonical edge indices of the winning subgraph
    double score = 0.0;  // its Shapley estimate
    bool skipped = false;
};

/// MCTS from the full graph, each move pruning one node of a connected
/// subgraph; returns the best-scoring visited subgraph with at most
/// target_edges edges, as a kept-edge set.
SubgraphXResult subgraphx_search(const ModelParams& model, const GraphSample& g,
                                 std::size_t target_edges, const SubgraphXConfig& cfg);

// ---- attribution cache ----

/// Per-(dataset, model, method, config) cache of scores or binary masks.
struct AttributionCache {
    std::string dataset;
    std::uint64_t model_checksum = 0;
    std::string method;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::map<std::size_t, EdgeScores> scores;
    // graph -> sparsity level -> kept canonical edges (mask methods)
    std::map<std::size_t, std::map<int, std::vector<std::size_t>>> masks;
    std::map<std::size_t, bool> skipped;

    bool mask_based() const { return method == "subgraphx"; }
};

void save_cache(const AttributionCache& cache, const std::string& path, const Dataset& ds);
AttributionCache load_cache(const std::string& path, const Dataset& ds);

} // namespace edgeval

#endif
