#ifndef EDGEVAL_RETRAIN_HPP
#define EDGEVAL_RETRAIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "edgeval/attributions.hpp"
#include "edgeval/graph.hpp"
#include "edgeval/models.hpp"

namespace edgeval {

enum class Mode { RoMie, RoLie };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& s);

/// The seven standard evaluation levels.
inline const std::vector<int> kDefaultSparsityLevels = {0, 10, 30, 50, 70, 90, 100};

struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& m) : std::runtime_error(m) {}
};

/// Edge indices ordered by descending score, ascending canonical index on
/// ties. RoMie selections are prefixes of this ranking and RoLie selections
/// suffixes, so RoMie(x) and RoLie(100-x) always partition the edge set.
std::vector<std::size_t> shared_ranking(const std::vector<double>& scores);

/// round-half-up of percent/100 * n_edges.
std::size_t top_k_count(std::size_t n_edges, double percent);

EdgeSubset select_edges(const EdgeScores& scores, double percent, Mode mode);

/// Per-graph edge selection for one (attributor, mode, level) cell. Wraps
/// either ranked scores or, for mask attributors, precomputed binary masks
/// (whose RoLie selection is the complement of the RoMie mask at 100-x).
struct AttributionSet {
    std::string method;
    std::map<std::size_t, EdgeScores> scores;                          // score-based
    std::map<std::size_t, std::map<int, std::vector<std::size_t>>> masks; // mask-based
    std::map<std::size_t, bool> skipped;
    bool mask_based = false;

    EdgeSubset select(std::size_t graph_id, const GraphSample& g, double percent,
                      Mode mode) const;
};

AttributionSet attribution_set_from_cache(const AttributionCache& cache);

/// Fresh i.i.d. uniform scores for the listed graphs, deterministic per seed.
AttributionSet random_attribution_set(const Dataset& ds,
                                      const std::vector<std::size_t>& graph_ids,
                                      std::uint64_t seed);

/// Train and validation graphs replaced by their selected subgraphs; the
/// test split stays byte-identical (the unperturbed-test-set rule). Graphs
/// reduced to zero nodes are kept as empty samples.
Dataset build_retrain_dataset(const Dataset& ds, const AttributionSet& attr, double percent,
                              Mode mode, bool eliminate_isolated);

struct RunSpecCell {
    Mode mode = Mode::RoMie;
    int sparsity_percent = 100;
    std::uint64_t retrain_seed = 1;
    bool eliminate_isolated = true;
};

/// Retrains from scratch on the masked dataset with the baseline's training
/// configuration and evaluates on the unperturbed test split.
double run_cell(const Dataset& ds, const ArchConfig& arch, const TrainConfig& base_cfg,
                const AttributionSet& attr, const RunSpecCell& cell);

struct CurveCell {
    Mode mode;
    int sparsity;
    std::vector<std::uint64_t> seeds; // aligned with per_seed_accuracy
    std::vector<double> per_seed_accuracy;
    double mean_accuracy = 0.0;
};

struct EvalCurve {
    std::string dataset;
    std::string attributor;
    ArchKind arch = ArchKind::GCN;
    double baseline_accuracy = 0.0;
    bool eliminate_isolated = true;
    std::vector<CurveCell> cells;

    const CurveCell* find(Mode mode, int sparsity) const;
};

struct SweepConfig {
    std::vector<int> sparsity_levels = kDefaultSparsityLevels;
    std::vector<std::uint64_t> retrain_seeds = {1};    // non-random attributors
    std::vector<std::uint64_t> random_seeds = {1, 2, 3}; // the 3-seed random protocol
    bool eliminate_isolated = true;
    std::size_t workers = 1;
};

/// Both modes over all levels. The 0% and 100% cells are shared between
/// modes (identical training conditions). attr.method == "random" runs one
/// retraining per random seed and reports the per-level mean.
EvalCurve run_sweep(const Dataset& ds, const ArchConfig& arch, const TrainConfig& base_cfg,
                    const AttributionSet& attr, double baseline_accuracy,
                    const SweepConfig& sweep);

struct ComplementarityRow {
    int sparsity;              // x
    std::size_t graph_id;
    bool partition_ok;
};

/// Pairs RoMie(x) with RoLie(100-x) per graph over the given levels and
/// verifies the two edge subsets partition the original edge set. Throws
/// IntegrityError on any violation.
std::vector<ComplementarityRow> complementarity_report(
    const Dataset& ds, const AttributionSet& attr, const std::vector<int>& levels,
    const std::vector<std::size_t>& graph_ids);

struct InterpretationThresholds {
    double rise_fraction = 0.9;  // "sharp" = reaching this fraction of baseline
    int low_sparsity = 30;       // ... at sparsity at or below this level
};

/// Joint RoMie/RoLie scenario labels: "unpredictable" (both sharp),
/// "generalizing" (RoMie sharp, RoLie smooth), "non-generalizing"
/// (RoMie smooth, RoLie sharp), "inconsistent" (both smooth). Advisory only.
std::string interpretation_flags(const EvalCurve& curve,
                                 const InterpretationThresholds& thresholds = {});

} // namespace edgeval

#endif
