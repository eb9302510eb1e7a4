#ifndef EDGEVAL_REPORT_HPP
#define EDGEVAL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "edgeval/results.hpp"

namespace edgeval {

struct CurveRow {
    std::string attributor;
    Mode mode = Mode::RoMie;
    int sparsity = 0;
    double mean_accuracy = 0.0;
    std::vector<double> per_seed;
};

struct CurveTable {
    std::string dataset;
    std::string arch;
    double baseline_accuracy = 0.0;
    bool eliminate_isolated = true;
    std::vector<CurveRow> rows; // one per (attributor, mode, sparsity)
};

/// Groups per-seed records into one row per (attributor, mode, sparsity).
/// All records must share one (dataset, arch, eliminate_isolated) triple;
/// filter first when a results file mixes several runs.
CurveTable build_curve_table(const std::vector<ResultRecord>& records);

std::string curve_table_csv(const CurveTable& table);

/// One plot-ready series per attributor, keyed by attributor name. Lines are
/// "sparsity,romie_accuracy,rolie_accuracy", ascending sparsity.
std::map<std::string, std::string> plot_series(const CurveTable& table);

/// interpretation_flags per attributor.
std::map<std::string, std::string> scenario_flags(const CurveTable& table,
                                                  const InterpretationThresholds& t = {});

/// DOT description of a graph with per-edge kept/removed flags at one
/// selection level. Motif edges, when recorded, are marked separately.
std::string to_dot(const GraphSample& g, const std::vector<std::size_t>& kept_edges,
                   const std::string& title);

} // namespace edgeval

#endif
