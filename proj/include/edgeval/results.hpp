#ifndef EDGEVAL_RESULTS_HPP
#define EDGEVAL_RESULTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "edgeval/retrain.hpp"

namespace edgeval {

/// One sweep cell. `timestamp` is informational only and excluded from the
/// cell key so idempotent reruns compare equal.
struct ResultRecord {
    std::string dataset;
    std::string arch;
    std::string attributor;
    Mode mode = Mode::RoMie;
    int sparsity = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double baseline_accuracy = 0.0;
    bool eliminate_isolated = true;
    std::string timestamp;

    std::string cell_key() const;
};

std::string iso_timestamp_utc();

std::vector<ResultRecord> load_results(const std::string& path);

/// Merges records into the file keyed by cell_key (existing cells win, so
/// reruns are no-ops) and rewrites it atomically via rename. Returns how many
/// records were actually new.
std::size_t append_results(const std::string& path, const std::vector<ResultRecord>& records);

std::vector<ResultRecord> curve_to_records(const EvalCurve& curve, const std::string& timestamp);

} // namespace edgeval

#endif
