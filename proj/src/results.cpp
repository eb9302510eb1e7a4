#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "edgeval/results.hpp"

namespace edgeval {

std::string ResultRecord::cell_key() const {
    std::ostringstream k;
    k << dataset << "|" << arch << "|" << attributor << "|" << mode_name(mode) << "|" << sparsity
      << "|" << seed << "|" << (eliminate_isolated ? 1 : 0);
    return k.str();
}

std::string iso_timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

const char* kHeader =
    "dataset,arch,attributor,mode,sparsity,seed,accuracy,baseline_accuracy,"
    "eliminate_isolated,timestamp";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

void write_all(const std::string& path, const std::vector<ResultRecord>& records) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("results: cannot write " + tmp);
        out << kHeader << "\n" << std::setprecision(17);
        for (const ResultRecord& r : records)
            out << r.dataset << "," << r.arch << "," << r.attributor << "," << mode_name(r.mode)
                << "," << r.sparsity << "," << r.seed << "," << r.accuracy << ","
                << r.baseline_accuracy << "," << (r.eliminate_isolated ? 1 : 0) << ","
                << r.timestamp << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("results: cannot rename " + tmp + " to " + path);
}

} // namespace

std::vector<ResultRecord> load_results(const std::string& path) {
    std::vector<ResultRecord> out;
    std::ifstream in(path);
    if (!in) return out; // a missing file is an empty results set
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == kHeader) continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() < 10)
            throw std::runtime_error("results: malformed record at line " +
                                     std::to_string(line_no));
        ResultRecord r;
        r.dataset = f[0];
        r.arch = f[1];
        r.attributor = f[2];
        r.mode = mode_from_name(f[3]);
        r.sparsity = std::stoi(f[4]);
        r.seed = std::stoull(f[5]);
        r.accuracy = std::stod(f[6]);
        r.baseline_accuracy = std::stod(f[7]);
        r.eliminate_isolated = f[8] == "1" || f[8] == "true";
        r.timestamp = f[9];
        out.push_back(std::move(r));
    }
    return out;
}

std::size_t append_results(const std::string& path, const std::vector<ResultRecord>& records) {
    std::vector<ResultRecord> all = load_results(path);
    std::set<std::string> keys;
    for (const ResultRecord& r : all) keys.insert(r.cell_key());
    std::size_t added = 0;
    for (const ResultRecord& r : records)
        if (keys.insert(r.cell_key()).second) {
            all.push_back(r);
            ++added;
        }
    write_all(path, all);
    return added;
}

std::vector<ResultRecord> curve_to_records(const EvalCurve& curve, const std::string& timestamp) {
    std::vector<ResultRecord> out;
    for (const CurveCell& c : curve.cells) {
        for (std::size_t i = 0; i < c.per_seed_accuracy.size(); ++i) {
            ResultRecord r;
            r.dataset = curve.dataset;
            r.arch = arch_name(curve.arch);
            r.attributor = curve.attributor;
            r.mode = c.mode;
            r.sparsity = c.sparsity;
            r.seed = i < c.seeds.size() ? c.seeds[i] : i;
            r.accuracy = c.per_seed_accuracy[i];
            r.baseline_accuracy = curve.baseline_accuracy;
            r.eliminate_isolated = curve.eliminate_isolated;
            r.timestamp = timestamp;
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace edgeval
