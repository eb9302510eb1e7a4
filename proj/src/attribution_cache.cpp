#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "edgeval/attributions.hpp"

namespace edgeval {

namespace {

std::size_t canon_index(const GraphSample& g, std::size_t u, std::size_t v) {
    const Edge e{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
    if (it == g.edges.end() || !(*it == e))
        throw std::runtime_error("attribution cache: unknown edge in record");
    return static_cast<std::size_t>(it - g.edges.begin());
}

} // namespace

void save_cache(const AttributionCache& cache, const std::string& path,
                const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_cache: cannot open " + path);
    out << "# dataset=" << cache.dataset << "\n";
    out << "# model_checksum=" << cache.model_checksum << "\n";
    out << "# method=" << cache.method << "\n";
    out << "# config=" << cache.config_hash << "\n";
    out << "# seed=" << cache.seed << "\n";
    out << "# columns: graph_id,method,seed,level,edge_u,edge_v,score\n";
    out << std::setprecision(17);
    for (const auto& [gid, skip] : cache.skipped)
        if (skip) out << gid << "," << cache.method << "," << cache.seed << ",skipped,0,0,0\n";
    for (const auto& [gid, es] : cache.scores) {
        const GraphSample& g = ds.graphs.at(gid);
        for (std::size_t e = 0; e < es.scores.size(); ++e)
            out << gid << "," << cache.method << "," << cache.seed << ",-1," << g.edges[e].u
                << "," << g.edges[e].v << "," << es.scores[e] << "\n";
    }
    for (const auto& [gid, levels] : cache.masks) {
        const GraphSample& g = ds.graphs.at(gid);
        for (const auto& [level, kept] : levels)
            for (std::size_t e : kept)
                out << gid << "," << cache.method << "," << cache.seed << "," << level << ","
                    << g.edges[e].u << "," << g.edges[e].v << ",1\n";
    }
}

AttributionCache load_cache(const std::string& path, const Dataset& ds) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_cache: cannot open " + path);
    AttributionCache cache;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            std::string val = line.substr(eq + 1);
            if (key == "dataset") cache.dataset = val;
            else if (key == "model_checksum") cache.model_checksum = std::stoull(val);
            else if (key == "method") cache.method = val;
            else if (key == "config") cache.config_hash = val;
            else if (key == "seed") cache.seed = std::stoull(val);
            continue;
        }
        std::istringstream iss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(iss, field, ',')) fields.push_back(field);
        if (fields.size() < 7) continue;
        const std::size_t gid = std::stoull(fields[0]);
        if (fields[3] == "skipped") {
            cache.skipped[gid] = true;
            continue;
        }
        const GraphSample& g = ds.graphs.at(gid);
        const int level = std::stoi(fields[3]);
        const std::size_t e = canon_index(g, std::stoull(fields[4]), std::stoull(fields[5]));
        if (level < 0) {
            EdgeScores& es = cache.scores[gid];
            es.graph_id = gid;
            es.method = cache.method;
            if (es.scores.size() < g.edges.size()) es.scores.resize(g.edges.size(), 0.0);
            es.scores[e] = std::stod(fields[6]);
        } else {
            cache.masks[gid][level].push_back(e);
        }
    }
    for (auto& [gid, levels] : cache.masks)
        for (auto& [level, kept] : levels) std::sort(kept.begin(), kept.end());
    return cache;
}

} // namespace edgeval
