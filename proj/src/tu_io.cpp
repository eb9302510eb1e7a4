#include "edgeval/tu_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace edgeval {

namespace {

std::string find_dataset_name(const std::string& dir) {
    if (!fs::is_directory(dir)) throw LoadError("load_tu_dataset: no such directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string fn = entry.path().filename().string();
        const std::string suffix = "_A.txt";
        if (fn.size() > suffix.size() && fn.ends_with(suffix))
            return fn.substr(0, fn.size() - suffix.size());
    }
    throw LoadError("load_tu_dataset: no <NAME>_A.txt found in " + dir);
}

std::vector<std::string> read_lines(const std::string& path, bool required) {
    std::ifstream in(path);
    if (!in) {
        if (required) throw LoadError("load_tu_dataset: missing file " + path);
        return {};
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// accepts "a, b" / "a b" / "a,b"
bool parse_pair(const std::string& line, long long& a, long long& b) {
    std::string s = line;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream iss(s);
    return static_cast<bool>(iss >> a >> b);
}

bool parse_int(const std::string& line, long long& a) {
    std::string s = line;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream iss(s);
    return static_cast<bool>(iss >> a);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<std::size_t> parse_index_list(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream iss(t);
    std::vector<std::size_t> out;
    std::size_t v;
    while (iss >> v) out.push_back(v);
    return out;
}

} // namespace

Dataset load_tu_dataset(const std::string& dir, std::size_t default_feature_dim,
                        std::size_t max_nodes) {
    const std::string name = find_dataset_name(dir);
    const std::string prefix = (fs::path(dir) / name).string() + "_";

    // sidecar first: may override feature handling
    std::map<std::string, std::string> meta;
    for (const std::string& line : read_lines(prefix + "meta.txt", false)) {
        if (blank(line) || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (auto it = meta.find("feature_dim"); it != meta.end())
        default_feature_dim = std::stoul(it->second);

    const auto indicator_lines = read_lines(prefix + "graph_indicator.txt", true);
    const auto label_lines = read_lines(prefix + "graph_labels.txt", true);
    const auto edge_lines = read_lines(prefix + "A.txt", true);
    const auto node_label_lines = read_lines(prefix + "node_labels.txt", false);
    const bool has_node_labels = !node_label_lines.empty();

    // global node id (1-based) -> graph id (1-based)
    std::vector<std::size_t> node_graph;
    for (std::size_t i = 0; i < indicator_lines.size(); ++i) {
        if (blank(indicator_lines[i])) continue;
        long long g;
        if (!parse_int(indicator_lines[i], g) || g < 1)
            throw ParseError(name + "_graph_indicator.txt:" + std::to_string(i + 1) +
                             ": bad graph id");
        node_graph.push_back(static_cast<std::size_t>(g));
    }
    const std::size_t total_nodes = node_graph.size();
    std::size_t graph_count = 0;
    for (std::size_t g : node_graph) graph_count = std::max(graph_count, g);

    // per-graph renumbering from global 1-based ids
    std::vector<std::size_t> local_id(total_nodes);
    std::vector<std::size_t> graph_size(graph_count, 0);
    for (std::size_t i = 0; i < total_nodes; ++i) local_id[i] = graph_size[node_graph[i] - 1]++;
    for (std::size_t g = 0; g < graph_count; ++g)
        if (graph_size[g] > max_nodes)
            throw LoadError("load_tu_dataset: graph " + std::to_string(g + 1) + " has " +
                            std::to_string(graph_size[g]) + " nodes, above the " +
                            std::to_string(max_nodes) + "-node limit");

    // labels, remapped to 0..N-1 by sorted distinct value
    std::vector<long long> raw_labels;
    for (std::size_t i = 0; i < label_lines.size(); ++i) {
        if (blank(label_lines[i])) continue;
        long long y;
        if (!parse_int(label_lines[i], y))
            throw ParseError(name + "_graph_labels.txt:" + std::to_string(i + 1) + ": bad label");
        raw_labels.push_back(y);
    }
    if (raw_labels.size() != graph_count)
        throw ParseError(name + "_graph_labels.txt: expected " + std::to_string(graph_count) +
                         " labels, found " + std::to_string(raw_labels.size()));
    std::vector<long long> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    // node labels -> one-hot dimension
    std::vector<long long> raw_node_labels;
    if (has_node_labels) {
        for (std::size_t i = 0; i < node_label_lines.size(); ++i) {
            if (blank(node_label_lines[i])) continue;
            long long v;
            if (!parse_int(node_label_lines[i], v))
                throw ParseError(name + "_node_labels.txt:" + std::to_string(i + 1) +
                                 ": bad node label");
            raw_node_labels.push_back(v);
        }
        if (raw_node_labels.size() != total_nodes)
            throw ParseError(name + "_node_labels.txt: expected " + std::to_string(total_nodes) +
                             " entries");
    }
    std::vector<long long> node_label_values = raw_node_labels;
    std::sort(node_label_values.begin(), node_label_values.end());
    node_label_values.erase(std::unique(node_label_values.begin(), node_label_values.end()),
                            node_label_values.end());
    const std::size_t d = has_node_labels ? node_label_values.size() : default_feature_dim;

    Dataset ds;
    ds.name = name;
    ds.class_count = static_cast<int>(distinct.size());
    ds.provenance = "loaded from " + dir;
    ds.graphs.resize(graph_count);
    for (std::size_t g = 0; g < graph_count; ++g) {
        GraphSample& gs = ds.graphs[g];
        gs.node_count = graph_size[g];
        gs.features = has_node_labels ? Tensor::zeros({graph_size[g], d})
                                      : Tensor::full({graph_size[g], d}, 1.0);
        gs.features_dim_hint = d;
        const long long y = raw_labels[g];
        gs.label = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), y) -
                                    distinct.begin());
    }
    if (has_node_labels) {
        for (std::size_t i = 0; i < total_nodes; ++i) {
            const std::size_t col = static_cast<std::size_t>(
                std::lower_bound(node_label_values.begin(), node_label_values.end(),
                                 raw_node_labels[i]) -
                node_label_values.begin());
            ds.graphs[node_graph[i] - 1].features.at(local_id[i], col) = 1.0;
        }
    }

    std::vector<std::vector<Edge>> per_graph_edges(graph_count);
    for (std::size_t i = 0; i < edge_lines.size(); ++i) {
        if (blank(edge_lines[i])) continue;
        long long a, b;
        if (!parse_pair(edge_lines[i], a, b))
            throw ParseError(name + "_A.txt:" + std::to_string(i + 1) + ": bad edge line");
        if (a < 1 || b < 1 || static_cast<std::size_t>(a) > total_nodes ||
            static_cast<std::size_t>(b) > total_nodes)
            throw ParseError(name + "_A.txt:" + std::to_string(i + 1) +
                             ": node index out of range");
        const std::size_t ga = node_graph[a - 1], gb = node_graph[b - 1];
        if (ga != gb)
            throw ParseError(name + "_A.txt:" + std::to_string(i + 1) +
                             ": edge spans two graphs");
        per_graph_edges[ga - 1].push_back({local_id[a - 1], local_id[b - 1]});
    }
    for (std::size_t g = 0; g < graph_count; ++g)
        ds.graphs[g].edges = canonicalize_edges(std::move(per_graph_edges[g]));

    // sidecar extras
    for (std::size_t g = 0; g < graph_count; ++g) {
        auto it = meta.find("motif_edges_" + std::to_string(g));
        if (it != meta.end()) ds.graphs[g].motif_edges = parse_index_list(it->second);
    }
    if (auto it = meta.find("provenance"); it != meta.end()) ds.provenance = it->second;
    if (auto it = meta.find("class_count"); it != meta.end())
        ds.class_count = std::stoi(it->second);
    if (auto it = meta.find("split_train"); it != meta.end())
        ds.split.train = parse_index_list(it->second);
    if (auto it = meta.find("split_val"); it != meta.end())
        ds.split.val = parse_index_list(it->second);
    if (auto it = meta.find("split_test"); it != meta.end())
        ds.split.test = parse_index_list(it->second);

    for (const GraphSample& g : ds.graphs) validate_graph(g);
    return ds;
}

void save_tu_dataset(const Dataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    const std::string prefix = (fs::path(dir) / ds.name).string() + "_";

    std::ofstream a(prefix + "A.txt");
    std::ofstream ind(prefix + "graph_indicator.txt");
    std::ofstream lab(prefix + "graph_labels.txt");

    // detect one-hot features: every row has exactly one 1 and rest 0
    bool one_hot = true;
    for (const GraphSample& g : ds.graphs) {
        for (std::size_t v = 0; v < g.node_count && one_hot; ++v) {
            int ones = 0;
            for (std::size_t j = 0; j < g.features.cols(); ++j) {
                const double x = g.features.at(v, j);
                if (x == 1.0)
                    ++ones;
                else if (x != 0.0)
                    one_hot = false;
            }
            if (ones != 1) one_hot = false;
        }
        if (!one_hot) break;
    }

    std::ofstream nl;
    if (one_hot) nl.open(prefix + "node_labels.txt");

    std::size_t base = 0; // global 1-based offset
    for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
        const GraphSample& g = ds.graphs[gi];
        for (std::size_t v = 0; v < g.node_count; ++v) {
            ind << (gi + 1) << "\n";
            if (one_hot) {
                std::size_t col = 0;
                for (std::size_t j = 0; j < g.features.cols(); ++j)
                    if (g.features.at(v, j) == 1.0) col = j;
                nl << col << "\n";
            }
        }
        for (const Edge& e : g.edges) {
            a << (base + e.u + 1) << ", " << (base + e.v + 1) << "\n";
            a << (base + e.v + 1) << ", " << (base + e.u + 1) << "\n";
        }
        lab << g.label << "\n";
        base += g.node_count;
    }

    std::ofstream meta(prefix + "meta.txt");
    meta << "provenance=" << ds.provenance << "\n";
    meta << "class_count=" << ds.class_count << "\n";
    if (!ds.graphs.empty()) {
        const GraphSample& g0 = ds.graphs.front();
        meta << "feature_dim=" << (g0.node_count ? g0.features.cols() : g0.features_dim_hint)
             << "\n";
    }
    auto write_list = [&meta](const char* key, const std::vector<std::size_t>& xs) {
        if (xs.empty()) return;
        meta << key << "=";
        for (std::size_t i = 0; i < xs.size(); ++i) meta << (i ? "," : "") << xs[i];
        meta << "\n";
    };
    write_list("split_train", ds.split.train);
    write_list("split_val", ds.split.val);
    write_list("split_test", ds.split.test);
    for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi)
        if (!ds.graphs[gi].motif_edges.empty())
            write_list(("motif_edges_" + std::to_string(gi)).c_str(), ds.graphs[gi].motif_edges);
}

} // namespace edgeval
