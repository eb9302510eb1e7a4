#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "edgeval/report.hpp"

namespace edgeval {

CurveTable build_curve_table(const std::vector<ResultRecord>& records) {
    CurveTable table;
    if (records.empty()) return table;
    table.dataset = records.front().dataset;
    table.arch = records.front().arch;
    table.baseline_accuracy = records.front().baseline_accuracy;
    table.eliminate_isolated = records.front().eliminate_isolated;
    for (const ResultRecord& r : records)
        if (r.dataset != table.dataset || r.arch != table.arch ||
            r.eliminate_isolated != table.eliminate_isolated)
            throw std::runtime_error(
                "build_curve_table: mixed runs in input, filter records first");

    for (const ResultRecord& r : records) {
        CurveRow* row = nullptr;
        for (CurveRow& existing : table.rows)
            if (existing.attributor == r.attributor && existing.mode == r.mode &&
                existing.sparsity == r.sparsity)
                row = &existing;
        if (!row) {
            table.rows.push_back({r.attributor, r.mode, r.sparsity, 0.0, {}});
            row = &table.rows.back();
        }
        row->per_seed.push_back(r.accuracy);
    }
    for (CurveRow& row : table.rows) {
        double sum = 0.0;
        for (double a : row.per_seed) sum += a;
        row.mean_accuracy = sum / static_cast<double>(row.per_seed.size());
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const CurveRow& a, const CurveRow& b) {
        if (a.attributor != b.attributor) return a.attributor < b.attributor;
        if (a.mode != b.mode) return a.mode < b.mode;
        return a.sparsity < b.sparsity;
    });
    return table;
}

std::string curve_table_csv(const CurveTable& table) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "# dataset=" << table.dataset << " arch=" << table.arch
        << " baseline_accuracy=" << table.baseline_accuracy
        << " eliminate_isolated=" << (table.eliminate_isolated ? 1 : 0) << "\n";
    out << "attributor,mode,sparsity,mean_accuracy,per_seed_accuracies\n";
    for (const CurveRow& row : table.rows) {
        out << row.attributor << "," << mode_name(row.mode) << "," << row.sparsity << ","
            << row.mean_accuracy << ",";
        for (std::size_t i = 0; i < row.per_seed.size(); ++i)
            out << (i ? ";" : "") << row.per_seed[i];
        out << "\n";
    }
    return out.str();
}

std::map<std::string, std::string> plot_series(const CurveTable& table) {
    std::map<std::string, std::string> out;
    std::set<std::string> attributors;
    for (const CurveRow& row : table.rows) attributors.insert(row.attributor);
    for (const std::string& a : attributors) {
        std::set<int> levels;
        for (const CurveRow& row : table.rows)
            if (row.attributor == a) levels.insert(row.sparsity);
        std::ostringstream s;
        s << std::setprecision(17) << "sparsity,romie_accuracy,rolie_accuracy\n";
        for (int level : levels) {
            double mie = 0.0, lie = 0.0;
            for (const CurveRow& row : table.rows)
                if (row.attributor == a && row.sparsity == level)
                    (row.mode == Mode::RoMie ? mie : lie) = row.mean_accuracy;
            s << level << "," << mie << "," << lie << "\n";
        }
        out[a] = s.str();
    }
    return out;
}

std::map<std::string, std::string> scenario_flags(const CurveTable& table,
                                                  const InterpretationThresholds& t) {
    std::map<std::string, std::string> out;
    std::set<std::string> attributors;
    for (const CurveRow& row : table.rows) attributors.insert(row.attributor);
    for (const std::string& a : attributors) {
        EvalCurve curve;
        curve.dataset = table.dataset;
        curve.attributor = a;
        curve.baseline_accuracy = table.baseline_accuracy;
        for (const CurveRow& row : table.rows)
            if (row.attributor == a)
                curve.cells.push_back(
                    {row.mode, row.sparsity, {}, row.per_seed, row.mean_accuracy});
        out[a] = interpretation_flags(curve, t);
    }
    return out;
}

std::string to_dot(const GraphSample& g, const std::vector<std::size_t>& kept_edges,
                   const std::string& title) {
    std::vector<char> kept(g.edges.size(), 0);
    for (std::size_t e : kept_edges) {
        if (e >= g.edges.size())
            throw ParameterError("to_dot: edge index out of range");
        kept[e] = 1;
    }
    std::set<std::size_t> motif(g.motif_edges.begin(), g.motif_edges.end());
    std::ostringstream out;
    out << "graph \"" << title << "\" {\n";
    out << "  // label " << g.label << ", " << g.node_count << " nodes, " << g.edges.size()
        << " edges, " << kept_edges.size() << " kept\n";
    for (std::size_t v = 0; v < g.node_count; ++v) out << "  n" << v << ";\n";
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        out << "  n" << g.edges[e].u << " -- n" << g.edges[e].v << " [kept="
            << (kept[e] ? "true" : "false");
        if (motif.count(e)) out << ", motif=true";
        if (!kept[e]) out << ", style=dotted";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace edgeval
