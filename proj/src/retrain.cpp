#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "edgeval/retrain.hpp"

namespace edgeval {

const char* mode_name(Mode m) { return m == Mode::RoMie ? "RoMie" : "RoLie"; }

Mode mode_from_name(const std::string& s) {
    if (s == "RoMie" || s == "romie") return Mode::RoMie;
    if (s == "RoLie" || s == "rolie") return Mode::RoLie;
    throw ParameterError("unknown mode: " + s);
}

std::vector<std::size_t> shared_ranking(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

std::size_t top_k_count(std::size_t n_edges, double percent) {
    if (percent < 0.0 || percent > 100.0)
        throw ParameterError("percent must be in [0, 100]");
    return static_cast<std::size_t>(
        std::floor(percent / 100.0 * static_cast<double>(n_edges) + 0.5));
}

EdgeSubset select_edges(const EdgeScores& scores, double percent, Mode mode) {
    const std::size_t n = scores.scores.size();
    const std::vector<std::size_t> order = shared_ranking(scores.scores);
    EdgeSubset out;
    if (mode == Mode::RoMie) {
        const std::size_t k = top_k_count(n, percent);
        out.kept.assign(order.begin(), order.begin() + k);
    } else {
        // suffix complementary to RoMie(100 - percent)
        const std::size_t split = top_k_count(n, 100.0 - percent);
        out.kept.assign(order.begin() + split, order.end());
    }
    std::sort(out.kept.begin(), out.kept.end());
    return out;
}

EdgeSubset AttributionSet::select(std::size_t graph_id, const GraphSample& g, double percent,
                                  Mode mode) const {
    const std::size_t n = g.edges.size();
    EdgeSubset out;
    auto full = [n] {
        EdgeSubset s;
        s.kept.resize(n);
        std::iota(s.kept.begin(), s.kept.end(), 0);
        return s;
    };
    if (auto it = skipped.find(graph_id); it != skipped.end() && it->second)
        return full(); // attribution skipped: graph left unperturbed
    if (percent == 0.0) return out;
    if (percent == 100.0) return full();

    if (!mask_based) {
        auto it = scores.find(graph_id);
        if (it == scores.end())
            throw IntegrityError("attribution: no scores for graph " +
                                 std::to_string(graph_id));
        return select_edges(it->second, percent, mode);
    }

    auto git = masks.find(graph_id);
    if (git == masks.end())
        throw IntegrityError("attribution: no masks for graph " + std::to_string(graph_id));
    const int level = static_cast<int>(mode == Mode::RoMie ? percent : 100.0 - percent);
    auto lit = git->second.find(level);
    if (lit == git->second.end())
        throw IntegrityError("attribution: no mask at level " + std::to_string(level) +
                             " for graph " + std::to_string(graph_id));
    if (mode == Mode::RoMie) {
        out.kept = lit->second;
    } else {
        // RoLie(x) keeps the complement of the RoMie mask at 100-x
        std::vector<char> in(n, 0);
        for (std::size_t e : lit->second) in[e] = 1;
        for (std::size_t e = 0; e < n; ++e)
            if (!in[e]) out.kept.push_back(e);
    }
    return out;
}

AttributionSet attribution_set_from_cache(const AttributionCache& cache) {
    AttributionSet a;
    a.method = cache.method;
    a.scores = cache.scores;
    a.masks = cache.masks;
    a.skipped = cache.skipped;
    a.mask_based = cache.mask_based();
    return a;
}

Dataset build_retrain_dataset(const Dataset& ds, const AttributionSet& attr, double percent,
                              Mode mode, bool eliminate_isolated) {
    Dataset out = ds;
    auto mask_split = [&](const std::vector<std::size_t>& indices) {
        for (std::size_t i : indices) {
            const EdgeSubset kept = attr.select(i, ds.graphs[i], percent, mode);
            out.graphs[i] = apply_edge_subset(ds.graphs[i], kept, eliminate_isolated);
        }
    };
    mask_split(ds.split.train);
    mask_split(ds.split.val);
    // the test split stays untouched by construction (out is a copy of ds)
    return out;
}

double run_cell(const Dataset& ds, const ArchConfig& arch, const TrainConfig& base_cfg,
                const AttributionSet& attr, const RunSpecCell& cell) {
    Dataset retrain_ds = build_retrain_dataset(ds, attr, cell.sparsity_percent, cell.mode,
                                               cell.eliminate_isolated);
    TrainConfig cfg = base_cfg;
    cfg.rng_seed = cell.retrain_seed;
    TrainResult tr = train(retrain_ds, arch, cfg);
    return evaluate_split(tr.params, retrain_ds, retrain_ds.split.test).accuracy;
}

const CurveCell* EvalCurve::find(Mode mode, int sparsity) const {
    for (const CurveCell& c : cells)
        if (c.mode == mode && c.sparsity == sparsity) return &c;
    return nullptr;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (std::thread& th : pool) th.join();
}

} // namespace

AttributionSet random_attribution_set(const Dataset& ds,
                                      const std::vector<std::size_t>& graph_ids,
                                      std::uint64_t seed) {
    AttributionSet a;
    a.method = "random";
    for (std::size_t gid : graph_ids)
        a.scores[gid] = random_scores(ds.graphs[gid], mix_seed(seed, gid));
    return a;
}

EvalCurve run_sweep(const Dataset& ds, const ArchConfig& arch, const TrainConfig& base_cfg,
                    const AttributionSet& attr, double baseline_accuracy,
                    const SweepConfig& sweep) {
    EvalCurve curve;
    curve.dataset = ds.name;
    curve.attributor = attr.method;
    curve.arch = arch.kind;
    curve.baseline_accuracy = baseline_accuracy;
    curve.eliminate_isolated = sweep.eliminate_isolated;

    const bool random = attr.method == "random";
    const std::vector<std::uint64_t>& seeds = random ? sweep.random_seeds : sweep.retrain_seeds;

    std::vector<std::size_t> attributed_ids = ds.split.train;
    attributed_ids.insert(attributed_ids.end(), ds.split.val.begin(), ds.split.val.end());

    struct Job {
        Mode mode;
        int level;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (int level : sweep.sparsity_levels) {
        for (std::uint64_t s : seeds) jobs.push_back({Mode::RoMie, level, s});
        // 0% and 100% are the same training condition in both modes
        if (level != 0 && level != 100)
            for (std::uint64_t s : seeds) jobs.push_back({Mode::RoLie, level, s});
    }

    std::vector<double> accuracy(jobs.size(), 0.0);
    parallel_for(jobs.size(), sweep.workers, [&](std::size_t j) {
        const Job& job = jobs[j];
        AttributionSet local;
        const AttributionSet* use = &attr;
        if (random) {
            local = random_attribution_set(ds, attributed_ids, job.seed);
            use = &local;
        }
        RunSpecCell cell;
        cell.mode = job.mode;
        cell.sparsity_percent = job.level;
        cell.retrain_seed = job.seed;
        cell.eliminate_isolated = sweep.eliminate_isolated;
        accuracy[j] = run_cell(ds, arch, base_cfg, *use, cell);
    });

    auto add_cell = [&curve, &seeds](Mode mode, int level, std::vector<double> per_seed) {
        CurveCell c;
        c.mode = mode;
        c.sparsity = level;
        c.seeds = seeds;
        c.mean_accuracy =
            std::accumulate(per_seed.begin(), per_seed.end(), 0.0) /
            static_cast<double>(per_seed.size());
        c.per_seed_accuracy = std::move(per_seed);
        curve.cells.push_back(std::move(c));
    };

    for (int level : sweep.sparsity_levels) {
        std::vector<double> mie, lie;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].level != level) continue;
            (jobs[j].mode == Mode::RoMie ? mie : lie).push_back(accuracy[j]);
        }
        if (level == 0 || level == 100) lie = mie;
        add_cell(Mode::RoMie, level, std::move(mie));
        add_cell(Mode::RoLie, level, std::move(lie));
    }
    return curve;
}

std::vector<ComplementarityRow> complementarity_report(
    const Dataset& ds, const AttributionSet& attr, const std::vector<int>& levels,
    const std::vector<std::size_t>& graph_ids) {
    std::vector<ComplementarityRow> rows;
    for (int x : levels) {
        for (std::size_t gid : graph_ids) {
            if (auto it = attr.skipped.find(gid); it != attr.skipped.end() && it->second)
                continue; // skipped graphs stay unperturbed in both modes
            const GraphSample& g = ds.graphs[gid];
            const EdgeSubset a = attr.select(gid, g, x, Mode::RoMie);
            const EdgeSubset b = attr.select(gid, g, 100.0 - x, Mode::RoLie);
            std::vector<char> seen(g.edges.size(), 0);
            bool ok = true;
            for (std::size_t e : a.kept) seen[e] += 1;
            for (std::size_t e : b.kept) seen[e] += 1;
            for (char c : seen)
                if (c != 1) ok = false;
            rows.push_back({x, gid, ok});
            if (!ok)
                throw IntegrityError("complementarity violated at x=" + std::to_string(x) +
                                     " graph " + std::to_string(gid) +
                                     " (tie-breaking bug in edge ranking)");
        }
    }
    return rows;
}

std::string interpretation_flags(const EvalCurve& curve,
                                 const InterpretationThresholds& thresholds) {
    auto sharp = [&](Mode mode) {
        for (const CurveCell& c : curve.cells) {
            if (c.mode != mode || c.sparsity <= 0 || c.sparsity > thresholds.low_sparsity)
                continue;
            if (c.mean_accuracy >= thresholds.rise_fraction * curve.baseline_accuracy)
                return true;
        }
        return false;
    };
    const bool mie_sharp = sharp(Mode::RoMie);
    const bool lie_sharp = sharp(Mode::RoLie);
    if (mie_sharp && lie_sharp) return "unpredictable";
    if (mie_sharp) return "generalizing";
    if (lie_sharp) return "non-generalizing";
    return "inconsistent";
}

} // namespace edgeval
