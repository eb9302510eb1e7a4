#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "edgeval/config.hpp"
#include "edgeval/generators.hpp"
#include "edgeval/report.hpp"
#include "edgeval/results.hpp"
#include "edgeval/retrain.hpp"
#include "edgeval/tu_io.hpp"

namespace fs = std::filesystem;
using namespace edgeval;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string dataset;
    std::string arch;
    std::vector<std::string> attributors;
    std::int64_t seed = -1;
    std::int64_t workers = -1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "run configuration file");
    cmd->add_option("--dataset", o.dataset, "dataset name (ba2motifs, ba3motifs, or a TU dir)");
    cmd->add_option("--arch", o.arch, "model architecture: gcn or gin");
    cmd->add_option("--attributor", o.attributors, "attribution method(s)");
    cmd->add_option("--seed", o.seed, "training / generator seed override");
    cmd->add_option("--workers", o.workers, "parallel retraining workers");
    cmd->add_option("--out", o.out, "output directory");
}

std::string lowercased(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

RunConfig resolve(const CommonOpts& o) {
    Config c = o.config_path.empty() ? Config{} : Config::load(o.config_path);
    RunConfig r = RunConfig::from_config(c);
    if (const char* env = std::getenv("EDGEVAL_OUT"); env && r.out_dir == "out") r.out_dir = env;
    if (!o.dataset.empty()) {
        if (fs::is_directory(o.dataset)) {
            r.dataset_path = o.dataset;
            r.dataset_name = fs::path(o.dataset).filename().string();
        } else {
            r.dataset_name = o.dataset;
        }
    }
    if (!o.arch.empty()) r.arch.kind = arch_from_name(o.arch);
    if (!o.attributors.empty()) r.attributors = o.attributors;
    if (o.seed >= 0) {
        r.train.rng_seed = static_cast<std::uint64_t>(o.seed);
        r.generator_seed = static_cast<std::uint64_t>(o.seed);
    }
    if (o.workers >= 0) r.workers = static_cast<std::size_t>(o.workers);
    if (!o.out.empty()) r.out_dir = o.out;
    // generator names are matched case-insensitively and canonicalized so
    // results records and file stems agree with Dataset::name
    if (lowercased(r.dataset_name) == "ba2motifs") r.dataset_name = "BA2Motifs";
    if (lowercased(r.dataset_name) == "ba3motifs") r.dataset_name = "BA3Motifs";
    fs::create_directories(r.out_dir);
    return r;
}

Dataset build_dataset(const RunConfig& r) {
    Dataset ds;
    if (!r.dataset_path.empty()) {
        ds = load_tu_dataset(r.dataset_path);
    } else if (r.dataset_name == "BA2Motifs") {
        ds = generate_ba2motifs(r.generator_seed);
    } else if (r.dataset_name == "BA3Motifs") {
        ds = generate_ba3motifs(r.generator_seed);
    } else {
        const fs::path dir = fs::path(r.out_dir) / r.dataset_name;
        if (!fs::is_directory(dir))
            throw LoadError("dataset '" + r.dataset_name +
                            "' is neither a generator name nor a directory under " + r.out_dir);
        ds = load_tu_dataset(dir.string());
    }
    if (ds.split.empty()) ds.split = split_dataset(ds, 0.8, 0.1, 0.1, r.generator_seed);
    return ds;
}

ArchConfig arch_for(const RunConfig& r, const Dataset& ds) {
    ArchConfig a = r.arch;
    a.class_count = ds.class_count;
    a.input_dim = ds.graphs.empty() ? a.input_dim : ds.graphs.front().feature_dim();
    return a;
}

std::string model_path(const RunConfig& r) {
    return (fs::path(r.out_dir) / (r.dataset_name + "_" + arch_name(r.arch.kind) + ".ckpt"))
        .string();
}

std::string cache_path(const RunConfig& r, const std::string& method) {
    return (fs::path(r.out_dir) /
            (r.dataset_name + "_" + arch_name(r.arch.kind) + "_" + method + ".cache.csv"))
        .string();
}

std::string results_path(const RunConfig& r) {
    return (fs::path(r.out_dir) / "results.csv").string();
}

std::vector<std::size_t> train_val_ids(const Dataset& ds) {
    std::vector<std::size_t> ids = ds.split.train;
    ids.insert(ids.end(), ds.split.val.begin(), ds.split.val.end());
    return ids;
}

int cmd_generate(const CommonOpts& o) {
    const RunConfig r = resolve(o);
    Dataset ds = build_dataset(r);
    const fs::path dir = fs::path(r.out_dir) / ds.name;
    fs::create_directories(dir);
    save_tu_dataset(ds, dir.string());
    std::cout << "wrote " << ds.graphs.size() << " graphs (" << ds.class_count << " classes) to "
              << dir.string() << "\n";
    return 0;
}

int cmd_train(const CommonOpts& o) {
    const RunConfig r = resolve(o);
    Dataset ds = build_dataset(r);
    const ArchConfig arch = arch_for(r, ds);
    TrainResult tr = train(ds, arch, r.train);
    save_model(tr.params, model_path(r));

    const fs::path log_path =
        fs::path(r.out_dir) / (r.dataset_name + "_" + arch_name(arch.kind) + "_train_log.csv");
    std::ofstream log(log_path);
    log << "epoch,train_loss,val_accuracy\n" << std::setprecision(17);
    for (const TrainLogEntry& e : tr.log)
        log << e.epoch << "," << e.train_loss << "," << e.val_accuracy << "\n";

    const double test_acc = evaluate_split(tr.params, ds, ds.split.test).accuracy;
    std::cout << "checkpoint " << model_path(r) << "\n";
    std::cout << "val accuracy " << tr.best_val_accuracy << ", test accuracy " << test_acc
              << "\n";
    return 0;
}

int cmd_explain(const CommonOpts& o) {
    const RunConfig r = resolve(o);
    Dataset ds = build_dataset(r);
    const ModelParams model = load_model(model_path(r));
    const std::vector<std::size_t> ids = train_val_ids(ds);

    for (const std::string& method : r.attributors) {
        AttributionCache cache;
        cache.dataset = ds.name;
        cache.model_checksum = model.checksum();
        cache.method = method;
        cache.seed = r.train.rng_seed;

        if (method == "random") {
            for (std::size_t gid : ids) {
                cache.scores[gid] = random_scores(ds.graphs[gid], r.train.rng_seed + gid);
                cache.scores[gid].graph_id = gid;
            }
        } else if (method == "gradcam") {
            for (std::size_t gid : ids) {
                const GraphSample& g = ds.graphs[gid];
                const int target =
                    g.node_count ? evaluate(model, {&g}).predictions[0] : 0;
                cache.scores[gid] = gradcam_scores(model, g, target);
                cache.scores[gid].graph_id = gid;
            }
        } else if (method == "gnnexplainer") {
            GnnExplainerConfig cfg;
            cfg.epochs = static_cast<std::size_t>(
                r.raw.get_int("gnnexplainer", "epochs", static_cast<std::int64_t>(cfg.epochs)));
            cfg.learning_rate =
                r.raw.get_double("gnnexplainer", "learning_rate", cfg.learning_rate);
            cfg.lambda_size = r.raw.get_double("gnnexplainer", "lambda_size", cfg.lambda_size);
            cfg.lambda_entropy =
                r.raw.get_double("gnnexplainer", "lambda_entropy", cfg.lambda_entropy);
            for (std::size_t gid : ids) {
                cache.scores[gid] = gnnexplainer_scores(model, ds.graphs[gid], cfg);
                cache.scores[gid].graph_id = gid;
            }
        } else if (method == "pgexplainer") {
            PGExplainerConfig cfg;
            cfg.epochs = static_cast<std::size_t>(
                r.raw.get_int("pgexplainer", "epochs", static_cast<std::int64_t>(cfg.epochs)));
            cfg.learning_rate =
                r.raw.get_double("pgexplainer", "learning_rate", cfg.learning_rate);
            cfg.rng_seed = r.train.rng_seed;
            const PGExplainerParams pg = pgexplainer_fit(model, ds, ds.split.train, cfg);
            for (std::size_t gid : ids) {
                cache.scores[gid] = pgexplainer_scores(pg, model, ds.graphs[gid]);
                cache.scores[gid].graph_id = gid;
            }
        } else if (method == "subgraphx") {
            SubgraphXConfig cfg;
            cfg.mcts_iterations = static_cast<std::size_t>(r.raw.get_int(
                "subgraphx", "mcts_iterations", static_cast<std::int64_t>(cfg.mcts_iterations)));
            cfg.shapley_samples = static_cast<std::size_t>(r.raw.get_int(
                "subgraphx", "shapley_samples", static_cast<std::int64_t>(cfg.shapley_samples)));
            cfg.rng_seed = r.train.rng_seed;
            for (std::size_t gid : ids) {
                const GraphSample& g = ds.graphs[gid];
                if (g.node_count > cfg.max_nodes_guard) {
                    cache.skipped[gid] = true;
                    continue;
                }
                for (int level : r.sparsity_levels) {
                    if (level == 0 || level == 100) continue;
                    const std::size_t target = top_k_count(g.edges.size(), level);
                    SubgraphXResult res = subgraphx_search(model, g, target, cfg);
                    cache.masks[gid][level] = res.kept.kept;
                }
            }
        } else {
            std::cerr << "unknown attributor: " << method << "\n";
            return 1;
        }
        save_cache(cache, cache_path(r, method), ds);
        std::cout << "cached " << method << " -> " << cache_path(r, method) << "\n";
    }
    return 0;
}

int cmd_evaluate(const CommonOpts& o) {
    const RunConfig r = resolve(o);
    Dataset ds = build_dataset(r);
    const ModelParams model = load_model(model_path(r));
    const double baseline = evaluate_split(model, ds, ds.split.test).accuracy;

    SweepConfig sweep;
    sweep.sparsity_levels = r.sparsity_levels;
    sweep.retrain_seeds = r.retrain_seeds;
    sweep.random_seeds = r.random_seeds;
    sweep.eliminate_isolated = r.eliminate_isolated;
    sweep.workers = r.workers;

    for (const std::string& method : r.attributors) {
        AttributionSet attr;
        if (method == "random") {
            attr.method = "random"; // scores drawn per seed inside the sweep
        } else {
            attr = attribution_set_from_cache(load_cache(cache_path(r, method), ds));
        }
        EvalCurve curve = run_sweep(ds, arch_for(r, ds), r.train, attr, baseline, sweep);
        const std::size_t added =
            append_results(results_path(r), curve_to_records(curve, iso_timestamp_utc()));
        std::cout << method << ": " << added << " new cells -> " << results_path(r) << "\n";
    }
    return 0;
}

int cmd_report(const CommonOpts& o) {
    const RunConfig r = resolve(o);
    std::vector<ResultRecord> all = load_results(results_path(r));
    std::vector<ResultRecord> mine;
    for (const ResultRecord& rec : all)
        if (rec.dataset == r.dataset_name && rec.arch == arch_name(r.arch.kind) &&
            rec.eliminate_isolated == r.eliminate_isolated)
            mine.push_back(rec);
    if (mine.empty()) {
        std::cerr << "warning: no matching results in " << results_path(r) << "\n";
        return 0;
    }
    const CurveTable table = build_curve_table(mine);
    const std::string stem = r.dataset_name + "_" + arch_name(r.arch.kind);
    const fs::path table_path = fs::path(r.out_dir) / ("curves_" + stem + ".csv");
    std::ofstream(table_path) << curve_table_csv(table);
    std::cout << "curve table -> " << table_path.string() << "\n";
    for (const auto& [attributor, series] : plot_series(table)) {
        const fs::path p = fs::path(r.out_dir) / ("plot_" + stem + "_" + attributor + ".csv");
        std::ofstream(p) << series;
        std::cout << "plot series -> " << p.string() << "\n";
    }
    for (const auto& [attributor, flag] : scenario_flags(table))
        std::cout << "scenario " << attributor << ": " << flag << "\n";
    return 0;
}

int cmd_visualize(const CommonOpts& o, std::size_t graph_id, const std::string& method,
                  int level) {
    const RunConfig r = resolve(o);
    Dataset ds = build_dataset(r);
    if (graph_id >= ds.graphs.size())
        throw ParameterError("unknown graph id " + std::to_string(graph_id));
    const GraphSample& g = ds.graphs[graph_id];

    AttributionSet attr = attribution_set_from_cache(load_cache(cache_path(r, method), ds));
    const EdgeSubset kept = attr.select(graph_id, g, level, Mode::RoMie);
    const std::string title = r.dataset_name + " graph " + std::to_string(graph_id) + " " +
                              method + " top " + std::to_string(level) + "%";
    const fs::path p =
        fs::path(r.out_dir) / (r.dataset_name + "_g" + std::to_string(graph_id) + "_" + method +
                               "_" + std::to_string(level) + ".dot");
    std::ofstream(p) << to_dot(g, kept.kept, title);
    std::cout << "graph description -> " << p.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge-attribution evaluation by retraining on kept-edge subgraphs"};
    app.require_subcommand(1);

    CommonOpts o;
    std::size_t graph_id = 0;
    std::string vis_method = "gradcam";
    int vis_level = 30;

    CLI::App* gen = app.add_subcommand("generate", "write a synthetic motif dataset");
    CLI::App* trn = app.add_subcommand("train", "train the baseline classifier");
    CLI::App* exp = app.add_subcommand("explain", "compute and cache edge attributions");
    CLI::App* evl = app.add_subcommand("evaluate", "run the retraining sweep");
    CLI::App* rep = app.add_subcommand("report", "aggregate results into curves");
    CLI::App* vis = app.add_subcommand("visualize", "export one attributed graph");
    for (CLI::App* c : {gen, trn, exp, evl, rep, vis}) add_common(c, o);
    vis->add_option("--graph", graph_id, "graph id")->required();
    vis->add_option("--method", vis_method, "attribution method of the cache");
    vis->add_option("--level", vis_level, "sparsity level (percent kept)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(o);
        if (trn->parsed()) return cmd_train(o);
        if (exp->parsed()) return cmd_explain(o);
        if (evl->parsed()) return cmd_evaluate(o);
        if (rep->parsed()) return cmd_report(o);
        if (vis->parsed()) return cmd_visualize(o, graph_id, vis_method, vis_level);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
