#include <algorithm>
#include <cmath>

#include "edgeval/adam.hpp"
#include "edgeval/attributions.hpp"

namespace edgeval {

namespace {

std::vector<double> sigmoid_all(const std::vector<double>& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-x[i]))
                             : std::exp(x[i]) / (1.0 + std::exp(x[i]));
    return out;
}

} // namespace

EdgeScores gnnexplainer_scores(const ModelParams& model, const GraphSample& g,
                               const GnnExplainerConfig& cfg) {
    EdgeScores out;
    out.method = "gnnexplainer";
    const std::size_t n_edges = g.edges.size();
    if (n_edges == 0) return out;

    const int target = evaluate(model, {&g}).predictions[0];
    const EdgeWeightedBatch batch = make_batch({&g}, model.arch.input_dim);
    const std::size_t target_cls = static_cast<std::size_t>(target);

    Tensor mask = Tensor::zeros({n_edges}); // latent logits, sigma(0) = 0.5
    Adam opt(cfg.learning_rate);

    double best_objective = 0.0;
    std::vector<double> best_probs = sigmoid_all(mask.data);
    bool have_best = false;

    for (std::size_t epoch = 0; epoch <= cfg.epochs; ++epoch) {
        Tape tape;
        BoundParams bound = bind_params(tape, model);
        Var m = tape.input(mask);
        Var w = sigmoid(m);
        ForwardVars fv = forward_on_tape(tape, model, bound, batch, w);
        Var ce = softmax_cross_entropy(fv.logits, target_cls);
        Var objective = add(ce, add(scale(mean(w), cfg.lambda_size),
                                    scale(mean(binary_entropy(w)), cfg.lambda_entropy)));
        const double obj = tape.value(objective).data[0];
        if (!std::isfinite(obj))
            throw OptimizationError("gnnexplainer: non-finite objective");

        if (!have_best || obj < best_objective) {
            best_objective = obj;
            best_probs = tape.value(w).data;
            have_best = true;
        }
        if (epoch == cfg.epochs) break;

        tape.backward(objective);
        std::vector<Tensor*> ps{&mask};
        std::vector<const Tensor*> gs{&tape.grad(m)};
        opt.step(ps, gs);
    }

    out.scores = std::move(best_probs);
    out.metadata["iterations"] = std::to_string(cfg.epochs);
    out.metadata["final_objective"] = std::to_string(best_objective);
    out.metadata["target_class"] = std::to_string(target);
    return out;
}

namespace {

/// Rows are [emb_u | emb_v] per canonical edge.
Tensor edge_input_matrix(const Tensor& emb, const GraphSample& g) {
    const std::size_t h = emb.cols();
    Tensor z = Tensor::zeros({g.edges.size(), 2 * h});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        std::copy(&emb.data[ed.u * h], &emb.data[(ed.u + 1) * h], &z.data[e * 2 * h]);
        std::copy(&emb.data[ed.v * h], &emb.data[(ed.v + 1) * h], &z.data[e * 2 * h + h]);
    }
    return z;
}

Tensor scorer_logits_value(const PGExplainerParams& pg, const Tensor& z) {
    Tensor hidden = matmul_value(z, pg.W1);
    for (std::size_t i = 0; i < hidden.rows(); ++i)
        for (std::size_t j = 0; j < hidden.cols(); ++j) {
            hidden.at(i, j) += pg.b1.data[j];
            hidden.at(i, j) = std::max(hidden.at(i, j), 0.0);
        }
    Tensor logit = matmul_value(hidden, pg.W2);
    for (std::size_t i = 0; i < logit.rows(); ++i) logit.at(i, 0) += pg.b2.data[0];
    return logit;
}

} // namespace

PGExplainerParams pgexplainer_fit(const ModelParams& model, const Dataset& ds,
                                  const std::vector<std::size_t>& train_indices,
                                  const PGExplainerConfig& cfg) {
    if (train_indices.empty()) throw ParameterError("pgexplainer_fit: no training graphs");

    const std::size_t h = model.arch.hidden_dim;
    std::vector<Tensor> embeddings;
    std::vector<Tensor> edge_inputs;
    std::vector<std::size_t> targets;
    std::vector<const GraphSample*> graphs;
    double emb_norm = 0.0;
    for (std::size_t i : train_indices) {
        const GraphSample& g = ds.graphs[i];
        if (g.edges.empty()) continue;
        Tensor emb = node_embeddings(model, g);
        for (double v : emb.data) emb_norm += std::abs(v);
        edge_inputs.push_back(edge_input_matrix(emb, g));
        embeddings.push_back(std::move(emb));
        targets.push_back(static_cast<std::size_t>(evaluate(model, {&g}).predictions[0]));
        graphs.push_back(&g);
    }
    if (graphs.empty()) throw ParameterError("pgexplainer_fit: all training graphs are edgeless");
    if (emb_norm == 0.0)
        throw DegenerateInputError("pgexplainer_fit: model embeddings are identically zero");

    std::mt19937_64 rng(cfg.rng_seed);
    auto glorot = [&rng](std::size_t fi, std::size_t fo) {
        const double lim = std::sqrt(6.0 / static_cast<double>(fi + fo));
        std::uniform_real_distribution<double> u(-lim, lim);
        Tensor t = Tensor::zeros({fi, fo});
        for (double& v : t.data) v = u(rng);
        return t;
    };
    PGExplainerParams pg;
    pg.embedding_dim = h;
    pg.W1 = glorot(2 * h, cfg.scorer_hidden);
    pg.b1 = Tensor::zeros({cfg.scorer_hidden});
    pg.W2 = glorot(cfg.scorer_hidden, 1);
    pg.b2 = Tensor::zeros({1});

    Adam opt(cfg.learning_rate);
    std::uniform_real_distribution<double> unoise(1e-9, 1.0 - 1e-9);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double frac = cfg.epochs > 1
                                ? static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1)
                                : 1.0;
        const double temperature =
            cfg.temperature_start * std::pow(cfg.temperature_end / cfg.temperature_start, frac);

        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const GraphSample& g = *graphs[gi];
            EdgeWeightedBatch batch = make_batch({&g}, model.arch.input_dim);

            Tape tape;
            BoundParams bound = bind_params(tape, model);
            Var w1 = tape.input(pg.W1), b1 = tape.input(pg.b1);
            Var w2 = tape.input(pg.W2), b2 = tape.input(pg.b2);
            Var z = tape.input(edge_inputs[gi]);
            Var logit = add_bias(matmul(relu(add_bias(matmul(z, w1), b1)), w2), b2);

            Var loss{};
            for (std::size_t k = 0; k < cfg.samples_per_graph; ++k) {
                Tensor noise = Tensor::zeros({g.edges.size(), 1});
                for (double& v : noise.data) {
                    const double eps = unoise(rng);
                    v = std::log(eps) - std::log(1.0 - eps);
                }
                Var relaxed = scale(add(logit, tape.input(noise)), 1.0 / temperature);
                Var w = sigmoid(relaxed);
                ForwardVars fv = forward_on_tape(tape, model, bound, batch, w);
                Var ce = softmax_cross_entropy(fv.logits, targets[gi]);
                Var term = add(ce, add(scale(mean(w), cfg.lambda_size),
                                       scale(mean(binary_entropy(w)), cfg.lambda_entropy)));
                loss = (k == 0) ? term : add(loss, term);
            }
            if (cfg.samples_per_graph > 1)
                loss = scale(loss, 1.0 / static_cast<double>(cfg.samples_per_graph));
            if (!std::isfinite(tape.value(loss).data[0]))
                throw OptimizationError("pgexplainer_fit: non-finite loss");
            tape.backward(loss);

            std::vector<Tensor*> ps{&pg.W1, &pg.b1, &pg.W2, &pg.b2};
            std::vector<const Tensor*> gs{&tape.grad(w1), &tape.grad(b1), &tape.grad(w2),
                                          &tape.grad(b2)};
            opt.step(ps, gs);
        }
    }
    return pg;
}

EdgeScores pgexplainer_scores(const PGExplainerParams& pg, const ModelParams& model,
                              const GraphSample& g) {
    EdgeScores out;
    out.method = "pgexplainer";
    if (g.edges.empty()) return out;
    Tensor emb = node_embeddings(model, g);
    if (emb.cols() != pg.embedding_dim)
        throw DimensionError("pgexplainer_scores: embedding dimension mismatch");
    Tensor logit = scorer_logits_value(pg, edge_input_matrix(emb, g));
    out.scores = sigmoid_all(logit.data);
    return out;
}

} // namespace edgeval
