#include <cmath>

#include "edgeval/attributions.hpp"

namespace edgeval {

EdgeScores random_scores(const GraphSample& g, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EdgeScores s;
    s.method = "random";
    s.metadata["seed"] = std::to_string(rng_seed);
    s.scores.reserve(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) s.scores.push_back(u(rng));
    return s;
}

EdgeScores gradcam_scores(const ModelParams& model, const GraphSample& g, int target_class) {
    if (target_class < 0 || target_class >= model.arch.class_count)
        throw std::out_of_range("gradcam_scores: target class out of range");

    Tape tape;
    BoundParams bound = bind_params(tape, model);
    EdgeWeightedBatch batch = make_batch({&g}, model.arch.input_dim);
    Var w = tape.input(Tensor::full({batch.canon_edge_count}, 1.0));
    ForwardVars fv = forward_on_tape(tape, model, bound, batch, w);
    Var target_logit = pick(fv.logits, static_cast<std::size_t>(target_class));
    tape.backward(target_logit);

    const Tensor& act = tape.value(fv.layer_acts.back());  // M x C
    const Tensor& grad = tape.grad(fv.layer_acts.back());  // M x C
    const std::size_t m = act.rows(), c = act.cols();

    // per-channel weight: gradient summed over nodes
    std::vector<double> channel_weight(c, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < c; ++i) channel_weight[i] += grad.at(k, i);

    // per-node alpha: activation-weighted channel sum, relu-clamped
    std::vector<double> alpha(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double a = 0.0;
        for (std::size_t i = 0; i < c; ++i) a += act.at(k, i) * channel_weight[i];
        alpha[k] = std::max(a, 0.0);
    }

    EdgeScores s;
    s.method = "gradcam";
    s.metadata["target_class"] = std::to_string(target_class);
    s.scores.reserve(g.edges.size());
    for (const Edge& e : g.edges) s.scores.push_back(0.5 * (alpha[e.u] + alpha[e.v]));
    return s;
}

} // namespace edgeval
