#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "edgeval/attributions.hpp"

namespace edgeval {

std::vector<double> shapley_exact(const CharacteristicFn& value, std::size_t n_players) {
    if (n_players == 0 || n_players > 10)
        throw ParameterError("shapley_exact: player count must be in [1, 10]");

    const std::size_t n_subsets = std::size_t{1} << n_players;
    std::vector<double> v(n_subsets);
    std::vector<bool> present(n_players);
    for (std::size_t mask = 0; mask < n_subsets; ++mask) {
        for (std::size_t i = 0; i < n_players; ++i) present[i] = (mask >> i) & 1;
        v[mask] = value(present);
    }

    // factorial weights |S|! (n-1-|S|)! / n!
    std::vector<double> fact(n_players + 1, 1.0);
    for (std::size_t i = 1; i <= n_players; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);

    std::vector<double> phi(n_players, 0.0);
    for (std::size_t mask = 0; mask < n_subsets; ++mask) {
        const std::size_t s = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t i = 0; i < n_players; ++i) {
            if ((mask >> i) & 1) continue;
            const double w = fact[s] * fact[n_players - 1 - s] / fact[n_players];
            phi[i] += w * (v[mask | (std::size_t{1} << i)] - v[mask]);
        }
    }
    return phi;
}

double shapley_mc(const CharacteristicFn& value, std::size_t n_players, std::size_t player,
                  std::size_t samples, std::mt19937_64& rng) {
    if (samples == 0) throw ParameterError("shapley_mc: sample count must be positive");
    if (player >= n_players) throw ParameterError("shapley_mc: player index out of range");

    std::vector<std::size_t> order(n_players);
    std::iota(order.begin(), order.end(), 0);
    std::vector<bool> present(n_players);
    double acc = 0.0;
    for (std::size_t t = 0; t < samples; ++t) {
        std::shuffle(order.begin(), order.end(), rng);
        std::fill(present.begin(), present.end(), false);
        for (std::size_t i : order) {
            if (i == player) break;
            present[i] = true;
        }
        const double without = value(present);
        present[player] = true;
        const double with = value(present);
        acc += with - without;
    }
    return acc / static_cast<double>(samples);
}

GraphGame make_graph_game(const ModelParams& model, const GraphSample& g,
                          const std::vector<std::size_t>& subgraph_nodes, std::size_t l_hop,
                          int target_class) {
    if (target_class < 0 || target_class >= model.arch.class_count)
        throw std::out_of_range("make_graph_game: target class out of range");

    std::vector<char> in_sub(g.node_count, 0);
    for (std::size_t v : subgraph_nodes) {
        if (v >= g.node_count) throw ParameterError("make_graph_game: node out of range");
        in_sub[v] = 1;
    }

    // l_hop-neighborhood of the subgraph, excluding the subgraph itself
    std::vector<std::vector<std::size_t>> adj(g.node_count);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<int> dist(g.node_count, -1);
    std::vector<std::size_t> frontier;
    for (std::size_t v = 0; v < g.node_count; ++v)
        if (in_sub[v]) {
            dist[v] = 0;
            frontier.push_back(v);
        }
    for (std::size_t hop = 1; hop <= l_hop; ++hop) {
        std::vector<std::size_t> next;
        for (std::size_t v : frontier)
            for (std::size_t w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = static_cast<int>(hop);
                    next.push_back(w);
                }
        frontier = std::move(next);
    }

    GraphGame game;
    game.player_nodes.push_back(subgraph_nodes);
    for (std::size_t v = 0; v < g.node_count; ++v)
        if (dist[v] > 0) game.player_nodes.push_back({v});
    game.n_players = game.player_nodes.size();

    EdgeWeightedBatch batch = make_batch({&g}, model.arch.input_dim);
    const std::size_t d = model.arch.input_dim;
    const std::size_t tc = static_cast<std::size_t>(target_class);
    const Tensor full_features = batch.features;
    auto players = game.player_nodes;

    game.value = [model, batch, full_features, players, d, tc](const std::vector<bool>& present) {
        EdgeWeightedBatch b = batch;
        b.features = Tensor::zeros(full_features.shape);
        for (std::size_t p = 0; p < players.size(); ++p) {
            if (p >= present.size() || !present[p]) continue;
            for (std::size_t v : players[p])
                std::copy(&full_features.data[v * d], &full_features.data[(v + 1) * d],
                          &b.features.data[v * d]);
        }
        Tensor logits = forward_logits(model, b);
        // softmax probability of the target class
        double mx = logits.data[0];
        for (double x : logits.data) mx = std::max(mx, x);
        double denom = 0.0;
        for (double x : logits.data) denom += std::exp(x - mx);
        return std::exp(logits.data[tc] - mx) / denom;
    };
    return game;
}

double shapley_mc_subgraph(const ModelParams& model, const GraphSample& g,
                           const std::vector<std::size_t>& subgraph_nodes,
                           std::size_t samples, std::size_t l_hop, std::uint64_t rng_seed) {
    // attribution target is the model's own prediction on the full graph
    EvalResult pred = evaluate(model, {&g});
    GraphGame game = make_graph_game(model, g, subgraph_nodes, l_hop, pred.predictions[0]);
    std::mt19937_64 rng(rng_seed);
    return shapley_mc(game.value, game.n_players, 0, samples, rng);
}

} // namespace edgeval
