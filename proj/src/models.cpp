#include "edgeval/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "edgeval/adam.hpp"

namespace edgeval {

const char* arch_name(ArchKind k) { return k == ArchKind::GCN ? "GCN" : "GIN"; }

ArchKind arch_from_name(const std::string& s) {
    if (s == "GCN" || s == "gcn") return ArchKind::GCN;
    if (s == "GIN" || s == "gin") return ArchKind::GIN;
    throw ParameterError("unknown architecture: " + s);
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named() {
    std::vector<std::pair<std::string, Tensor*>> out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        out.emplace_back(p + "W", &layers[l].W);
        out.emplace_back(p + "b", &layers[l].b);
        if (arch.kind == ArchKind::GIN) {
            out.emplace_back(p + "W2", &layers[l].W2);
            out.emplace_back(p + "b2", &layers[l].b2);
            out.emplace_back(p + "eps", &layers[l].eps);
        }
    }
    out.emplace_back("head.W", &head_W);
    out.emplace_back("head.b", &head_b);
    return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named() const {
    std::vector<std::pair<std::string, const Tensor*>> out;
    for (auto& [n, t] : const_cast<ModelParams*>(this)->named()) out.emplace_back(n, t);
    return out;
}

std::uint64_t ModelParams::checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [name, t] : named()) {
        mix(name.data(), name.size());
        mix(t->data.data(), t->data.size() * sizeof(double));
    }
    return h;
}

namespace {

Tensor glorot(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    Tensor t = Tensor::zeros({fan_in, fan_out});
    for (double& v : t.data) v = u(rng);
    return t;
}

} // namespace

namespace {

// Biases start slightly off zero. With constant node features every node
// state is a positive scalar times a shared direction, and relu(c*s) =
// c*relu(s) for c > 0, so a zero-bias relu stack collapses to a linear
// function of the degree field and gradient descent stalls there.
Tensor bias_init(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    Tensor t = Tensor::zeros({n});
    for (double& v : t.data) v = u(rng);
    return t;
}

} // namespace

ModelParams init_params(const ArchConfig& arch, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ModelParams p;
    p.arch = arch;
    std::size_t in = arch.input_dim;
    for (std::size_t l = 0; l < arch.layer_count; ++l) {
        ModelParams::Layer layer;
        layer.W = glorot(in, arch.hidden_dim, rng);
        layer.b = bias_init(arch.hidden_dim, rng);
        if (arch.kind == ArchKind::GCN && l == 0) {
            // center the first layer's relu kinks inside the operating range
            // and raise the gain: with near-constant inputs the unit's pre-bias
            // activation is close to its weight column sum, and the
            // degree-normalized aggregation only modulates it by a few percent,
            // so an uncentered unit-gain kink never fires differentially across
            // nodes and the usable signal drowns in the optimizer's step size
            const double gain = 20.0;
            for (double& v : layer.W.data) v *= gain;
            std::uniform_real_distribution<double> u(0.8, 1.05);
            for (std::size_t k = 0; k < arch.hidden_dim; ++k) {
                double colsum = 0.0;
                for (std::size_t i = 0; i < in; ++i)
                    colsum += layer.W.data[i * arch.hidden_dim + k];
                layer.b.data[k] = -u(rng) * colsum;
            }
        }
        if (arch.kind == ArchKind::GIN) {
            layer.W2 = glorot(arch.hidden_dim, arch.hidden_dim, rng);
            layer.b2 = bias_init(arch.hidden_dim, rng);
            layer.eps = Tensor::scalar(0.0);
        }
        p.layers.push_back(std::move(layer));
        in = arch.hidden_dim;
    }
    p.head_W = glorot(arch.hidden_dim, static_cast<std::size_t>(arch.class_count), rng);
    p.head_b = Tensor::zeros({static_cast<std::size_t>(arch.class_count)});
    return p;
}

EdgeWeightedBatch make_batch(const std::vector<const GraphSample*>& graphs,
                             std::size_t feature_dim) {
    EdgeWeightedBatch b;
    std::size_t nodes = 0, canon = 0;
    for (const GraphSample* g : graphs) {
        nodes += g->node_count;
        canon += g->edges.size();
    }
    b.node_count = nodes;
    b.canon_edge_count = canon;
    b.features = Tensor::zeros({nodes, feature_dim});
    b.dir_edges.reserve(2 * canon);
    b.dir_canon.reserve(2 * canon);

    std::size_t node_base = 0, canon_base = 0;
    for (const GraphSample* g : graphs) {
        if (g->node_count > 0) {
            if (g->features.cols() != feature_dim)
                throw DimensionError("make_batch: inconsistent feature dimension");
            std::copy(g->features.data.begin(), g->features.data.end(),
                      b.features.data.begin() + node_base * feature_dim);
        }
        for (std::size_t e = 0; e < g->edges.size(); ++e) {
            const Edge& ed = g->edges[e];
            b.dir_edges.push_back({node_base + ed.u, node_base + ed.v});
            b.dir_canon.push_back(canon_base + e);
            b.dir_edges.push_back({node_base + ed.v, node_base + ed.u});
            b.dir_canon.push_back(canon_base + e);
        }
        b.graph_ranges.emplace_back(node_base, node_base + g->node_count);
        b.labels.push_back(g->label < 0 ? 0 : static_cast<std::size_t>(g->label));
        b.nonempty.push_back(g->node_count > 0 ? 1.0 : 0.0);
        node_base += g->node_count;
        canon_base += g->edges.size();
    }
    return b;
}

BoundParams bind_params(Tape& tape, const ModelParams& params) {
    BoundParams bp;
    for (const auto& [name, t] : params.named()) bp.vars.push_back(tape.input(*t));
    return bp;
}

ForwardVars forward_on_tape(Tape& tape, const ModelParams& params, const BoundParams& bound,
                            const EdgeWeightedBatch& batch, Var edge_weights) {
    const ArchConfig& arch = params.arch;
    ForwardVars out;
    Var h = tape.input(batch.features);

    Var w_dir = gather(edge_weights, batch.dir_canon);
    std::size_t pi = 0;
    auto next = [&]() { return bound.vars[pi++]; };

    for (std::size_t l = 0; l < arch.layer_count; ++l) {
        Var W = next(), b = next();
        if (arch.kind == ArchKind::GCN) {
            Var deg = weighted_degree(w_dir, batch.dir_edges, batch.node_count, 1.0);
            Var dinv = rsqrt(deg);
            Var coef = edge_coef(w_dir, dinv, batch.dir_edges);
            Var self = mul(dinv, dinv); // unit self-loop normalized by weighted degree
            Var agg = aggregate(h, coef, self, batch.dir_edges);
            h = relu(add_bias(matmul(agg, W), b));
        } else {
            Var W2 = next(), b2 = next(), eps = next();
            Var self = affine_of_scalar(eps, batch.node_count, 1.0, 1.0); // 1 + eps
            Var agg = aggregate(h, w_dir, self, batch.dir_edges);
            Var hidden = relu(add_bias(matmul(agg, W), b));
            h = relu(add_bias(matmul(hidden, W2), b2));
        }
        out.layer_acts.push_back(h);
    }
    out.node_embeddings = h;

    Var pooled = segment_mean(h, batch.graph_ranges);
    Var head_W = next(), head_b = next();
    Var logits = add_bias(matmul(pooled, head_W), head_b);
    // empty graphs emit uniform (all-zero) logits
    out.logits = row_mask(logits, batch.nonempty);
    return out;
}

Tensor forward_logits(const ModelParams& params, const EdgeWeightedBatch& batch) {
    Tape tape;
    BoundParams bound = bind_params(tape, params);
    Var w = tape.input(Tensor::full({batch.canon_edge_count}, 1.0));
    ForwardVars fv = forward_on_tape(tape, params, bound, batch, w);
    return tape.value(fv.logits);
}

namespace {

int argmax_low(const double* row, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (row[j] > row[best]) best = j;
    return static_cast<int>(best);
}

double batch_accuracy(const Tensor& logits, const std::vector<std::size_t>& labels,
                      std::vector<int>* preds) {
    const std::size_t n = logits.rows(), c = logits.cols();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int p = argmax_low(&logits.data[i * c], c);
        if (preds) preds->push_back(p);
        if (static_cast<std::size_t>(p) == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

} // namespace

EvalResult evaluate(const ModelParams& params, const std::vector<const GraphSample*>& graphs) {
    if (graphs.empty()) throw std::domain_error("evaluate: empty graph list");
    EvalResult r;
    std::size_t correct = 0;
    const std::size_t chunk = 256;
    for (std::size_t off = 0; off < graphs.size(); off += chunk) {
        std::vector<const GraphSample*> part(
            graphs.begin() + off,
            graphs.begin() + std::min(graphs.size(), off + chunk));
        EdgeWeightedBatch b = make_batch(part, params.arch.input_dim);
        Tensor logits = forward_logits(params, b);
        const std::size_t c = logits.cols();
        for (std::size_t i = 0; i < part.size(); ++i) {
            const int p = argmax_low(&logits.data[i * c], c);
            r.predictions.push_back(p);
            if (p == part[i]->label) ++correct;
        }
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(graphs.size());
    return r;
}

EvalResult evaluate_split(const ModelParams& params, const Dataset& ds,
                          const std::vector<std::size_t>& indices) {
    std::vector<const GraphSample*> gs;
    gs.reserve(indices.size());
    for (std::size_t i : indices) gs.push_back(&ds.graphs[i]);
    return evaluate(params, gs);
}

Tensor node_embeddings(const ModelParams& params, const GraphSample& g) {
    Tape tape;
    BoundParams bound = bind_params(tape, params);
    EdgeWeightedBatch b = make_batch({&g}, params.arch.input_dim);
    Var w = tape.input(Tensor::full({b.canon_edge_count}, 1.0));
    ForwardVars fv = forward_on_tape(tape, params, bound, b, w);
    return tape.value(fv.node_embeddings);
}

TrainResult train(const Dataset& ds, const ArchConfig& arch, const TrainConfig& cfg) {
    if (ds.split.train.empty()) throw TrainError("train: empty train split");
    if (cfg.epochs < 1) throw TrainError("train: epochs must be >= 1");

    std::mt19937_64 rng(cfg.rng_seed);
    ModelParams params = init_params(arch, rng());
    Adam opt(cfg.learning_rate);

    TrainResult result;
    ModelParams best = params;
    double best_val_acc = -1.0, best_val_loss = 0.0;
    std::size_t since_best = 0;

    std::vector<std::size_t> order = ds.split.train;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t off = 0; off < order.size(); off += cfg.batch_size) {
            std::vector<const GraphSample*> part;
            std::vector<std::size_t> labels;
            for (std::size_t i = off; i < std::min(order.size(), off + cfg.batch_size); ++i) {
                part.push_back(&ds.graphs[order[i]]);
                labels.push_back(static_cast<std::size_t>(ds.graphs[order[i]].label));
            }
            EdgeWeightedBatch b = make_batch(part, arch.input_dim);
            Tape tape;
            BoundParams bound = bind_params(tape, params);
            Var w = tape.input(Tensor::full({b.canon_edge_count}, 1.0));
            ForwardVars fv = forward_on_tape(tape, params, bound, b, w);
            Var loss = softmax_cross_entropy_mean(fv.logits, labels);
            tape.backward(loss);
            epoch_loss += tape.value(loss).data[0];
            ++batches;

            auto named = params.named();
            std::vector<Tensor*> ps;
            std::vector<const Tensor*> gs;
            for (std::size_t k = 0; k < named.size(); ++k) {
                ps.push_back(named[k].second);
                gs.push_back(&tape.grad(bound.vars[k]));
            }
            opt.step(ps, gs);
        }
        epoch_loss /= static_cast<double>(std::max<std::size_t>(batches, 1));

        double val_acc = 0.0, val_loss = 0.0;
        if (!ds.split.val.empty()) {
            EvalResult ev = evaluate_split(params, ds, ds.split.val);
            val_acc = ev.accuracy;
            // validation loss only matters for early-stopping tie-breaks
            std::vector<const GraphSample*> vgs;
            std::vector<std::size_t> vlabels;
            for (std::size_t i : ds.split.val) {
                vgs.push_back(&ds.graphs[i]);
                vlabels.push_back(static_cast<std::size_t>(ds.graphs[i].label));
            }
            EdgeWeightedBatch vb = make_batch(vgs, arch.input_dim);
            Tensor logits = forward_logits(params, vb);
            Tape t2;
            Var lv = t2.input(logits);
            val_loss = t2.value(softmax_cross_entropy_mean(lv, vlabels)).data[0];
        }
        result.log.push_back({epoch, epoch_loss, val_acc});

        if (val_acc > best_val_acc ||
            (val_acc == best_val_acc && val_loss < best_val_loss)) {
            best_val_acc = val_acc;
            best_val_loss = val_loss;
            best = params;
            since_best = 0;
        } else {
            ++since_best;
        }
        if (cfg.early_stop_patience > 0 && since_best >= cfg.early_stop_patience) break;
    }

    if (cfg.early_stop_patience > 0 && !ds.split.val.empty()) {
        result.params = std::move(best);
        result.best_val_accuracy = best_val_acc;
    } else {
        result.params = std::move(params);
        result.best_val_accuracy = best_val_acc < 0.0 ? 0.0 : best_val_acc;
    }
    return result;
}

// ---- checkpoint I/O (hexfloat for bit-exact reload) ----

void save_model(const ModelParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path);
    out << "arch=" << arch_name(params.arch.kind) << "\n";
    out << "hidden_dim=" << params.arch.hidden_dim << "\n";
    out << "layer_count=" << params.arch.layer_count << "\n";
    out << "class_count=" << params.arch.class_count << "\n";
    out << "input_dim=" << params.arch.input_dim << "\n";
    // doubles stored as raw bit patterns so reload is bit-exact
    for (const auto& [name, t] : params.named()) {
        out << "tensor " << name << " " << t->rank();
        for (std::size_t s : t->shape) out << " " << s;
        out << "\n" << std::hex;
        for (std::size_t i = 0; i < t->size(); ++i)
            out << std::bit_cast<std::uint64_t>(t->data[i])
                << (i + 1 == t->size() ? "\n" : " ");
        if (t->size() == 0) out << "\n";
        out << std::dec;
    }
}

ModelParams load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    ArchConfig arch;
    std::string line;
    for (int i = 0; i < 5; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("load_model: truncated header");
        auto eq = line.find('=');
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "arch") arch.kind = arch_from_name(val);
        else if (key == "hidden_dim") arch.hidden_dim = std::stoul(val);
        else if (key == "layer_count") arch.layer_count = std::stoul(val);
        else if (key == "class_count") arch.class_count = std::stoi(val);
        else if (key == "input_dim") arch.input_dim = std::stoul(val);
    }
    ModelParams params = init_params(arch, 0);
    auto named = params.named();
    for (auto& [name, t] : named) {
        std::string tag, tname;
        std::size_t rank;
        if (!(in >> tag >> tname >> rank) || tag != "tensor" || tname != name)
            throw std::runtime_error("load_model: tensor header mismatch at " + name);
        std::vector<std::size_t> shape(rank);
        for (std::size_t& s : shape) in >> s;
        Tensor tt = Tensor::zeros(shape);
        std::string word;
        for (double& v : tt.data) {
            if (!(in >> word))
                throw std::runtime_error("load_model: truncated tensor " + name);
            v = std::bit_cast<double>(std::stoull(word, nullptr, 16));
        }
        *t = std::move(tt);
    }
    return params;
}

} // namespace edgeval
