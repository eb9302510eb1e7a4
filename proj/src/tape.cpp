#include "edgeval/tape.hpp"

#include <algorithm>
#include <cmath>

namespace edgeval {

namespace {

struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& m) : std::runtime_error(m) {}
};

void require_same_tape(Var a, Var b) {
    if (a.tape != b.tape) throw ContractError("operands belong to different tapes");
}

Tensor& grad_of(Tape& t, std::size_t idx) { return t.node(idx).grad; }

} // namespace

Var Tape::input(Tensor value) {
    return append("input", {}, std::move(value), nullptr);
}

Var Tape::append(const char* op, std::vector<std::size_t> parents, Tensor value,
                 std::function<void(Tape&, std::size_t)> bwd) {
    Node n;
    n.op = op;
    n.parents = std::move(parents);
    n.grad = Tensor::zeros(value.shape);
    n.value = std::move(value);
    n.backward = std::move(bwd);
    nodes_.push_back(std::move(n));
    return Var{this, nodes_.size() - 1};
}

void Tape::backward(Var root) {
    if (root.tape != this) throw ContractError("backward: root from another tape");
    if (nodes_[root.idx].value.size() != 1)
        throw ContractError("backward: root must be scalar");

    std::vector<char> reachable(nodes_.size(), 0);
    std::vector<std::size_t> stack{root.idx};
    reachable[root.idx] = 1;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t p : nodes_[i].parents)
            if (!reachable[p]) {
                reachable[p] = 1;
                stack.push_back(p);
            }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        std::fill(nodes_[i].grad.data.begin(), nodes_[i].grad.data.end(), 0.0);
    nodes_[root.idx].grad.data[0] = 1.0;

    for (std::size_t i = root.idx + 1; i-- > 0;) {
        if (!reachable[i] || !nodes_[i].backward) continue;
        nodes_[i].backward(*this, i);
    }
}

// ---- elementwise with optional scalar broadcast ----

namespace {

enum class Bcast { None, LeftScalar, RightScalar };

Bcast broadcast_kind(const Tensor& a, const Tensor& b) {
    if (a.same_shape(b)) return Bcast::None;
    if (a.size() == 1) return Bcast::LeftScalar;
    if (b.size() == 1) return Bcast::RightScalar;
    throw DimensionError("elementwise: shape mismatch");
}

template <class Fwd, class BwdA, class BwdB>
Var binary_elementwise(const char* op, Var a, Var b, Fwd fwd, BwdA dfa, BwdB dfb) {
    require_same_tape(a, b);
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    Bcast bc = broadcast_kind(av, bv);
    Tensor out = (bc == Bcast::LeftScalar) ? Tensor::zeros(bv.shape) : Tensor::zeros(av.shape);
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = (bc == Bcast::LeftScalar) ? av.data[0] : av.data[i];
        double y = (bc == Bcast::RightScalar) ? bv.data[0] : bv.data[i];
        out.data[i] = fwd(x, y);
    }
    std::size_t ai = a.idx, bi = b.idx;
    return t.append(op, {ai, bi}, std::move(out),
                    [ai, bi, bc, dfa, dfb](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        const Tensor& av2 = tp.node(ai).value;
                        const Tensor& bv2 = tp.node(bi).value;
                        Tensor& ga = grad_of(tp, ai);
                        Tensor& gb = grad_of(tp, bi);
                        for (std::size_t i = 0; i < g.size(); ++i) {
                            double x = (bc == Bcast::LeftScalar) ? av2.data[0] : av2.data[i];
                            double y = (bc == Bcast::RightScalar) ? bv2.data[0] : bv2.data[i];
                            double gi = g.data[i];
                            if (bc == Bcast::LeftScalar)
                                ga.data[0] += dfa(x, y) * gi;
                            else
                                ga.data[i] += dfa(x, y) * gi;
                            if (bc == Bcast::RightScalar)
                                gb.data[0] += dfb(x, y) * gi;
                            else
                                gb.data[i] += dfb(x, y) * gi;
                        }
                    });
}

template <class Fwd, class Bwd>
Var unary_elementwise(const char* op, Var x, Fwd fwd, Bwd dfx) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    Tensor out = Tensor::zeros(xv.shape);
    for (std::size_t i = 0; i < xv.size(); ++i) out.data[i] = fwd(xv.data[i]);
    std::size_t xi = x.idx;
    return t.append(op, {xi}, std::move(out), [xi, dfx](Tape& tp, std::size_t self) {
        const Tensor& g = tp.node(self).grad;
        const Tensor& xv2 = tp.node(xi).value;
        const Tensor& yv = tp.node(self).value;
        Tensor& gx = grad_of(tp, xi);
        for (std::size_t i = 0; i < g.size(); ++i)
            gx.data[i] += dfx(xv2.data[i], yv.data[i]) * g.data[i];
    });
}

} // namespace

Var add(Var a, Var b) {
    return binary_elementwise(
        "add", a, b, [](double x, double y) { return x + y; },
        [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
    return binary_elementwise(
        "sub", a, b, [](double x, double y) { return x - y; },
        [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
    return binary_elementwise(
        "mul", a, b, [](double x, double y) { return x * y; },
        [](double, double y) { return y; }, [](double x, double) { return x; });
}

Var relu(Var x) {
    // relu'(0) := 0
    return unary_elementwise(
        "relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
        [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var x) {
    return unary_elementwise(
        "sigmoid", x,
        [](double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                                       : std::exp(v) / (1.0 + std::exp(v)); },
        [](double, double s) { return s * (1.0 - s); });
}

Var rsqrt(Var x) {
    return unary_elementwise(
        "rsqrt", x, [](double v) { return 1.0 / std::sqrt(v); },
        [](double v, double y) { return -0.5 * y / v; });
}

Var scale(Var x, double c) {
    return unary_elementwise(
        "scale", x, [c](double v) { return c * v; },
        [c](double, double) { return c; });
}

Var add_const(Var x, double c) {
    return unary_elementwise(
        "add_const", x, [c](double v) { return v + c; },
        [](double, double) { return 1.0; });
}

Var binary_entropy(Var p) {
    auto h = [](double v) {
        if (v <= 0.0 || v >= 1.0) return 0.0;
        return -v * std::log(v) - (1.0 - v) * std::log(1.0 - v);
    };
    auto dh = [](double v, double) {
        if (v <= 0.0 || v >= 1.0) return 0.0;
        return std::log((1.0 - v) / v);
    };
    return unary_elementwise("binary_entropy", p, h, dh);
}

Var matmul(Var a, Var b) {
    require_same_tape(a, b);
    Tape& t = *a.tape;
    Tensor out = matmul_value(t.value(a), t.value(b));
    std::size_t ai = a.idx, bi = b.idx;
    return t.append("matmul", {ai, bi}, std::move(out), [ai, bi](Tape& tp, std::size_t self) {
        const Tensor& g = tp.node(self).grad;
        const Tensor& av = tp.node(ai).value;
        const Tensor& bv = tp.node(bi).value;
        Tensor& ga = grad_of(tp, ai);
        Tensor& gb = grad_of(tp, bi);
        const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
        // d(a) += g . b^T
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < k; ++p) {
                double acc = 0.0;
                const double* gr = &g.data[i * n];
                const double* br = &bv.data[p * n];
                for (std::size_t j = 0; j < n; ++j) acc += gr[j] * br[j];
                ga.data[i * k + p] += acc;
            }
        // d(b) += a^T . g
        for (std::size_t i = 0; i < m; ++i) {
            const double* ar = &av.data[i * k];
            const double* gr = &g.data[i * n];
            for (std::size_t p = 0; p < k; ++p) {
                const double apv = ar[p];
                if (apv == 0.0) continue;
                double* gbr = &gb.data[p * n];
                for (std::size_t j = 0; j < n; ++j) gbr[j] += apv * gr[j];
            }
        }
    });
}

Var add_bias(Var x, Var bias) {
    require_same_tape(x, bias);
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    const Tensor& bv = t.value(bias);
    if (xv.rank() != 2 || bv.size() != xv.cols())
        throw DimensionError("add_bias: bias length must equal column count");
    Tensor out = xv;
    const std::size_t r = xv.rows(), c = xv.cols();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out.data[i * c + j] += bv.data[j];
    std::size_t xi = x.idx, bi = bias.idx;
    return t.append("add_bias", {xi, bi}, std::move(out), [xi, bi](Tape& tp, std::size_t self) {
        const Tensor& g = tp.node(self).grad;
        Tensor& gx = grad_of(tp, xi);
        Tensor& gb = grad_of(tp, bi);
        const std::size_t r = g.rows(), c = g.cols();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                gx.data[i * c + j] += g.data[i * c + j];
                gb.data[j] += g.data[i * c + j];
            }
    });
}

Var sum(Var x) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    double s = 0.0;
    for (double v : xv.data) s += v;
    std::size_t xi = x.idx;
    return t.append("sum", {xi}, Tensor::scalar(s), [xi](Tape& tp, std::size_t self) {
        double g = tp.node(self).grad.data[0];
        Tensor& gx = grad_of(tp, xi);
        for (double& v : gx.data) v += g;
    });
}

Var mean(Var x) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    if (xv.size() == 0) throw DimensionError("mean: empty tensor");
    double s = 0.0;
    for (double v : xv.data) s += v;
    const double inv = 1.0 / static_cast<double>(xv.size());
    std::size_t xi = x.idx;
    return t.append("mean", {xi}, Tensor::scalar(s * inv), [xi, inv](Tape& tp, std::size_t self) {
        double g = tp.node(self).grad.data[0] * inv;
        Tensor& gx = grad_of(tp, xi);
        for (double& v : gx.data) v += g;
    });
}

Var pick(Var x, std::size_t flat_index) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    if (flat_index >= xv.size()) throw std::out_of_range("pick: index out of range");
    std::size_t xi = x.idx;
    return t.append("pick", {xi}, Tensor::scalar(xv.data[flat_index]),
                    [xi, flat_index](Tape& tp, std::size_t self) {
                        grad_of(tp, xi).data[flat_index] += tp.node(self).grad.data[0];
                    });
}

Var gather(Var x, std::vector<std::size_t> indices) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    Tensor out = Tensor::zeros({indices.size()});
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= xv.size()) throw std::out_of_range("gather: index out of range");
        out.data[i] = xv.data[indices[i]];
    }
    std::size_t xi = x.idx;
    return t.append("gather", {xi}, std::move(out),
                    [xi, idx = std::move(indices)](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        Tensor& gx = grad_of(tp, xi);
                        for (std::size_t i = 0; i < idx.size(); ++i)
                            gx.data[idx[i]] += g.data[i];
                    });
}

namespace {

// Stable per-row cross-entropy; returns loss and leaves softmax in `soft`.
double row_cross_entropy(const double* logits, std::size_t n, std::size_t target,
                         std::vector<double>& soft) {
    double mx = logits[0];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    double lse = 0.0;
    soft.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        soft[i] = std::exp(logits[i] - mx);
        lse += soft[i];
    }
    for (std::size_t i = 0; i < n; ++i) soft[i] /= lse;
    return std::log(lse) + mx - logits[target];
}

} // namespace

Var softmax_cross_entropy(Var logits, std::size_t target) {
    Tape& t = *logits.tape;
    const Tensor& lv = t.value(logits);
    const std::size_t n = lv.size();
    if (n == 0) throw DimensionError("softmax_cross_entropy: empty logits");
    if (target >= n) throw std::out_of_range("softmax_cross_entropy: target out of range");
    std::vector<double> soft;
    double loss = row_cross_entropy(lv.data.data(), n, target, soft);
    std::size_t li = logits.idx;
    return t.append("softmax_ce", {li}, Tensor::scalar(loss),
                    [li, target, soft = std::move(soft)](Tape& tp, std::size_t self) {
                        double g = tp.node(self).grad.data[0];
                        Tensor& gl = grad_of(tp, li);
                        for (std::size_t i = 0; i < soft.size(); ++i)
                            gl.data[i] += g * (soft[i] - (i == target ? 1.0 : 0.0));
                    });
}

Var softmax_cross_entropy_mean(Var logits, std::vector<std::size_t> targets) {
    Tape& t = *logits.tape;
    const Tensor& lv = t.value(logits);
    const std::size_t rows = lv.rows(), n = lv.cols();
    if (targets.size() != rows)
        throw DimensionError("softmax_cross_entropy_mean: one target per row required");
    std::vector<double> soft_all(rows * n);
    std::vector<double> soft;
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (targets[r] >= n) throw std::out_of_range("softmax_cross_entropy_mean: target");
        total += row_cross_entropy(&lv.data[r * n], n, targets[r], soft);
        std::copy(soft.begin(), soft.end(), soft_all.begin() + r * n);
    }
    const double inv = 1.0 / static_cast<double>(rows);
    std::size_t li = logits.idx;
    return t.append("softmax_ce_mean", {li}, Tensor::scalar(total * inv),
                    [li, n, inv, tg = std::move(targets),
                     soft_all = std::move(soft_all)](Tape& tp, std::size_t self) {
                        double g = tp.node(self).grad.data[0] * inv;
                        Tensor& gl = grad_of(tp, li);
                        for (std::size_t r = 0; r < tg.size(); ++r)
                            for (std::size_t i = 0; i < n; ++i)
                                gl.data[r * n + i] +=
                                    g * (soft_all[r * n + i] - (i == tg[r] ? 1.0 : 0.0));
                    });
}

Var weighted_degree(Var w_dir, const std::vector<DirEdge>& edges, std::size_t n,
                    double self_loop) {
    Tape& t = *w_dir.tape;
    const Tensor& wv = t.value(w_dir);
    if (wv.size() != edges.size())
        throw DimensionError("weighted_degree: one weight per directed edge required");
    Tensor out = Tensor::full({n}, self_loop);
    for (std::size_t e = 0; e < edges.size(); ++e) out.data[edges[e].dst] += wv.data[e];
    std::size_t wi = w_dir.idx;
    return t.append("weighted_degree", {wi}, std::move(out),
                    [wi, es = edges](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        Tensor& gw = grad_of(tp, wi);
                        for (std::size_t e = 0; e < es.size(); ++e)
                            gw.data[e] += g.data[es[e].dst];
                    });
}

Var edge_coef(Var w_dir, Var dinv, const std::vector<DirEdge>& edges) {
    require_same_tape(w_dir, dinv);
    Tape& t = *w_dir.tape;
    const Tensor& wv = t.value(w_dir);
    const Tensor& dv = t.value(dinv);
    if (wv.size() != edges.size()) throw DimensionError("edge_coef: weight count mismatch");
    Tensor out = Tensor::zeros({edges.size()});
    for (std::size_t e = 0; e < edges.size(); ++e)
        out.data[e] = wv.data[e] * dv.data[edges[e].src] * dv.data[edges[e].dst];
    std::size_t wi = w_dir.idx, di = dinv.idx;
    return t.append("edge_coef", {wi, di}, std::move(out),
                    [wi, di, es = edges](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        const Tensor& wv2 = tp.node(wi).value;
                        const Tensor& dv2 = tp.node(di).value;
                        Tensor& gw = grad_of(tp, wi);
                        Tensor& gd = grad_of(tp, di);
                        for (std::size_t e = 0; e < es.size(); ++e) {
                            const double du = dv2.data[es[e].src];
                            const double dvv = dv2.data[es[e].dst];
                            const double w = wv2.data[e];
                            gw.data[e] += du * dvv * g.data[e];
                            gd.data[es[e].src] += w * dvv * g.data[e];
                            gd.data[es[e].dst] += w * du * g.data[e];
                        }
                    });
}

Var aggregate(Var h, Var coef, Var self_scale, const std::vector<DirEdge>& edges) {
    require_same_tape(h, coef);
    require_same_tape(h, self_scale);
    Tape& t = *h.tape;
    const Tensor& hv = t.value(h);
    const Tensor& cv = t.value(coef);
    const Tensor& sv = t.value(self_scale);
    const std::size_t n = hv.rows(), d = hv.cols();
    if (cv.size() != edges.size()) throw DimensionError("aggregate: coef count mismatch");
    if (sv.size() != n) throw DimensionError("aggregate: self_scale length mismatch");
    Tensor out = Tensor::zeros({n, d});
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t j = 0; j < d; ++j) out.data[v * d + j] = sv.data[v] * hv.data[v * d + j];
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double c = cv.data[e];
        const double* src = &hv.data[edges[e].src * d];
        double* dst = &out.data[edges[e].dst * d];
        for (std::size_t j = 0; j < d; ++j) dst[j] += c * src[j];
    }
    std::size_t hi = h.idx, ci = coef.idx, si = self_scale.idx;
    return t.append("aggregate", {hi, ci, si}, std::move(out),
                    [hi, ci, si, es = edges](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        const Tensor& hv2 = tp.node(hi).value;
                        const Tensor& cv2 = tp.node(ci).value;
                        const Tensor& sv2 = tp.node(si).value;
                        Tensor& gh = grad_of(tp, hi);
                        Tensor& gc = grad_of(tp, ci);
                        Tensor& gs = grad_of(tp, si);
                        const std::size_t n = hv2.rows(), d = hv2.cols();
                        for (std::size_t v = 0; v < n; ++v)
                            for (std::size_t j = 0; j < d; ++j) {
                                gh.data[v * d + j] += sv2.data[v] * g.data[v * d + j];
                                gs.data[v] += hv2.data[v * d + j] * g.data[v * d + j];
                            }
                        for (std::size_t e = 0; e < es.size(); ++e) {
                            const double c = cv2.data[e];
                            const double* gout = &g.data[es[e].dst * d];
                            const double* src = &hv2.data[es[e].src * d];
                            double* gsrc = &gh.data[es[e].src * d];
                            double acc = 0.0;
                            for (std::size_t j = 0; j < d; ++j) {
                                gsrc[j] += c * gout[j];
                                acc += src[j] * gout[j];
                            }
                            gc.data[e] += acc;
                        }
                    });
}

Var segment_mean(Var h, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
    Tape& t = *h.tape;
    const Tensor& hv = t.value(h);
    const std::size_t d = hv.cols();
    Tensor out = Tensor::zeros({ranges.size(), d});
    for (std::size_t s = 0; s < ranges.size(); ++s) {
        const auto [b, e] = ranges[s];
        if (e < b || e > hv.rows()) throw DimensionError("segment_mean: bad range");
        if (e == b) continue; // empty graph -> zero row
        const double inv = 1.0 / static_cast<double>(e - b);
        for (std::size_t v = b; v < e; ++v)
            for (std::size_t j = 0; j < d; ++j) out.data[s * d + j] += inv * hv.data[v * d + j];
    }
    std::size_t hi = h.idx;
    return t.append("segment_mean", {hi}, std::move(out),
                    [hi, rs = ranges](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        Tensor& gh = grad_of(tp, hi);
                        const std::size_t d = g.cols();
                        for (std::size_t s = 0; s < rs.size(); ++s) {
                            const auto [b, e] = rs[s];
                            if (e == b) continue;
                            const double inv = 1.0 / static_cast<double>(e - b);
                            for (std::size_t v = b; v < e; ++v)
                                for (std::size_t j = 0; j < d; ++j)
                                    gh.data[v * d + j] += inv * g.data[s * d + j];
                        }
                    });
}

Var row_mask(Var x, std::vector<double> mask) {
    Tape& t = *x.tape;
    const Tensor& xv = t.value(x);
    if (mask.size() != xv.rows()) throw DimensionError("row_mask: one factor per row required");
    Tensor out = xv;
    const std::size_t c = xv.cols();
    for (std::size_t i = 0; i < mask.size(); ++i)
        for (std::size_t j = 0; j < c; ++j) out.data[i * c + j] *= mask[i];
    std::size_t xi = x.idx;
    return t.append("row_mask", {xi}, std::move(out),
                    [xi, m = std::move(mask)](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        Tensor& gx = grad_of(tp, xi);
                        const std::size_t c = g.cols();
                        for (std::size_t i = 0; i < m.size(); ++i)
                            for (std::size_t j = 0; j < c; ++j)
                                gx.data[i * c + j] += m[i] * g.data[i * c + j];
                    });
}

Var affine_of_scalar(Var s, std::size_t n, double a, double b) {
    Tape& t = *s.tape;
    const Tensor& sv = t.value(s);
    if (sv.size() != 1) throw DimensionError("affine_of_scalar: scalar input required");
    Tensor out = Tensor::full({n}, a * sv.data[0] + b);
    std::size_t si = s.idx;
    return t.append("affine_of_scalar", {si}, std::move(out),
                    [si, a](Tape& tp, std::size_t self) {
                        const Tensor& g = tp.node(self).grad;
                        double acc = 0.0;
                        for (double v : g.data) acc += v;
                        grad_of(tp, si).data[0] += a * acc;
                    });
}

} // namespace edgeval
