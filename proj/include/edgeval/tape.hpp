#ifndef EDGEVAL_TAPE_HPP
#define EDGEVAL_TAPE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "edgeval/tensor.hpp"

namespace edgeval {

class Tape;

/// Lightweight handle to a node on a tape.
struct Var {
    Tape* tape = nullptr;
    std::size_t idx = 0;
};

/// Directed edge of a (batched) graph, endpoints are node row indices.
struct DirEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
};

/// Reverse-mode autodiff tape. Nodes are appended in evaluation order, so
/// index order is a topological order of the DAG and the backward sweep
/// visits each node exactly once.
class Tape {
public:
    struct Node {
        const char* op;
        std::vector<std::size_t> parents;
        Tensor value;
        Tensor grad;
        std::function<void(Tape&, std::size_t)> backward; // null for leaves
    };

    Var input(Tensor value);

    const Tensor& value(Var v) const { return nodes_[v.idx].value; }
    const Tensor& grad(Var v) const { return nodes_[v.idx].grad; }
    std::size_t size() const { return nodes_.size(); }

    /// Propagates d(root)/d(node) into every node reachable from root.
    /// root must be scalar.
    void backward(Var root);

    Var append(const char* op, std::vector<std::size_t> parents, Tensor value,
               std::function<void(Tape&, std::size_t)> bwd);

    Node& node(std::size_t i) { return nodes_[i]; }
    const Node& node(std::size_t i) const { return nodes_[i]; }

private:
    std::vector<Node> nodes_;
};

// ---- elementwise / linear algebra ----
Var add(Var a, Var b);      // equal shapes or scalar broadcast
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var relu(Var x);
Var sigmoid(Var x);
Var rsqrt(Var x);           // x^{-1/2}, x > 0
Var scale(Var x, double c);
Var add_const(Var x, double c);
Var matmul(Var a, Var b);
Var add_bias(Var x, Var bias);        // bias row vector added to every row
Var sum(Var x);                        // -> scalar
Var mean(Var x);                       // -> scalar
Var pick(Var x, std::size_t flat_index); // -> scalar
Var gather(Var x, std::vector<std::size_t> indices); // vector gather
Var binary_entropy(Var p);             // -p ln p - (1-p) ln(1-p), elementwise

/// Cross-entropy of a single logit vector against a class index,
/// evaluated in log-sum-exp form. Gradient is softmax - one_hot(target).
Var softmax_cross_entropy(Var logits, std::size_t target);

/// Mean cross-entropy over the rows of a logits matrix.
Var softmax_cross_entropy_mean(Var logits, std::vector<std::size_t> targets);

// ---- graph message-passing kernels ----

/// deg_v = self_loop + sum of w over directed edges entering v.
Var weighted_degree(Var w_dir, const std::vector<DirEdge>& edges, std::size_t n,
                    double self_loop = 1.0);

/// coef_e = w_e * dinv[src_e] * dinv[dst_e] per directed edge.
Var edge_coef(Var w_dir, Var dinv, const std::vector<DirEdge>& edges);

/// out_v = self_scale_v * H_v + sum_{(u->v)} coef_e * H_u.
Var aggregate(Var h, Var coef, Var self_scale, const std::vector<DirEdge>& edges);

/// Per-segment row mean; an empty segment yields a zero row.
Var segment_mean(Var h, const std::vector<std::pair<std::size_t, std::size_t>>& ranges);

/// Multiplies row i by mask[i] (constant mask).
Var row_mask(Var x, std::vector<double> mask);

/// Length-n vector with every element a*s + b, s a scalar node.
Var affine_of_scalar(Var s, std::size_t n, double a, double b);

} // namespace edgeval

#endif
