#include <cmath>
#include <random>

#include <doctest.h>

#include "edgeval/adam.hpp"
#include "edgeval/tape.hpp"
#include "edgeval/tensor.hpp"

using namespace edgeval;

namespace {

double fd_gradient(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace

TEST_CASE("tensor construction and accessors") {
    Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.at(1, 2) == 6.0);
    CHECK(Tensor::scalar(4.0).is_scalar());
    CHECK_THROWS_AS(Tensor({2, 2}, {1.0}), DimensionError);
}

TEST_CASE("matmul_value 2x3 by 3x2") {
    Tensor a = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    Tensor b = Tensor::matrix(3, 2, {7, 8, 9, 10, 11, 12});
    Tensor c = matmul_value(a, b);
    CHECK(c.at(0, 0) == 58.0);
    CHECK(c.at(0, 1) == 64.0);
    CHECK(c.at(1, 0) == 139.0);
    CHECK(c.at(1, 1) == 154.0);
    CHECK_THROWS_AS(matmul_value(a, a), DimensionError);
}

TEST_CASE("softmax cross-entropy values") {
    Tape tape;
    SUBCASE("uniform logits give ln 2") {
        Var l = tape.input(Tensor::vec({0.0, 0.0}));
        Var ce = softmax_cross_entropy(l, 0);
        CHECK(tape.value(ce).data[0] == doctest::Approx(0.6931471805599453).epsilon(1e-12));
    }
    SUBCASE("three-class value") {
        Var l = tape.input(Tensor::vec({0.2, -0.3, 0.1}));
        Var ce = softmax_cross_entropy(l, 2);
        CHECK(tape.value(ce).data[0] == doctest::Approx(1.0208276555532594).epsilon(1e-12));
    }
    SUBCASE("extreme logits stay finite") {
        Var l = tape.input(Tensor::vec({1000.0, 0.0}));
        Var ce = softmax_cross_entropy(l, 0);
        CHECK(std::isfinite(tape.value(ce).data[0]));
        CHECK(tape.value(ce).data[0] == doctest::Approx(0.0).epsilon(1e-12));
        tape.backward(ce);
        for (double g : tape.grad(l).data) CHECK(std::isfinite(g));
    }
    SUBCASE("mean over rows") {
        Var l = tape.input(Tensor::matrix(2, 2, {1, 2, 3, 1}));
        Var ce = softmax_cross_entropy_mean(l, {0, 1});
        CHECK(tape.value(ce).data[0] == doctest::Approx(1.7200948492805976).epsilon(1e-12));
    }
}

TEST_CASE("binary entropy value and boundary safety") {
    Tape tape;
    Var p = tape.input(Tensor::vec({0.3, 0.0, 1.0, 0.5}));
    Var h = binary_entropy(p);
    const Tensor& v = tape.value(h);
    CHECK(v.data[0] == doctest::Approx(0.6108643020548935).epsilon(1e-12));
    CHECK(v.data[1] == 0.0);
    CHECK(v.data[2] == 0.0);
    CHECK(v.data[3] == doctest::Approx(0.6931471805599453).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences on a composite expression") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Tensor a = Tensor::zeros({2, 3});
        Tensor b = Tensor::zeros({3, 2});
        for (double& x : a.data) x = u(rng);
        for (double& x : b.data) x = u(rng) + 1.5; // keep rsqrt inputs positive

        auto eval = [&](const Tensor& at, const Tensor& bt) {
            Tape tape;
            Var va = tape.input(at);
            Var vb = tape.input(bt);
            Var prod = matmul(va, vb);                // 2x2
            Var s = sigmoid(prod);
            Var r = relu(add_const(prod, 0.1));
            Var loss = add(mean(mul(s, r)), scale(sum(s), 0.25));
            return std::pair{tape.value(loss).data[0], tape};
        };

        Tape tape;
        Var va = tape.input(a);
        Var vb = tape.input(b);
        Var prod = matmul(va, vb);
        Var s = sigmoid(prod);
        Var r = relu(add_const(prod, 0.1));
        Var loss = add(mean(mul(s, r)), scale(sum(s), 0.25));
        tape.backward(loss);

        for (std::size_t i = 0; i < a.size(); ++i) {
            auto f = [&](double x) {
                Tensor at = a;
                at.data[i] = x;
                return eval(at, b).first;
            };
            const double fd = fd_gradient(f, a.data[i]);
            const double an = tape.grad(va).data[i];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(std::abs(fd - an) / denom < 1e-4);
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            auto f = [&](double x) {
                Tensor bt = b;
                bt.data[i] = x;
                return eval(a, bt).first;
            };
            const double fd = fd_gradient(f, b.data[i]);
            const double an = tape.grad(vb).data[i];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(std::abs(fd - an) / denom < 1e-4);
        }
    }
}

TEST_CASE("backward is linear: grad of a*f + b*g is a*grad f + b*grad g") {
    Tensor x = Tensor::vec({0.4, -0.7, 1.2});
    auto grad_of = [&x](double ca, double cb) {
        Tape tape;
        Var vx = tape.input(x);
        Var f = sum(mul(vx, vx));
        Var g = mean(sigmoid(vx));
        Var combo = add(scale(f, ca), scale(g, cb));
        tape.backward(combo);
        return tape.grad(vx).data;
    };
    const auto gf = grad_of(1.0, 0.0);
    const auto gg = grad_of(0.0, 1.0);
    const auto gc = grad_of(2.5, -3.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(gc[i] == doctest::Approx(2.5 * gf[i] - 3.0 * gg[i]).epsilon(1e-10));
}

TEST_CASE("graph kernels differentiate correctly") {
    // 3 nodes, path 0-1-2 as 4 directed edges
    const std::vector<DirEdge> edges{{0, 1}, {1, 0}, {1, 2}, {2, 1}};
    Tensor w0 = Tensor::vec({0.8, 0.8, 0.6, 0.6});
    Tensor h0 = Tensor::matrix(3, 2, {1.0, -0.5, 0.3, 0.7, -0.2, 0.4});

    Tape tape;
    Var vw = tape.input(w0);
    Var vh = tape.input(h0);
    Var deg = weighted_degree(vw, edges, 3);
    Var dinv = rsqrt(deg);
    Var coef = edge_coef(vw, dinv, edges);
    Var self = mul(dinv, dinv);
    Var out = aggregate(vh, coef, self, edges);
    Var pooled = segment_mean(out, {{0, 3}});
    Var loss = sum(mul(pooled, pooled));
    tape.backward(loss);

    auto fd_check = [&](Tensor& t, const Tensor& grad, bool is_w) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double h = 1e-6;
            Tensor plus = t, minus = t;
            plus.data[i] += h;
            minus.data[i] -= h;
            Tape tp, tm;
            double fp, fm;
            {
                Var w = tp.input(is_w ? plus : w0);
                Var hh = tp.input(is_w ? h0 : plus);
                Var d = weighted_degree(w, edges, 3);
                Var di = rsqrt(d);
                Var c = edge_coef(w, di, edges);
                Var sl = mul(di, di);
                Var o = aggregate(hh, c, sl, edges);
                Var p = segment_mean(o, {{0, 3}});
                fp = tp.value(sum(mul(p, p))).data[0];
            }
            {
                Var w = tm.input(is_w ? minus : w0);
                Var hh = tm.input(is_w ? h0 : minus);
                Var d = weighted_degree(w, edges, 3);
                Var di = rsqrt(d);
                Var c = edge_coef(w, di, edges);
                Var sl = mul(di, di);
                Var o = aggregate(hh, c, sl, edges);
                Var p = segment_mean(o, {{0, 3}});
                fm = tm.value(sum(mul(p, p))).data[0];
            }
            const double fd = (fp - fm) / (2.0 * h);
            const double an = grad.data[i];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(std::abs(fd - an) / denom < 1e-4);
        }
    };
    fd_check(w0, tape.grad(vw), true);
    fd_check(h0, tape.grad(vh), false);
}

TEST_CASE("segment_mean yields a zero row for an empty segment") {
    Tape tape;
    Var h = tape.input(Tensor::matrix(2, 2, {1, 2, 3, 4}));
    Var p = segment_mean(h, {{0, 2}, {2, 2}});
    const Tensor& v = tape.value(p);
    CHECK(v.at(0, 0) == 2.0);
    CHECK(v.at(1, 0) == 0.0);
    CHECK(v.at(1, 1) == 0.0);
}

TEST_CASE("adam optimizer behavior") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        Tensor p = Tensor::vec({1.0, -2.0});
        Tensor g = Tensor::zeros({2});
        Adam opt(0.01);
        opt.step({&p}, {&g});
        CHECK(p.data[0] == 1.0);
        CHECK(p.data[1] == -2.0);
    }
    SUBCASE("first step moves each coordinate by about lr") {
        Tensor p = Tensor::vec({0.5, 0.5});
        Tensor g = Tensor::vec({3.0, -0.2});
        Adam opt(0.01);
        opt.step({&p}, {&g});
        // bias-corrected first step is lr * g / (|g| + eps') ~ lr * sign(g)
        CHECK(p.data[0] == doctest::Approx(0.5 - 0.01).epsilon(1e-4));
        CHECK(p.data[1] == doctest::Approx(0.5 + 0.01).epsilon(1e-4));
    }
    SUBCASE("constant-gradient steps are bounded by lr") {
        Tensor p = Tensor::vec({10.0});
        Adam opt(0.1);
        Tensor g = Tensor::vec({4.0});
        double prev = p.data[0];
        for (int i = 0; i < 50; ++i) {
            opt.step({&p}, {&g});
            CHECK(prev - p.data[0] <= 0.1 + 1e-9);
            CHECK(prev - p.data[0] >= 0.0);
            prev = p.data[0];
        }
    }
    SUBCASE("quadratic bowl converges") {
        Tensor p = Tensor::vec({3.0});
        Adam opt(0.05);
        for (int i = 0; i < 2000; ++i) {
            Tensor g = Tensor::vec({2.0 * p.data[0]});
            opt.step({&p}, {&g});
        }
        CHECK(std::abs(p.data[0]) < 1e-2);
    }
}

TEST_CASE("tape evaluation is deterministic") {
    auto run = [] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Tensor a = Tensor::zeros({4, 4});
        for (double& x : a.data) x = u(rng);
        Tape tape;
        Var v = tape.input(a);
        Var loss = mean(sigmoid(matmul(v, v)));
        tape.backward(loss);
        return std::pair{tape.value(loss).data[0], tape.grad(v).data};
    };
    const auto [l1, g1] = run();
    const auto [l2, g2] = run();
    CHECK(l1 == l2);
    CHECK(g1 == g2);
}
