#include "edgeval/tensor.hpp"

#include <cmath>

namespace edgeval {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
    if (shape_size(shape) != data.size())
        throw DimensionError("tensor: shape does not match data length");
}

Tensor Tensor::scalar(double v) {
    Tensor t;
    t.data = {v};
    return t;
}

Tensor Tensor::zeros(std::vector<std::size_t> s) {
    Tensor t;
    t.data.assign(shape_size(s), 0.0);
    t.shape = std::move(s);
    return t;
}

Tensor Tensor::full(std::vector<std::size_t> s, double v) {
    Tensor t;
    t.data.assign(shape_size(s), v);
    t.shape = std::move(s);
    return t;
}

Tensor Tensor::vec(std::vector<double> d) {
    Tensor t;
    t.shape = {d.size()};
    t.data = std::move(d);
    return t;
}

Tensor Tensor::matrix(std::size_t r, std::size_t c, std::vector<double> d) {
    return Tensor({r, c}, std::move(d));
}

std::size_t Tensor::rows() const {
    if (shape.size() != 2) throw DimensionError("tensor: rows() on non-matrix");
    return shape[0];
}

std::size_t Tensor::cols() const {
    if (shape.size() != 2) throw DimensionError("tensor: cols() on non-matrix");
    return shape[1];
}

bool Tensor::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

void Tensor::check_finite(const char* where) const {
    if (!all_finite())
        throw std::runtime_error(std::string("non-finite value in ") + where);
}

Tensor matmul_value(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions disagree");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor out = Tensor::zeros({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const double* ar = &a.data[i * k];
        double* orow = &out.data[i * n];
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ar[p];
            if (av == 0.0) continue;
            const double* br = &b.data[p * n];
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * br[j];
        }
    }
    return out;
}

} // namespace edgeval
