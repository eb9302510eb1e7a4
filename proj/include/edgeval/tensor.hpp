#ifndef EDGEVAL_TENSOR_HPP
#define EDGEVAL_TENSOR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeval {

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dense row-major tensor of doubles. Rank 0 (scalar), 1 and 2 are used.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<std::size_t> s, std::vector<double> d);

    static Tensor scalar(double v);
    static Tensor zeros(std::vector<std::size_t> s);
    static Tensor full(std::vector<std::size_t> s, double v);
    static Tensor vec(std::vector<double> d);
    static Tensor matrix(std::size_t r, std::size_t c, std::vector<double> d);

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t rows() const;
    std::size_t cols() const;
    bool is_scalar() const { return data.size() == 1 && shape.empty(); }

    double& at(std::size_t i) { return data[i]; }
    double at(std::size_t i) const { return data[i]; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
    void check_finite(const char* where) const;
};

std::size_t shape_size(const std::vector<std::size_t>& shape);

// Plain (non-tape) helpers used by oracles and optimizer code.
Tensor matmul_value(const Tensor& a, const Tensor& b);

} // namespace edgeval

#endif
