#ifndef EDGEVAL_ADAM_HPP
#define EDGEVAL_ADAM_HPP

#include <vector>

#include "edgeval/tensor.hpp"

namespace edgeval {

/// Adam with bias correction. Moment tensors are allocated lazily on the
/// first step and must keep their parameter shapes thereafter.
class Adam {
public:
    explicit Adam(double lr = 0.001, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);

    std::size_t steps_taken() const { return step_; }
    double learning_rate() const { return lr_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::size_t step_ = 0;
    std::vector<Tensor> m_, v_;
};

} // namespace edgeval

#endif
