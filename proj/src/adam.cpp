#include "edgeval/adam.hpp"

#include <cmath>

namespace edgeval {

void Adam::step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size())
        throw DimensionError("adam: parameter/gradient count mismatch");
    if (m_.empty()) {
        for (const Tensor* p : params) {
            m_.push_back(Tensor::zeros(p->shape));
            v_.push_back(Tensor::zeros(p->shape));
        }
    }
    if (m_.size() != params.size())
        throw DimensionError("adam: parameter count changed between steps");

    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& p = *params[k];
        const Tensor& g = *grads[k];
        if (!p.same_shape(g) || !p.same_shape(m_[k]))
            throw DimensionError("adam: shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m_[k].data[i] = beta1_ * m_[k].data[i] + (1.0 - beta1_) * g.data[i];
            v_[k].data[i] = beta2_ * v_[k].data[i] + (1.0 - beta2_) * g.data[i] * g.data[i];
            const double mhat = m_[k].data[i] / bc1;
            const double vhat = v_[k].data[i] / bc2;
            p.data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

} // namespace edgeval
