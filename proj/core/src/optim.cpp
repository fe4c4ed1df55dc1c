#include "wuglab/optim.hpp"

#include <cmath>

namespace wuglab::numerics {

AdadeltaState AdadeltaState::like(const Tensor& param, double decay, double epsilon) {
    AdadeltaState s;
    s.avg_sq_grad = Tensor(param.shape());
    s.avg_sq_update = Tensor(param.shape());
    s.decay = decay;
    s.epsilon = epsilon;
    return s;
}

void adadelta_step(Tensor& param, const Tensor& grad, AdadeltaState& state) {
    if (!param.same_shape(grad) || !param.same_shape(state.avg_sq_grad))
        throw ShapeError("adadelta_step: parameter " + param.shape_str() + ", gradient " + grad.shape_str() +
                         ", state " + state.avg_sq_grad.shape_str());
    const double rho = state.decay;
    const double eps = state.epsilon;
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad[i];
        state.avg_sq_grad[i] = rho * state.avg_sq_grad[i] + (1.0 - rho) * g * g;
        const double dx = -std::sqrt(state.avg_sq_update[i] + eps) / std::sqrt(state.avg_sq_grad[i] + eps) * g;
        state.avg_sq_update[i] = rho * state.avg_sq_update[i] + (1.0 - rho) * dx * dx;
        param[i] += dx;
    }
    check_finite(param, "adadelta_step");
}

double clip_global_norm(std::vector<Tensor*> grads, double max_norm) {
    double sq = 0.0;
    for (const Tensor* g : grads)
        for (double x : g->values()) sq += x * x;
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (Tensor* g : grads)
            for (double& x : g->values()) x *= scale;
    }
    return norm;
}

}  // namespace wuglab::numerics
