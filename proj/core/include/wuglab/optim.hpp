#pragma once

#include <vector>

#include "wuglab/tensor.hpp"

namespace wuglab::numerics {

/// Adadelta accumulators for one parameter tensor: running averages of
/// squared gradients and squared updates. Both stay non-negative.
struct AdadeltaState {
    Tensor avg_sq_grad;    // E[g^2]
    Tensor avg_sq_update;  // E[dx^2]
    double decay = 0.95;
    double epsilon = 1e-6;

    static AdadeltaState like(const Tensor& param, double decay = 0.95, double epsilon = 1e-6);
};

/// One Adadelta update, in place:
///   E[g^2]  <- rho E[g^2] + (1-rho) g^2
///   dx       = -sqrt(E[dx^2]+eps) / sqrt(E[g^2]+eps) * g
///   E[dx^2] <- rho E[dx^2] + (1-rho) dx^2
///   x       <- x + dx
void adadelta_step(Tensor& param, const Tensor& grad, AdadeltaState& state);

/// Scales all gradients by max_norm/norm when their global L2 norm exceeds
/// max_norm. Returns the pre-clip norm. max_norm <= 0 disables clipping.
double clip_global_norm(std::vector<Tensor*> grads, double max_norm);

}  // namespace wuglab::numerics
