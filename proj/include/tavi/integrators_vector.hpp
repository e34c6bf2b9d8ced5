#pragma once

#include <span>
#include <vector>

#include "tavi/bregman.hpp"
#include "tavi/objectives.hpp"

namespace tavi {

/// Extended state for vector-space runs: position q, conjugate momentum r,
/// physical time qt, iteration index k.
struct VectorState {
    std::vector<double> q;
    std::vector<double> r;
    double qt = 0.0;
    long k = 0;
};

/// Makes the zero-momentum start (q0, r = 0, qt = t0, k = 0).
[[nodiscard]] VectorState vector_init(std::vector<double> q0, const BregmanParams& params);

// One explicit step of each scheme. Each performs exactly one gradient
// evaluation and throws NonFiniteError if any output component diverges.
//
// Adaptive Lagrangian update:
//   qt+ = qt + h (p/pr) qt^(1-pr/p)
//   q+  = q + (h p^3 / (pr^2 qt^(p-1+2pr/p))) r - (c h^2 p^4 / pr^2) qt^(p-2pr/p) grad f(q)
//   r+  = (pr^2 qt^(p+pr/p) / (h p^3 qt+^(1-pr/p))) (q+ - q)
[[nodiscard]] VectorState ltvi_adaptive_step(const VectorState& s, const Objective& obj,
                                             const BregmanParams& params);

// Direct Lagrangian update (the p_ring = p specialization):
//   qt+ = qt + h;  q+ = q + (h p / qt^(p+1)) r - c h^2 p^2 qt^(p-2) grad f(q)
//   r+  = (qt^(p+1) / (h p)) (q+ - q)
[[nodiscard]] VectorState ltvi_direct_step(const VectorState& s, const Objective& obj,
                                           const BregmanParams& params);

// Adaptive Hamiltonian update (momentum first, symplectic-Euler structure):
//   qt+ = qt + h (p/pr) qt^(1-pr/p)
//   r+  = r - (p^2/pr) c h qt^(2p-pr/p) grad f(q)
//   q+  = q + (p^2/pr) h qt^(-p-pr/p) r+
[[nodiscard]] VectorState htvi_adaptive_step(const VectorState& s, const Objective& obj,
                                             const BregmanParams& params);

// Direct Hamiltonian update:
//   qt+ = qt + h;  r+ = r - h c p qt^(2p-1) grad f(q);  q+ = q + h p qt^(-p-1) r+
[[nodiscard]] VectorState htvi_direct_step(const VectorState& s, const Objective& obj,
                                           const BregmanParams& params);

using VectorStepper = VectorState (*)(const VectorState&, const Objective&,
                                      const BregmanParams&);

/// Picks the stepper for (lagrangian?, direct?).
[[nodiscard]] VectorStepper select_vector_stepper(bool lagrangian, bool direct);

struct FlowPoint {
    std::vector<double> q;
    std::vector<double> v;
};

/// Classical fourth-order one-step integration of the continuous field from
/// (q0, v0) at t0 to t1 with n_steps uniform steps in physical time.
/// Deterministic; global error O((dt)^4).
[[nodiscard]] FlowPoint reference_flow_vector(std::span<const double> q0,
                                              std::span<const double> v0, double t0, double t1,
                                              long n_steps, const Objective& obj,
                                              const BregmanParams& params);

} // namespace tavi
