#pragma once

#include "tavi/bregman.hpp"
#include "tavi/geometry.hpp"
#include "tavi/objectives.hpp"

namespace tavi {

/// Extended state on SO(3): attitude R, left-trivialized momentum mu,
/// physical time qt, iteration index k. Orthogonality of R is monitored by
/// the harness, never corrected: each step multiplies by an exact rotation.
struct So3State {
    Rotation R = Rotation::identity();
    Vec3 mu{};
    double qt = 0.0;
    long k = 0;
};

/// Zero-momentum start (R0, mu = 0, qt = t0, k = 0).
[[nodiscard]] So3State llgvi_init(const Rotation& r0, const BregmanParams& params);

// One explicit step of the adaptive Lie-group scheme (J = I):
//   a   = (h p^3 / pr^2) qt^(1-p-2pr/p) [mu - c h p qt^(2p-1) grad_L f(R)]
//   F   = exp((asin||a|| / ||a||) hat(a))            requires ||a|| < 1
//   qt+ = qt + h (p/pr) qt^(1-pr/p)
//   mu+ = (qt^(1-pr/p) / qt+^(1-pr/p)) F^T [mu - c h p qt^(2p-1) grad_L f(R)]
//   R+  = R F
// Exactly one left-trivialized gradient evaluation per step. Throws
// StepTooLargeError when ||a|| >= 1 and NonFiniteError on divergence.
[[nodiscard]] So3State llgvi_adaptive_step(const So3State& s, const So3Objective& obj,
                                           const BregmanParams& params);

} // namespace tavi
