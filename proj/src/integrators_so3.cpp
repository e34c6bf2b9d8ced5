#include "tavi/integrators_so3.hpp"

#include <cmath>

namespace tavi {

So3State llgvi_init(const Rotation& r0, const BregmanParams& params) {
    So3State s;
    s.R = r0;
    s.mu = {0, 0, 0};
    s.qt = params.t0;
    s.k = 0;
    return s;
}

So3State llgvi_adaptive_step(const So3State& s, const So3Objective& obj,
                             const BregmanParams& params) {
    if (!(s.qt > 0.0))
        throw NonpositiveTimeError("llgvi_adaptive_step: physical time must be > 0");

    const double p = params.p;
    const double ratio = params.p_ring / p;
    const double pp = p / params.p_ring;
    const double h = params.h;
    const double qt = s.qt;

    // impulse = mu - c h p qt^(2p-1) grad_L f(R), shared by a_k and mu+
    const Vec3 grad = obj.grad_left(s.R);
    const Vec3 impulse = s.mu - (params.c * h * p * std::pow(qt, 2.0 * p - 1.0)) * grad;

    const double acoef = h * p * pp * pp * std::pow(qt, 1.0 - p - 2.0 * ratio);
    const Vec3 a = acoef * impulse;
    const Rotation f = asin_step_map(a);

    So3State out;
    out.k = s.k + 1;
    out.qt = qt + h * monitor_g(qt, params);
    const double transport = std::pow(qt, 1.0 - ratio) / std::pow(out.qt, 1.0 - ratio);
    out.mu = transport * (f.transposed().matrix() * impulse);
    out.R = s.R * f;

    if (!out.mu.finite() || !std::isfinite(out.qt) || !out.R.matrix().finite())
        throw NonFiniteError("llgvi_adaptive_step: state diverged");
    return out;
}

} // namespace tavi
