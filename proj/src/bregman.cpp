#include "tavi/bregman.hpp"

#include <cmath>
#include <string>

namespace tavi {

void BregmanParams::validate() const {
    if (!(p > 0.0))
        throw ConfigError("params.p must be > 0");
    if (!(p_ring > 0.0) || p_ring > p)
        throw ConfigError("params.p_ring must satisfy 0 < p_ring <= p");
    if (!(c > 0.0))
        throw ConfigError("params.c must be > 0");
    if (!(h > 0.0))
        throw ConfigError("params.h must be > 0");
    if (!(t0 > 0.0))
        throw ConfigError("params.t0 must be > 0");
}

double monitor_g(double t, const BregmanParams& params) {
    if (!(t > 0.0))
        throw NonpositiveTimeError("monitor_g: t = " + std::to_string(t) + " must be > 0");
    if (params.direct())
        return 1.0;
    const double ratio = params.p_ring / params.p;
    return (params.p / params.p_ring) * std::pow(t, 1.0 - ratio);
}

double exact_time_map(double tau, const BregmanParams& params) {
    if (params.direct())
        return params.t0 + tau;
    const double ratio = params.p_ring / params.p;
    return std::pow(std::pow(params.t0, ratio) + tau, 1.0 / ratio);
}

VectorField continuous_el_field_vector(std::span<const double> q, std::span<const double> v,
                                       double t, const Objective& obj,
                                       const BregmanParams& params) {
    if (!(t > 0.0))
        throw NonpositiveTimeError("continuous_el_field_vector: t must be > 0");
    if (q.size() != v.size())
        throw DimensionMismatchError("continuous_el_field_vector: dim(q) != dim(v)");
    const double damping = (params.p + 1.0) / t;
    const double forcing = params.c * params.p * params.p * std::pow(t, params.p - 2.0);
    VectorField field;
    field.dq.assign(v.begin(), v.end());
    field.dv = obj.grad(q);
    for (std::size_t i = 0; i < field.dv.size(); ++i)
        field.dv[i] = -damping * v[i] - forcing * field.dv[i];
    return field;
}

So3Field continuous_el_field_so3(const Rotation& r, const Vec3& omega, double t,
                                 const So3Objective& obj, const BregmanParams& params) {
    if (!(t > 0.0))
        throw NonpositiveTimeError("continuous_el_field_so3: t must be > 0");
    const double damping = (params.p + 1.0) / t;
    const double forcing = params.c * params.p * params.p * std::pow(t, params.p - 2.0);
    So3Field field;
    field.dR = r.matrix() * hat(omega);
    field.dOmega = -(damping * omega + forcing * obj.grad_left(r));
    return field;
}

} // namespace tavi
