#pragma once

#include <span>
#include <vector>

#include "tavi/geometry.hpp"
#include "tavi/objectives.hpp"

namespace tavi {

/// Monitor function family for the fictive-to-physical time rescaling dt/dtau = g(t).
enum class MonitorKind {
    Direct,        ///< g == 1 (integration order equals target order)
    AdaptivePower, ///< g(t) = (p/p_ring) t^(1 - p_ring/p)
};

/// Parameters of one integrator configuration: target order p, integration
/// order p_ring (0 < p_ring <= p), constant c, fictive step h, and the start
/// of physical time t0 (> 0 keeps the 1/t damping and t^(p-2) forcing finite).
struct BregmanParams {
    double p = 0.0;
    double p_ring = 0.0;
    double c = 1.0;
    double h = 0.0;
    double t0 = 1.0;

    [[nodiscard]] bool direct() const { return p_ring == p; }
    [[nodiscard]] MonitorKind monitor() const {
        return direct() ? MonitorKind::Direct : MonitorKind::AdaptivePower;
    }

    /// Throws ConfigError unless all fields are strictly positive and p_ring <= p.
    void validate() const;
};

/// g(t) = (p/p_ring) t^(1 - p_ring/p); exactly 1 when p_ring == p.
/// Throws NonpositiveTimeError for t <= 0.
[[nodiscard]] double monitor_g(double t, const BregmanParams& params);

/// Exact solution of dt/dtau = g(t), t(0) = t0:
///   t(tau) = (t0^(p_ring/p) + tau)^(p/p_ring),  and  t0 + tau when p_ring == p.
[[nodiscard]] double exact_time_map(double tau, const BregmanParams& params);

/// First-order form of q'' + ((p+1)/t) q' + c p^2 t^(p-2) grad f(q) = 0.
struct VectorField {
    std::vector<double> dq;
    std::vector<double> dv;
};

[[nodiscard]] VectorField continuous_el_field_vector(std::span<const double> q,
                                                     std::span<const double> v, double t,
                                                     const Objective& obj,
                                                     const BregmanParams& params);

/// Left-trivialized field on SO(3) with J = I:
///   dR = R hat(Omega),  dOmega = -((p+1)/t) Omega - c p^2 t^(p-2) grad_L f(R)
/// (the gyroscopic term Omega x J Omega vanishes for J = I).
struct So3Field {
    Mat3 dR;
    Vec3 dOmega;
};

[[nodiscard]] So3Field continuous_el_field_so3(const Rotation& r, const Vec3& omega, double t,
                                               const So3Objective& obj,
                                               const BregmanParams& params);

} // namespace tavi
