#include "tavi/integrators_vector.hpp"

#include <cmath>
#include <string>

namespace tavi {

namespace {

void check_state(const VectorState& s, const char* scheme) {
    if (!(s.qt > 0.0))
        throw NonpositiveTimeError(std::string(scheme) + ": physical time must be > 0");
    if (s.q.size() != s.r.size())
        throw DimensionMismatchError(std::string(scheme) + ": dim(q) != dim(r)");
}

void check_finite(const VectorState& s, const char* scheme) {
    bool ok = std::isfinite(s.qt);
    for (double e : s.q)
        ok = ok && std::isfinite(e);
    for (double e : s.r)
        ok = ok && std::isfinite(e);
    if (!ok)
        throw NonFiniteError(std::string(scheme) + ": state diverged (non-finite components)");
}

} // namespace

VectorState vector_init(std::vector<double> q0, const BregmanParams& params) {
    VectorState s;
    s.r.assign(q0.size(), 0.0);
    s.q = std::move(q0);
    s.qt = params.t0;
    s.k = 0;
    return s;
}

VectorState ltvi_adaptive_step(const VectorState& s, const Objective& obj,
                               const BregmanParams& params) {
    check_state(s, "ltvi_adaptive_step");
    const double p = params.p;
    const double ratio = params.p_ring / p; // == 1 in the direct specialization
    const double pp = p / params.p_ring;    // p/pr
    const double h = params.h;
    const double qt = s.qt;

    const std::vector<double> grad = obj.grad(s.q);

    VectorState out;
    out.k = s.k + 1;
    out.qt = qt + h * monitor_g(qt, params);

    // h p^3/pr^2 = h p (p/pr)^2 and c h^2 p^4/pr^2 = c h^2 p^2 (p/pr)^2
    const double rcoef = h * p * pp * pp / std::pow(qt, p - 1.0 + 2.0 * ratio);
    const double gcoef = params.c * h * h * p * p * pp * pp * std::pow(qt, p - 2.0 * ratio);
    const std::size_t d = s.q.size();
    out.q.resize(d);
    out.r.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        out.q[i] = s.q[i] + rcoef * s.r[i] - gcoef * grad[i];

    const double mcoef =
        std::pow(qt, p + ratio) / (h * p * pp * pp * std::pow(out.qt, 1.0 - ratio));
    for (std::size_t i = 0; i < d; ++i)
        out.r[i] = mcoef * (out.q[i] - s.q[i]);

    check_finite(out, "ltvi_adaptive_step");
    return out;
}

VectorState ltvi_direct_step(const VectorState& s, const Objective& obj,
                             const BregmanParams& params) {
    check_state(s, "ltvi_direct_step");
    const double p = params.p;
    const double h = params.h;
    const double qt = s.qt;

    const std::vector<double> grad = obj.grad(s.q);

    VectorState out;
    out.k = s.k + 1;
    out.qt = qt + h;

    const double rcoef = h * p / std::pow(qt, p + 1.0);
    const double gcoef = params.c * h * h * p * p * std::pow(qt, p - 2.0);
    const std::size_t d = s.q.size();
    out.q.resize(d);
    out.r.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        out.q[i] = s.q[i] + rcoef * s.r[i] - gcoef * grad[i];

    const double mcoef = std::pow(qt, p + 1.0) / (h * p);
    for (std::size_t i = 0; i < d; ++i)
        out.r[i] = mcoef * (out.q[i] - s.q[i]);

    check_finite(out, "ltvi_direct_step");
    return out;
}

VectorState htvi_adaptive_step(const VectorState& s, const Objective& obj,
                               const BregmanParams& params) {
    check_state(s, "htvi_adaptive_step");
    const double p = params.p;
    const double ratio = params.p_ring / p;
    const double pp = p / params.p_ring;
    const double h = params.h;
    const double qt = s.qt;

    const std::vector<double> grad = obj.grad(s.q);

    VectorState out;
    out.k = s.k + 1;
    out.qt = qt + h * monitor_g(qt, params);

    // p^2/pr = p (p/pr)
    const double gcoef = params.c * h * p * pp * std::pow(qt, 2.0 * p - ratio);
    const double rcoef = h * p * pp * std::pow(qt, -p - ratio);
    const std::size_t d = s.q.size();
    out.q.resize(d);
    out.r.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.r[i] = s.r[i] - gcoef * grad[i];
        out.q[i] = s.q[i] + rcoef * out.r[i];
    }

    check_finite(out, "htvi_adaptive_step");
    return out;
}

VectorState htvi_direct_step(const VectorState& s, const Objective& obj,
                             const BregmanParams& params) {
    check_state(s, "htvi_direct_step");
    const double p = params.p;
    const double h = params.h;
    const double qt = s.qt;

    const std::vector<double> grad = obj.grad(s.q);

    VectorState out;
    out.k = s.k + 1;
    out.qt = qt + h;

    const double gcoef = params.c * h * p * std::pow(qt, 2.0 * p - 1.0);
    const double rcoef = h * p * std::pow(qt, -p - 1.0);
    const std::size_t d = s.q.size();
    out.q.resize(d);
    out.r.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.r[i] = s.r[i] - gcoef * grad[i];
        out.q[i] = s.q[i] + rcoef * out.r[i];
    }

    check_finite(out, "htvi_direct_step");
    return out;
}

VectorStepper select_vector_stepper(bool lagrangian, bool direct) {
    if (lagrangian)
        return direct ? ltvi_direct_step : ltvi_adaptive_step;
    return direct ? htvi_direct_step : htvi_adaptive_step;
}

FlowPoint reference_flow_vector(std::span<const double> q0, std::span<const double> v0,
                                double t0, double t1, long n_steps, const Objective& obj,
                                const BregmanParams& params) {
    if (!(t0 > 0.0) || !(t1 > t0))
        throw NonpositiveTimeError("reference_flow_vector: need 0 < t0 < t1");
    if (n_steps < 1)
        throw ConfigError("reference_flow_vector: n_steps must be >= 1");
    if (q0.size() != v0.size())
        throw DimensionMismatchError("reference_flow_vector: dim(q0) != dim(v0)");

    const std::size_t d = q0.size();
    const double dt = (t1 - t0) / static_cast<double>(n_steps);
    std::vector<double> q(q0.begin(), q0.end());
    std::vector<double> v(v0.begin(), v0.end());
    std::vector<double> qs(d), vs(d);

    for (long step = 0; step < n_steps; ++step) {
        const double t = t0 + static_cast<double>(step) * dt;
        const VectorField k1 = continuous_el_field_vector(q, v, t, obj, params);
        for (std::size_t i = 0; i < d; ++i) {
            qs[i] = q[i] + 0.5 * dt * k1.dq[i];
            vs[i] = v[i] + 0.5 * dt * k1.dv[i];
        }
        const VectorField k2 = continuous_el_field_vector(qs, vs, t + 0.5 * dt, obj, params);
        for (std::size_t i = 0; i < d; ++i) {
            qs[i] = q[i] + 0.5 * dt * k2.dq[i];
            vs[i] = v[i] + 0.5 * dt * k2.dv[i];
        }
        const VectorField k3 = continuous_el_field_vector(qs, vs, t + 0.5 * dt, obj, params);
        for (std::size_t i = 0; i < d; ++i) {
            qs[i] = q[i] + dt * k3.dq[i];
            vs[i] = v[i] + dt * k3.dv[i];
        }
        const VectorField k4 = continuous_el_field_vector(qs, vs, t + dt, obj, params);
        for (std::size_t i = 0; i < d; ++i) {
            q[i] += dt / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
            v[i] += dt / 6.0 * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
        }
        for (std::size_t i = 0; i < d; ++i)
            if (!std::isfinite(q[i]) || !std::isfinite(v[i]))
                throw NonFiniteError("reference_flow_vector: flow diverged at t = " +
                                     std::to_string(t + dt));
    }
    return {std::move(q), std::move(v)};
}

} // namespace tavi
