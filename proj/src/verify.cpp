#include "tavi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tavi/rng.hpp"

namespace tavi {

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double e : v)
        s += e * e;
    return std::sqrt(s);
}

// D1 L_d: derivative with respect to q_k (vector of dimension d).
std::vector<double> d1_discrete_lagrangian(std::span<const double> qk, double qtk,
                                           std::span<const double> qk1, const Objective& obj,
                                           const BregmanParams& params) {
    const double p = params.p;
    const double ratio = params.p_ring / p;
    const double quad = (params.p_ring * params.p_ring) / (params.h * p * p * p) *
                        std::pow(qtk, p - 1.0 + 2.0 * ratio);
    const double pot = params.c * params.h * p * std::pow(qtk, 2.0 * p - 1.0);
    std::vector<double> out = obj.grad(qk);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = -quad * (qk1[i] - qk[i]) - pot * out[i];
    return out;
}

// D3 L_d: derivative with respect to q_{k+1}.
std::vector<double> d3_discrete_lagrangian(std::span<const double> qk, double qtk,
                                           std::span<const double> qk1,
                                           const BregmanParams& params) {
    const double p = params.p;
    const double ratio = params.p_ring / p;
    const double quad = (params.p_ring * params.p_ring) / (params.h * p * p * p) *
                        std::pow(qtk, p - 1.0 + 2.0 * ratio);
    std::vector<double> out(qk.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = quad * (qk1[i] - qk[i]);
    return out;
}

} // namespace

double discrete_lagrangian_vector(std::span<const double> qk, double qtk,
                                  std::span<const double> qk1, double /*qtk1*/,
                                  const Objective& obj, const BregmanParams& params) {
    if (!(qtk > 0.0))
        throw NonpositiveTimeError("discrete_lagrangian_vector: qtk must be > 0");
    if (qk.size() != qk1.size())
        throw DimensionMismatchError("discrete_lagrangian_vector: dim(qk) != dim(qk1)");
    const double p = params.p;
    const double ratio = params.p_ring / p;
    double dq2 = 0.0;
    for (std::size_t i = 0; i < qk.size(); ++i) {
        const double d = qk1[i] - qk[i];
        dq2 += d * d;
    }
    const double quad = (params.p_ring * params.p_ring) / (2.0 * params.h * p * p * p) *
                        std::pow(qtk, p - 1.0 + 2.0 * ratio);
    const double pot = params.c * params.h * p * std::pow(qtk, 2.0 * p - 1.0);
    return quad * dq2 - pot * obj.eval(qk);
}

DelResidual del_residual_vector(const VectorState& prev, const VectorState& mid,
                                const VectorState& next, const Objective& obj,
                                const BregmanParams& params) {
    const std::vector<double> d1 = d1_discrete_lagrangian(mid.q, mid.qt, next.q, obj, params);
    const std::vector<double> d3 = d3_discrete_lagrangian(prev.q, prev.qt, mid.q, params);
    const double gk = monitor_g(mid.qt, params);
    const double gkm1 = monitor_g(prev.qt, params);
    std::vector<double> defect(d1.size());
    for (std::size_t i = 0; i < d1.size(); ++i)
        defect[i] = gk * d1[i] + gkm1 * d3[i];

    DelResidual res;
    res.position_residual = norm(defect);
    res.time_residual = std::abs(next.qt - mid.qt - params.h * gk);
    return res;
}

DelResidual del_residual_framework2(const VectorState& prev, const VectorState& mid,
                                    const VectorState& next, const Objective& obj,
                                    const BregmanParams& params) {
    // The multiplier term of the second framework drops a factor of qt', which
    // only alters the lambda equation; the q-equation keeps the same weights
    // dq/dtau = g(qt) on shell.
    const std::vector<double> d1 = d1_discrete_lagrangian(mid.q, mid.qt, next.q, obj, params);
    const std::vector<double> d3 = d3_discrete_lagrangian(prev.q, prev.qt, mid.q, params);
    const double wk = monitor_g(mid.qt, params);
    const double wkm1 = monitor_g(prev.qt, params);
    double acc = 0.0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        const double e = wk * d1[i] + wkm1 * d3[i];
        acc += e * e;
    }
    DelResidual res;
    res.position_residual = std::sqrt(acc);
    res.time_residual = std::abs(next.qt - mid.qt - params.h * wk);
    return res;
}

DelResidual del_residual_so3(const So3State& /*prev*/, const So3State& mid,
                             const So3State& next, const So3Objective& obj,
                             const BregmanParams& params) {
    const double p = params.p;
    const double ratio = params.p_ring / p;
    const double pp = p / params.p_ring;
    const double qt = mid.qt;

    const Vec3 grad = obj.grad_left(mid.R);
    const Vec3 impulse = mid.mu - (params.c * params.h * p * std::pow(qt, 2.0 * p - 1.0)) * grad;

    // F recovered from the stored attitudes.
    const Mat3 f = mid.R.matrix().transposed() * next.R.matrix();

    const double transport = monitor_g(qt, params) / monitor_g(next.qt, params);
    const Vec3 mu_defect = next.mu - transport * (f.transposed() * impulse);

    // sin(theta) axis(F) = vee((F - F^T)/2) must reproduce a_k.
    const Vec3 a = (params.h * p * pp * pp * std::pow(qt, 1.0 - p - 2.0 * ratio)) * impulse;
    const Mat3 skew = f - f.transposed();
    const Vec3 sin_axis{0.5 * skew(2, 1), 0.5 * skew(0, 2), 0.5 * skew(1, 0)};
    const Vec3 a_defect = sin_axis - a;

    DelResidual res;
    res.position_residual = std::max(mu_defect.norm(), a_defect.norm());
    res.time_residual = std::abs(next.qt - qt - params.h * monitor_g(qt, params));
    return res;
}

double rescaling_check(const BregmanParams& params, const Objective& obj, double tau_end,
                       double h) {
    if (!(tau_end > 0.0))
        throw ConfigError("rescaling_check: tau_end must be > 0");
    BregmanParams run = params;
    run.h = h;

    VectorState state = vector_init(std::vector<double>(static_cast<std::size_t>(obj.dim), 0.0),
                                    run);
    const long n = std::lround(tau_end / h);

    // Progressive reference solve of the p-Bregman flow, resolved much finer
    // than the stepper so the comparison error is dominated by the stepper.
    const double dt_ref = 5e-4;
    std::vector<double> qref(state.q);
    std::vector<double> vref(state.q.size(), 0.0);
    double tref = run.t0;

    double worst = 0.0;
    for (long k = 0; k < n; ++k) {
        state = ltvi_adaptive_step(state, obj, run);
        const double t_target = state.qt;
        const long steps = std::max(1L, std::lround((t_target - tref) / dt_ref));
        const FlowPoint fp = reference_flow_vector(qref, vref, tref, t_target, steps, obj, run);
        qref = fp.q;
        vref = fp.v;
        tref = t_target;

        double dev = 0.0;
        for (std::size_t i = 0; i < qref.size(); ++i) {
            const double d = state.q[i] - qref[i];
            dev += d * d;
        }
        worst = std::max(worst, std::sqrt(dev));
    }
    if (!std::isfinite(worst))
        throw NonFiniteError("rescaling_check: deviation diverged");
    return worst;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

struct TrajectoryChecks {
    double worst_position = 0.0; ///< scaled by 1 + ||r_k||
    double worst_time = 0.0;
    double worst_framework_gap = 0.0; ///< scaled by 1 + ||r_k||
};

TrajectoryChecks run_vector_residuals(VectorStepper stepper, const Objective& obj,
                                      const BregmanParams& params, long steps) {
    std::vector<VectorState> traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    traj.push_back(vector_init(std::vector<double>(static_cast<std::size_t>(obj.dim), 0.0),
                               params));
    for (long k = 0; k < steps; ++k)
        traj.push_back(stepper(traj.back(), obj, params));

    TrajectoryChecks out;
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        const DelResidual r1 =
            del_residual_vector(traj[k - 1], traj[k], traj[k + 1], obj, params);
        const DelResidual r2 =
            del_residual_framework2(traj[k - 1], traj[k], traj[k + 1], obj, params);
        const double scale = 1.0 + norm(traj[k].r);
        out.worst_position = std::max(out.worst_position, r1.position_residual / scale);
        out.worst_time = std::max(out.worst_time, r1.time_residual);
        out.worst_framework_gap =
            std::max(out.worst_framework_gap,
                     std::abs(r1.position_residual - r2.position_residual) / scale);
    }
    return out;
}

void add(std::vector<CheckResult>& results, const std::string& name, bool passed,
         const std::string& detail) {
    results.push_back({name, passed, detail});
}

} // namespace

std::vector<CheckResult> verification_suite(bool quick) {
    std::vector<CheckResult> results;
    const long vec_steps = quick ? 200 : 1000;

    const Objective quartic3 = make_quartic_objective(3);

    struct SchemeCase {
        const char* name;
        VectorStepper stepper;
        BregmanParams params;
    };
    const BregmanParams adaptive{6.0, 2.0, 1.0, 2e-4, 1.0};
    const BregmanParams direct{6.0, 6.0, 1.0, 1e-3, 1.0};
    const SchemeCase cases[] = {
        {"ltvi-adaptive", ltvi_adaptive_step, adaptive},
        {"ltvi-direct", ltvi_direct_step, direct},
        {"htvi-adaptive", htvi_adaptive_step, adaptive},
        {"htvi-direct", htvi_direct_step, direct},
    };
    for (const SchemeCase& sc : cases) {
        const TrajectoryChecks tc = run_vector_residuals(sc.stepper, quartic3, sc.params, vec_steps);
        add(results, std::string("del-residual ") + sc.name,
            tc.worst_position <= 1e-10 && tc.worst_time <= 1e-14,
            "position " + fmt(tc.worst_position) + ", time " + fmt(tc.worst_time));
        add(results, std::string("framework-equivalence ") + sc.name,
            tc.worst_framework_gap <= 1e-14, "gap " + fmt(tc.worst_framework_gap));
    }

    // Sensitivity: an off-shell perturbation must be detected.
    {
        std::vector<VectorState> traj{vector_init({0.0, 0.0, 0.0}, adaptive)};
        for (int k = 0; k < 10; ++k)
            traj.push_back(ltvi_adaptive_step(traj.back(), quartic3, adaptive));
        VectorState bent = traj[5];
        bent.q[0] += 1e-3;
        const DelResidual r = del_residual_vector(traj[4], bent, traj[6], quartic3, adaptive);
        add(results, "del-residual sensitivity (vector)", r.position_residual > 1e-6,
            "perturbed residual " + fmt(r.position_residual));
    }

    // Lie group residuals on a seeded attitude problem.
    {
        const Mat3 a = random_wahba_matrix(42);
        const So3Objective wahba = make_wahba_objective(a);
        const BregmanParams so3_params{6.0, 2.0, 1.0, 2e-4, 1.0};
        const long so3_steps = quick ? 200 : 1000;
        std::vector<So3State> traj{llgvi_init(Rotation::identity(), so3_params)};
        for (long k = 0; k < so3_steps; ++k)
            traj.push_back(llgvi_adaptive_step(traj.back(), wahba, so3_params));
        double worst_pos = 0.0, worst_time = 0.0;
        for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
            const DelResidual r =
                del_residual_so3(traj[k - 1], traj[k], traj[k + 1], wahba, so3_params);
            const double scale = 1.0 + traj[k].mu.norm();
            worst_pos = std::max(worst_pos, r.position_residual / scale);
            worst_time = std::max(worst_time, r.time_residual);
        }
        add(results, "del-residual llgvi", worst_pos <= 1e-10 && worst_time <= 1e-14,
            "position " + fmt(worst_pos) + ", time " + fmt(worst_time));

        So3State bent = traj[6];
        bent.mu.x += 1e-3;
        const DelResidual r = del_residual_so3(traj[4], traj[5], bent, wahba, so3_params);
        add(results, "del-residual sensitivity (llgvi)", r.position_residual > 1e-4,
            "perturbed residual " + fmt(r.position_residual));

        double worst_orth = 0.0;
        for (const So3State& s : traj)
            worst_orth = std::max(worst_orth, orthogonality_error(s.R.matrix()));
        add(results, "llgvi orthogonality drift", worst_orth <= 1e-8,
            "max error " + fmt(worst_orth));
    }

    // Time dilation: halving h must halve the rescaling deviation.
    {
        const Objective quartic1 = make_quartic_objective(1);
        const BregmanParams params{4.0, 2.0, 1.0, 1e-2, 1.0};
        const double tau_end = quick ? 0.4 : 0.8;
        const double e1 = rescaling_check(params, quartic1, tau_end, 1e-2);
        const double e2 = rescaling_check(params, quartic1, tau_end, 5e-3);
        const double ratio = e1 / e2;
        add(results, "rescaling first-order ratio", ratio >= 1.6 && ratio <= 2.4,
            "error(h)/error(h/2) = " + fmt(ratio));
    }

    // Gradient fidelity.
    {
        SplitMix64 rng(314);
        double worst = 0.0;
        for (int d : {1, 3, 10}) {
            const Objective obj = make_quartic_objective(d);
            const int pts = quick ? 10 : 100;
            for (int i = 0; i < pts; ++i) {
                std::vector<double> x(static_cast<std::size_t>(d));
                for (auto& e : x)
                    e = 2.0 * rng.next_symmetric();
                worst = std::max(worst, fd_check_vector(obj, x));
            }
        }
        add(results, "quartic gradient fd", worst <= 1e-6, "max deviation " + fmt(worst));

        double worst_so3 = 0.0;
        const int pts = quick ? 10 : 100;
        for (int i = 0; i < pts; ++i) {
            const Mat3 a = random_wahba_matrix(1000 + static_cast<std::uint64_t>(i));
            const So3Objective obj = make_wahba_objective(a);
            const Rotation r = rodrigues_exp(
                {rng.next_symmetric() * 2.0, rng.next_symmetric() * 2.0, rng.next_symmetric() * 2.0});
            worst_so3 = std::max(worst_so3, fd_check_so3(obj, r));
        }
        add(results, "wahba left-trivialized gradient fd", worst_so3 <= 1e-6,
            "max deviation " + fmt(worst_so3));
    }

    return results;
}

} // namespace tavi
