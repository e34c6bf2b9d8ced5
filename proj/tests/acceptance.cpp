// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tavi/harness.hpp"
#include "tavi/integrators_so3.hpp"
#include "tavi/rng.hpp"
#include "tavi/verify.hpp"

using namespace tavi;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
    double runtime_limit_s;
};

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v)
        s += e * e;
    return std::sqrt(s);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- criterion 1: LTVI and HTVI f-traces agree to 1e-3 relative ------------

bool ltvi_htvi_agreement(std::string& detail) {
    const Objective obj = make_quartic_objective(3);
    const BregmanParams params{6, 2, 1, 1e-3, 1};
    VectorState l = vector_init({0, 0, 0}, params);
    VectorState h = l;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        l = ltvi_adaptive_step(l, obj, params);
        h = htvi_adaptive_step(h, obj, params);
        const double fl = obj.eval(l.q);
        const double fh = obj.eval(h.q);
        worst = std::max(worst, std::abs(fl - fh) / (1.0 + std::abs(fh)));
    }
    detail = "max relative f gap " + fmt(worst) + " (tol 1e-3)";
    return worst <= 1e-3;
}

// ---- criterion 2: tuned adaptive needs fewer iterations than tuned direct --

long iterations_to_target(VectorStepper stepper, const BregmanParams& params,
                          const Objective& obj, double target, long cap) {
    VectorState s = vector_init(std::vector<double>(static_cast<std::size_t>(obj.dim), 0.0),
                                params);
    for (long k = 1; k <= cap; ++k) {
        try {
            s = stepper(s, obj, params);
        } catch (const Error&) {
            return cap + 1; // diverged: counts as never reaching the target
        }
        if (std::abs(obj.eval(s.q)) < target)
            return k;
    }
    return cap + 1;
}

bool adaptive_beats_direct(std::string& detail) {
    const Objective obj = make_quartic_objective(3);
    const long cap = 2000000;

    // documented tuning grids, 5 fictive steps each
    const double direct_grid[5] = {3e-4, 1e-3, 3e-3, 1e-2, 3e-2};
    const double adaptive_grid[5] = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};

    long best_direct = cap + 1, best_adaptive = cap + 1;
    double h_direct = 0.0, h_adaptive = 0.0;
    for (double h : direct_grid) {
        const BregmanParams params{6, 6, 1, h, 1};
        const long it = iterations_to_target(ltvi_direct_step, params, obj, 1e-6, cap);
        if (it < best_direct) {
            best_direct = it;
            h_direct = h;
        }
    }
    for (double h : adaptive_grid) {
        const BregmanParams params{6, 2, 1, h, 1};
        const long it = iterations_to_target(ltvi_adaptive_step, params, obj, 1e-6, cap);
        if (it < best_adaptive) {
            best_adaptive = it;
            h_adaptive = h;
        }
    }
    detail = "adaptive " + std::to_string(best_adaptive) + " iters (h=" + fmt(h_adaptive) +
             ") vs direct " + std::to_string(best_direct) + " iters (h=" + fmt(h_direct) + ")";
    return best_adaptive < best_direct && best_direct <= cap;
}

// ---- criterion 3: continuous-flow rate on the quartic ----------------------

double flow_loglog_slope(double p, std::string& detail) {
    const Objective obj = make_quartic_objective(2);
    const BregmanParams params{p, p, 1, 1e-3, 1};
    std::vector<double> q{0.0, 0.0}, v{0.0, 0.0};
    double t = 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    const int nsamp = 200;
    for (int j = 0; j <= nsamp; ++j) {
        const double tj = std::pow(10.0, 2.0 * j / nsamp); // log-spaced in [1, 100]
        if (tj > t) {
            const long steps = std::max(1L, std::lround((tj - t) / 1e-3));
            const FlowPoint fp = reference_flow_vector(q, v, t, tj, steps, obj, params);
            q = fp.q;
            v = fp.v;
            t = tj;
        }
        if (t >= 10.0) {
            const double x = std::log(t);
            const double y = std::log(std::abs(obj.eval(q)) + 1e-300);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    detail += "p=" + fmt(p) + ": slope " + fmt(slope) + " vs band [" + fmt(-1.25 * p) + "," +
              fmt(-0.75 * p) + "]; ";
    return slope;
}

bool continuous_rate(std::string& detail) {
    bool ok = true;
    for (double p : {2.0, 4.0}) {
        const double slope = flow_loglog_slope(p, detail);
        ok = ok && slope >= -1.25 * p && slope <= -0.75 * p;
    }
    detail += "(flow decays faster than the t^-p guarantee on this objective)";
    return ok;
}

// ---- criterion 4: time-dilation ratio test ----------------------------------

bool time_dilation(std::string& detail) {
    const Objective obj = make_quartic_objective(1);
    const BregmanParams params{4, 2, 1, 1e-2, 1};
    const double e1 = rescaling_check(params, obj, 0.8, 1e-2);
    const double e2 = rescaling_check(params, obj, 0.8, 5e-3);
    const double ratio = e1 / e2;
    detail = "error(h)/error(h/2) = " + fmt(ratio) + " (band [1.6, 2.4])";
    return ratio >= 1.6 && ratio <= 2.4;
}

// ---- criterion 5: discrete EL residuals, on-shell and perturbed -------------

bool del_residuals(std::string& detail) {
    const Objective obj = make_quartic_objective(3);
    struct Case {
        const char* name;
        VectorStepper stepper;
        BregmanParams params;
    };
    const Case cases[] = {
        {"ltvi-a", ltvi_adaptive_step, {6, 2, 1, 2e-4, 1}},
        {"ltvi-d", ltvi_direct_step, {6, 6, 1, 1e-3, 1}},
        {"htvi-a", htvi_adaptive_step, {6, 2, 1, 2e-4, 1}},
        {"htvi-d", htvi_direct_step, {6, 6, 1, 1e-3, 1}},
    };
    double worst_pos = 0.0, worst_time = 0.0;
    for (const Case& cs : cases) {
        std::vector<VectorState> traj{vector_init({0, 0, 0}, cs.params)};
        for (int k = 0; k < 1000; ++k)
            traj.push_back(cs.stepper(traj.back(), obj, cs.params));
        for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
            const DelResidual r =
                del_residual_vector(traj[k - 1], traj[k], traj[k + 1], obj, cs.params);
            worst_pos = std::max(worst_pos, r.position_residual / (1.0 + vec_norm(traj[k].r)));
            worst_time = std::max(worst_time, r.time_residual);
        }
    }

    const So3Objective wahba = make_wahba_objective(random_wahba_matrix(1));
    const BregmanParams so3_params{6, 2, 1, 5e-5, 1};
    std::vector<So3State> straj{llgvi_init(Rotation::identity(), so3_params)};
    for (int k = 0; k < 1000; ++k)
        straj.push_back(llgvi_adaptive_step(straj.back(), wahba, so3_params));
    for (std::size_t k = 1; k + 1 < straj.size(); ++k) {
        const DelResidual r =
            del_residual_so3(straj[k - 1], straj[k], straj[k + 1], wahba, so3_params);
        worst_pos = std::max(worst_pos, r.position_residual / (1.0 + straj[k].mu.norm()));
        worst_time = std::max(worst_time, r.time_residual);
    }

    // perturbation sensitivity at epsilon = 1e-3
    std::vector<VectorState> traj{vector_init({0, 0, 0}, cases[0].params)};
    for (int k = 0; k < 12; ++k)
        traj.push_back(ltvi_adaptive_step(traj.back(), obj, cases[0].params));
    VectorState bent = traj[6];
    bent.q[0] += 1e-3;
    const double perturbed =
        del_residual_vector(traj[5], bent, traj[7], obj, cases[0].params).position_residual;
    So3State sbent = straj[8];
    sbent.mu.x += 1e-3;
    const double sperturbed =
        del_residual_so3(straj[6], straj[7], sbent, wahba, so3_params).position_residual;

    detail = "on-shell position " + fmt(worst_pos) + " (scaled, tol 1e-10), time " +
             fmt(worst_time) + "; perturbed " + fmt(perturbed) + " / " + fmt(sperturbed) +
             " (must be >= 1e-6)";
    return worst_pos <= 1e-10 && worst_time <= 1e-14 && perturbed >= 1e-6 &&
           sperturbed >= 1e-6;
}

// ---- criterion 6: orthogonality drift over 1e4 group steps ------------------

bool orthogonality_drift(std::string& detail) {
    const So3Objective wahba = make_wahba_objective(random_wahba_matrix(1));
    const BregmanParams params{6, 2, 1, 5e-5, 1};
    So3State s = llgvi_init(Rotation::identity(), params);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        s = llgvi_adaptive_step(s, wahba, params);
        worst = std::max(worst, orthogonality_error(s.R.matrix()));
    }
    detail = "max orthogonality error " + fmt(worst) + " over 1e4 steps (tol 1e-8)";
    return worst <= 1e-8;
}

// ---- criterion 7: Wahba convergence across seeds ----------------------------

bool wahba_convergence(std::string& detail) {
    bool ok = true;
    long worst_iters = 0;
    double worst_dist = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RunConfig cfg = parse_config(R"({
            "problem": {"kind": "wahba", "seed": )" + std::to_string(seed) + R"(},
            "method": {"kind": "llgvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 5e-5},
            "delta": 1e-9, "max_iters": 100000, "trace_stride": 5000
        })");
        const RunResult r = run_trajectory(cfg);
        const Rotation rstar = wahba_optimal(random_wahba_matrix(seed));

        // rebuild the terminal attitude to measure ||R - R*||_F
        const So3Objective obj = make_wahba_objective(random_wahba_matrix(seed));
        So3State s = llgvi_init(Rotation::identity(), cfg.params);
        for (long k = 0; k < r.iterations; ++k)
            s = llgvi_adaptive_step(s, obj, cfg.params);
        const double dist = (s.R.matrix() - rstar.matrix()).frobenius_norm();

        ok = ok && r.converged && r.iterations < 100000 && dist <= 1e-3;
        worst_iters = std::max(worst_iters, r.iterations);
        worst_dist = std::max(worst_dist, dist);
    }
    detail = "5 seeds converged, max iterations " + std::to_string(worst_iters) +
             ", max ||R - R*||_F " + fmt(worst_dist) + " (tol 1e-3)";
    return ok;
}

// ---- criterion 8: gradient fidelity -----------------------------------------

bool gradient_fidelity(std::string& detail) {
    SplitMix64 rng(271828);
    double worst = 0.0;
    for (int d : {1, 3, 10}) {
        const Objective obj = make_quartic_objective(d);
        for (int i = 0; i < 100; ++i) {
            std::vector<double> x(static_cast<std::size_t>(d));
            for (auto& e : x)
                e = 2.0 * rng.next_symmetric();
            worst = std::max(worst, fd_check_vector(obj, x));
        }
    }
    double worst_so3 = 0.0;
    for (int i = 0; i < 100; ++i) {
        const So3Objective obj =
            make_wahba_objective(random_wahba_matrix(9000 + static_cast<std::uint64_t>(i)));
        const Rotation r = rodrigues_exp({2.0 * rng.next_symmetric(), 2.0 * rng.next_symmetric(),
                                          2.0 * rng.next_symmetric()});
        worst_so3 = std::max(worst_so3, fd_check_so3(obj, r));
    }
    detail = "quartic max fd deviation " + fmt(worst) + ", wahba " + fmt(worst_so3) +
             " (tol 1e-6)";
    return worst <= 1e-6 && worst_so3 <= 1e-6;
}

// ---- criterion 9: direct-specialization identity ----------------------------

bool direct_specialization(std::string& detail) {
    const Objective obj = make_quartic_objective(3);
    SplitMix64 rng(31415);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        VectorState s;
        s.q = {2.0 * rng.next_symmetric(), 2.0 * rng.next_symmetric(),
               2.0 * rng.next_symmetric()};
        s.r = {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        s.qt = 0.5 + 2.0 * rng.next_uniform();
        BregmanParams params;
        params.p = 2.0 + 4.0 * rng.next_uniform();
        params.p_ring = params.p;
        params.h = 1e-3;

        const VectorState la = ltvi_adaptive_step(s, obj, params);
        const VectorState ld = ltvi_direct_step(s, obj, params);
        const VectorState ha = htvi_adaptive_step(s, obj, params);
        const VectorState hd = htvi_direct_step(s, obj, params);
        for (std::size_t i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(la.q[i] - ld.q[i]) / (1.0 + std::abs(ld.q[i])));
            worst = std::max(worst, std::abs(la.r[i] - ld.r[i]) / (1.0 + std::abs(ld.r[i])));
            worst = std::max(worst, std::abs(ha.q[i] - hd.q[i]) / (1.0 + std::abs(hd.q[i])));
            worst = std::max(worst, std::abs(ha.r[i] - hd.r[i]) / (1.0 + std::abs(hd.r[i])));
            worst = std::max(worst, std::abs(la.qt - ld.qt));
            worst = std::max(worst, std::abs(ha.qt - hd.qt));
        }
    }
    detail = "max scaled deviation " + fmt(worst) + " over 200 seeded steps (tol 1e-15)";
    return worst <= 1e-15;
}

// ---- criterion 10: determinism of every seeded configuration ----------------

bool determinism(std::string& detail) {
    const std::vector<std::string> configs = {
        R"({"problem": {"kind": "quartic", "dim": 3},
            "method": {"kind": "ltvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 0.001}, "max_iters": 1000})",
        R"({"problem": {"kind": "quartic", "dim": 3},
            "method": {"kind": "htvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 0.001}, "max_iters": 1000})",
        R"({"problem": {"kind": "quartic", "dim": 3},
            "method": {"kind": "ltvi", "mode": "direct"},
            "params": {"p": 6, "h": 0.01}, "max_iters": 2000})",
        R"({"problem": {"kind": "quartic", "dim": 3},
            "method": {"kind": "ltvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 0.0003}, "max_iters": 2000})",
        R"({"problem": {"kind": "wahba", "seed": 1},
            "method": {"kind": "llgvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 5e-5}, "max_iters": 30000,
            "trace_stride": 100})",
        R"({"problem": {"kind": "wahba", "seed": 2},
            "method": {"kind": "llgvi", "mode": "adaptive"},
            "params": {"p": 6, "p_ring": 2, "h": 5e-5}, "max_iters": 30000,
            "trace_stride": 100})",
    };
    for (const std::string& text : configs) {
        const RunConfig cfg = parse_config(text);
        const std::string a = format_trace(run_trajectory(cfg).trace, TraceFormat::Csv);
        const std::string b = format_trace(run_trajectory(cfg).trace, TraceFormat::Csv);
        if (a != b) {
            detail = "trace bytes differ between consecutive runs";
            return false;
        }
    }
    detail = std::to_string(configs.size()) + " seeded configs byte-identical across reruns";
    return true;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 ltvi-htvi agreement", ltvi_htvi_agreement, 1.0},
        {"2 adaptive beats direct", adaptive_beats_direct, 30.0},
        {"3 continuous rate", continuous_rate, 10.0},
        {"4 time dilation", time_dilation, 5.0},
        {"5 discrete EL residuals", del_residuals, 5.0},
        {"6 orthogonality", orthogonality_drift, 5.0},
        {"7 wahba convergence", wahba_convergence, 30.0},
        {"8 gradient fidelity", gradient_fidelity, 5.0},
        {"9 direct specialization", direct_specialization, 1.0},
        {"10 determinism", determinism, 60.0},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        const auto begin = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
        const bool in_budget = elapsed < c.runtime_limit_s;
        ok = ok && in_budget;
        std::printf("%s  criterion %-26s [%5.2fs]  %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    elapsed, detail.c_str());
        if (!ok)
            ++failures;
    }
    return failures;
}
