#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "tavi/integrators_vector.hpp"
#include "tavi/rng.hpp"
#include "tavi/verify.hpp"

using namespace tavi;

namespace {

// f(x) = (x-1)^4 in one dimension; grad f(0) = -4.
Objective quartic_1d() {
    Objective obj;
    obj.dim = 1;
    obj.f_star = 0.0;
    obj.eval = [](std::span<const double> x) { return std::pow(x[0] - 1.0, 4.0); };
    obj.grad = [](std::span<const double> x) {
        return std::vector<double>{4.0 * std::pow(x[0] - 1.0, 3.0)};
    };
    return obj;
}

Objective zero_objective(int dim) {
    Objective obj;
    obj.dim = dim;
    obj.eval = [](std::span<const double>) { return 0.0; };
    obj.grad = [dim](std::span<const double>) {
        return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
    };
    return obj;
}

Objective counting(const Objective& inner, std::shared_ptr<long> evals) {
    Objective obj = inner;
    auto grad = inner.grad;
    obj.grad = [grad, evals](std::span<const double> x) {
        ++*evals;
        return grad(x);
    };
    return obj;
}

VectorState state_1d(double q, double r, double qt) {
    VectorState s;
    s.q = {q};
    s.r = {r};
    s.qt = qt;
    return s;
}

// linear interpolation of a stored scalar trajectory at physical time t
double interp_at(const std::vector<double>& ts, const std::vector<double>& qs, double t) {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (ts[i] >= t) {
            const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
            return qs[i - 1] + w * (qs[i] - qs[i - 1]);
        }
    return qs.back();
}

} // namespace

TEST_CASE("stationary start: zero momentum at a critical point stays put") {
    const Objective zero = zero_objective(2);
    VectorState s;
    s.q = {0.4, -0.2};
    s.r = {0.0, 0.0};
    s.qt = 1.0;
    const BregmanParams adaptive{6, 2, 1, 0.1, 1};
    const BregmanParams direct{6, 6, 1, 0.1, 1};

    for (auto [stepper, params] :
         {std::pair{ltvi_adaptive_step, adaptive}, std::pair{ltvi_direct_step, direct},
          std::pair{htvi_adaptive_step, adaptive}, std::pair{htvi_direct_step, direct}}) {
        const VectorState out = stepper(s, zero, params);
        CHECK(out.q[0] == 0.4);
        CHECK(out.q[1] == -0.2);
        CHECK(out.r[0] == 0.0);
        CHECK(out.r[1] == 0.0);
        CHECK(out.k == 1);
        CHECK(out.qt == doctest::Approx(s.qt + params.h * monitor_g(s.qt, params)).epsilon(1e-15));
        CHECK(out.qt > s.qt);
    }
}

TEST_CASE("ltvi_adaptive single-step values (d = 1 oracle)") {
    // q = 0, r = 0, qt = 1, p = p_ring = 2, c = 1, h = 0.1, grad f(0) = -4:
    //   q+ = -(c h^2 p^4/pr^2) qt^(p-2pr/p) grad = -(0.01*16/4)*(-4) = 0.16
    //   r+ = (pr^2 qt^(p+pr/p)/(h p^3 qt+^(1-pr/p))) dq = (4/(0.1*8)) * 0.16 = 0.8
    const Objective obj = quartic_1d();
    const BregmanParams params{2, 2, 1, 0.1, 1};
    const VectorState out = ltvi_adaptive_step(state_1d(0, 0, 1), obj, params);
    CHECK(out.qt == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(out.q[0] == doctest::Approx(0.16).epsilon(1e-14));
    CHECK(out.r[0] == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("ltvi_direct single-step values (d = 1 oracle)") {
    // q = 0, r = 1, qt = 1, p = 2, h = 0.1, grad f(0) = -4:
    //   q+ = (0.1*2/1)*1 - 0.01*4*1*(-4) = 0.2 + 0.16 = 0.36
    //   r+ = (1/(0.1*2)) * 0.36 = 1.8
    const Objective obj = quartic_1d();
    const BregmanParams params{2, 2, 1, 0.1, 1};
    const VectorState out = ltvi_direct_step(state_1d(0, 1, 1), obj, params);
    CHECK(out.qt == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(out.q[0] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(out.r[0] == doctest::Approx(1.8).epsilon(1e-14));
}

TEST_CASE("htvi single-step values (d = 1 oracle), adaptive equals direct at pr = p") {
    // q = 0, r = 0, qt = 1, p = 2, h = 0.1, grad f(0) = -4:
    //   r+ = -2 * 1 * 0.1 * 1 * (-4) = 0.8;  q+ = 2 * 0.1 * 1 * 0.8 = 0.16
    const Objective obj = quartic_1d();
    const BregmanParams params{2, 2, 1, 0.1, 1};
    const VectorState a = htvi_adaptive_step(state_1d(0, 0, 1), obj, params);
    const VectorState d = htvi_direct_step(state_1d(0, 0, 1), obj, params);
    for (const VectorState& out : {a, d}) {
        CHECK(out.r[0] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(out.q[0] == doctest::Approx(0.16).epsilon(1e-14));
    }
}

TEST_CASE("q-displacement scales as h^2 when r = 0") {
    const Objective obj = quartic_1d();
    const VectorState s = state_1d(0, 0, 1);
    for (auto stepper : {ltvi_adaptive_step, htvi_adaptive_step}) {
        const BregmanParams ph{4, 2, 1, 0.1, 1};
        BregmanParams ph2 = ph;
        ph2.h = ph.h / 2.0;
        const double dq_h = stepper(s, obj, ph).q[0];
        const double dq_h2 = stepper(s, obj, ph2).q[0];
        CHECK(dq_h / dq_h2 == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("adaptive steppers specialize to the direct ones at pr = p (200 seeded states)") {
    const Objective obj = make_quartic_objective(3);
    SplitMix64 rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        VectorState s;
        s.q = {2.0 * rng.next_symmetric(), 2.0 * rng.next_symmetric(), 2.0 * rng.next_symmetric()};
        s.r = {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        s.qt = 0.5 + 2.0 * rng.next_uniform();
        BregmanParams params;
        params.p = 2.0 + 4.0 * rng.next_uniform();
        params.p_ring = params.p;
        params.c = 1.0;
        params.h = 1e-3;
        params.t0 = 1.0;

        const VectorState la = ltvi_adaptive_step(s, obj, params);
        const VectorState ld = ltvi_direct_step(s, obj, params);
        const VectorState ha = htvi_adaptive_step(s, obj, params);
        const VectorState hd = htvi_direct_step(s, obj, params);
        for (int i = 0; i < 3; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            CHECK(std::abs(la.q[idx] - ld.q[idx]) <= 1e-15 * (1.0 + std::abs(ld.q[idx])));
            CHECK(std::abs(la.r[idx] - ld.r[idx]) <= 1e-15 * (1.0 + std::abs(ld.r[idx])));
            CHECK(std::abs(ha.q[idx] - hd.q[idx]) <= 1e-15 * (1.0 + std::abs(hd.q[idx])));
            CHECK(std::abs(ha.r[idx] - hd.r[idx]) <= 1e-15 * (1.0 + std::abs(hd.r[idx])));
        }
        CHECK(la.qt == ld.qt);
        CHECK(ha.qt == hd.qt);
    }
}

TEST_CASE("each step performs exactly one gradient evaluation") {
    auto evals = std::make_shared<long>(0);
    const Objective obj = counting(make_quartic_objective(2), evals);
    const BregmanParams adaptive{6, 2, 1, 1e-3, 1};
    const BregmanParams direct{6, 6, 1, 1e-3, 1};

    VectorState s = vector_init({0.0, 0.0}, adaptive);
    for (auto [stepper, params] :
         {std::pair{ltvi_adaptive_step, adaptive}, std::pair{ltvi_direct_step, direct},
          std::pair{htvi_adaptive_step, adaptive}, std::pair{htvi_direct_step, direct}}) {
        *evals = 0;
        VectorState cur = s;
        for (int k = 0; k < 25; ++k)
            cur = stepper(cur, obj, params);
        CHECK(*evals == 25);
    }
}

TEST_CASE("LTVI and HTVI trajectories agree to 1e-3 relative in f") {
    const Objective obj = make_quartic_objective(3);
    const BregmanParams params{6, 2, 1, 1e-3, 1};
    VectorState l = vector_init({0.0, 0.0, 0.0}, params);
    VectorState h = l;
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        l = ltvi_adaptive_step(l, obj, params);
        h = htvi_adaptive_step(h, obj, params);
        const double fl = obj.eval(l.q);
        const double fh = obj.eval(h.q);
        worst = std::max(worst, std::abs(fl - fh) / (1.0 + std::abs(fh)));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("physical-time recursion tracks the exact map at first order") {
    const Objective obj = quartic_1d();
    const BregmanParams base{6, 2, 1, 0.0, 1};
    auto max_time_err = [&](double h) {
        BregmanParams params = base;
        params.h = h;
        VectorState s = vector_init({0.0}, params);
        double worst = 0.0;
        const long n = std::lround(1.0 / h);
        for (long k = 1; k <= n; ++k) {
            s = ltvi_adaptive_step(s, obj, params);
            worst = std::max(worst,
                             std::abs(s.qt - exact_time_map(static_cast<double>(k) * h, params)));
        }
        return worst;
    };
    const double ratio = max_time_err(0.01) / max_time_err(0.005);
    CHECK(ratio >= 1.7);
    CHECK(ratio <= 2.3);
}

TEST_CASE("steppers converge to the continuous flow at first order on [1, 2]") {
    const Objective obj = quartic_1d();
    struct Case {
        VectorStepper stepper;
        BregmanParams params;
    };
    const Case cases[] = {
        {ltvi_adaptive_step, {4, 2, 1, 0.0, 1}},
        {htvi_direct_step, {2, 2, 1, 0.0, 1}},
    };
    for (const Case& cs : cases) {
        auto max_err = [&](double h) {
            BregmanParams params = cs.params;
            params.h = h;
            VectorState s = vector_init({0.0}, params);
            std::vector<double> ts{s.qt}, qs{s.q[0]};
            while (s.qt < 2.0) {
                s = cs.stepper(s, obj, params);
                ts.push_back(s.qt);
                qs.push_back(s.q[0]);
            }
            double worst = 0.0;
            for (double t : {1.1, 1.3, 1.5, 1.7, 1.9}) {
                const std::vector<double> z{0.0};
                const FlowPoint fp = reference_flow_vector(z, z, 1.0, t, 4000, obj, params);
                worst = std::max(worst, std::abs(interp_at(ts, qs, t) - fp.q[0]));
            }
            return worst;
        };
        const double ratio = max_err(0.01) / max_err(0.005);
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
    }
}

TEST_CASE("reference_flow_vector: equilibrium is exact, order-4 step refinement") {
    const Objective zero = zero_objective(2);
    const BregmanParams params{4, 4, 1, 0.1, 1};
    const std::vector<double> q0{0.7, -0.1};
    const std::vector<double> v0{0.0, 0.0};
    const FlowPoint eq = reference_flow_vector(q0, v0, 1.0, 10.0, 100, zero, params);
    CHECK(eq.q[0] == 0.7);
    CHECK(eq.q[1] == -0.1);
    CHECK(eq.v[0] == 0.0);

    // order 4 against the closed form of the pure-damping case:
    // q(t) = q0 + v0 t0^(p+1) (t0^-p - t^-p)/p
    const Objective zero1 = zero_objective(1);
    const double p = 3.0, t1 = 3.0, vinit = 0.7, qinit = 0.2;
    const BregmanParams damp{p, p, 1, 0.1, 1.0};
    const double exact = qinit + vinit * (1.0 - std::pow(t1, -p)) / p;
    const std::vector<double> qv{qinit};
    const std::vector<double> vv{vinit};
    const double err64 =
        std::abs(reference_flow_vector(qv, vv, 1.0, t1, 64, zero1, damp).q[0] - exact);
    const double err128 =
        std::abs(reference_flow_vector(qv, vv, 1.0, t1, 128, zero1, damp).q[0] - exact);
    CHECK(err64 / err128 >= 10.0);
    CHECK(err64 / err128 <= 24.0);
}

TEST_CASE("reference_flow_vector: quartic objective trends downward over [1, 50]") {
    const Objective obj = make_quartic_objective(2);
    const BregmanParams params{4, 4, 1, 0.1, 1};
    std::vector<double> q{0.0, 0.0}, v{0.0, 0.0};
    double t = 1.0;
    double decade_max = obj.eval(q);
    double prev_decade_max = decade_max;
    // the flow rings as it settles, so compare decade maxima instead of samples
    for (double t_next = 2.0; t_next <= 50.0; t_next *= 2.0) {
        const FlowPoint fp = reference_flow_vector(
            q, v, t, t_next, std::lround((t_next - t) / 1e-3), obj, params);
        q = fp.q;
        v = fp.v;
        t = t_next;
        const double f = obj.eval(q);
        CHECK(f < prev_decade_max);
        prev_decade_max = std::max(f, 1e-300);
    }
    CHECK(obj.eval(q) < 1e-6 * 14.44);
}

TEST_CASE("divergence raises NonFinite, bad inputs are rejected") {
    const Objective obj = make_quartic_objective(1);
    const BregmanParams params{6, 6, 1, 50.0, 1}; // absurd step to force blow-up
    VectorState s = vector_init({0.0}, params);
    CHECK_THROWS_AS(
        [&] {
            for (int k = 0; k < 200; ++k)
                s = ltvi_direct_step(s, obj, params);
        }(),
        NonFiniteError);

    const BregmanParams ok{2, 2, 1, 0.1, 1};
    VectorState bad_time = state_1d(0, 0, -1.0);
    CHECK_THROWS_AS((void)ltvi_direct_step(bad_time, obj, ok), NonpositiveTimeError);

    const std::vector<double> z{0.0};
    CHECK_THROWS_AS((void)reference_flow_vector(z, z, 2.0, 1.0, 10, obj, ok),
                    NonpositiveTimeError);
}
