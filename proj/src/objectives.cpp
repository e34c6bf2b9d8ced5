#include "tavi/objectives.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "tavi/rng.hpp"

namespace tavi {

namespace {

void require_dim(std::span<const double> x, int d, const char* where) {
    if (static_cast<int>(x.size()) != d)
        throw DimensionMismatchError(std::string(where) + ": expected dimension " +
                                     std::to_string(d) + ", got " + std::to_string(x.size()));
}

// s = (x-1)^T Sigma (x-1) and y = Sigma (x-1), shared by eval and grad.
double quartic_quadratic_form(std::span<const double> x, const QuarticSpec& spec,
                              std::vector<double>* y_out) {
    const int d = spec.dim;
    std::vector<double> delta(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        delta[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - 1.0;
    std::vector<double> y(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j)
            acc += spec.sigma[static_cast<std::size_t>(i * d + j)] * delta[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        s += delta[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    if (y_out)
        *y_out = std::move(y);
    return s;
}

} // namespace

QuarticSpec::QuarticSpec(int d) : dim(d), sigma(static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    if (d < 1)
        throw DimensionMismatchError("quartic dimension must be >= 1");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            sigma[static_cast<std::size_t>(i * d + j)] = std::pow(0.9, std::abs(i - j));
}

double quartic_eval(std::span<const double> x, const QuarticSpec& spec) {
    require_dim(x, spec.dim, "quartic_eval");
    const double s = quartic_quadratic_form(x, spec, nullptr);
    return s * s;
}

std::vector<double> quartic_grad(std::span<const double> x, const QuarticSpec& spec) {
    require_dim(x, spec.dim, "quartic_grad");
    std::vector<double> y;
    const double s = quartic_quadratic_form(x, spec, &y);
    for (auto& e : y)
        e *= 4.0 * s;
    return y;
}

Objective make_quartic_objective(int dim) {
    auto spec = std::make_shared<QuarticSpec>(dim);
    Objective obj;
    obj.dim = dim;
    obj.f_star = 0.0;
    obj.eval = [spec](std::span<const double> x) { return quartic_eval(x, *spec); };
    obj.grad = [spec](std::span<const double> x) { return quartic_grad(x, *spec); };
    return obj;
}

double wahba_eval(const Rotation& r, const Mat3& a) {
    double trace_atr = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            trace_atr += a(k, i) * r.matrix()(k, i);
    const double anorm2 = a.frobenius_norm() * a.frobenius_norm();
    return 0.5 * (anorm2 + 3.0) - trace_atr;
}

Vec3 wahba_grad_left(const Rotation& r, const Mat3& a) {
    const Mat3 atr = a.transposed() * r.matrix();
    const Mat3 skew = atr - atr.transposed();
    // skew by construction; read the canonical entries directly
    return {skew(2, 1), skew(0, 2), skew(1, 0)};
}

Rotation wahba_optimal(const Mat3& a) {
    const Svd3 f = svd3(a);
    const double d = (f.u * f.v).det();
    Mat3 u = f.u;
    for (int r = 0; r < 3; ++r)
        u(r, 2) *= d;
    return Rotation::from_matrix(u * f.v.transposed());
}

So3Objective make_wahba_objective(const Mat3& a) {
    So3Objective obj;
    obj.eval = [a](const Rotation& r) { return wahba_eval(r, a); };
    obj.grad_left = [a](const Rotation& r) { return wahba_grad_left(r, a); };
    const Rotation rstar = wahba_optimal(a);
    obj.f_star = wahba_eval(rstar, a);
    obj.r_star = rstar;
    return obj;
}

double fd_check_vector(const Objective& obj, std::span<const double> x) {
    std::vector<double> xp(x.begin(), x.end());
    const std::vector<double> g = obj.grad(x);
    double worst = 0.0;
    for (std::size_t i = 0; i < xp.size(); ++i) {
        const double step = 1e-6 * (1.0 + std::abs(xp[i]));
        const double saved = xp[i];
        xp[i] = saved + step;
        const double fp = obj.eval(xp);
        xp[i] = saved - step;
        const double fm = obj.eval(xp);
        xp[i] = saved;
        const double fd = (fp - fm) / (2.0 * step);
        const double dev = std::abs(g[i] - fd) / (1.0 + std::abs(fd));
        worst = std::max(worst, dev);
    }
    return worst;
}

double fd_check_so3(const So3Objective& obj, const Rotation& r) {
    const Vec3 g = obj.grad_left(r);
    const double garr[3] = {g.x, g.y, g.z};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        Vec3 axis{0, 0, 0};
        (i == 0 ? axis.x : i == 1 ? axis.y : axis.z) = 1.0;
        const double step = 1e-6;
        const double fp = obj.eval(r * rodrigues_exp(step * axis));
        const double fm = obj.eval(r * rodrigues_exp(-step * axis));
        const double fd = (fp - fm) / (2.0 * step);
        const double dev = std::abs(garr[i] - fd) / (1.0 + std::abs(fd));
        worst = std::max(worst, dev);
    }
    return worst;
}

Mat3 random_wahba_matrix(std::uint64_t seed) {
    SplitMix64 rng(seed);
    Mat3 a;
    for (auto& e : a.m)
        e = rng.next_symmetric();
    return a;
}

} // namespace tavi
