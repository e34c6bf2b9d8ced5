#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tavi/geometry.hpp"

namespace tavi {

/// Objective on R^d: value, exact gradient, and the known minimum when available.
struct Objective {
    std::function<double(std::span<const double>)> eval;
    std::function<std::vector<double>(std::span<const double>)> grad;
    std::optional<double> f_star;
    int dim = 0;
};

/// Objective on SO(3) with left-trivialized gradient.
struct So3Objective {
    std::function<double(const Rotation&)> eval;
    std::function<Vec3(const Rotation&)> grad_left;
    std::optional<double> f_star;
    std::optional<Rotation> r_star;
};

/// Quartic benchmark f(x) = [(x-1)^T Sigma (x-1)]^2 with Sigma_ij = 0.9^|i-j|.
/// Minimum value 0 at x = 1.
struct QuarticSpec {
    explicit QuarticSpec(int dim);

    int dim;
    std::vector<double> sigma; ///< dim x dim, row-major, symmetric positive definite
};

[[nodiscard]] double quartic_eval(std::span<const double> x, const QuarticSpec& spec);

/// Analytic gradient 4 [(x-1)^T Sigma (x-1)] Sigma (x-1).
[[nodiscard]] std::vector<double> quartic_grad(std::span<const double> x, const QuarticSpec& spec);

[[nodiscard]] Objective make_quartic_objective(int dim);

/// Attitude least squares f(R) = 0.5 ||A - R||_F^2 = 0.5 (||A||_F^2 + 3) - trace(A^T R).
[[nodiscard]] double wahba_eval(const Rotation& r, const Mat3& a);

/// Left-trivialized gradient (A^T R - R^T A)^vee.
[[nodiscard]] Vec3 wahba_grad_left(const Rotation& r, const Mat3& a);

/// Closed-form minimizer R* = U diag[1, 1, det(U V)] V^T with A = U S V^T.
[[nodiscard]] Rotation wahba_optimal(const Mat3& a);

[[nodiscard]] So3Objective make_wahba_objective(const Mat3& a);

/// Max relative deviation between obj.grad and central finite differences
/// with step 1e-6 (1 + |x_i|).
[[nodiscard]] double fd_check_vector(const Objective& obj, std::span<const double> x);

/// Same check on the group: compares grad_left against d/ds f(R exp(s e_i^hat))|_0.
[[nodiscard]] double fd_check_so3(const So3Objective& obj, const Rotation& r);

/// Data matrix with entries i.i.d. uniform on [-1, 1] from splitmix64(seed);
/// bit-reproducible across platforms.
[[nodiscard]] Mat3 random_wahba_matrix(std::uint64_t seed);

} // namespace tavi
