#include "tavi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace tavi {

namespace {

constexpr double kSmallAngle = 1e-8;
constexpr double kSkewTol = 1e-9;
constexpr double kRotationTol = 1e-9;

} // namespace

Mat3 Mat3::transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            t(r, c) = (*this)(c, r);
    return t;
}

double Mat3::det() const {
    const Mat3& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double Mat3::frobenius_norm() const {
    double s = 0.0;
    for (double e : m)
        s += e * e;
    return std::sqrt(s);
}

bool Mat3::finite() const {
    for (double e : m)
        if (!std::isfinite(e))
            return false;
    return true;
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i)
        r.m[i] = a.m[i] + b.m[i];
    return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i)
        r.m[i] = a.m[i] - b.m[i];
    return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i)
        r.m[i] = s * a.m[i];
    return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Rotation Rotation::from_matrix(const Mat3& m) {
    if (!m.finite())
        throw NotRotationError("rotation matrix has non-finite entries");
    const double orth = orthogonality_error(m);
    if (orth > kRotationTol)
        throw NotRotationError("matrix is not orthogonal: ||R^T R - I||_F = " +
                               std::to_string(orth));
    const double d = m.det();
    if (std::abs(d - 1.0) > kRotationTol)
        throw NotRotationError("matrix determinant " + std::to_string(d) + " is not 1");
    return Rotation(m);
}

Mat3 hat(const Vec3& v) {
    Mat3 s;
    s(0, 1) = -v.z;
    s(0, 2) = v.y;
    s(1, 0) = v.z;
    s(1, 2) = -v.x;
    s(2, 0) = -v.y;
    s(2, 1) = v.x;
    return s;
}

Vec3 vee(const Mat3& s) {
    const double skew_defect = (s + s.transposed()).frobenius_norm();
    if (skew_defect > kSkewTol)
        throw NotSkewError("matrix is not skew-symmetric: ||s + s^T||_F = " +
                           std::to_string(skew_defect));
    return {s(2, 1), s(0, 2), s(1, 0)};
}

Rotation rodrigues_exp(const Vec3& v) {
    const double theta = v.norm();
    double sinc;    // sin(theta)/theta
    double cosc;    // (1 - cos(theta))/theta^2
    if (theta < kSmallAngle) {
        const double t2 = theta * theta;
        sinc = 1.0 - t2 / 6.0;
        cosc = 0.5 - t2 / 24.0;
    } else {
        sinc = std::sin(theta) / theta;
        cosc = (1.0 - std::cos(theta)) / (theta * theta);
    }
    const Mat3 s = hat(v);
    return Rotation(Mat3::identity() + sinc * s + cosc * (s * s));
}

Rotation asin_step_map(const Vec3& a) {
    const double n = a.norm();
    if (!std::isfinite(n))
        throw NonFiniteError("asin_step_map: non-finite input");
    if (n >= 1.0)
        throw StepTooLargeError("asin_step_map: ||a|| = " + std::to_string(n) +
                                " >= 1; reduce the fictive step");
    if (n < kSmallAngle)
        return rodrigues_exp(a); // asin(n)/n -> 1
    return rodrigues_exp((std::asin(n) / n) * a);
}

namespace {

// Orthonormal completion for near-zero singular directions of U.
Vec3 mat_col(const Mat3& a, int c) { return {a(0, c), a(1, c), a(2, c)}; }

void set_col(Mat3& a, int c, const Vec3& v) {
    a(0, c) = v.x;
    a(1, c) = v.y;
    a(2, c) = v.z;
}

Vec3 any_unit_orthogonal(const Vec3& u) {
    // cross with the coordinate axis least aligned with u
    const double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
    Vec3 e = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    Vec3 w = cross(u, e);
    return (1.0 / w.norm()) * w;
}

} // namespace

Svd3 svd3(const Mat3& a) {
    if (!a.finite())
        throw NonFiniteError("svd3: non-finite input");

    // One-sided Jacobi: orthogonalize the columns of B = A V by plane rotations.
    Mat3 b = a;
    Mat3 v = Mat3::identity();
    constexpr int kMaxSweeps = 60;
    constexpr double kGramTol = 1e-15;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (int i = 0; i < 2; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int r = 0; r < 3; ++r) {
                    alpha += b(r, i) * b(r, i);
                    beta += b(r, j) * b(r, j);
                    gamma += b(r, i) * b(r, j);
                }
                if (gamma * gamma <= kGramTol * kGramTol * alpha * beta)
                    continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int r = 0; r < 3; ++r) {
                    const double bi = b(r, i), bj = b(r, j);
                    b(r, i) = c * bi - s * bj;
                    b(r, j) = s * bi + c * bj;
                    const double vi = v(r, i), vj = v(r, j);
                    v(r, i) = c * vi - s * vj;
                    v(r, j) = s * vi + c * vj;
                }
            }
        }
    }
    if (!converged)
        throw NoConvergenceError("svd3: Jacobi sweeps exhausted");

    std::array<double, 3> sv{};
    for (int c = 0; c < 3; ++c)
        sv[static_cast<std::size_t>(c)] = mat_col(b, c).norm();

    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int l, int r) { return sv[static_cast<std::size_t>(l)] > sv[static_cast<std::size_t>(r)]; });

    Svd3 out;
    out.v = Mat3::zero();
    Mat3 bs = Mat3::zero();
    for (int c = 0; c < 3; ++c) {
        const int src = order[static_cast<std::size_t>(c)];
        set_col(out.v, c, mat_col(v, src));
        set_col(bs, c, mat_col(b, src));
        switch (c) {
        case 0: out.s.x = sv[static_cast<std::size_t>(src)]; break;
        case 1: out.s.y = sv[static_cast<std::size_t>(src)]; break;
        default: out.s.z = sv[static_cast<std::size_t>(src)]; break;
        }
    }

    // Normalized columns of B give U; rebuild directions lost to rank deficiency.
    const double smax = out.s.x;
    const std::array<double, 3> svals{out.s.x, out.s.y, out.s.z};
    out.u = Mat3::zero();
    int rank = 0;
    for (int c = 0; c < 3; ++c) {
        if (svals[static_cast<std::size_t>(c)] > smax * 1e-14 && svals[static_cast<std::size_t>(c)] > 0.0) {
            set_col(out.u, c, (1.0 / svals[static_cast<std::size_t>(c)]) * mat_col(bs, c));
            ++rank;
        }
    }
    if (rank < 3) {
        if (rank == 0) {
            out.u = Mat3::identity();
        } else if (rank == 1) {
            const Vec3 u0 = mat_col(out.u, 0);
            const Vec3 u1 = any_unit_orthogonal(u0);
            set_col(out.u, 1, u1);
            set_col(out.u, 2, cross(u0, u1));
        } else {
            set_col(out.u, 2, cross(mat_col(out.u, 0), mat_col(out.u, 1)));
        }
    }
    return out;
}

double orthogonality_error(const Mat3& r) {
    return (r.transposed() * r - Mat3::identity()).frobenius_norm();
}

} // namespace tavi
