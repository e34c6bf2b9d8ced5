#pragma once

#include <array>
#include <cmath>

#include "tavi/errors.hpp"

namespace tavi {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
    [[nodiscard]] bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

[[nodiscard]] inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

[[nodiscard]] inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// 3x3 matrix, row-major storage.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

    static Mat3 identity() {
        Mat3 a;
        a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
        return a;
    }
    static Mat3 zero() { return {}; }

    [[nodiscard]] Mat3 transposed() const;
    [[nodiscard]] double trace() const { return m[0] + m[4] + m[8]; }
    [[nodiscard]] double det() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] bool finite() const;
};

Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Mat3 operator*(const Mat3& a, const Mat3& b);
Mat3 operator*(double s, const Mat3& a);
Vec3 operator*(const Mat3& a, const Vec3& v);

/// Rotation matrix in SO(3). `from_matrix` validates the group invariants once;
/// composition of validated rotations is exact up to round-off and is not re-checked.
class Rotation {
public:
    /// Validates ||R^T R - I||_F <= 1e-9 and |det(R) - 1| <= 1e-9.
    static Rotation from_matrix(const Mat3& m);
    static Rotation identity() { return Rotation(Mat3::identity()); }

    [[nodiscard]] const Mat3& matrix() const { return m_; }
    [[nodiscard]] Rotation transposed() const { return Rotation(m_.transposed()); }
    [[nodiscard]] Rotation operator*(const Rotation& other) const {
        return Rotation(m_ * other.m_);
    }

private:
    explicit Rotation(Mat3 m) : m_(m) {}
    friend Rotation rodrigues_exp(const Vec3&);
    friend Rotation asin_step_map(const Vec3&);

    Mat3 m_;
};

/// Hat map: skew matrix S with S w = v x w for all w.
[[nodiscard]] Mat3 hat(const Vec3& v);

/// Inverse of hat. Requires ||s + s^T||_F <= 1e-9; throws NotSkewError otherwise.
/// Reads the canonical skew entries, so vee(hat(v)) == v exactly.
[[nodiscard]] Vec3 vee(const Mat3& s);

/// exp(hat(v)) via the axis-angle closed form. Series fallback below ||v|| = 1e-8.
[[nodiscard]] Rotation rodrigues_exp(const Vec3& v);

/// Rotation by angle asin(||a||) about a/||a||, i.e. exp((asin||a||/||a||) hat(a)).
/// Throws StepTooLargeError for ||a|| >= 1.
[[nodiscard]] Rotation asin_step_map(const Vec3& a);

struct Svd3 {
    Mat3 u;
    Vec3 s; ///< singular values, descending, nonnegative
    Mat3 v;
};

/// Singular value decomposition A = U diag(s) V^T by one-sided Jacobi rotations.
/// U, V orthogonal to 1e-12; throws NoConvergenceError if sweeps are exhausted.
[[nodiscard]] Svd3 svd3(const Mat3& a);

/// ||r^T r - I||_F, the orthogonality drift diagnostic.
[[nodiscard]] double orthogonality_error(const Mat3& r);

} // namespace tavi
