#pragma once

// Inner-product arithmetic on F^n for F = R or C.
//
// Convention: <f, h> = sum_i f_i * conj(h_i), linear in the first slot and
// conjugate-linear in the second. Real vectors are stored as complex vectors
// with zero imaginary parts and carry Field::Real; operations that would mix
// fields are rejected.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "finsler/rng.hpp"

namespace finsler {

using Scalar = std::complex<double>;

enum class Field { Real, Complex };

std::string_view to_string(Field f) noexcept;
Field field_from_string(std::string_view s);  // "real" | "complex"

inline constexpr double kDefaultTol = 1e-10;

class Vector {
public:
    Vector() = default;

    static Vector real(std::span<const double> entries);
    static Vector real(std::initializer_list<double> entries);
    static Vector complex(std::span<const Scalar> entries);
    static Vector complex(std::initializer_list<Scalar> entries);
    static Vector zero(std::size_t dim, Field field);
    // Standard basis vector e_{index} (0-based).
    static Vector basis(std::size_t dim, std::size_t index, Field field);
    // Checks finiteness, dim >= 1, and real-ness of Field::Real data.
    static Vector from_eigen(Eigen::VectorXcd v, Field field);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    Field field() const noexcept { return field_; }
    Scalar operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXcd& data() const noexcept { return v_; }

    Vector operator+(const Vector& o) const;
    Vector operator-(const Vector& o) const;
    Vector operator-() const;
    // Rejects a non-real scalar on a real vector.
    Vector scaled(Scalar c) const;
    Vector scaled(double c) const;

    bool is_zero() const noexcept { return v_.squaredNorm() == 0.0; }

private:
    Vector(Eigen::VectorXcd v, Field f) : v_(std::move(v)), field_(f) {}

    Eigen::VectorXcd v_;
    Field field_ = Field::Real;
};

class LinearMap {
public:
    LinearMap() = default;

    static LinearMap from_eigen(Eigen::MatrixXcd m, Field field);
    static LinearMap identity(std::size_t dim, Field field);
    // Row-major real entries.
    static LinearMap real(std::size_t rows, std::size_t cols, std::span<const double> entries);
    static LinearMap diagonal(std::span<const double> diag, Field field);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
    Field field() const noexcept { return field_; }
    const Eigen::MatrixXcd& data() const noexcept { return m_; }

    Vector apply(const Vector& v) const;
    LinearMap compose(const LinearMap& rhs) const;  // this * rhs
    LinearMap scaled(Scalar c) const;
    LinearMap adjoint() const;
    // Reinterprets a real map as a complex one (used for real maps acting on C^n).
    LinearMap as_complex() const;
    Scalar determinant() const;

private:
    LinearMap(Eigen::MatrixXcd m, Field f) : m_(std::move(m)), field_(f) {}

    Eigen::MatrixXcd m_;
    Field field_ = Field::Real;
};

Scalar inner(const Vector& f, const Vector& h);
double norm(const Vector& h);

// The data (r, p, q) that every isometry-invariant Finsler metric depends on:
// r = |g|, p = |<h,g>|, q = sqrt(|h|^2 |g|^2 - |<h,g>|^2).
// q is evaluated as |g| * |h - proj_g h|, which equals the radical exactly in
// real arithmetic and keeps full relative accuracy when h is nearly collinear.
struct CanonicalInvariants {
    double r = 0;
    double p = 0;
    double q = 0;
    Scalar pairing{};  // <h, g> itself, for the non-symmetric family

    // Acute angle between the F-lines through g and h, in [0, pi/2].
    double angle() const noexcept;
};

CanonicalInvariants canonical_invariants(const Vector& g, const Vector& h);

// arccos(|<h,g>| / (|h||g|)), computed as atan2(q, p).
double acute_angle(const Vector& g, const Vector& h);

// Isometry U with U g = |g| e and U h = phase * (p e + q f) / |g|, where
// phase = <h,g>/|<h,g>| (taken as 1 when <h,g> = 0). When h is collinear
// with g the orthogonal complement is completed by Gram-Schmidt over the
// standard basis; in the real case a free completion vector is flipped so
// that det U = +1.
LinearMap build_canonical_isometry(const Vector& g, const Vector& h, const Vector& e,
                                   const Vector& f, double tol = kDefaultTol);

// Haar-distributed unitary (orthogonal for Field::Real): QR of a Gaussian
// matrix with the phases of diag(R) folded back into Q.
LinearMap random_unitary(std::size_t dim, Field field, std::uint64_t seed);
LinearMap random_unitary(std::size_t dim, Field field, Rng& rng);

// Haar rotation (real orthogonal, det = +1).
LinearMap random_rotation(std::size_t dim, std::uint64_t seed, Field field = Field::Real);
LinearMap random_rotation(std::size_t dim, Rng& rng);

// Singular values, descending.
std::vector<double> singular_values(const LinearMap& t);

// Standard Gaussian vector (complex entries have unit total variance per entry).
Vector random_gaussian_vector(std::size_t dim, Field field, Rng& rng);
// Uniform on the unit sphere of F^n.
Vector random_unit_vector(std::size_t dim, Field field, Rng& rng);
// Uniform scalar of F with modulus in [lo, hi] (real: random sign).
Scalar random_scalar(Field field, double lo, double hi, Rng& rng);

// |a - b| / (1 + |b|): the deviation measure shared by all sampled checks.
inline double relative_deviation(double a, double b) noexcept {
    return std::abs(a - b) / (1.0 + std::abs(b));
}
inline double relative_deviation(Scalar a, Scalar b) noexcept {
    return std::abs(a - b) / (1.0 + std::abs(b));
}

}  // namespace finsler
