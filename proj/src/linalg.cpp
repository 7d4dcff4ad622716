#include "finsler/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

namespace {

void require_same(const Vector& a, const Vector& b, const char* op) {
    if (a.dim() != b.dim())
        throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                              " vs " + std::to_string(b.dim()) + ")");
    if (a.field() != b.field())
        throw InvalidArgument(std::string(op) + ": mixed real/complex operands");
}

bool all_finite(const Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
    return true;
}

bool all_finite(const Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

// Extends the orthonormal columns in `basis` (first `filled` of them) to a
// full orthonormal basis, greedily taking the standard basis vector with the
// largest component outside the current span.
void complete_basis(Eigen::MatrixXcd& basis, Eigen::Index filled) {
    const Eigen::Index n = basis.rows();
    while (filled < n) {
        Eigen::VectorXcd best;
        double best_norm = -1;
        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Unit(n, k);
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index j = 0; j < filled; ++j)
                    v -= basis.col(j).dot(v) * basis.col(j);
            const double nv = v.norm();
            if (nv > best_norm) {
                best_norm = nv;
                best = v;
            }
        }
        basis.col(filled) = best / best_norm;
        ++filled;
    }
}

Eigen::MatrixXcd gaussian_matrix(std::size_t dim, Field field, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (field == Field::Real) {
                z(i, j) = Scalar(normal(rng), 0.0);
            } else {
                const double re = normal(rng);
                const double im = normal(rng);
                z(i, j) = Scalar(re, im) / std::sqrt(2.0);
            }
        }
    return z;
}

}  // namespace

std::string_view to_string(Field f) noexcept { return f == Field::Real ? "real" : "complex"; }

Field field_from_string(std::string_view s) {
    if (s == "real" || s == "R") return Field::Real;
    if (s == "complex" || s == "C") return Field::Complex;
    throw InvalidArgument("unknown field '" + std::string(s) + "' (expected real|complex)");
}

// ---------------------------------------------------------------- Vector

Vector Vector::from_eigen(Eigen::VectorXcd v, Field field) {
    if (v.size() < 1) throw InvalidArgument("vector dimension must be at least 1");
    if (!all_finite(v)) throw InvalidArgument("vector entries must be finite");
    if (field == Field::Real)
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (v(i).imag() != 0.0)
                throw InvalidArgument("real vector with non-zero imaginary part");
    return Vector(std::move(v), field);
}

Vector Vector::real(std::span<const double> entries) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
    return from_eigen(std::move(v), Field::Real);
}

Vector Vector::real(std::initializer_list<double> entries) {
    return real(std::span<const double>(entries.begin(), entries.size()));
}

Vector Vector::complex(std::span<const Scalar> entries) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
    return from_eigen(std::move(v), Field::Complex);
}

Vector Vector::complex(std::initializer_list<Scalar> entries) {
    return complex(std::span<const Scalar>(entries.begin(), entries.size()));
}

Vector Vector::zero(std::size_t dim, Field field) {
    return from_eigen(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim)), field);
}

Vector Vector::basis(std::size_t dim, std::size_t index, Field field) {
    if (index >= dim) throw InvalidArgument("basis index out of range");
    return from_eigen(Eigen::VectorXcd::Unit(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(index)),
                      field);
}

Vector Vector::operator+(const Vector& o) const {
    require_same(*this, o, "add");
    return Vector(v_ + o.v_, field_);
}

Vector Vector::operator-(const Vector& o) const {
    require_same(*this, o, "subtract");
    return Vector(v_ - o.v_, field_);
}

Vector Vector::operator-() const { return Vector(-v_, field_); }

Vector Vector::scaled(Scalar c) const {
    if (field_ == Field::Real && c.imag() != 0.0)
        throw InvalidArgument("complex scalar applied to a real vector");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw InvalidArgument("non-finite scalar");
    return Vector(v_ * c, field_);
}

Vector Vector::scaled(double c) const { return scaled(Scalar(c, 0.0)); }

// ---------------------------------------------------------------- LinearMap

LinearMap LinearMap::from_eigen(Eigen::MatrixXcd m, Field field) {
    if (m.rows() < 1 || m.cols() < 1) throw InvalidArgument("linear map dimensions must be >= 1");
    if (!all_finite(m)) throw InvalidArgument("linear map entries must be finite");
    if (field == Field::Real)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                if (m(i, j).imag() != 0.0)
                    throw InvalidArgument("real map with non-zero imaginary part");
    return LinearMap(std::move(m), field);
}

LinearMap LinearMap::identity(std::size_t dim, Field field) {
    const auto n = static_cast<Eigen::Index>(dim);
    return from_eigen(Eigen::MatrixXcd::Identity(n, n), field);
}

LinearMap LinearMap::real(std::size_t rows, std::size_t cols, std::span<const double> entries) {
    if (entries.size() != rows * cols) throw InvalidArgument("entry count does not match shape");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * cols + j];
    return from_eigen(std::move(m), Field::Real);
}

LinearMap LinearMap::diagonal(std::span<const double> diag, Field field) {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    return from_eigen(std::move(m), field);
}

Vector LinearMap::apply(const Vector& v) const {
    if (v.dim() != cols())
        throw InvalidArgument("apply: map has " + std::to_string(cols()) +
                              " columns but vector has dimension " + std::to_string(v.dim()));
    if (v.field() != field_) throw InvalidArgument("apply: mixed real/complex operands");
    return Vector::from_eigen(m_ * v.data(), field_);
}

LinearMap LinearMap::compose(const LinearMap& rhs) const {
    if (cols() != rhs.rows()) throw InvalidArgument("compose: inner dimensions differ");
    if (field_ != rhs.field_) throw InvalidArgument("compose: mixed real/complex operands");
    return LinearMap(m_ * rhs.m_, field_);
}

LinearMap LinearMap::scaled(Scalar c) const {
    if (field_ == Field::Real && c.imag() != 0.0)
        throw InvalidArgument("complex scalar applied to a real map");
    return LinearMap(m_ * c, field_);
}

LinearMap LinearMap::adjoint() const { return LinearMap(m_.adjoint(), field_); }

LinearMap LinearMap::as_complex() const { return LinearMap(m_, Field::Complex); }

Scalar LinearMap::determinant() const {
    if (rows() != cols()) throw InvalidArgument("determinant of a non-square map");
    return m_.determinant();
}

// ---------------------------------------------------------------- products

Scalar inner(const Vector& f, const Vector& h) {
    require_same(f, h, "inner");
    // Eigen's dot conjugates its left operand: h.dot(f) = sum conj(h_i) f_i.
    return h.data().dot(f.data());
}

double norm(const Vector& h) { return h.data().norm(); }

double CanonicalInvariants::angle() const noexcept { return std::atan2(q, p); }

CanonicalInvariants canonical_invariants(const Vector& g, const Vector& h) {
    require_same(g, h, "canonical_invariants");
    const double gg = g.data().squaredNorm();
    if (gg == 0.0) throw InvalidArgument("canonical_invariants: base point g must be non-zero");
    const Scalar ip = inner(h, g);
    Eigen::VectorXcd residual = h.data() - (ip / gg) * g.data();
    residual -= (g.data().dot(residual) / gg) * g.data();  // one reorthogonalization

    CanonicalInvariants out;
    out.r = std::sqrt(gg);
    out.p = std::abs(ip);
    out.q = out.r * residual.norm();
    out.q = std::min(out.q, out.r * h.data().norm());
    out.pairing = ip;
    return out;
}

double acute_angle(const Vector& g, const Vector& h) {
    if (g.is_zero() || h.is_zero()) throw InvalidArgument("acute_angle: zero vector");
    return canonical_invariants(g, h).angle();
}

LinearMap build_canonical_isometry(const Vector& g, const Vector& h, const Vector& e,
                                   const Vector& f, double tol) {
    require_same(g, h, "build_canonical_isometry");
    require_same(g, e, "build_canonical_isometry");
    require_same(g, f, "build_canonical_isometry");
    const auto n = static_cast<Eigen::Index>(g.dim());
    if (n < 2) throw InvalidArgument("build_canonical_isometry: dimension must be at least 2");
    if (std::abs(norm(e) - 1.0) > tol || std::abs(norm(f) - 1.0) > tol ||
        std::abs(inner(e, f)) > tol)
        throw InvalidArgument("build_canonical_isometry: (e, f) is not orthonormal");
    const double gg = g.data().squaredNorm();
    if (gg == 0.0) throw InvalidArgument("build_canonical_isometry: g must be non-zero");

    const Scalar ip = inner(h, g);
    const Scalar phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Scalar(1.0, 0.0);

    Eigen::MatrixXcd source(n, n);
    source.col(0) = g.data() / std::sqrt(gg);
    Eigen::VectorXcd residual = h.data() - (ip / gg) * g.data();
    residual -= source.col(0).dot(residual) * source.col(0);
    Eigen::Index determined = 1;
    if (const double rn = residual.norm(); rn > 0.0) {
        source.col(1) = residual / rn;
        determined = 2;
    }
    complete_basis(source, determined);

    Eigen::MatrixXcd target(n, n);
    target.col(0) = e.data();
    target.col(1) = phase * f.data();
    complete_basis(target, 2);

    if (g.field() == Field::Real) {
        source = source.real().cast<Scalar>();
        target = target.real().cast<Scalar>();
        const double det = (target * source.adjoint()).determinant().real();
        if (det < 0.0) {
            if (determined < n)
                source.col(n - 1) *= -1.0;
            else if (n > 2)
                target.col(n - 1) *= -1.0;
        }
    }
    return LinearMap::from_eigen(target * source.adjoint(), g.field());
}

// ---------------------------------------------------------------- sampling

LinearMap random_unitary(std::size_t dim, Field field, Rng& rng) {
    if (dim < 1) throw InvalidArgument("random_unitary: dimension must be at least 1");
    const Eigen::MatrixXcd z = gaussian_matrix(dim, field, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const Scalar d = r(j, j);
        const double m = std::abs(d);
        q.col(j) *= (m > 0.0 ? d / m : Scalar(1.0, 0.0));
    }
    if (field == Field::Real) q = q.real().cast<Scalar>();
    return LinearMap::from_eigen(std::move(q), field);
}

LinearMap random_unitary(std::size_t dim, Field field, std::uint64_t seed) {
    Rng rng(mix_seed(seed));
    return random_unitary(dim, field, rng);
}

LinearMap random_rotation(std::size_t dim, Rng& rng) {
    if (dim < 2) throw InvalidArgument("random_rotation: dimension must be at least 2");
    LinearMap u = random_unitary(dim, Field::Real, rng);
    if (u.determinant().real() < 0.0) {
        Eigen::MatrixXcd m = u.data();
        m.col(0) *= -1.0;
        return LinearMap::from_eigen(std::move(m), Field::Real);
    }
    return u;
}

LinearMap random_rotation(std::size_t dim, std::uint64_t seed, Field field) {
    if (field != Field::Real)
        throw InvalidArgument("random_rotation: rotations are defined for the real field only");
    Rng rng(mix_seed(seed));
    return random_rotation(dim, rng);
}

std::vector<double> singular_values(const LinearMap& t) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.data());
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Vector random_gaussian_vector(std::size_t dim, Field field, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (field == Field::Real) {
            v(i) = Scalar(normal(rng), 0.0);
        } else {
            const double re = normal(rng);
            const double im = normal(rng);
            v(i) = Scalar(re, im) / std::sqrt(2.0);
        }
    }
    return Vector::from_eigen(std::move(v), field);
}

Vector random_unit_vector(std::size_t dim, Field field, Rng& rng) {
    for (;;) {
        Vector v = random_gaussian_vector(dim, field, rng);
        const double nv = norm(v);
        if (nv > 1e-12) return v.scaled(1.0 / nv);
    }
}

Scalar random_scalar(Field field, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> mod(lo, hi);
    const double m = mod(rng);
    if (field == Field::Real) {
        std::bernoulli_distribution sign(0.5);
        return Scalar(sign(rng) ? m : -m, 0.0);
    }
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    return std::polar(m, ang(rng));
}

}  // namespace finsler
