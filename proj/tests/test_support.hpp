#pragma once

// Fixtures shared by the unit tests and the acceptance binary.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "finsler/linalg.hpp"
#include "finsler/metric.hpp"

namespace finsler::testing {

inline constexpr double kPi = std::numbers::pi;

struct NamedSpec {
    std::string name;
    MetricSpec spec;
};

// The fixed theta profiles of the battery.
inline const char* const kTheta1 = "1+cos(tau)";
inline const char* const kTheta2 = "(2+sin(tau))/r";
inline const char* const kTheta3 = "r*(1+sin(tau)^2)+exp(-r)*cos(2*tau)";
// Positively homogeneous, not even in the pairing.
inline const char* const kNonSym = "(sqrt(pre^2+pim^2+q^2)+0.5*pre)/r";

inline std::vector<NamedSpec> battery(std::size_t dim, Field field) {
    return {
        {"euclidean", MetricSpec::euclidean(dim, field)},
        {"fubini-study", MetricSpec::fubini_study(dim, field)},
        {"fubini-study-riemann", MetricSpec::from_riemann(fubini_study_profile(), dim, field)},
        {"norm-quotient", MetricSpec::norm_quotient(dim, field)},
        {"theta1", MetricSpec::from_theta(theta_profile(kTheta1), dim, field)},
        {"theta2", MetricSpec::from_theta(theta_profile(kTheta2), dim, field)},
        {"theta3", MetricSpec::from_theta(theta_profile(kTheta3), dim, field)},
        {"nonsym", MetricSpec::from_nonsym_lambda(nonsym_lambda_profile(kNonSym), dim, field)},
    };
}

inline const Field kFields[] = {Field::Real, Field::Complex};

// Deliberately non-invariant: rho_g(h) = |h_1|.
inline MetricSpec first_coordinate_spec(std::size_t dim, Field field) {
    return MetricSpec::custom(
        "first-coordinate", [](const Vector&, const Vector& h) { return std::abs(h[0]); }, dim,
        field);
}

// Eigen-side reference inner product, written independently of the library.
inline Scalar reference_inner(const Vector& f, const Vector& h) {
    Scalar s = 0;
    for (std::size_t i = 0; i < f.dim(); ++i) s += f[i] * std::conj(h[i]);
    return s;
}

inline Vector unit_circle(double t) { return Vector::real({std::cos(t), std::sin(t)}); }

}  // namespace finsler::testing
