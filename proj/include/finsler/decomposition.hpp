#pragma once

// Profiles recovered from black-box metrics. Extraction evaluates the oracle
// in a canonical frame (e, f): lambda_r(p, q) = r^-alpha rho_{r e}(p e + q f),
// theta(r, tau) = r lambda_r(cos tau, sin tau), and for sesquilinear oracles
// phi(r) = sigma_{sqrt(r) e}(f, f), psi(r) = (sigma_{sqrt(r) e}(e, e) - phi(r)) / r.
// Extracted profiles are callables that delegate to the oracle; nothing is
// tabulated unless asked for.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "finsler/metric.hpp"
#include "finsler/parallel.hpp"
#include "finsler/table.hpp"

namespace finsler {

struct MetricOracle {
    OracleFn eval;
    std::size_t dim = 2;
    Field field = Field::Real;
    RadiusDomain domain;
    double alpha = 1.0;      // declared homogeneity degree
    bool symmetric = true;   // false: homogeneous for t >= 0 only

    static MetricOracle from_spec(const MetricSpec& spec);
};

using SesquiFn = std::function<Scalar(const Vector& g, const Vector& f, const Vector& h)>;

struct SesquiOracle {
    SesquiFn eval;
    std::size_t dim = 2;
    Field field = Field::Real;
    RadiusDomain domain;  // on |g|

    static SesquiOracle from_profile(const RiemannProfile& profile, std::size_t dim, Field field);
};

// Orthonormal pair used as (e, f). Defaults to the first two basis vectors.
struct Frame {
    Vector e;
    Vector f;
};
Frame standard_frame(std::size_t dim, Field field);

// Worst |rho_g(t h) - |t|^alpha rho_g(h)| / (1 + |t|^alpha |rho_g(h)|) over
// seeded samples (t > 0 only for non-symmetric oracles).
double homogeneity_defect(const MetricOracle& oracle, std::size_t n_samples, std::uint64_t seed);
// Worst |sigma_g(f, h) - conj sigma_g(h, f)| / (1 + |sigma_g(f, h)|).
double conjugate_symmetry_defect(const SesquiOracle& oracle, std::size_t n_samples,
                                 std::uint64_t seed);

inline constexpr double kOracleValidationTol = 1e-8;

// All extractors validate the oracle first (NumericError on failure) and
// throw NumericError("decomposition requires dim ≥ 2") in dimension 1.
SymLambdaProfile extract_lambda(const MetricOracle& oracle,
                                const std::optional<Frame>& frame = std::nullopt);
// Requires alpha = 1.
ThetaProfile extract_theta(const MetricOracle& oracle,
                           const std::optional<Frame>& frame = std::nullopt);
// lambda(r, p in F, q) = r^-1 rho_{r e}(p e + q f).
NonSymLambdaProfile extract_nonsym_lambda(const MetricOracle& oracle,
                                          const std::optional<Frame>& frame = std::nullopt);
RiemannProfile extract_phi_psi(const SesquiOracle& oracle,
                               const std::optional<Frame>& frame = std::nullopt);

struct RoundtripReport {
    bool passed = true;
    double max_deviation = 0;  // relative, |a - b| / (1 + |b|)
    std::optional<PairWitness> witness;
    std::size_t samples = 0;
};

// Every tenth sample is collinear (q = 0) and the next one orthogonal (p = 0).
inline constexpr std::size_t kEdgePeriod = 10;

RoundtripReport roundtrip_check(const MetricOracle& oracle, const MetricSpec& reconstructed,
                                std::size_t n_samples, std::uint64_t seed, double tol = 1e-9,
                                Exec exec = Exec::Parallel);
// Compares sigma on triples (g, f, h); the witness carries (g, h).
RoundtripReport roundtrip_check(const SesquiOracle& oracle, const RiemannProfile& reconstructed,
                                std::size_t n_samples, std::uint64_t seed, double tol = 1e-9,
                                Exec exec = Exec::Parallel);

// Largest relative disagreement between the profile extracted in the
// standard frame and in (U e1, U e2) for random rotations U (unitaries over
// C), on a grid of radii and canonical points.
double basis_independence_defect(const MetricOracle& oracle, std::size_t n_rotations,
                                 std::uint64_t seed, std::size_t grid_size = 8);
double basis_independence_defect(const SesquiOracle& oracle, std::size_t n_rotations,
                                 std::uint64_t seed, std::size_t grid_size = 8);

// CSV snapshots: (r, tau, theta) and (r, phi, psi).
Table tabulate_theta(const ThetaProfile& profile, std::span<const double> radii,
                     std::size_t n_tau);
Table tabulate_phi_psi(const RiemannProfile& profile, std::span<const double> radii);

}  // namespace finsler
