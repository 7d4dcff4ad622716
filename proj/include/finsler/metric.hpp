#pragma once

// Isometry-invariant metric families on a domain G of F^n and the pointwise
// criteria that classify them.
//
// Every family is evaluated through the canonical invariants (r, p, q) of the
// pair (g, h), so isometry invariance holds by construction:
//
//   FromLambda          rho_g(h) = lambda(|g|, p, q)
//   FromTheta           rho_g(h) = |h| theta(|g|, angle(g, h))
//   FromNonSymLambda    rho_g(h) = lambda(|g|, <h,g>, q)           (t >= 0 homogeneous)
//   FromRiemann         rho_g(h) = sign(v) sqrt|v|,  v = sigma_g(h, h)
//   CongruenceInvariant rho_g(h) = |h| / |g| vartheta(angle(g, h))
//   FubiniStudy         rho_g(h) = q / |g|^2   (induced by phi = 1/r, psi = -1/r^2)
//   Euclidean           rho_g(h) = |h|
//   AreaDim2            rho_g(h) = b |g| |h| sin angle(g, h) = b q
//   ZeroExtended        rho_0(h) = b |h|, otherwise the wrapped metric
//
// Custom wraps an arbitrary (g, h) -> real callable; it is the escape hatch
// for black-box oracles and deliberately non-invariant test metrics.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "finsler/domain.hpp"
#include "finsler/linalg.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

using LambdaFn = std::function<double(double r, double p, double q)>;
using ThetaFn = std::function<double(double r, double tau)>;
using NonSymLambdaFn = std::function<double(double r, Scalar p, double q)>;
using RadialFn = std::function<double(double r)>;
using AngleFn = std::function<double(double tau)>;
using OracleFn = std::function<double(const Vector& g, const Vector& h)>;

// `source` holds the expression text when the profile was built from one; it
// is empty for callables (e.g. extracted profiles), which are not serializable.
struct SymLambdaProfile {
    LambdaFn fn;
    double alpha = 1.0;  // homogeneity degree in (p, q)
    std::string source;
};

struct ThetaProfile {
    ThetaFn fn;
    std::string source;
};

struct NonSymLambdaProfile {
    NonSymLambdaFn fn;
    std::string source;
};

// sigma_g(f, h) = phi(|g|^2) <f, h> + psi(|g|^2) <f, g> <g, h>.
// The domain is on the argument |g|^2.
struct RiemannProfile {
    RadialFn phi;
    RadialFn psi;
    RadiusDomain domain;
    std::string phi_source;
    std::string psi_source;
};

struct VarthetaProfile {
    AngleFn fn;
    std::string source;
};

// Expression-backed constructors. Variables: lambda {r, p, q}; theta {r, tau};
// non-symmetric lambda {r, pre, pim, q}; phi, psi {r}; vartheta {tau}.
SymLambdaProfile lambda_profile(const std::string& text, double alpha = 1.0);
ThetaProfile theta_profile(const std::string& text);
NonSymLambdaProfile nonsym_lambda_profile(const std::string& text);
RiemannProfile riemann_profile(const std::string& phi, const std::string& psi,
                               RadiusDomain domain = RadiusDomain::positive());
VarthetaProfile vartheta_profile(const std::string& text);

// phi(r) = a / r, psi(r) = b / r^2 on (0, inf): the Hermitean metrics invariant
// under all congruences. (1, -1) is the Fubini-Study profile.
RiemannProfile congruence_invariant_riemann(double a, double b);
RiemannProfile fubini_study_profile();
RiemannProfile euclidean_profile();

enum class Family {
    FromLambda,
    FromTheta,
    FromNonSymLambda,
    FromRiemann,
    CongruenceInvariant,
    FubiniStudy,
    Euclidean,
    AreaDim2,
    ZeroExtended,
    Custom,
};

std::string_view family_name(Family f) noexcept;

class MetricSpec {
public:
    static MetricSpec euclidean(std::size_t dim, Field field);
    static MetricSpec fubini_study(std::size_t dim, Field field);
    static MetricSpec from_lambda(SymLambdaProfile profile, std::size_t dim, Field field,
                                  RadiusDomain domain = RadiusDomain::positive());
    static MetricSpec from_theta(ThetaProfile profile, std::size_t dim, Field field,
                                 RadiusDomain domain = RadiusDomain::positive());
    static MetricSpec from_nonsym_lambda(NonSymLambdaProfile profile, std::size_t dim, Field field,
                                         RadiusDomain domain = RadiusDomain::positive());
    // The radius domain is the square root image of the profile's domain.
    static MetricSpec from_riemann(RiemannProfile profile, std::size_t dim, Field field);
    static MetricSpec congruence_invariant(VarthetaProfile profile, std::size_t dim, Field field);
    // vartheta = 1, i.e. rho_g(h) = |h| / |g|.
    static MetricSpec norm_quotient(std::size_t dim, Field field);
    static MetricSpec area_dim2(double b, Field field = Field::Real);
    static MetricSpec zero_extended(double b, MetricSpec inner);
    static MetricSpec custom(std::string name, OracleFn fn, std::size_t dim, Field field,
                             RadiusDomain domain = RadiusDomain::positive(),
                             bool symmetric = true);

    Family family() const noexcept { return family_; }
    std::size_t dim() const noexcept { return dim_; }
    Field field() const noexcept { return field_; }
    const RadiusDomain& domain() const noexcept { return domain_; }
    // False for the non-symmetric family (homogeneous only for t >= 0).
    bool is_symmetric() const noexcept;
    std::string name() const;

    double eval(const Vector& g, const Vector& h) const;

    // Payload accessors; null when the family does not match.
    const SymLambdaProfile* lambda() const noexcept;
    const ThetaProfile* theta() const noexcept;
    const NonSymLambdaProfile* nonsym_lambda() const noexcept;
    const RiemannProfile* riemann() const noexcept;
    const VarthetaProfile* vartheta() const noexcept;
    // AreaDim2 / ZeroExtended constant b.
    double constant() const noexcept { return constant_; }
    const MetricSpec* inner() const noexcept { return inner_.get(); }

    // The (phi, psi) pair behind Riemann-type metrics: FromRiemann itself,
    // FubiniStudy (1/r, -1/r^2) and Euclidean (1, 0). Empty otherwise.
    std::optional<RiemannProfile> riemann_form() const;

private:
    MetricSpec() = default;

    using Payload = std::variant<std::monostate, SymLambdaProfile, ThetaProfile,
                                 NonSymLambdaProfile, RiemannProfile, VarthetaProfile, OracleFn>;

    Family family_ = Family::Euclidean;
    std::size_t dim_ = 1;
    Field field_ = Field::Real;
    RadiusDomain domain_;
    Payload payload_;
    double constant_ = 0;
    std::shared_ptr<const MetricSpec> inner_;
    std::string custom_name_;
    bool symmetric_ = true;
};

double eval_finsler(const MetricSpec& spec, const Vector& g, const Vector& h);

// sigma_g(f, h) for the profile's formula. Requires g != 0 and |g|^2 in domain.
Scalar eval_sesquilinear(const RiemannProfile& profile, const Vector& g, const Vector& f,
                         const Vector& h);

// sigma_g(h, h) written through the canonical invariants:
// (phi + r^2 psi) (p/r)^2 + phi (q/r)^2 with r = |g|. Used by FromRiemann.
// A coefficient phi + r^2 psi within its own rounding error of 0 counts as 0.
double riemann_quadratic(const RiemannProfile& profile, const CanonicalInvariants& ci);

struct InducedFinsler {
    MetricSpec metric;
    // Set when sigma_g(h, h) < 0 somewhere on the sampled grid; there the
    // metric reports -sqrt|v| rather than a length.
    bool negative_values_sampled = false;
};

InducedFinsler induced_finsler(const RiemannProfile& profile, std::size_t dim, Field field,
                               std::size_t grid_size = 64);

// ------------------------------------------------------------ criteria

enum class Definiteness { PositiveDefinite, SemiDefiniteDegenerate, Indefinite };
std::string_view to_string(Definiteness d) noexcept;

// phi(r) > 0 and phi(r) + r psi(r) > 0 (strict beyond tol) gives PD; both
// >= -tol with one of them within tol gives the degenerate PSD case.
std::vector<Definiteness> check_positive_definite(const RiemannProfile& profile,
                                                  std::span<const double> r_samples,
                                                  double tol = kDefaultTol);

struct KaehlerSample {
    double r = 0;
    double psi = 0;
    double dphi = 0;  // centered finite difference of phi
    double tol = 0;
    bool passed = false;
};

// psi = phi' tested by a centered difference. Defaults: step max(1e-5, 1e-5 r),
// tol 1e-6 (1 + |psi(r)|). Throws when r +- step leaves the domain.
std::vector<KaehlerSample> check_kaehler(const RiemannProfile& profile,
                                         std::span<const double> r_samples,
                                         std::optional<double> fd_step = std::nullopt,
                                         std::optional<double> tol = std::nullopt);

struct PairWitness {
    Vector g;
    Vector h;
    double deviation = 0;
};

struct HomothetyReport {
    bool invariant = true;
    double max_deviation = 0;  // absolute |rho_{alpha g}(alpha h) - rho_g(h)|
    std::optional<PairWitness> witness;
    std::size_t samples_used = 0;
    std::size_t skipped = 0;  // samples with alpha |g| outside the domain
};

// Tests rho_{alpha g}(alpha h) = rho_g(h) on seeded samples; a sample passes
// when the deviation is at most tol (1 + |rho_g(h)|).
HomothetyReport check_homothety_invariance(const MetricSpec& spec, double alpha,
                                           std::size_t n_samples, std::uint64_t seed,
                                           double tol = kDefaultTol,
                                           Exec exec = Exec::Parallel);

struct ProfileReport {
    bool passed = true;
    double worst_homogeneity = 0;
    double worst_evenness = 0;
    std::size_t non_finite = 0;
    std::size_t points = 0;
    std::string worst_case;  // human-readable location of the worst violation
};

// Sampled hypothesis checks on the profile behind `spec`: homogeneity of
// degree alpha and evenness for lambda profiles (positive homogeneity and
// evenness in q for the non-symmetric family), finiteness for the rest.
ProfileReport validate_profile(const MetricSpec& spec, std::size_t grid_size, std::uint64_t seed,
                               double tol = 1e-9);

// Null set of lambda_r restricted to a seminorm profile.
enum class NullSpace { Trivial, PAxis, QAxis, Whole, Other };
std::string_view to_string(NullSpace n) noexcept;
NullSpace lambda_null_space(const SymLambdaProfile& profile, double r,
                            std::size_t n_directions = 720, double tol = 1e-12);

// Seeded (g, h) samples with |g| in the domain. Every `edge_period`-th sample
// is forced collinear (q = 0) or orthogonal (p = 0); 0 disables forcing.
struct SamplePair {
    Vector g;
    Vector h;
};
SamplePair sample_pair(std::size_t dim, Field field, const RadiusDomain& domain,
                       std::uint64_t seed, std::uint64_t stream, std::size_t index,
                       std::size_t edge_period = 0);

}  // namespace finsler
