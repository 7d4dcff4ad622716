#include "finsler/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/expr.hpp"

namespace finsler {

namespace {

constexpr std::uint64_t kHomothetyStream = 0x484f4d4f;  // "HOMO"
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double signed_sqrt(double v) {
    if (v > 0.0) return std::sqrt(v);
    if (v < 0.0) return -std::sqrt(-v);
    return 0.0;
}

}  // namespace

// ------------------------------------------------------------ profiles

SymLambdaProfile lambda_profile(const std::string& text, double alpha) {
    const expr::Expr e = expr::parse(text, {"r", "p", "q"});
    return {[e](double r, double p, double q) {
                const double s[3] = {r, p, q};
                return e.evaluate(s);
            },
            alpha, text};
}

ThetaProfile theta_profile(const std::string& text) {
    const expr::Expr e = expr::parse(text, {"r", "tau"});
    return {[e](double r, double tau) {
                const double s[2] = {r, tau};
                return e.evaluate(s);
            },
            text};
}

NonSymLambdaProfile nonsym_lambda_profile(const std::string& text) {
    const expr::Expr e = expr::parse(text, {"r", "pre", "pim", "q"});
    return {[e](double r, Scalar p, double q) {
                const double s[4] = {r, p.real(), p.imag(), q};
                return e.evaluate(s);
            },
            text};
}

RiemannProfile riemann_profile(const std::string& phi, const std::string& psi,
                               RadiusDomain domain) {
    const expr::Expr ephi = expr::parse(phi, {"r"});
    const expr::Expr epsi = expr::parse(psi, {"r"});
    return {[ephi](double r) { return ephi.evaluate(std::span<const double>(&r, 1)); },
            [epsi](double r) { return epsi.evaluate(std::span<const double>(&r, 1)); },
            std::move(domain), phi, psi};
}

VarthetaProfile vartheta_profile(const std::string& text) {
    const expr::Expr e = expr::parse(text, {"tau"});
    return {[e](double tau) { return e.evaluate(std::span<const double>(&tau, 1)); }, text};
}

RiemannProfile congruence_invariant_riemann(double a, double b) {
    return {[a](double r) { return a / r; }, [b](double r) { return b / (r * r); },
            RadiusDomain::positive(), format_number(a) + "/r", format_number(b) + "/r^2"};
}

RiemannProfile fubini_study_profile() { return congruence_invariant_riemann(1.0, -1.0); }

RiemannProfile euclidean_profile() {
    return {[](double) { return 1.0; }, [](double) { return 0.0; }, RadiusDomain::positive(), "1",
            "0"};
}

std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::FromLambda: return "lambda";
        case Family::FromTheta: return "theta";
        case Family::FromNonSymLambda: return "nonsym-lambda";
        case Family::FromRiemann: return "riemann";
        case Family::CongruenceInvariant: return "congruence-invariant";
        case Family::FubiniStudy: return "fubini-study";
        case Family::Euclidean: return "euclidean";
        case Family::AreaDim2: return "area";
        case Family::ZeroExtended: return "zero-extended";
        case Family::Custom: return "custom";
    }
    return "?";
}

// ------------------------------------------------------------ MetricSpec

namespace {

void require_dim(std::size_t dim) {
    if (dim < 1) throw InvalidArgument("metric dimension must be at least 1");
}

void require_no_zero(const RadiusDomain& d) {
    if (d.includes_zero())
        throw InvalidArgument("only zero-extended metrics may include 0 in their domain");
}

}  // namespace

MetricSpec MetricSpec::euclidean(std::size_t dim, Field field) {
    require_dim(dim);
    MetricSpec s;
    s.family_ = Family::Euclidean;
    s.dim_ = dim;
    s.field_ = field;
    return s;
}

MetricSpec MetricSpec::fubini_study(std::size_t dim, Field field) {
    MetricSpec s = euclidean(dim, field);
    s.family_ = Family::FubiniStudy;
    return s;
}

MetricSpec MetricSpec::from_lambda(SymLambdaProfile profile, std::size_t dim, Field field,
                                   RadiusDomain domain) {
    require_dim(dim);
    require_no_zero(domain);
    if (!profile.fn) throw InvalidArgument("lambda profile has no function");
    MetricSpec s;
    s.family_ = Family::FromLambda;
    s.dim_ = dim;
    s.field_ = field;
    s.domain_ = std::move(domain);
    s.payload_ = std::move(profile);
    return s;
}

MetricSpec MetricSpec::from_theta(ThetaProfile profile, std::size_t dim, Field field,
                                  RadiusDomain domain) {
    require_dim(dim);
    require_no_zero(domain);
    if (!profile.fn) throw InvalidArgument("theta profile has no function");
    MetricSpec s;
    s.family_ = Family::FromTheta;
    s.dim_ = dim;
    s.field_ = field;
    s.domain_ = std::move(domain);
    s.payload_ = std::move(profile);
    return s;
}

MetricSpec MetricSpec::from_nonsym_lambda(NonSymLambdaProfile profile, std::size_t dim,
                                          Field field, RadiusDomain domain) {
    require_dim(dim);
    require_no_zero(domain);
    if (!profile.fn) throw InvalidArgument("non-symmetric lambda profile has no function");
    MetricSpec s;
    s.family_ = Family::FromNonSymLambda;
    s.dim_ = dim;
    s.field_ = field;
    s.domain_ = std::move(domain);
    s.payload_ = std::move(profile);
    s.symmetric_ = false;
    return s;
}

MetricSpec MetricSpec::from_riemann(RiemannProfile profile, std::size_t dim, Field field) {
    require_dim(dim);
    require_no_zero(profile.domain);
    if (!profile.phi || !profile.psi) throw InvalidArgument("riemann profile is incomplete");
    MetricSpec s;
    s.family_ = Family::FromRiemann;
    s.dim_ = dim;
    s.field_ = field;
    s.domain_ = profile.domain.square_rooted();
    s.payload_ = std::move(profile);
    return s;
}

MetricSpec MetricSpec::congruence_invariant(VarthetaProfile profile, std::size_t dim, Field field) {
    require_dim(dim);
    if (!profile.fn) throw InvalidArgument("vartheta profile has no function");
    MetricSpec s;
    s.family_ = Family::CongruenceInvariant;
    s.dim_ = dim;
    s.field_ = field;
    s.payload_ = std::move(profile);
    return s;
}

MetricSpec MetricSpec::norm_quotient(std::size_t dim, Field field) {
    return congruence_invariant({[](double) { return 1.0; }, "1"}, dim, field);
}

MetricSpec MetricSpec::area_dim2(double b, Field field) {
    if (!std::isfinite(b)) throw InvalidArgument("area constant must be finite");
    MetricSpec s = euclidean(2, field);
    s.family_ = Family::AreaDim2;
    s.constant_ = b;
    return s;
}

MetricSpec MetricSpec::zero_extended(double b, MetricSpec inner) {
    if (!std::isfinite(b)) throw InvalidArgument("zero-point constant must be finite");
    if (inner.domain().includes_zero())
        throw InvalidArgument("zero-extended metric must wrap a metric whose domain excludes 0");
    MetricSpec s;
    s.family_ = Family::ZeroExtended;
    s.dim_ = inner.dim();
    s.field_ = inner.field();
    s.domain_ = inner.domain().with_zero(true);
    s.constant_ = b;
    s.symmetric_ = inner.is_symmetric();
    s.inner_ = std::make_shared<const MetricSpec>(std::move(inner));
    return s;
}

MetricSpec MetricSpec::custom(std::string name, OracleFn fn, std::size_t dim, Field field,
                              RadiusDomain domain, bool symmetric) {
    require_dim(dim);
    if (!fn) throw InvalidArgument("custom metric has no function");
    MetricSpec s;
    s.family_ = Family::Custom;
    s.dim_ = dim;
    s.field_ = field;
    s.domain_ = std::move(domain);
    s.payload_ = std::move(fn);
    s.custom_name_ = std::move(name);
    s.symmetric_ = symmetric;
    return s;
}

bool MetricSpec::is_symmetric() const noexcept { return symmetric_; }

std::string MetricSpec::name() const {
    if (family_ == Family::Custom) return "custom:" + custom_name_;
    return std::string(family_name(family_));
}

const SymLambdaProfile* MetricSpec::lambda() const noexcept {
    return std::get_if<SymLambdaProfile>(&payload_);
}
const ThetaProfile* MetricSpec::theta() const noexcept {
    return std::get_if<ThetaProfile>(&payload_);
}
const NonSymLambdaProfile* MetricSpec::nonsym_lambda() const noexcept {
    return std::get_if<NonSymLambdaProfile>(&payload_);
}
const RiemannProfile* MetricSpec::riemann() const noexcept {
    return std::get_if<RiemannProfile>(&payload_);
}
const VarthetaProfile* MetricSpec::vartheta() const noexcept {
    return std::get_if<VarthetaProfile>(&payload_);
}

std::optional<RiemannProfile> MetricSpec::riemann_form() const {
    switch (family_) {
        case Family::FromRiemann: return *riemann();
        case Family::FubiniStudy: return fubini_study_profile();
        case Family::Euclidean: return euclidean_profile();
        default: return std::nullopt;
    }
}

double riemann_quadratic(const RiemannProfile& profile, const CanonicalInvariants& ci) {
    const double r2 = ci.r * ci.r;
    const double phi = profile.phi(r2);
    const double psi = profile.psi(r2);
    const double along = ci.p / ci.r;
    const double across = ci.q / ci.r;
    // phi + r psi cancels exactly for profiles degenerate along g (Fubini-Study);
    // residue at the rounding level would otherwise surface as sqrt(eps) |h|.
    double radial = phi + r2 * psi;
    if (std::abs(radial) <= 8 * kEps * (std::abs(phi) + std::abs(r2 * psi))) radial = 0;
    return radial * along * along + phi * across * across;
}

double MetricSpec::eval(const Vector& g, const Vector& h) const {
    if (g.dim() != dim_ || h.dim() != dim_)
        throw InvalidArgument("metric on F^" + std::to_string(dim_) +
                              " evaluated at vectors of dimension " + std::to_string(g.dim()) +
                              " and " + std::to_string(h.dim()));
    if (g.field() != field_ || h.field() != field_)
        throw InvalidArgument("metric over " + std::string(to_string(field_)) +
                              " field evaluated at vectors of another field");

    if (family_ == Family::ZeroExtended) {
        if (g.is_zero()) return constant_ * norm(h);
        return inner_->eval(g, h);
    }

    const double r = norm(g);
    if (!domain_.contains(r)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", r);
        throw OutOfDomain(r, "base point radius " + std::string(buf) + " is outside the domain of " +
                                 name());
    }
    if (family_ == Family::Custom) return std::get<OracleFn>(payload_)(g, h);
    if (family_ == Family::Euclidean) return norm(h);

    const CanonicalInvariants ci = canonical_invariants(g, h);
    switch (family_) {
        case Family::FromLambda:
            return std::get<SymLambdaProfile>(payload_).fn(ci.r, ci.p, ci.q);
        case Family::FromTheta:
            if (h.is_zero()) return 0.0;
            return norm(h) * std::get<ThetaProfile>(payload_).fn(ci.r, ci.angle());
        case Family::FromNonSymLambda:
            return std::get<NonSymLambdaProfile>(payload_).fn(ci.r, ci.pairing, ci.q);
        case Family::FromRiemann:
            return signed_sqrt(riemann_quadratic(std::get<RiemannProfile>(payload_), ci));
        case Family::CongruenceInvariant:
            if (h.is_zero()) return 0.0;
            return norm(h) / ci.r * std::get<VarthetaProfile>(payload_).fn(ci.angle());
        case Family::FubiniStudy:
            return ci.q / (ci.r * ci.r);
        case Family::AreaDim2:
            return constant_ * ci.q;
        default:
            break;
    }
    throw InvalidArgument("unhandled metric family");
}

double eval_finsler(const MetricSpec& spec, const Vector& g, const Vector& h) {
    return spec.eval(g, h);
}

Scalar eval_sesquilinear(const RiemannProfile& profile, const Vector& g, const Vector& f,
                         const Vector& h) {
    if (g.dim() != f.dim() || g.dim() != h.dim())
        throw InvalidArgument("eval_sesquilinear: dimension mismatch");
    if (g.is_zero()) throw OutOfDomain(0.0, "sigma_g is undefined at g = 0");
    const double r2 = g.data().squaredNorm();
    if (!profile.domain.contains(r2)) throw OutOfDomain(std::sqrt(r2), "|g|^2 outside the profile domain");
    return profile.phi(r2) * inner(f, h) + profile.psi(r2) * inner(f, g) * inner(g, h);
}

InducedFinsler induced_finsler(const RiemannProfile& profile, std::size_t dim, Field field,
                               std::size_t grid_size) {
    InducedFinsler out{MetricSpec::from_riemann(profile, dim, field), false};
    for (const double r2 : profile.domain.grid(grid_size)) {
        const double phi = profile.phi(r2);
        const double along = phi + r2 * profile.psi(r2);
        if (along < 0.0 || (dim >= 2 && phi < 0.0)) {
            out.negative_values_sampled = true;
            break;
        }
    }
    return out;
}

// ------------------------------------------------------------ criteria

std::string_view to_string(Definiteness d) noexcept {
    switch (d) {
        case Definiteness::PositiveDefinite: return "PD";
        case Definiteness::SemiDefiniteDegenerate: return "PSD-degenerate";
        case Definiteness::Indefinite: return "indefinite";
    }
    return "?";
}

std::vector<Definiteness> check_positive_definite(const RiemannProfile& profile,
                                                  std::span<const double> r_samples, double tol) {
    std::vector<Definiteness> out;
    out.reserve(r_samples.size());
    for (const double r : r_samples) {
        if (!profile.domain.contains(r))
            throw OutOfDomain(r, "positive-definiteness sample " + format_number(r) +
                                     " is outside the profile domain");
        const double phi = profile.phi(r);
        const double rpsi = r * profile.psi(r);
        const double along = phi + rpsi;
        // Absolute tolerance plus a roundoff floor for the cancelling sum.
        const double slack = tol + 8.0 * kEps *
                                       (std::abs(phi) + std::abs(rpsi));
        const double lowest = std::min(phi, along);
        if (std::isnan(lowest))
            out.push_back(Definiteness::Indefinite);
        else if (lowest > slack)
            out.push_back(Definiteness::PositiveDefinite);
        else if (lowest >= -slack)
            out.push_back(Definiteness::SemiDefiniteDegenerate);
        else
            out.push_back(Definiteness::Indefinite);
    }
    return out;
}

std::vector<KaehlerSample> check_kaehler(const RiemannProfile& profile,
                                         std::span<const double> r_samples,
                                         std::optional<double> fd_step,
                                         std::optional<double> tol) {
    std::vector<KaehlerSample> out;
    out.reserve(r_samples.size());
    for (const double r : r_samples) {
        const double step = fd_step.value_or(std::max(1e-5, 1e-5 * r));
        if (!profile.domain.contains_with_margin(r, step))
            throw OutOfDomain(r, "Kaehler sample " + format_number(r) +
                                     " is too close to the domain boundary for step " +
                                     format_number(step));
        KaehlerSample s;
        s.r = r;
        s.psi = profile.psi(r);
        s.dphi = (profile.phi(r + step) - profile.phi(r - step)) / (2.0 * step);
        s.tol = tol.value_or(1e-6 * (1.0 + std::abs(s.psi)));
        s.passed = std::abs(s.psi - s.dphi) <= s.tol;
        out.push_back(s);
    }
    return out;
}

SamplePair sample_pair(std::size_t dim, Field field, const RadiusDomain& domain,
                       std::uint64_t seed, std::uint64_t stream, std::size_t index,
                       std::size_t edge_period) {
    Rng rng = make_rng(seed, stream, index);
    Vector g;
    if (domain.includes_zero() && (domain.intervals().empty() || index % 10 == 9)) {
        g = Vector::zero(dim, field);
    } else {
        g = random_unit_vector(dim, field, rng).scaled(domain.sample(rng));
    }
    std::uniform_real_distribution<double> log_scale(std::log(0.5), std::log(2.0));
    Vector h = random_gaussian_vector(dim, field, rng);
    h = h.scaled(std::exp(log_scale(rng)) / std::max(norm(h), 1e-12));

    if (edge_period > 0 && !g.is_zero()) {
        const std::size_t slot = index % edge_period;
        if (slot == 0) {
            h = g.scaled(random_scalar(field, 0.5, 2.0, rng) / norm(g));
        } else if (slot == 1 && dim >= 2) {
            const Scalar c = inner(h, g) / g.data().squaredNorm();
            h = h - g.scaled(c);
        }
    }
    return {std::move(g), std::move(h)};
}

HomothetyReport check_homothety_invariance(const MetricSpec& spec, double alpha,
                                           std::size_t n_samples, std::uint64_t seed, double tol,
                                           Exec exec) {
    if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha))
        throw InvalidArgument("homothety coefficient must be positive and different from 1");

    struct Outcome {
        bool skipped = false;
        double deviation = 0;
        bool ok = true;
    };
    const auto outcomes = kernels::map_indices<Outcome>(exec, n_samples, [&](std::size_t i) {
        const SamplePair s =
            sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kHomothetyStream, i);
        Outcome o;
        if (!spec.domain().contains(alpha * norm(s.g))) {
            o.skipped = true;
            return o;
        }
        const double base = spec.eval(s.g, s.h);
        const double moved = spec.eval(s.g.scaled(alpha), s.h.scaled(alpha));
        o.deviation = std::abs(moved - base);
        o.ok = o.deviation <= tol * (1.0 + std::abs(base));
        return o;
    });

    HomothetyReport report;
    std::optional<std::size_t> worst_failure;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (o.skipped) {
            ++report.skipped;
            continue;
        }
        ++report.samples_used;
        report.max_deviation = std::max(report.max_deviation, o.deviation);
        if (!o.ok && (!worst_failure || o.deviation > outcomes[*worst_failure].deviation))
            worst_failure = i;
    }
    if (report.samples_used == 0)
        throw NumericError("homothety check: every sample left the domain under scaling by " +
                           format_number(alpha));
    if (worst_failure) {
        report.invariant = false;
        SamplePair s = sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kHomothetyStream,
                                   *worst_failure);
        report.witness = PairWitness{std::move(s.g), std::move(s.h),
                                     outcomes[*worst_failure].deviation};
    }
    return report;
}

// ------------------------------------------------------------ profile validation

namespace {

struct Tracker {
    ProfileReport& report;
    double tol;

    void homogeneity(double dev, const std::string& where) {
        if (!std::isfinite(dev)) return;
        if (dev > report.worst_homogeneity) {
            report.worst_homogeneity = dev;
            if (dev > tol) report.worst_case = "homogeneity " + where;
        }
    }
    void evenness(double dev, const std::string& where) {
        if (!std::isfinite(dev)) return;
        if (dev > report.worst_evenness) {
            report.worst_evenness = dev;
            if (dev > tol && report.worst_homogeneity <= tol) report.worst_case = "evenness " + where;
        }
    }
    void value(double v) {
        ++report.points;
        if (!std::isfinite(v)) ++report.non_finite;
    }
};

std::string at(double r, double p, double q, double t) {
    std::ostringstream os;
    os.precision(6);
    os << "at r=" << r << " p=" << p << " q=" << q << " t=" << t;
    return os.str();
}

}  // namespace

ProfileReport validate_profile(const MetricSpec& spec, std::size_t grid_size, std::uint64_t seed,
                               double tol) {
    ProfileReport report;
    Tracker track{report, tol};
    const std::size_t n = std::max<std::size_t>(grid_size, 2);
    const double ts[] = {0.0, 0.5, 1.0, 2.0};
    Rng rng = make_rng(seed, 0x56414c49);  // "VALI"
    std::uniform_real_distribution<double> jitter(0.0, 1.0);

    std::vector<std::pair<double, double>> pq;
    for (std::size_t k = 0; k < n; ++k) {
        const double rho = std::pow(10.0, -2.0 + 4.0 * static_cast<double>(k) /
                                                     static_cast<double>(n - 1));
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const double ang = 2.0 * std::numbers::pi *
                               (static_cast<double>(j) + jitter(rng)) / static_cast<double>(2 * n);
            pq.emplace_back(rho * std::cos(ang), rho * std::sin(ang));
        }
    }

    const MetricSpec* s = &spec;
    if (s->family() == Family::ZeroExtended) s = s->inner();
    const std::vector<double> radii = s->domain().grid(n);

    if (const auto* lam = s->lambda()) {
        for (const double r : radii)
            for (const auto& [p, q] : pq) {
                const double base = lam->fn(r, p, q);
                track.value(base);
                for (const double t : ts) {
                    const double scaled = lam->fn(r, t * p, t * q);
                    track.value(scaled);
                    track.homogeneity(relative_deviation(scaled, std::pow(t, lam->alpha) * base),
                                      at(r, p, q, t));
                }
                const double flip_p = lam->fn(r, -p, q);
                const double flip_q = lam->fn(r, p, -q);
                track.value(flip_p);
                track.value(flip_q);
                track.evenness(std::max(relative_deviation(flip_p, base),
                                        relative_deviation(flip_q, base)),
                               at(r, p, q, 1.0));
            }
    } else if (const auto* ns = s->nonsym_lambda()) {
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (const double r : radii)
            for (const auto& [p, q] : pq) {
                const Scalar pc = s->field() == Field::Complex ? std::polar(p, phase(rng))
                                                               : Scalar(p, 0.0);
                const double base = ns->fn(r, pc, q);
                track.value(base);
                for (const double t : ts) {
                    const double up = ns->fn(r, t * pc, t * q);
                    const double down = ns->fn(r, t * pc, -t * q);
                    track.value(up);
                    track.value(down);
                    track.homogeneity(std::max(relative_deviation(up, t * base),
                                               relative_deviation(down, t * base)),
                                      at(r, p, q, t));
                }
            }
    } else if (const auto* th = s->theta()) {
        for (const double r : radii)
            for (std::size_t j = 0; j <= 2 * n; ++j)
                track.value(th->fn(r, std::numbers::pi / 2.0 * static_cast<double>(j) /
                                          static_cast<double>(2 * n)));
    } else if (const auto* vt = s->vartheta()) {
        for (std::size_t j = 0; j <= 2 * n; ++j)
            track.value(vt->fn(std::numbers::pi / 2.0 * static_cast<double>(j) /
                               static_cast<double>(2 * n)));
    } else if (const auto* rm = s->riemann()) {
        for (const double r2 : rm->domain.grid(n)) {
            track.value(rm->phi(r2));
            track.value(rm->psi(r2));
        }
    }

    report.passed = report.non_finite == 0 && report.worst_homogeneity <= tol &&
                    report.worst_evenness <= tol;
    if (report.non_finite > 0 && report.worst_case.empty())
        report.worst_case = std::to_string(report.non_finite) + " non-finite value(s)";
    return report;
}

std::string_view to_string(NullSpace n) noexcept {
    switch (n) {
        case NullSpace::Trivial: return "trivial";
        case NullSpace::PAxis: return "p-axis";
        case NullSpace::QAxis: return "q-axis";
        case NullSpace::Whole: return "whole";
        case NullSpace::Other: return "other";
    }
    return "?";
}

NullSpace lambda_null_space(const SymLambdaProfile& profile, double r, std::size_t n_directions,
                            double tol) {
    // Axis points first, then generic directions that avoid both axes.
    std::vector<std::pair<double, double>> dirs = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (std::size_t j = 0; j < n_directions; ++j) {
        const double ang = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) /
                           static_cast<double>(n_directions);
        dirs.emplace_back(std::cos(ang), std::sin(ang));
    }
    std::vector<double> vals;
    double scale = 0;
    for (const auto& [p, q] : dirs) {
        vals.push_back(profile.fn(r, p, q));
        scale = std::max(scale, std::abs(vals.back()));
    }
    const double thresh = tol * std::max(scale, 1.0);
    auto zero = [&](std::size_t i) { return std::abs(vals[i]) <= thresh; };

    bool any_generic_zero = false;
    bool all_zero = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i >= 4 && zero(i)) any_generic_zero = true;
        if (!zero(i)) all_zero = false;
    }
    if (all_zero) return NullSpace::Whole;
    if (any_generic_zero) return NullSpace::Other;
    const bool p_axis = zero(0) && zero(1);
    const bool q_axis = zero(2) && zero(3);
    if (p_axis && q_axis) return NullSpace::Other;
    if (p_axis) return NullSpace::PAxis;
    if (q_axis) return NullSpace::QAxis;
    if (zero(0) || zero(1) || zero(2) || zero(3)) return NullSpace::Other;
    return NullSpace::Trivial;
}

}  // namespace finsler
