#include "finsler/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finsler/error.hpp"

namespace finsler {

namespace {

constexpr std::uint64_t kHomogeneityStream = 0x484f4d47;
constexpr std::uint64_t kConjugateStream = 0x434f4e4a;
constexpr std::uint64_t kRoundtripStream = 0x524f554e;
constexpr std::uint64_t kTripleStream = 0x54524950;
constexpr std::uint64_t kFrameStream = 0x4652414d;
constexpr std::size_t kValidationSamples = 64;

void require_dim2(std::size_t dim) {
    if (dim < 2) throw NumericError("decomposition requires dim ≥ 2");
}

Frame resolve(const std::optional<Frame>& frame, std::size_t dim, Field field) {
    if (!frame) return standard_frame(dim, field);
    const Frame& fr = *frame;
    if (fr.e.dim() != dim || fr.f.dim() != dim || fr.e.field() != field ||
        fr.f.field() != field)
        throw InvalidArgument("frame does not match the oracle's dimension and field");
    if (std::abs(norm(fr.e) - 1.0) > 1e-10 || std::abs(norm(fr.f) - 1.0) > 1e-10 ||
        std::abs(inner(fr.e, fr.f)) > 1e-10)
        throw InvalidArgument("frame (e, f) is not orthonormal");
    return fr;
}

void validate(const MetricOracle& oracle) {
    require_dim2(oracle.dim);
    if (!oracle.eval) throw InvalidArgument("metric oracle has no function");
    const double defect = homogeneity_defect(oracle, kValidationSamples, 0);
    if (!(defect <= kOracleValidationTol))
        throw NumericError("oracle is not homogeneous of the declared degree " +
                           std::to_string(oracle.alpha) + " (defect " + std::to_string(defect) +
                           ")");
}

void validate(const SesquiOracle& oracle) {
    require_dim2(oracle.dim);
    if (!oracle.eval) throw InvalidArgument("sesquilinear oracle has no function");
    const double defect = conjugate_symmetry_defect(oracle, kValidationSamples, 0);
    if (!(defect <= kOracleValidationTol))
        throw NumericError("sesquilinear oracle is not conjugate symmetric (defect " +
                           std::to_string(defect) + ")");
}

void require_radius(const RadiusDomain& d, double r) {
    if (!d.contains(r))
        throw OutOfDomain(r, "extraction radius " + std::to_string(r) +
                                 " is outside the oracle domain");
}

// Unit vectors on a few circles, avoiding the axes so no point is special.
std::vector<std::pair<double, double>> canonical_grid(std::size_t n) {
    std::vector<std::pair<double, double>> out;
    for (const double rho : {0.5, 1.0, 2.0})
        for (std::size_t j = 0; j < n; ++j) {
            const double a = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.3) /
                             static_cast<double>(n);
            out.emplace_back(rho * std::cos(a), rho * std::sin(a));
        }
    return out;
}

Frame rotated_frame(std::size_t dim, Field field, std::uint64_t seed, std::size_t index) {
    Rng rng = make_rng(seed, kFrameStream, index);
    const LinearMap u = field == Field::Real ? random_rotation(dim, rng)
                                             : random_unitary(dim, field, rng);
    return {u.apply(Vector::basis(dim, 0, field)), u.apply(Vector::basis(dim, 1, field))};
}

}  // namespace

MetricOracle MetricOracle::from_spec(const MetricSpec& spec) {
    return {[spec](const Vector& g, const Vector& h) { return spec.eval(g, h); },
            spec.dim(),
            spec.field(),
            spec.domain(),
            spec.lambda() ? spec.lambda()->alpha : 1.0,
            spec.is_symmetric()};
}

SesquiOracle SesquiOracle::from_profile(const RiemannProfile& profile, std::size_t dim,
                                        Field field) {
    return {[profile](const Vector& g, const Vector& f, const Vector& h) {
                return eval_sesquilinear(profile, g, f, h);
            },
            dim, field, profile.domain.square_rooted()};
}

Frame standard_frame(std::size_t dim, Field field) {
    require_dim2(dim);
    return {Vector::basis(dim, 0, field), Vector::basis(dim, 1, field)};
}

double homogeneity_defect(const MetricOracle& oracle, std::size_t n_samples, std::uint64_t seed) {
    double worst = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const SamplePair s =
            sample_pair(oracle.dim, oracle.field, oracle.domain, seed, kHomogeneityStream, i);
        Rng rng = make_rng(seed, kHomogeneityStream + 1, i);
        Scalar t = random_scalar(oracle.field, 0.25, 4.0, rng);
        if (!oracle.symmetric) t = std::abs(t);
        const double base = oracle.eval(s.g, s.h);
        const double expected = std::pow(std::abs(t), oracle.alpha) * base;
        const double got = oracle.eval(s.g, s.h.scaled(t));
        const double d = relative_deviation(got, expected);
        worst = std::isnan(d) ? kInf : std::max(worst, d);
    }
    return worst;
}

double conjugate_symmetry_defect(const SesquiOracle& oracle, std::size_t n_samples,
                                 std::uint64_t seed) {
    double worst = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const SamplePair s =
            sample_pair(oracle.dim, oracle.field, oracle.domain, seed, kConjugateStream, i);
        Rng rng = make_rng(seed, kConjugateStream + 1, i);
        const Vector f = random_gaussian_vector(oracle.dim, oracle.field, rng);
        const Scalar a = oracle.eval(s.g, f, s.h);
        const Scalar b = std::conj(oracle.eval(s.g, s.h, f));
        const double d = relative_deviation(b, a);
        worst = std::isnan(d) ? kInf : std::max(worst, d);
    }
    return worst;
}

SymLambdaProfile extract_lambda(const MetricOracle& oracle, const std::optional<Frame>& frame) {
    validate(oracle);
    const Frame fr = resolve(frame, oracle.dim, oracle.field);
    const double alpha = oracle.alpha;
    return {[o = oracle, fr, alpha](double r, double p, double q) {
                require_radius(o.domain, r);
                return std::pow(r, -alpha) *
                       o.eval(fr.e.scaled(r), fr.e.scaled(p) + fr.f.scaled(q));
            },
            alpha, ""};
}

ThetaProfile extract_theta(const MetricOracle& oracle, const std::optional<Frame>& frame) {
    if (oracle.alpha != 1.0)
        throw InvalidArgument("theta extraction requires homogeneity degree 1");
    const SymLambdaProfile lam = extract_lambda(oracle, frame);
    return {[fn = lam.fn](double r, double tau) {
                return r * fn(r, std::cos(tau), std::sin(tau));
            },
            ""};
}

NonSymLambdaProfile extract_nonsym_lambda(const MetricOracle& oracle,
                                          const std::optional<Frame>& frame) {
    if (oracle.alpha != 1.0)
        throw InvalidArgument("non-symmetric extraction requires homogeneity degree 1");
    validate(oracle);
    const Frame fr = resolve(frame, oracle.dim, oracle.field);
    return {[o = oracle, fr](double r, Scalar p, double q) {
                require_radius(o.domain, r);
                return o.eval(fr.e.scaled(r), fr.e.scaled(p) + fr.f.scaled(q)) / r;
            },
            ""};
}

RiemannProfile extract_phi_psi(const SesquiOracle& oracle, const std::optional<Frame>& frame) {
    validate(oracle);
    const Frame fr = resolve(frame, oracle.dim, oracle.field);
    auto phi = [o = oracle, fr](double r) {
        const double s = std::sqrt(r);
        require_radius(o.domain, s);
        return o.eval(fr.e.scaled(s), fr.f, fr.f).real();
    };
    auto psi = [o = oracle, fr, phi](double r) {
        const double s = std::sqrt(r);
        require_radius(o.domain, s);
        return (o.eval(fr.e.scaled(s), fr.e, fr.e).real() - phi(r)) / r;
    };
    return {phi, psi, oracle.domain.squared(), "", ""};
}

namespace {

struct Deviation {
    double value = 0;
};

RoundtripReport summarize(const std::vector<Deviation>& devs, double tol,
                          const std::function<SamplePair(std::size_t)>& regenerate) {
    RoundtripReport rep;
    rep.samples = devs.size();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < devs.size(); ++i) {
        const double d = std::isnan(devs[i].value) ? kInf : devs[i].value;
        if (d > rep.max_deviation) {
            rep.max_deviation = d;
            worst = i;
        }
    }
    rep.passed = rep.max_deviation <= tol;
    if (!rep.passed) {
        SamplePair s = regenerate(worst);
        rep.witness = PairWitness{std::move(s.g), std::move(s.h), rep.max_deviation};
    }
    return rep;
}

}  // namespace

RoundtripReport roundtrip_check(const MetricOracle& oracle, const MetricSpec& reconstructed,
                                std::size_t n_samples, std::uint64_t seed, double tol,
                                Exec exec) {
    auto pair_at = [&](std::size_t i) {
        return sample_pair(oracle.dim, oracle.field, oracle.domain, seed, kRoundtripStream, i,
                           kEdgePeriod);
    };
    const auto devs = kernels::map_indices<Deviation>(exec, n_samples, [&](std::size_t i) {
        const SamplePair s = pair_at(i);
        return Deviation{relative_deviation(reconstructed.eval(s.g, s.h), oracle.eval(s.g, s.h))};
    });
    return summarize(devs, tol, pair_at);
}

RoundtripReport roundtrip_check(const SesquiOracle& oracle, const RiemannProfile& reconstructed,
                                std::size_t n_samples, std::uint64_t seed, double tol,
                                Exec exec) {
    auto pair_at = [&](std::size_t i) {
        return sample_pair(oracle.dim, oracle.field, oracle.domain, seed, kRoundtripStream, i,
                           kEdgePeriod);
    };
    const auto devs = kernels::map_indices<Deviation>(exec, n_samples, [&](std::size_t i) {
        const SamplePair s = pair_at(i);
        Rng rng = make_rng(seed, kTripleStream, i);
        // Every third triple is diagonal, which is what the induced metric sees.
        const Vector f = i % 3 == 2 ? s.h : random_gaussian_vector(oracle.dim, oracle.field, rng);
        return Deviation{relative_deviation(eval_sesquilinear(reconstructed, s.g, f, s.h),
                                            oracle.eval(s.g, f, s.h))};
    });
    return summarize(devs, tol, pair_at);
}

double basis_independence_defect(const MetricOracle& oracle, std::size_t n_rotations,
                                 std::uint64_t seed, std::size_t grid_size) {
    const auto radii = oracle.domain.grid(grid_size);
    const auto points = canonical_grid(grid_size);
    double worst = 0;
    if (oracle.symmetric) {
        const SymLambdaProfile ref = extract_lambda(oracle);
        for (std::size_t k = 0; k < n_rotations; ++k) {
            const SymLambdaProfile alt =
                extract_lambda(oracle, rotated_frame(oracle.dim, oracle.field, seed, k));
            for (const double r : radii)
                for (const auto& [p, q] : points)
                    worst = std::max(worst, relative_deviation(alt.fn(r, p, q), ref.fn(r, p, q)));
        }
    } else {
        const NonSymLambdaProfile ref = extract_nonsym_lambda(oracle);
        const Scalar phase = oracle.field == Field::Complex ? std::polar(1.0, 0.7) : Scalar(1.0);
        for (std::size_t k = 0; k < n_rotations; ++k) {
            const NonSymLambdaProfile alt =
                extract_nonsym_lambda(oracle, rotated_frame(oracle.dim, oracle.field, seed, k));
            for (const double r : radii)
                for (const auto& [p, q] : points)
                    worst = std::max(worst, relative_deviation(alt.fn(r, p * phase, q),
                                                               ref.fn(r, p * phase, q)));
        }
    }
    return worst;
}

double basis_independence_defect(const SesquiOracle& oracle, std::size_t n_rotations,
                                 std::uint64_t seed, std::size_t grid_size) {
    const RiemannProfile ref = extract_phi_psi(oracle);
    const auto radii = ref.domain.grid(grid_size);
    double worst = 0;
    for (std::size_t k = 0; k < n_rotations; ++k) {
        const RiemannProfile alt =
            extract_phi_psi(oracle, rotated_frame(oracle.dim, oracle.field, seed, k));
        for (const double r : radii) {
            worst = std::max(worst, relative_deviation(alt.phi(r), ref.phi(r)));
            worst = std::max(worst, relative_deviation(alt.psi(r), ref.psi(r)));
        }
    }
    return worst;
}

Table tabulate_theta(const ThetaProfile& profile, std::span<const double> radii,
                     std::size_t n_tau) {
    if (n_tau < 2) throw InvalidArgument("theta table needs at least 2 angles");
    Table t{{"r", "tau", "theta"}, {}};
    for (const double r : radii)
        for (std::size_t j = 0; j < n_tau; ++j) {
            const double tau = std::numbers::pi / 2.0 * static_cast<double>(j) /
                               static_cast<double>(n_tau - 1);
            t.add_row({r, tau, profile.fn(r, tau)});
        }
    return t;
}

Table tabulate_phi_psi(const RiemannProfile& profile, std::span<const double> radii) {
    Table t{{"r", "phi", "psi"}, {}};
    for (const double r : radii) t.add_row({r, profile.phi(r), profile.psi(r)});
    return t;
}

}  // namespace finsler
