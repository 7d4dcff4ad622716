#include "finsler/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finsler/error.hpp"

namespace finsler {

namespace {

constexpr std::uint64_t kSymmetryStream = 0x53594d4d;
constexpr std::uint64_t kSuiteStream = 0x53554954;
constexpr std::uint64_t kProbeStream = 0x50524f42;
constexpr std::uint64_t kControlStream = 0x434f4e54;
constexpr std::uint64_t kRotationStream = 0x524f5441;
constexpr std::size_t kBlock = 64;

LinearMap adapt(const LinearMap& t, const MetricSpec& spec) {
    if (t.rows() != spec.dim() || t.cols() != spec.dim())
        throw InvalidArgument("map is " + std::to_string(t.rows()) + "x" +
                              std::to_string(t.cols()) + " but the metric lives on F^" +
                              std::to_string(spec.dim()));
    if (t.field() == spec.field()) return t;
    if (t.field() == Field::Real) return t.as_complex();
    throw InvalidArgument("complex map cannot act on a real metric");
}

struct SampleOutcome {
    double deviation = 0;
    bool skipped = false;
};

SampleOutcome symmetry_sample(const LinearMap& t, const MetricSpec& spec, const SamplePair& s) {
    const Vector tg = t.apply(s.g);
    if (!spec.domain().contains(norm(tg))) return {kInf, true};
    const double base = spec.eval(s.g, s.h);
    const double d = relative_deviation(spec.eval(tg, t.apply(s.h)), base);
    return {std::isnan(d) ? kInf : d, false};
}

Scalar control_scalar(Field field, bool scale_free, Rng& rng) {
    return scale_free ? random_scalar(field, 0.5, 2.0, rng) : random_scalar(field, 1.0, 1.0, rng);
}

}  // namespace

SymmetryVerdict is_symmetry(const LinearMap& t_in, const MetricSpec& spec, std::size_t n_samples,
                            std::uint64_t seed, const SymmetryOptions& opts) {
    const LinearMap t = adapt(t_in, spec);
    SymmetryVerdict v;
    std::size_t worst = 0;
    const double exit_level = opts.early_exit_factor * opts.tol;
    for (std::size_t start = 0; start < n_samples; start += kBlock) {
        const std::size_t len = std::min(kBlock, n_samples - start);
        const auto out = kernels::map_indices<SampleOutcome>(opts.exec, len, [&](std::size_t k) {
            const SamplePair s = sample_pair(spec.dim(), spec.field(), spec.domain(), seed,
                                             kSymmetryStream, start + k);
            return symmetry_sample(t, spec, s);
        });
        for (std::size_t k = 0; k < len; ++k) {
            ++v.samples_used;
            if (out[k].skipped) ++v.skipped;
            if (out[k].deviation > v.max_deviation) {
                v.max_deviation = out[k].deviation;
                worst = start + k;
            }
        }
        if (opts.early_exit && v.max_deviation > exit_level) break;
    }
    v.is_symmetry = v.max_deviation <= opts.tol;
    if (!v.is_symmetry) {
        SamplePair s = sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kSymmetryStream,
                                   worst);
        v.witness = PairWitness{std::move(s.g), std::move(s.h), v.max_deviation};
    }
    return v;
}

InvarianceSuiteReport isometry_invariance_suite(const MetricSpec& spec, std::size_t n_unitaries,
                                                std::uint64_t seed, double tol,
                                                std::size_t pairs_per_map, Exec exec) {
    struct Outcome {
        double deviation = 0;
        std::size_t worst_pair = 0;
    };
    const auto out = kernels::map_indices<Outcome>(exec, n_unitaries, [&](std::size_t k) {
        Rng rng = make_rng(seed, kSuiteStream, k);
        const LinearMap u = random_unitary(spec.dim(), spec.field(), rng);
        Outcome o;
        for (std::size_t j = 0; j < pairs_per_map; ++j) {
            const std::size_t idx = k * pairs_per_map + j;
            const SamplePair s =
                sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kSuiteStream + 1, idx);
            const double d = symmetry_sample(u, spec, s).deviation;
            if (d > o.deviation) {
                o.deviation = d;
                o.worst_pair = idx;
            }
        }
        return o;
    });
    InvarianceSuiteReport rep;
    rep.maps = n_unitaries;
    rep.samples = n_unitaries * pairs_per_map;
    std::size_t worst = 0;
    for (const auto& o : out)
        if (o.deviation > rep.max_deviation) {
            rep.max_deviation = o.deviation;
            worst = o.worst_pair;
        }
    rep.passed = rep.max_deviation <= tol;
    if (!rep.passed) {
        SamplePair s =
            sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kSuiteStream + 1, worst);
        rep.witness = PairWitness{std::move(s.g), std::move(s.h), rep.max_deviation};
    }
    return rep;
}

std::string_view to_string(CongruenceClass::Kind k) noexcept {
    switch (k) {
        case CongruenceClass::Kind::Isometry: return "isometry";
        case CongruenceClass::Kind::Congruence: return "congruence";
        case CongruenceClass::Kind::NotCongruence: return "not-congruence";
    }
    return "?";
}

CongruenceClass classify_congruence(const LinearMap& t, double tol) {
    if (t.rows() != t.cols() || t.rows() == 0)
        throw InvalidArgument("congruence classification needs a square map");
    const std::vector<double> sv = singular_values(t);
    const double smax = sv.front();
    const double smin = sv.back();
    CongruenceClass out;
    if (!(smax > 0.0)) {
        out.sv_ratio = kInf;
        return out;
    }
    if (smin > 0.0 && smax - smin <= tol * smax) {
        out.c = std::accumulate(sv.begin(), sv.end(), 0.0) / static_cast<double>(sv.size());
        out.sv_ratio = smax / smin;
        out.kind = std::abs(out.c - 1.0) <= tol ? CongruenceClass::Kind::Isometry
                                                : CongruenceClass::Kind::Congruence;
        return out;
    }
    out.sv_ratio = smin > 0.0 ? smax / smin : kInf;
    return out;
}

LinearMap random_non_congruence(std::size_t dim, Field field, double min_ratio, Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j)
            m.col(static_cast<Eigen::Index>(j)) = random_gaussian_vector(dim, field, rng).data();
        LinearMap t = LinearMap::from_eigen(std::move(m), field);
        const auto sv = singular_values(t);
        if (sv.back() > 0.0 && sv.front() / sv.back() >= min_ratio) return t;
    }
    throw NumericError("could not sample a map with singular-value ratio >= " +
                       format_double(min_ratio));
}

LinearMap random_unimodular(Rng& rng) {
    for (;;) {
        Eigen::MatrixXcd m(2, 2);
        for (Eigen::Index j = 0; j < 2; ++j)
            m.col(j) = random_gaussian_vector(2, Field::Real, rng).data();
        double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
        if (std::abs(det) < 1e-3) continue;
        if (det < 0) {
            m.col(0) = -m.col(0);
            det = -det;
        }
        m /= std::sqrt(det);
        return LinearMap::from_eigen(std::move(m), Field::Real);
    }
}

ProbeReport theorem_main_probe(const MetricSpec& spec, std::uint64_t seed,
                               const ProbeOptions& opts) {
    if (spec.dim() < 3)
        throw InvalidArgument("the symmetry theorem requires dim >= 3 (got " +
                              std::to_string(spec.dim()) + ")");
    ProbeReport rep;

    bool nonzero = false;
    for (std::size_t i = 0; i < opts.n_samples && !nonzero; ++i) {
        const SamplePair s =
            sample_pair(spec.dim(), spec.field(), spec.domain(), seed, kSymmetryStream, i);
        nonzero = spec.eval(s.g, s.h) != 0.0;
    }
    if (!nonzero) {
        rep.vacuous = true;
        rep.all_failed = false;
        return rep;
    }

    auto homothety = [&](double alpha) {
        try {
            return check_homothety_invariance(spec, alpha, 64, seed, 1e-9, opts.exec).invariant;
        } catch (const NumericError&) {
            return false;
        }
    };
    rep.homothety_invariant = homothety(2.0) && homothety(3.0);

    SymmetryOptions full{opts.control_tol, false, 1e3, Exec::Serial};
    struct MapOutcome {
        double deviation = 0;
    };
    // Parallel over maps; each map's sample loop runs serially inside.
    const auto maps = kernels::map_indices<MapOutcome>(opts.exec, opts.n_maps, [&](std::size_t k) {
        Rng rng = make_rng(seed, kProbeStream, k);
        const LinearMap t = random_non_congruence(spec.dim(), spec.field(), opts.min_sv_ratio, rng);
        return MapOutcome{is_symmetry(t, spec, opts.n_samples, seed, full).max_deviation};
    });
    rep.maps_tested = maps.size();
    std::size_t worst = 0;
    for (std::size_t k = 0; k < maps.size(); ++k)
        if (maps[k].deviation < rep.min_failure_deviation) {
            rep.min_failure_deviation = maps[k].deviation;
            worst = k;
        }
    rep.all_failed = rep.min_failure_deviation > opts.fail_threshold;
    if (!maps.empty()) {
        Rng rng = make_rng(seed, kProbeStream, worst);
        rep.worst_map = random_non_congruence(spec.dim(), spec.field(), opts.min_sv_ratio, rng);
    }

    const auto controls =
        kernels::map_indices<MapOutcome>(opts.exec, opts.n_maps, [&](std::size_t k) {
            Rng rng = make_rng(seed, kControlStream, k);
            const LinearMap u = random_unitary(spec.dim(), spec.field(), rng);
            const Scalar c = control_scalar(spec.field(), rep.homothety_invariant, rng);
            return MapOutcome{
                is_symmetry(u.scaled(c), spec, opts.n_samples, seed, full).max_deviation};
        });
    rep.controls_tested = controls.size();
    for (const auto& c : controls)
        rep.worst_control_deviation = std::max(rep.worst_control_deviation, c.deviation);
    rep.controls_passed = rep.worst_control_deviation <= opts.control_tol;
    return rep;
}

Dim2Report dim2_exception_check(double b, std::span<const LinearMap> maps, std::size_t n_samples,
                                std::uint64_t seed, double tol, Field field) {
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const LinearMap& t = maps[k];
        if (t.rows() != 2 || t.cols() != 2 || t.field() != Field::Real)
            throw InvalidArgument("dim-2 exception check takes real 2x2 maps");
        const double det = std::abs(t.determinant());
        if (std::abs(det - 1.0) > tol)
            throw NumericError("map " + std::to_string(k) + " is not unimodular (|det| = " +
                               format_double(det) + ")");
    }
    const MetricSpec area = MetricSpec::area_dim2(b, field);
    Dim2Report rep;
    SymmetryOptions o{tol, true, 1e3, Exec::Parallel};
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const SymmetryVerdict v = is_symmetry(maps[k], area, n_samples, seed, o);
        ++rep.maps_tested;
        if (v.max_deviation > rep.worst_deviation) {
            rep.worst_deviation = v.max_deviation;
            rep.worst_map = k;
        }
        rep.all_passed = rep.all_passed && v.is_symmetry;
    }
    return rep;
}

RotationSufficiencyReport rotation_sufficiency_check(const MetricSpec& spec,
                                                     std::size_t n_rotations,
                                                     std::size_t n_samples, std::uint64_t seed,
                                                     double tol) {
    if (spec.field() != Field::Real) throw InvalidArgument("rotation check needs a real metric");
    if (spec.dim() < 3) throw InvalidArgument("rotation check needs dim >= 3");
    RotationSufficiencyReport rep;
    SymmetryOptions o{tol, true, 1e3, Exec::Parallel};
    for (std::size_t k = 0; k < n_rotations; ++k) {
        Rng rng = make_rng(seed, kRotationStream, k);
        const LinearMap rot = random_rotation(spec.dim(), rng);
        LinearMap orth = random_rotation(spec.dim(), rng);
        if (k % 2 == 1) {
            std::vector<double> flip(spec.dim(), 1.0);
            flip[0] = -1.0;
            orth = orth.compose(LinearMap::diagonal(flip, Field::Real));
        }
        const SymmetryVerdict vr = is_symmetry(rot, spec, n_samples, seed, o);
        const SymmetryVerdict vo = is_symmetry(orth, spec, n_samples, seed, o);
        rep.rotation_deviation = std::max(rep.rotation_deviation, vr.max_deviation);
        rep.orthogonal_deviation = std::max(rep.orthogonal_deviation, vo.max_deviation);
    }
    rep.rotations_pass = rep.rotation_deviation <= tol;
    rep.orthogonal_pass = rep.orthogonal_deviation <= tol;
    return rep;
}

Json to_json(const SymmetryVerdict& v) {
    Json w = nullptr;
    if (v.witness)
        w = {{"g", to_json(v.witness->g)},
             {"h", to_json(v.witness->h)},
             {"deviation", v.witness->deviation}};
    return {{"verdict", v.is_symmetry},
            {"max_deviation", v.max_deviation},
            {"witness", w},
            {"samples_used", v.samples_used},
            {"skipped", v.skipped}};
}

Json symmetry_report_json(const MetricSpec& spec, const LinearMap& t, const SymmetryVerdict& v) {
    Json j = to_json(v);
    Json s;
    try {
        s = to_json(spec);
    } catch (const InvalidArgument&) {
        s = spec.name();
    }
    j["spec"] = s;
    j["map"] = to_json(t);
    return j;
}

Json to_json(const ProbeReport& r) {
    return {{"vacuous", r.vacuous},
            {"homothety_invariant", r.homothety_invariant},
            {"maps_tested", r.maps_tested},
            {"all_failed", r.all_failed},
            {"min_failure_deviation", r.min_failure_deviation},
            {"worst_map", r.worst_map ? to_json(*r.worst_map) : Json(nullptr)},
            {"controls_tested", r.controls_tested},
            {"controls_passed", r.controls_passed},
            {"worst_control_deviation", r.worst_control_deviation},
            {"passed", r.passed()}};
}

}  // namespace finsler
