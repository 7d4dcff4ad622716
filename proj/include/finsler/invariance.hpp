#pragma once

// Symmetry tests of linear maps against metrics, congruence classification
// and falsification probes for "every symmetry is a congruence".

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/metric_json.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

struct SymmetryVerdict {
    bool is_symmetry = true;
    double max_deviation = 0;  // |rho_{Tg}(Th) - rho_g(h)| / (1 + |rho_g(h)|)
    std::optional<PairWitness> witness;
    std::size_t samples_used = 0;
    std::size_t skipped = 0;  // samples with |Tg| outside the domain (counted as violations)
};

struct SymmetryOptions {
    double tol = 1e-9;
    // Stop after the block in which a deviation exceeded early_exit_factor * tol.
    // Blocks have a fixed size, so the report does not depend on threading.
    bool early_exit = true;
    double early_exit_factor = 1e3;
    Exec exec = Exec::Parallel;
};

// T must be square of the spec's dimension. Real maps are accepted on complex
// specs (acting through their complexification); complex maps on real specs
// are rejected.
SymmetryVerdict is_symmetry(const LinearMap& t, const MetricSpec& spec, std::size_t n_samples,
                            std::uint64_t seed, const SymmetryOptions& opts = {});

struct InvarianceSuiteReport {
    bool passed = true;
    double max_deviation = 0;
    std::size_t maps = 0;
    std::size_t samples = 0;
    std::optional<PairWitness> witness;
};

// n_unitaries Haar unitaries, pairs_per_map fresh general-position pairs each.
InvarianceSuiteReport isometry_invariance_suite(const MetricSpec& spec, std::size_t n_unitaries,
                                                std::uint64_t seed, double tol = 1e-9,
                                                std::size_t pairs_per_map = 2,
                                                Exec exec = Exec::Parallel);

struct CongruenceClass {
    enum class Kind { Isometry, Congruence, NotCongruence };
    Kind kind = Kind::NotCongruence;
    double c = 0;         // common singular value (Isometry / Congruence)
    double sv_ratio = 0;  // s_max / s_min (NotCongruence; inf for singular maps)
};
std::string_view to_string(CongruenceClass::Kind k) noexcept;

CongruenceClass classify_congruence(const LinearMap& t, double tol = 1e-9);

// Gaussian matrix conditioned on s_max / s_min >= min_ratio.
LinearMap random_non_congruence(std::size_t dim, Field field, double min_ratio, Rng& rng);
// Gaussian matrix with a column flipped to make det > 0, scaled to det = 1.
LinearMap random_unimodular(Rng& rng);

struct ProbeReport {
    bool vacuous = false;  // spec vanished on every sample: nothing to probe
    bool homothety_invariant = false;
    std::size_t maps_tested = 0;
    bool all_failed = true;  // every non-congruence map failed with deviation > fail_threshold
    double min_failure_deviation = kInf;
    std::optional<LinearMap> worst_map;  // non-congruence map closest to being a symmetry
    std::size_t controls_tested = 0;
    bool controls_passed = true;
    double worst_control_deviation = 0;
    bool passed() const noexcept { return !vacuous && all_failed && controls_passed; }
};

struct ProbeOptions {
    std::size_t n_maps = 100;
    std::size_t n_samples = 200;
    double min_sv_ratio = 1.1;
    double fail_threshold = 1e-3;
    double control_tol = 1e-9;
    Exec exec = Exec::Parallel;
};

// Requires dim >= 3. Controls are c U: |c| random in [0.5, 2] when the spec
// is homothety invariant (checked at alpha = 2 and 3), otherwise |c| = 1 with
// a random sign or phase.
ProbeReport theorem_main_probe(const MetricSpec& spec, std::uint64_t seed,
                               const ProbeOptions& opts = {});

struct Dim2Report {
    std::size_t maps_tested = 0;
    bool all_passed = true;
    double worst_deviation = 0;
    std::size_t worst_map = 0;
};

// Every map must be real 2x2 with |det| = 1 within tol (NumericError otherwise).
Dim2Report dim2_exception_check(double b, std::span<const LinearMap> maps, std::size_t n_samples,
                                std::uint64_t seed, double tol = 1e-9,
                                Field field = Field::Real);

struct RotationSufficiencyReport {
    bool rotations_pass = true;
    bool orthogonal_pass = true;
    double rotation_deviation = 0;
    double orthogonal_deviation = 0;
    bool agree() const noexcept { return rotations_pass == orthogonal_pass; }
};

// Real field, dim >= 3. Orthogonal maps alternate between det +1 and det -1.
RotationSufficiencyReport rotation_sufficiency_check(const MetricSpec& spec,
                                                     std::size_t n_rotations,
                                                     std::size_t n_samples, std::uint64_t seed,
                                                     double tol = 1e-10);

Json to_json(const SymmetryVerdict& v);
// { spec, map, verdict, max_deviation, witness, samples_used, skipped }.
Json symmetry_report_json(const MetricSpec& spec, const LinearMap& t, const SymmetryVerdict& v);
Json to_json(const ProbeReport& r);

}  // namespace finsler
