// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "finsler/decomposition.hpp"
#include "finsler/error.hpp"
#include "finsler/expr.hpp"
#include "finsler/geometry.hpp"
#include "finsler/invariance.hpp"
#include "test_support.hpp"

using namespace finsler;
using finsler::testing::battery;
using finsler::testing::kFields;
using finsler::testing::kPi;

namespace {

// Collects failed conditions; the first few are echoed in the report line.
struct Verdict {
    std::vector<std::string> failures;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string label(const std::string& spec, std::size_t dim, Field field) {
    return spec + "/" + std::to_string(dim) + std::string(field == Field::Real ? "R" : "C");
}

// ------------------------------------------------------------------ 1

void isometry_invariance(Verdict& v) {
    double worst = 0;
    std::size_t suites = 0;
    for (const std::size_t dim : {2, 3, 5}) {
        for (const Field field : kFields) {
            for (const auto& [name, spec] : battery(dim, field)) {
                const auto rep = isometry_invariance_suite(spec, 500, 1000 + dim, 1e-9);
                worst = std::max(worst, rep.max_deviation);
                ++suites;
                v.require(rep.passed && rep.maps == 500,
                          label(name, dim, field) + " deviation " + fmt(rep.max_deviation));
            }
        }
    }
    v.note << suites << " suites x 500 unitaries, max deviation " << fmt(worst);
}

// ------------------------------------------------------------------ 2

void decomposition_roundtrips(Verdict& v) {
    double worst_rt = 0;
    double worst_basis = 0;
    std::size_t checks = 0;
    auto record = [&](const RoundtripReport& r, const std::string& what) {
        worst_rt = std::max(worst_rt, r.max_deviation);
        ++checks;
        v.require(r.passed && r.samples == 1000, what + " roundtrip " + fmt(r.max_deviation));
    };
    auto record_basis = [&](double d, const std::string& what) {
        worst_basis = std::max(worst_basis, d);
        v.require(d <= 1e-9, what + " basis defect " + fmt(d));
    };
    const std::size_t dim = 3;
    for (const Field field : kFields) {
        for (const auto& [name, spec] : battery(dim, field)) {
            const std::string tag = label(name, dim, field);
            const auto oracle = MetricOracle::from_spec(spec);
            if (spec.is_symmetric()) {
                const auto lambda = MetricSpec::from_lambda(extract_lambda(oracle), dim, field, spec.domain());
                const auto theta = MetricSpec::from_theta(extract_theta(oracle), dim, field, spec.domain());
                record(roundtrip_check(oracle, lambda, 1000, 21, 1e-9), tag + " lambda");
                record(roundtrip_check(oracle, theta, 1000, 22, 1e-9), tag + " theta");
                v.require(validate_profile(lambda, 12, 23).passed, tag + " extracted lambda symmetry");
            } else {
                const auto ns = MetricSpec::from_nonsym_lambda(extract_nonsym_lambda(oracle), dim, field,
                                                               spec.domain());
                record(roundtrip_check(oracle, ns, 1000, 24, 1e-9), tag + " nonsym lambda");
            }
            record_basis(basis_independence_defect(oracle, 20, 25), tag);
            if (const auto form = spec.riemann_form()) {
                const auto so = SesquiOracle::from_profile(*form, dim, field);
                record(roundtrip_check(so, extract_phi_psi(so), 1000, 26, 1e-9), tag + " phi/psi");
                record_basis(basis_independence_defect(so, 20, 27), tag + " phi/psi");
            }
        }
    }
    v.note << checks << " roundtrips, max deviation " << fmt(worst_rt) << ", basis defect "
           << fmt(worst_basis);
}

// ------------------------------------------------------------------ 3

void pd_against_eigenvalues(Verdict& v) {
    const double threshold = 1e-8;
    std::size_t by_kind[3] = {0, 0, 0};
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto rng = make_rng(3, 0, i);
        std::uniform_real_distribution<double> uni(-1, 1);
        const std::size_t dim = 2 + i % 5;
        const Field field = i % 2 ? Field::Complex : Field::Real;
        const double r = std::exp(std::uniform_real_distribution<double>(std::log(0.1), std::log(10))(rng));
        double phi = uni(rng);
        double psi = uni(rng) / r;
        if (i % 5 == 1) phi = std::abs(phi), psi = -phi / r;  // degenerate along g
        if (i % 5 == 2) phi = 0, psi = std::abs(psi);         // degenerate across g
        const RiemannProfile profile{[phi](double) { return phi; }, [psi](double) { return psi; },
                                     RadiusDomain::positive(), "", ""};
        const double rs[] = {r};
        const auto verdict = check_positive_definite(profile, rs, threshold)[0];

        const auto basis = random_unitary(dim, field, rng);
        const auto g = random_unit_vector(dim, field, rng).scaled(std::sqrt(r));
        Eigen::MatrixXcd m(dim, dim);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                m(a, b) = eval_sesquilinear(profile, g, basis.apply(Vector::basis(dim, a, field)),
                                            basis.apply(Vector::basis(dim, b, field)));
        const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues().minCoeff();
        const Definiteness oracle = lowest > threshold    ? Definiteness::PositiveDefinite
                                    : lowest >= -threshold ? Definiteness::SemiDefiniteDegenerate
                                                           : Definiteness::Indefinite;
        ++by_kind[static_cast<int>(oracle)];
        v.require(verdict == oracle, "case " + std::to_string(i) + ": criterion " +
                                         std::string(to_string(verdict)) + ", eigenvalue " + fmt(lowest));
    }
    v.note << "200 cases (PD " << by_kind[0] << ", degenerate " << by_kind[1] << ", indefinite "
           << by_kind[2] << ")";
}

// ------------------------------------------------------------------ 4

void kaehler(Verdict& v) {
    const auto rs = RadiusDomain::positive().grid(50);
    std::size_t fs_pass = 0;
    for (const auto& s : check_kaehler(fubini_study_profile(), rs, std::nullopt, 1e-6)) fs_pass += s.passed;
    v.require(fs_pass == 50, "Fubini-Study passes at " + std::to_string(fs_pass) + "/50 radii");

    const auto probe_r = RadiusDomain::positive().grid(9);
    std::size_t pd = 0, kaehler_count = 0, both = 0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            const double a = -2 + 0.1 * i;
            const double b = -2 + 0.1 * j;
            const auto profile = congruence_invariant_riemann(a, b);
            bool is_pd = true;
            for (auto d : check_positive_definite(profile, probe_r)) is_pd = is_pd && d == Definiteness::PositiveDefinite;
            bool is_k = true;
            for (const auto& s : check_kaehler(profile, probe_r)) is_k = is_k && s.passed;
            pd += is_pd;
            kaehler_count += is_k;
            both += is_pd && is_k;
            if (is_pd && is_k) v.require(false, "PD Kaehler at a=" + fmt(a) + ", b=" + fmt(b));
        }
    }
    // Non-vacuity: each property holds somewhere on its own.
    v.require(pd > 0 && kaehler_count > 0, "a property never holds on the grid");
    v.note << "FS " << fs_pass << "/50; grid 41x41: PD " << pd << ", Kaehler " << kaehler_count
           << ", both " << both;
}

// ------------------------------------------------------------------ 5

void theorem_probe(Verdict& v) {
    double min_fail = kInf;
    double worst_control = 0;
    std::size_t probes = 0;
    for (const std::size_t dim : {3, 4, 5}) {
        for (const Field field : kFields) {
            for (const auto& [name, spec] : battery(dim, field)) {
                const auto rep = theorem_main_probe(spec, 500 + dim);
                ++probes;
                min_fail = std::min(min_fail, rep.min_failure_deviation);
                worst_control = std::max(worst_control, rep.worst_control_deviation);
                v.require(rep.passed() && rep.maps_tested == 100 && rep.controls_tested == 100,
                          label(name, dim, field) + " min failure " + fmt(rep.min_failure_deviation) +
                              ", control " + fmt(rep.worst_control_deviation));
            }
        }
    }
    Rng rng(77);
    std::vector<LinearMap> maps;
    for (int i = 0; i < 100; ++i) maps.push_back(random_unimodular(rng));
    const auto d2 = dim2_exception_check(1.0, maps, 200, 78, 1e-9);
    v.require(d2.all_passed, "area under unimodular maps " + fmt(d2.worst_deviation));
    const auto doubled = is_symmetry(LinearMap::identity(2, Field::Real).scaled(2.0), MetricSpec::area_dim2(1.0), 200, 79);
    v.require(!doubled.is_symmetry, "area accepted 2I");
    v.note << probes << " probes, min failure deviation " << fmt(min_fail) << ", worst control "
           << fmt(worst_control) << "; dim 2: unimodular worst " << fmt(d2.worst_deviation)
           << ", 2I deviation " << fmt(doubled.max_deviation);
}

// ------------------------------------------------------------------ 6

void lengths(Verdict& v) {
    const auto circle = Curve::parametric(finsler::testing::unit_circle, 0, kPi / 2,
                                          [](double t) { return Vector::real({-std::sin(t), std::cos(t)}); });
    const double euc = curve_length(MetricSpec::euclidean(2, Field::Real), circle, 10001);
    const double fs = curve_length(MetricSpec::fubini_study(2, Field::Real), circle, 10001);
    const double fsr = curve_length(MetricSpec::from_riemann(fubini_study_profile(), 2, Field::Real), circle, 10001);
    const double glue = curve_length(MetricSpec::from_lambda(lambda_profile("p/r"), 2, Field::Real), circle, 10001);
    v.require(std::abs(euc - kPi / 2) <= 1e-6, "euclidean quarter circle " + fmt(euc - kPi / 2));
    v.require(std::abs(fs - kPi / 2) <= 1e-6, "fubini-study quarter circle " + fmt(fs - kPi / 2));
    v.require(std::abs(fsr - kPi / 2) <= 1e-6, "fubini-study (riemann) quarter circle " + fmt(fsr - kPi / 2));
    v.require(std::abs(glue) <= 1e-9, "p/r on the sphere " + fmt(glue));
    const double d1 = polygonal_delta_length(Delta::One, circle, 10000);
    const double d2 = polygonal_delta_length(Delta::Two, circle, 10000);
    v.require(std::abs(d1 - kPi / 2) <= 1e-3, "delta1 polygon " + fmt(d1 - kPi / 2));
    v.require(std::abs(d2 - kPi / 2) <= 1e-3, "delta2 polygon " + fmt(d2 - kPi / 2));
    const double steps[] = {1e-1, 1e-2, 1e-3, 1e-4};
    const auto table = intrinsification_ratio(circle, 0, steps);
    v.require(table.monotone(), "intrinsification table not monotone");
    v.require(table.final_error() <= 1e-3, "intrinsification error " + fmt(table.final_error()));
    v.note << "euclid " << fmt(euc - kPi / 2) << ", FS " << fmt(fs - kPi / 2) << ", p/r " << fmt(glue)
           << ", delta1 " << fmt(d1 - kPi / 2) << ", delta2 " << fmt(d2 - kPi / 2) << ", ratio "
           << fmt(table.final_error());
}

// ------------------------------------------------------------------ 7

// Dijkstra over a k-NN graph of random unit vectors of R^2 with chord weights.
double knn_oracle(std::size_t n_points, std::size_t k, std::uint64_t seed) {
    std::vector<double> angle = {0, kPi / 2};
    Rng rng(seed);
    std::uniform_real_distribution<double> uni(0, 2 * kPi);
    while (angle.size() < n_points + 2) angle.push_back(uni(rng));
    const std::size_t n = angle.size();
    auto chord = [&](std::size_t a, std::size_t b) {
        return std::sqrt(std::max(0.0, 2 - 2 * std::abs(std::cos(angle[a] - angle[b]))));
    };
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    std::vector<std::pair<double, std::size_t>> row;
    for (std::size_t a = 0; a < n; ++a) {
        row.clear();
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) row.emplace_back(chord(a, b), b);
        std::partial_sort(row.begin(), row.begin() + static_cast<long>(k), row.end());
        for (std::size_t j = 0; j < k; ++j) {
            adj[a].emplace_back(row[j].second, row[j].first);
            adj[row[j].second].emplace_back(a, row[j].first);
        }
    }
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[0] = 0;
    queue.emplace(0, 0);
    while (!queue.empty()) {
        const auto [d, a] = queue.top();
        queue.pop();
        if (d > dist[a]) continue;
        for (const auto& [b, w] : adj[a])
            if (d + w < dist[b]) queue.emplace(dist[b] = d + w, b);
    }
    return dist[1];
}

void geodesics(Verdict& v) {
    const auto euc = MetricSpec::euclidean(3, Field::Real);
    double worst = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng(derive_seed(7, i));
        const auto g = random_gaussian_vector(3, Field::Real, rng);
        const auto h = random_gaussian_vector(3, Field::Real, rng);
        GeodesicOptions opts;
        opts.seed = i;
        const double d = geodesic_distance(euc, g, h, opts).value;
        worst = std::max(worst, std::abs(d - norm(g - h)));
    }
    v.require(worst <= 1e-3, "euclidean chord error " + fmt(worst));
    const auto fs = geodesic_distance(MetricSpec::fubini_study(3, Field::Real), Vector::basis(3, 0, Field::Real),
                                      Vector::basis(3, 1, Field::Real));
    const double graph = knn_oracle(2000, 10, 7);
    v.require(std::abs(fs.value - kPi / 2) <= 1e-2, "FS distance " + fmt(fs.value));
    v.require(std::abs(fs.value - graph) <= 1e-2, "FS vs graph " + fmt(fs.value - graph));
    const auto e1 = Vector::basis(3, 0, Field::Real);
    const auto radial = geodesic_distance(MetricSpec::norm_quotient(3, Field::Real), e1, e1.scaled(2.0));
    v.require(std::abs(radial.value - std::log(2.0)) <= 1e-3, "radial " + fmt(radial.value - std::log(2.0)));
    v.note << "euclid worst " << fmt(worst) << ", FS " << fmt(fs.value - kPi / 2) << " (graph "
           << fmt(graph - kPi / 2) << "), radial " << fmt(radial.value - std::log(2.0));
}

// ------------------------------------------------------------------ 8

double eval_text(const std::string& s) { return expr::eval(expr::parse(s, {}), {}); }

std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    std::uniform_real_distribution<double> num(0.1, 5.0);
    switch (pick(rng)) {
        case 0: return std::to_string(num(rng));
        case 1: return "p";
        case 2: return "q";
        case 3: return random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1);
        case 4: return random_expr(rng, depth - 1) + "-(" + random_expr(rng, depth - 1) + ")";
        case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 6: return "-" + random_expr(rng, depth - 1) + "^2";
        case 7: return "exp(-abs(" + random_expr(rng, depth - 1) + "))";
        default: return "min(" + random_expr(rng, depth - 1) + "," + random_expr(rng, depth - 1) + ")";
    }
}

void parser(Verdict& v) {
    const std::pair<const char*, double> exact[] = {
        {"2+3*4", 14},     {"(2+3)*4", 20}, {"2^3^2", 512}, {"(2^3)^2", 64}, {"-2^2", -4},
        {"(-2)^2", 4},     {"2^-1", 0.5},   {"2-3-4", -5},  {"24/4/3", 2},   {"2*-3", -6},
        {"-3^-2", -1.0 / 9}, {"1-2*3+4/2", -3}, {"min(3,max(1,2))", 2}, {"--3", 3}};
    for (const auto& [text, want] : exact) {
        const double got = eval_text(text);
        v.require(got == want, std::string(text) + " = " + fmt(got));
    }
    try {
        expr::parse("p+*q", {"p", "q"});
        v.require(false, "p+*q accepted");
    } catch (const expr::ParseError& e) {
        v.require(e.offset() == 2, "p+*q offset " + std::to_string(e.offset()));
    }

    static const char* const tokens[] = {"p", "q", "r", "1", "2.5", "1e3", "pi", "+", "-", "*", "/", "^",
                                         "(", ")", ",", " ", "sin", "exp", "log", "sqrt", "min", "max", "."};
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> len(0, 24), tok(0, static_cast<int>(std::size(tokens)) - 1), byte(0, 255),
        raw(0, 3);
    std::size_t parsed = 0, rejected = 0, other = 0;
    for (int i = 0; i < 100000; ++i) {
        std::string text;
        const bool bytes = raw(rng) == 0;
        for (int k = len(rng); k > 0; --k) {
            if (bytes)
                text.push_back(static_cast<char>(byte(rng)));
            else
                text += tokens[tok(rng)];
        }
        try {
            const auto e = expr::parse(text, {"p", "q", "r"});
            ++parsed;
            const double slots[] = {0.5, -1.5, 2};
            try {
                (void)e.evaluate(slots);
            } catch (const expr::EvalError&) {
            }
        } catch (const expr::ParseError& e) {
            ++rejected;
            if (e.offset() > text.size()) ++other;
        } catch (...) {
            ++other;
        }
    }
    v.require(other == 0, std::to_string(other) + " fuzz inputs escaped the error contract");

    double worst = 0;
    std::uniform_real_distribution<double> bind(-2, 2);
    for (int i = 0; i < 200; ++i) {
        const auto a = expr::parse(random_expr(rng, 4), {"p", "q"});
        const auto b = expr::parse(a.to_string(), {"p", "q"});
        for (int k = 0; k < 100; ++k) {
            const double slots[] = {bind(rng), bind(rng)};
            const double x = a.evaluate(slots);
            const double y = b.evaluate(slots);
            if (std::isfinite(x)) worst = std::max(worst, std::abs(x - y) / (1 + std::abs(x)));
        }
    }
    v.require(worst <= 1e-12, "round-trip deviation " + fmt(worst));
    v.note << "fuzz: " << parsed << " parsed, " << rejected << " rejected; round-trip " << fmt(worst);
}

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds, 0 = none
    std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "isometry-invariance suite", 10, isometry_invariance},
        {2, "decomposition round-trips", 0, decomposition_roundtrips},
        {3, "PD criterion vs eigenvalue oracle", 0, pd_against_eigenvalues},
        {4, "Kaehler checks", 0, kaehler},
        {5, "symmetry probe and dim-2 exception", 30, theorem_probe},
        {6, "lengths", 0, lengths},
        {7, "geodesics", 60, geodesics},
        {8, "parser", 0, parser},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0 && secs > c.time_limit)
            v.require(false, "runtime " + fmt(secs) + " s over " + fmt(c.time_limit) + " s");
        const bool ok = v.failures.empty();
        failed += !ok;
        std::printf("%s criterion %d: %s [%.2f s] %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs,
                    v.note.str().c_str());
        for (std::size_t i = 0; i < v.failures.size() && i < 5; ++i)
            std::printf("    %s\n", v.failures[i].c_str());
        if (v.failures.size() > 5) std::printf("    ... %zu more\n", v.failures.size() - 5);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
