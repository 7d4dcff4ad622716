#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "finsler/decomposition.hpp"
#include "finsler/error.hpp"
#include "finsler/geometry.hpp"
#include "finsler/invariance.hpp"
#include "finsler/metric_json.hpp"

namespace finsler::cli {

namespace {

struct Common {
    std::string metric;
    std::string config;
    std::optional<std::size_t> dim;
    std::string field;
    std::uint64_t seed = 0;
    std::optional<std::size_t> samples;
    std::optional<double> tol;
    std::string format;
    std::string output;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--metric", c.metric,
                    "metric: name, constructor (lambda:, theta:, riemann:PHI;PSI, ...), JSON or @file");
    app->add_option("--config", c.config, "JSON file holding the metric object");
    app->add_option("--dim", c.dim, "dimension n of F^n")->check(CLI::PositiveNumber);
    app->add_option("--field", c.field, "real | complex")
        ->check(CLI::IsMember({"real", "complex", "R", "C"}));
    app->add_option("--seed", c.seed, "seed for every sampled check");
    app->add_option("--samples", c.samples, "number of samples");
    app->add_option("--tol", c.tol, "tolerance");
    app->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--output", c.output, "write the result here instead of stdout");
}

struct ParsedVector {
    std::vector<Scalar> entries;
    bool complex = false;
};

double parse_number(const std::string& s, const std::string& what) {
    double x = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || ptr != e || b == e || !std::isfinite(x))
        throw InvalidArgument("cannot parse '" + s + "' in " + what + " as a finite number");
    return x;
}

ParsedVector parse_entries(const std::string& text, const std::string& what) {
    ParsedVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.entries.emplace_back(parse_number(item, what), 0.0);
        } else {
            out.complex = true;
            out.entries.emplace_back(parse_number(item.substr(0, colon), what),
                                     parse_number(item.substr(colon + 1), what));
        }
    }
    if (out.entries.empty() || (!text.empty() && text.back() == ','))
        throw InvalidArgument(what + " must be a comma-separated list of numbers");
    return out;
}

Vector to_vector(const ParsedVector& p, Field field, const std::string& what) {
    if (field == Field::Real) {
        if (p.complex) throw InvalidArgument(what + " has complex entries but the field is real");
        std::vector<double> re;
        for (const auto& z : p.entries) re.push_back(z.real());
        return Vector::real(re);
    }
    return Vector::complex(p.entries);
}

class Session {
public:
    Session(Common& c, std::ostream& out) : c_(c), out_(out) {}

    std::optional<Field> explicit_field() const {
        if (c_.field.empty()) return std::nullopt;
        return field_from_string(c_.field);
    }

    // Dimension and field hints from vectors override nothing given explicitly.
    MetricSpec metric(std::optional<std::size_t> dim_hint = std::nullopt,
                      bool complex_hint = false) const {
        if (!c_.metric.empty() && !c_.config.empty())
            throw InvalidArgument("give either --metric or --config, not both");
        if (c_.metric.empty() && c_.config.empty())
            throw InvalidArgument("a metric is required (--metric or --config)");
        const std::string text = c_.metric.empty() ? "@" + c_.config : c_.metric;
        std::optional<Field> field = explicit_field();
        if (!field && complex_hint) field = Field::Complex;
        return parse_metric_argument(text, c_.dim ? c_.dim : dim_hint, field);
    }

    std::size_t samples(std::size_t fallback) const { return c_.samples.value_or(fallback); }
    double tol(double fallback) const { return c_.tol.value_or(fallback); }
    std::optional<double> tol() const { return c_.tol; }
    std::uint64_t seed() const { return c_.seed; }
    bool csv(bool default_csv = false) const {
        return c_.format.empty() ? default_csv : c_.format == "csv";
    }
    void require_json(const char* command) const {
        if (csv()) throw InvalidArgument(std::string(command) + " only produces JSON");
    }

    void emit(const std::string& text) const {
        if (c_.output.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(c_.output, std::ios::binary);
        if (!f) throw InvalidArgument("cannot write '" + c_.output + "'");
        f << text;
    }
    void emit(const Json& j) const { emit(write_json(j) + "\n"); }

private:
    Common& c_;
    std::ostream& out_;
};

// ------------------------------------------------------------ commands

struct EvalArgs {
    std::string g, h, f;
};

int cmd_eval(const Session& s, const EvalArgs& a) {
    const ParsedVector pg = parse_entries(a.g, "--g");
    const ParsedVector ph = parse_entries(a.h, "--h");
    std::optional<ParsedVector> pf;
    if (!a.f.empty()) pf = parse_entries(a.f, "--f");
    const bool cplx = pg.complex || ph.complex || (pf && pf->complex);
    const MetricSpec spec = s.metric(pg.entries.size(), cplx);
    const Vector g = to_vector(pg, spec.field(), "--g");
    const Vector h = to_vector(ph, spec.field(), "--h");
    Json j = {{"value", spec.eval(g, h)}};
    if (pf) {
        const auto profile = spec.riemann_form();
        if (!profile) throw InvalidArgument("--f needs a Riemann-type metric");
        const Vector f = to_vector(*pf, spec.field(), "--f");
        if (f.dim() != spec.dim()) throw InvalidArgument("--f has the wrong dimension");
        const Scalar sigma = eval_sesquilinear(*profile, g, f, h);
        j["sigma"] = {sigma.real(), sigma.imag()};
    }
    if (s.csv()) {
        Table t{{"value"}, {}};
        t.add_row({j["value"].get<double>()});
        s.emit(t.to_csv());
    } else {
        s.emit(j);
    }
    return kOk;
}

struct DecomposeArgs {
    std::size_t grid = 8;
    std::size_t n_tau = 7;
};

int cmd_decompose(const Session& s, const DecomposeArgs& a) {
    const MetricSpec spec = s.metric();
    if (spec.dim() < 2) throw NumericError("decomposition requires dim ≥ 2");
    Table table;
    if (spec.family() == Family::FromRiemann) {
        const SesquiOracle oracle = SesquiOracle::from_profile(*spec.riemann(), spec.dim(), spec.field());
        const RiemannProfile extracted = extract_phi_psi(oracle);
        table = tabulate_phi_psi(extracted, extracted.domain.grid(a.grid));
    } else {
        const MetricOracle oracle = MetricOracle::from_spec(spec);
        ThetaProfile theta;
        if (spec.is_symmetric()) {
            theta = extract_theta(oracle);
        } else {
            const NonSymLambdaProfile lam = extract_nonsym_lambda(oracle);
            theta.fn = [fn = lam.fn](double r, double tau) {
                return r * fn(r, Scalar(std::cos(tau)), std::sin(tau));
            };
        }
        std::vector<double> radii = spec.domain().grid(a.grid);
        table = tabulate_theta(theta, radii, a.n_tau);
    }
    if (s.csv(true)) {
        s.emit(table.to_csv());
        return kOk;
    }
    Json j = {{"columns", table.columns}, {"rows", table.rows}, {"zero_constant", nullptr}};
    if (spec.domain().includes_zero())
        j["zero_constant"] =
            spec.eval(Vector::zero(spec.dim(), spec.field()), Vector::basis(spec.dim(), 0, spec.field()));
    s.emit(j);
    return kOk;
}

struct CheckArgs {
    std::string which;
    double alpha = 2.0;
    std::string map;
};

Json verdicts_json(std::span<const double> radii, const std::vector<Definiteness>& v) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i)
        rows.push_back({{"r", radii[i]}, {"verdict", std::string(to_string(v[i]))}});
    return rows;
}

int cmd_check(const Session& s, const CheckArgs& a) {
    s.require_json("check");
    if (a.which == "kaehler" && s.explicit_field() == Field::Real)
        throw InvalidArgument("the Kaehler condition is stated for complex fields");
    const MetricSpec spec = s.metric(std::nullopt, a.which == "kaehler");

    if (a.which == "invariance") {
        const double tol = s.tol(1e-9);
        if (!a.map.empty()) {
            const ParsedVector p = parse_entries(a.map, "--map");
            const std::size_t n = spec.dim();
            if (p.entries.size() != n * n)
                throw InvalidArgument("--map needs " + std::to_string(n * n) + " entries");
            Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n * n; ++i)
                m(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) = p.entries[i];
            const LinearMap t =
                LinearMap::from_eigen(m, p.complex ? Field::Complex : Field::Real);
            SymmetryOptions o;
            o.tol = tol;
            const SymmetryVerdict v = is_symmetry(t, spec, s.samples(500), s.seed(), o);
            s.emit(symmetry_report_json(spec, t, v));
            return v.is_symmetry ? kOk : kViolated;
        }
        const InvarianceSuiteReport r = isometry_invariance_suite(spec, s.samples(500), s.seed(), tol);
        Json w = nullptr;
        if (r.witness)
            w = {{"g", to_json(r.witness->g)}, {"h", to_json(r.witness->h)},
                 {"deviation", r.witness->deviation}};
        s.emit(Json{{"check", "invariance"},
                    {"passed", r.passed},
                    {"max_deviation", r.max_deviation},
                    {"maps", r.maps},
                    {"samples", r.samples},
                    {"witness", w}});
        return r.passed ? kOk : kViolated;
    }

    if (a.which == "homothety") {
        const HomothetyReport r =
            check_homothety_invariance(spec, a.alpha, s.samples(500), s.seed(), s.tol(1e-10));
        Json w = nullptr;
        if (r.witness)
            w = {{"g", to_json(r.witness->g)}, {"h", to_json(r.witness->h)},
                 {"deviation", r.witness->deviation}};
        s.emit(Json{{"check", "homothety"},
                    {"alpha", a.alpha},
                    {"invariant", r.invariant},
                    {"max_deviation", r.max_deviation},
                    {"samples_used", r.samples_used},
                    {"skipped", r.skipped},
                    {"witness", w}});
        return r.invariant ? kOk : kViolated;
    }

    const auto profile = spec.riemann_form();
    if (!profile) throw InvalidArgument(a.which + " check needs a Riemann-type metric");
    const std::vector<double> radii = profile->domain.grid(s.samples(50));

    if (a.which == "pd") {
        const auto v = check_positive_definite(*profile, radii, s.tol(kDefaultTol));
        const bool ok = std::all_of(v.begin(), v.end(),
                                    [](Definiteness d) { return d == Definiteness::PositiveDefinite; });
        s.emit(Json{{"check", "pd"}, {"passed", ok}, {"samples", verdicts_json(radii, v)}});
        return ok ? kOk : kViolated;
    }

    // kaehler
    const auto v = check_kaehler(*profile, radii, std::nullopt, s.tol());
    Json rows = Json::array();
    bool ok = true;
    for (const auto& k : v) {
        ok = ok && k.passed;
        rows.push_back({{"r", k.r}, {"psi", k.psi}, {"dphi", k.dphi}, {"tol", k.tol},
                        {"passed", k.passed}});
    }
    s.emit(Json{{"check", "kaehler"}, {"passed", ok}, {"samples", rows}});
    return ok ? kOk : kViolated;
}

struct ProbeArgs {
    std::size_t maps = 100;
    double min_ratio = 1.1;
    std::optional<std::size_t> sl2;
};

int cmd_probe(const Session& s, const ProbeArgs& a) {
    s.require_json("probe-main");
    const MetricSpec spec = s.metric();
    if (a.sl2) {
        if (spec.family() != Family::AreaDim2)
            throw InvalidArgument("--sl2 probes the two-dimensional area metric (--metric area)");
        Rng rng = make_rng(s.seed(), 0x534c32);
        std::vector<LinearMap> maps;
        for (std::size_t k = 0; k < *a.sl2; ++k) maps.push_back(random_unimodular(rng));
        const double tol = s.tol(1e-9);
        const Dim2Report r =
            dim2_exception_check(spec.constant(), maps, s.samples(200), s.seed(), tol, spec.field());
        const SymmetryVerdict doubled =
            is_symmetry(LinearMap::identity(2, Field::Real).scaled(2.0), spec, s.samples(200),
                        s.seed(), SymmetryOptions{tol});
        s.emit(Json{{"probe", "dim2-exception"},
                    {"maps_tested", r.maps_tested},
                    {"all_passed", r.all_passed},
                    {"worst_deviation", r.worst_deviation},
                    {"worst_map", r.maps_tested ? to_json(maps[r.worst_map]) : Json(nullptr)},
                    {"scaled_identity_deviation", doubled.max_deviation},
                    {"passed", r.all_passed}});
        return r.all_passed ? kOk : kViolated;
    }
    ProbeOptions o;
    o.n_maps = a.maps;
    o.n_samples = s.samples(200);
    o.min_sv_ratio = a.min_ratio;
    o.control_tol = s.tol(1e-9);
    const ProbeReport r = theorem_main_probe(spec, s.seed(), o);
    Json j = to_json(r);
    j["probe"] = "symmetry-theorem";
    s.emit(j);
    return r.passed() ? kOk : kViolated;
}

struct DistanceArgs {
    std::string g, h, path_out;
    std::size_t vertices = 16;
    std::size_t iterations = 100;
    std::size_t starts = 3;
};

int cmd_distance(const Session& s, const DistanceArgs& a) {
    const ParsedVector pg = parse_entries(a.g, "--g");
    const ParsedVector ph = parse_entries(a.h, "--h");
    const MetricSpec spec = s.metric(pg.entries.size(), pg.complex || ph.complex);
    GeodesicOptions o;
    o.n_vertices = a.vertices;
    o.n_iterations = a.iterations;
    o.n_starts = a.starts;
    o.seed = s.seed();
    const GeodesicResult r = geodesic_distance(spec, to_vector(pg, spec.field(), "--g"),
                                               to_vector(ph, spec.field(), "--h"), o);
    if (!a.path_out.empty()) {
        std::ofstream f(a.path_out, std::ios::binary);
        if (!f) throw InvalidArgument("cannot write '" + a.path_out + "'");
        f << path_table(r.path).to_csv();
    }
    if (s.csv()) {
        s.emit(path_table(r.path).to_csv());
        return kOk;
    }
    Json j = to_json(r);
    j["path_file"] = a.path_out.empty() ? Json(nullptr) : Json(a.path_out);
    s.emit(j);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Isometry-invariant Finsler and Hermitean metrics: evaluation, decomposition, "
                 "criteria, symmetry probes and distances.",
                 "finsler-iso"};
    // -h would collide with the --h direction flag.
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    Common common;

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate rho_g(h) (and sigma_g(f, h) with --f)");
    add_common(eval, common);
    eval->add_option("--g", eval_args.g, "base point, comma separated (a:b for complex)")->required();
    eval->add_option("--h", eval_args.h, "direction")->required();
    eval->add_option("--f", eval_args.f, "first slot of sigma");

    DecomposeArgs dec_args;
    auto* dec = app.add_subcommand("decompose", "tabulate theta(r, tau) or (phi(r), psi(r))");
    add_common(dec, common);
    dec->add_option("--grid", dec_args.grid, "number of radii")->check(CLI::PositiveNumber);
    dec->add_option("--ntau", dec_args.n_tau, "number of angles")->check(CLI::Range(2, 100000));

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "invariance | pd | kaehler | homothety");
    add_common(check, common);
    check->add_option("which", check_args.which, "criterion")
        ->required()
        ->check(CLI::IsMember({"invariance", "pd", "kaehler", "homothety"}));
    check->add_option("--alpha", check_args.alpha, "homothety coefficient");
    check->add_option("--map", check_args.map, "row-major map entries for a single invariance test");

    ProbeArgs probe_args;
    auto* probe = app.add_subcommand("probe-main", "falsification probe: symmetries are congruences");
    add_common(probe, common);
    probe->add_option("--maps", probe_args.maps, "number of random maps");
    probe->add_option("--min-sv-ratio", probe_args.min_ratio, "singular-value ratio of test maps");
    probe->add_option("--sl2", probe_args.sl2, "dim-2 exception: number of unimodular maps");

    DistanceArgs dist_args;
    auto* dist = app.add_subcommand("distance", "geodesic distance by polyline optimization");
    add_common(dist, common);
    dist->add_option("--g", dist_args.g, "start point")->required();
    dist->add_option("--h", dist_args.h, "end point")->required();
    dist->add_option("--vertices", dist_args.vertices, "polyline vertices")->check(CLI::Range(2, 100000));
    dist->add_option("--iterations", dist_args.iterations, "coordinate-descent sweeps");
    dist->add_option("--starts", dist_args.starts, "independent starts")->check(CLI::PositiveNumber);
    dist->add_option("--path-out", dist_args.path_out, "write the optimized path as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const Session session(common, out);
    try {
        if (*eval) return cmd_eval(session, eval_args);
        if (*dec) return cmd_decompose(session, dec_args);
        if (*check) return cmd_check(session, check_args);
        if (*probe) return cmd_probe(session, probe_args);
        if (*dist) return cmd_distance(session, dist_args);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NonPositiveMetric& e) {
        err << "NonPositiveMetric: " << e.what() << "\n";
        return kNumeric;
    } catch (const OutOfDomain& e) {
        err << "OutOfDomain: " << e.what() << "\n";
        return kNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace finsler::cli
