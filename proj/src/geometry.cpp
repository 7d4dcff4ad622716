#include "finsler/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "finsler/error.hpp"

namespace finsler {

namespace {

constexpr std::uint64_t kGeodesicStream = 0x47454f44;
constexpr std::uint64_t kInitStream = 0x494e4954;

}  // namespace

// ------------------------------------------------------------ Curve

Curve Curve::parametric(PointFn point, double a, double b, std::optional<PointFn> derivative,
                        double fd_rel_step) {
    if (!point) throw InvalidArgument("parametric curve has no point function");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw InvalidArgument("curve parameter interval must satisfy a < b");
    if (!(fd_rel_step > 0.0) || fd_rel_step >= 0.25)
        throw InvalidArgument("finite-difference step must lie in (0, 0.25)");
    Curve c;
    c.point_ = std::move(point);
    c.derivative_ = std::move(derivative);
    c.a_ = a;
    c.b_ = b;
    c.fd_step_ = fd_rel_step * (b - a);
    return c;
}

Curve Curve::polyline(std::vector<Vector> vertices, std::vector<double> params) {
    if (vertices.size() < 2) throw InvalidArgument("polyline needs at least 2 vertices");
    for (const auto& v : vertices)
        if (v.dim() != vertices.front().dim() || v.field() != vertices.front().field())
            throw InvalidArgument("polyline vertices differ in dimension or field");
    if (params.empty()) {
        const std::size_t n = vertices.size() - 1;
        for (std::size_t i = 0; i <= n; ++i)
            params.push_back(static_cast<double>(i) / static_cast<double>(n));
    }
    if (params.size() != vertices.size())
        throw InvalidArgument("polyline needs one parameter per vertex");
    for (std::size_t i = 1; i < params.size(); ++i)
        if (!(params[i - 1] < params[i]))
            throw InvalidArgument("polyline parameters must be strictly increasing");
    Curve c;
    c.a_ = params.front();
    c.b_ = params.back();
    c.vertices_ = std::move(vertices);
    c.params_ = std::move(params);
    return c;
}

std::size_t Curve::dim() const { return point(a_).dim(); }
Field Curve::field() const { return point(a_).field(); }

Vector Curve::point(double t) const {
    if (!is_polyline()) return point_(t);
    if (t <= params_.front()) return vertices_.front();
    if (t >= params_.back()) return vertices_.back();
    const auto it = std::upper_bound(params_.begin(), params_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - params_.begin()) - 1;
    const double u = (t - params_[k]) / (params_[k + 1] - params_[k]);
    return vertices_[k] + (vertices_[k + 1] - vertices_[k]).scaled(u);
}

Vector Curve::derivative(double t) const {
    if (is_polyline()) {
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(params_.begin(), params_.end(), t) - params_.begin());
        k = std::clamp<std::size_t>(k, 1, params_.size() - 1) - 1;
        return (vertices_[k + 1] - vertices_[k]).scaled(1.0 / (params_[k + 1] - params_[k]));
    }
    if (derivative_) return (*derivative_)(t);
    const double h = fd_step_;
    if (t - h < a_)
        return (point_(t).scaled(-3.0) + point_(t + h).scaled(4.0) - point_(t + 2 * h))
            .scaled(0.5 / h);
    if (t + h > b_)
        return (point_(t).scaled(3.0) - point_(t - h).scaled(4.0) + point_(t - 2 * h))
            .scaled(0.5 / h);
    return (point_(t + h) - point_(t - h)).scaled(0.5 / h);
}

// ------------------------------------------------------------ lengths

LengthReport curve_length_report(const MetricSpec& spec, const Curve& curve, std::size_t n_nodes,
                                 Exec exec) {
    LengthReport rep;
    if (curve.is_polyline()) {
        const auto& v = curve.vertices();
        const auto vals = kernels::map_indices<double>(exec, v.size() - 1, [&](std::size_t k) {
            const Vector mid = (v[k] + v[k + 1]).scaled(0.5);
            return spec.eval(mid, v[k + 1] - v[k]);
        });
        for (const double x : vals) {
            if (x < 0) ++rep.negative_samples;
            rep.value += x;
        }
        return rep;
    }
    if (n_nodes < 3 || n_nodes % 2 == 0)
        throw InvalidArgument("Simpson quadrature needs an odd node count >= 3 (got " +
                              std::to_string(n_nodes) + ")");
    const double step = (curve.b() - curve.a()) / static_cast<double>(n_nodes - 1);
    const auto vals = kernels::map_indices<double>(exec, n_nodes, [&](std::size_t k) {
        const double t = k + 1 == n_nodes ? curve.b() : curve.a() + step * static_cast<double>(k);
        return spec.eval(curve.point(t), curve.derivative(t));
    });
    double sum = 0;
    for (std::size_t k = 0; k < n_nodes; ++k) {
        if (vals[k] < 0) ++rep.negative_samples;
        const double w = (k == 0 || k + 1 == n_nodes) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * vals[k];
    }
    rep.value = sum * step / 3.0;
    return rep;
}

double curve_length(const MetricSpec& spec, const Curve& curve, std::size_t n_nodes, Exec exec) {
    return curve_length_report(spec, curve, n_nodes, exec).value;
}

double delta1(const Vector& g, const Vector& h) {
    return std::sin(acute_angle(g, h));
}

double delta2(const Vector& g, const Vector& h) {
    return 2.0 * std::sin(acute_angle(g, h) / 2.0);
}

double polygonal_delta_length(Delta which, const Curve& curve, std::size_t n_segments, Exec exec) {
    if (n_segments < 1) throw InvalidArgument("polygonal length needs at least one segment");
    const double step = (curve.b() - curve.a()) / static_cast<double>(n_segments);
    auto at = [&](std::size_t k) {
        return curve.point(k == n_segments ? curve.b() : curve.a() + step * static_cast<double>(k));
    };
    const auto vals = kernels::map_indices<double>(exec, n_segments, [&](std::size_t k) {
        const Vector x = at(k);
        const Vector y = at(k + 1);
        return which == Delta::One ? delta1(x, y) : delta2(x, y);
    });
    double sum = 0;
    for (const double x : vals) sum += x;
    return sum;
}

// ------------------------------------------------------------ intrinsification

bool IntrinsificationTable::monotone() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double prev = std::max(std::abs(rows[i - 1].ratio1 - sigma_speed),
                                     std::abs(rows[i - 1].ratio2 - sigma_speed));
        const double cur = std::max(std::abs(rows[i].ratio1 - sigma_speed),
                                    std::abs(rows[i].ratio2 - sigma_speed));
        if (cur > prev + 1e-12) return false;
    }
    return true;
}

double IntrinsificationTable::final_error() const {
    if (rows.empty()) return kInf;
    return std::max(std::abs(rows.back().ratio1 - sigma_speed),
                    std::abs(rows.back().ratio2 - sigma_speed));
}

Table IntrinsificationTable::to_table() const {
    Table t{{"step", "ratio_delta1", "ratio_delta2", "sigma_speed"}, {}};
    for (const auto& r : rows) t.add_row({r.step, r.ratio1, r.ratio2, sigma_speed});
    return t;
}

IntrinsificationTable intrinsification_ratio(const Curve& curve, double t,
                                             std::span<const double> steps) {
    if (t < curve.a() || t > curve.b()) throw InvalidArgument("t lies outside the curve interval");
    const Vector x = curve.point(t);
    if (x.is_zero()) throw InvalidArgument("intrinsification needs gamma(t) != 0");
    const Vector d = curve.derivative(t);
    IntrinsificationTable out;
    out.degenerate = norm(d) <= 1e-14 * norm(x);
    const double s2 = eval_sesquilinear(fubini_study_profile(), x, d, d).real();
    out.sigma_speed = std::sqrt(std::max(s2, 0.0));
    double last = kInf;
    for (const double step : steps) {
        if (!(step > 0.0)) throw InvalidArgument("intrinsification steps must be positive");
        if (step >= last) throw InvalidArgument("intrinsification steps must decrease");
        last = step;
        const double s = t + step <= curve.b() ? t + step : t - step;
        const Vector y = curve.point(s);
        out.rows.push_back({step, delta1(y, x) / step, delta2(y, x) / step});
    }
    return out;
}

// ------------------------------------------------------------ geodesics

namespace {

// rho_{a + s d}(d) integrated over s in [0, 1].
class SegmentIntegrator {
public:
    explicit SegmentIntegrator(const MetricSpec& spec) : spec_(spec) {}

    double operator()(const Vector& a, const Vector& b) const {
        const Vector d = b - a;
        if (d.is_zero()) return 0.0;
        auto f = [&](double s) {
            const double v = spec_.eval(a + d.scaled(s), d);
            if (v < 0.0) throw NonPositiveMetric("metric is negative along the path");
            return v;
        };
        constexpr int kPanels = 8;
        double total = 0;
        double left = f(0.0);
        for (int k = 0; k < kPanels; ++k) {
            const double x0 = static_cast<double>(k) / kPanels;
            const double x1 = static_cast<double>(k + 1) / kPanels;
            const double right = f(x1);
            const double mid = f(0.5 * (x0 + x1));
            const double whole = (x1 - x0) / 6.0 * (left + 4.0 * mid + right);
            total += adaptive(f, x0, x1, left, mid, right, whole, 1e-13, 12);
            left = right;
        }
        return total;
    }

private:
    template <class F>
    static double adaptive(const F& f, double a, double b, double fa, double fm, double fb,
                           double whole, double eps, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = f(0.5 * (a + m));
        const double rm = f(0.5 * (m + b));
        const double left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
        const double diff = left + right - whole;
        if (depth <= 0 || std::abs(diff) <= 15.0 * eps * (1.0 + std::abs(whole)))
            return left + right + diff / 15.0;
        return adaptive(f, a, m, fa, lm, fm, left, eps / 2, depth - 1) +
               adaptive(f, m, b, fm, rm, fb, right, eps / 2, depth - 1);
    }

    const MetricSpec& spec_;
};

std::vector<Vector> chord(const Vector& g, const Vector& h, std::size_t n) {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        v.push_back(i + 1 == n ? h : g + (h - g).scaled(t));
    }
    return v;
}

// Quadratic Bezier through the perturbed midpoint pm.
std::vector<Vector> arc(const Vector& g, const Vector& h, const Vector& pm, std::size_t n) {
    const Vector ctrl = pm.scaled(2.0) - (g + h).scaled(0.5);
    std::vector<Vector> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        if (i == 0) {
            v.push_back(g);
        } else if (i + 1 == n) {
            v.push_back(h);
        } else {
            v.push_back(g.scaled((1 - t) * (1 - t)) + ctrl.scaled(2 * t * (1 - t)) +
                        h.scaled(t * t));
        }
    }
    return v;
}

// Segment lengths of a path, or nullopt when it leaves the domain.
std::optional<std::vector<double>> segment_lengths(const SegmentIntegrator& seg,
                                                   const std::vector<Vector>& v) {
    std::vector<double> out;
    try {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back(seg(v[i], v[i + 1]));
    } catch (const OutOfDomain&) {
        return std::nullopt;
    }
    return out;
}

double sum(const std::vector<double>& xs) {
    double s = 0;
    for (const double x : xs) s += x;
    return s;
}

struct Run {
    bool valid = false;
    double initial = kInf;
    double value = kInf;
    std::vector<double> history;
    std::vector<Vector> vertices;
};

}  // namespace

double polyline_quadrature_length(const MetricSpec& spec, std::span<const Vector> vertices) {
    const SegmentIntegrator seg(spec);
    double total = 0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) total += seg(vertices[i], vertices[i + 1]);
    return total;
}

GeodesicResult geodesic_distance(const MetricSpec& spec, const Vector& g, const Vector& h,
                                 const GeodesicOptions& opts) {
    if (opts.n_vertices < 2) throw InvalidArgument("geodesic path needs at least 2 vertices");
    if (opts.n_starts < 1) throw InvalidArgument("geodesic search needs at least one start");
    if (g.dim() != spec.dim() || h.dim() != spec.dim() || g.field() != spec.field() ||
        h.field() != spec.field())
        throw InvalidArgument("endpoints do not match the metric's dimension and field");
    for (const Vector* x : {&g, &h})
        if (!spec.domain().contains(norm(*x)))
            throw OutOfDomain(norm(*x), "endpoint radius is outside the metric domain");

    const SegmentIntegrator seg(spec);
    const std::size_t n = opts.n_vertices;
    const double span_len = norm(h - g);

    // Initial path: the chord, else an arc through a perturbed midpoint.
    std::vector<Vector> base = chord(g, h, n);
    std::optional<std::vector<double>> base_len = segment_lengths(seg, base);
    if (!base_len) {
        Rng rng = make_rng(opts.seed, kInitStream);
        const double scale = std::max({norm(g), norm(h), span_len});
        for (int attempt = 0; attempt < 60 && !base_len; ++attempt) {
            const double amp = scale * std::array{0.25, 0.5, 1.0}[attempt % 3];
            const Vector pm = (g + h).scaled(0.5) +
                              random_unit_vector(spec.dim(), spec.field(), rng).scaled(amp);
            base = arc(g, h, pm, n);
            base_len = segment_lengths(seg, base);
        }
        if (!base_len) throw NumericError("no initial path inside the metric domain was found");
    }

    GeodesicResult result;
    if (span_len == 0.0) {
        result.path = Curve::polyline({g, h});
        return result;
    }

    const auto runs = kernels::map_indices<Run>(opts.exec, opts.n_starts, [&](std::size_t start) {
        Run run;
        Rng rng = make_rng(opts.seed, kGeodesicStream, start);
        std::vector<Vector> v = base;
        std::optional<std::vector<double>> lens = base_len;
        if (start > 0) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n - 1);
                v[i] = v[i] + random_unit_vector(spec.dim(), spec.field(), rng)
                                  .scaled(0.1 * span_len * std::sin(std::numbers::pi * t));
            }
            try {
                lens = segment_lengths(seg, v);
            } catch (const NonPositiveMetric&) {
                lens.reset();
            }
            if (!lens) return run;
        }
        std::vector<double> len = *lens;
        run.valid = true;
        run.initial = sum(len);

        const double step0 = 0.5 * span_len / static_cast<double>(n - 1);
        const double decay =
            std::pow(1e-6, 1.0 / static_cast<double>(std::max<std::size_t>(opts.n_iterations, 1)));
        double step = step0;
        auto local = [&](std::size_t i, const Vector& x) -> std::optional<std::pair<double, double>> {
            try {
                return std::pair{seg(v[i - 1], x), seg(x, v[i + 1])};
            } catch (const OutOfDomain&) {
                return std::nullopt;
            } catch (const NonPositiveMetric&) {
                return std::nullopt;
            }
        };
        for (std::size_t it = 0; it < opts.n_iterations; ++it) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const Vector dir = random_unit_vector(spec.dim(), spec.field(), rng).scaled(step);
                for (const double sign : {1.0, -1.0}) {
                    double mult = 1.0;
                    bool moved = false;
                    // Expand the step while it keeps paying off.
                    for (int grow = 0; grow < 6; ++grow) {
                        const Vector cand = v[i] + dir.scaled(sign * mult);
                        const auto l = local(i, cand);
                        if (!l || !(l->first + l->second < len[i - 1] + len[i])) break;
                        v[i] = cand;
                        len[i - 1] = l->first;
                        len[i] = l->second;
                        moved = true;
                        mult *= 2.0;
                    }
                    if (moved) break;
                }
            }
            run.history.push_back(sum(len));
            step *= decay;
        }
        run.value = run.history.empty() ? run.initial : run.history.back();
        run.vertices = std::move(v);
        return run;
    });

    const Run* best = nullptr;
    for (const auto& r : runs)
        if (r.valid && (!best || r.value < best->value)) best = &r;
    if (!best) throw NumericError("no geodesic start produced a valid path");
    result.value = best->value;
    // The unperturbed start is the reference: the result never exceeds it.
    result.initial_length = runs.front().initial;
    result.iterations = best->history.size();
    result.history = best->history;
    result.path = Curve::polyline(best->vertices);
    return result;
}

Table path_table(const Curve& path) {
    if (!path.is_polyline()) throw InvalidArgument("only polyline paths can be exported");
    const auto& v = path.vertices();
    const std::size_t n = v.front().dim();
    const bool cplx = v.front().field() == Field::Complex;
    Table t;
    t.columns.push_back("t");
    for (std::size_t i = 1; i <= n; ++i) t.columns.push_back("x" + std::to_string(i));
    if (cplx)
        for (std::size_t i = 1; i <= n; ++i) t.columns.push_back("y" + std::to_string(i));
    for (std::size_t k = 0; k < v.size(); ++k) {
        std::vector<double> row{path.params()[k]};
        for (std::size_t i = 0; i < n; ++i) row.push_back(v[k][i].real());
        if (cplx)
            for (std::size_t i = 0; i < n; ++i) row.push_back(v[k][i].imag());
        t.add_row(std::move(row));
    }
    return t;
}

Json to_json(const GeodesicResult& r) {
    return {{"value", r.value}, {"iterations", r.iterations}, {"initial_length", r.initial_length}};
}

}  // namespace finsler
