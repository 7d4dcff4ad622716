#pragma once

// Lengths of curves under a metric, the pseudodistances delta1 / delta2 of
// the Fubini-Study example, and numerical geodesic distances.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/metric_json.hpp"
#include "finsler/parallel.hpp"
#include "finsler/table.hpp"

namespace finsler {

class Curve {
public:
    using PointFn = std::function<Vector(double)>;

    // Without an explicit derivative, gamma' is a centered difference with
    // step fd_rel_step * (b - a), one-sided second order near the ends.
    static Curve parametric(PointFn point, double a, double b,
                            std::optional<PointFn> derivative = std::nullopt,
                            double fd_rel_step = 1e-6);
    // Parameters default to a uniform partition of [0, 1].
    static Curve polyline(std::vector<Vector> vertices, std::vector<double> params = {});

    bool is_polyline() const noexcept { return !vertices_.empty(); }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t dim() const;
    Field field() const;

    Vector point(double t) const;
    Vector derivative(double t) const;

    const std::vector<Vector>& vertices() const noexcept { return vertices_; }
    const std::vector<double>& params() const noexcept { return params_; }

private:
    Curve() = default;

    PointFn point_;
    std::optional<PointFn> derivative_;
    double fd_step_ = 0;
    std::vector<Vector> vertices_;
    std::vector<double> params_;
    double a_ = 0;
    double b_ = 1;
};

struct LengthReport {
    double value = 0;
    std::size_t negative_samples = 0;  // nodes where the metric was negative
};

// Parametric: composite Simpson on n_nodes (odd, >= 3) nodes.
// Polyline: sum of rho_mid(v_{k+1} - v_k) over segments (n_nodes ignored).
LengthReport curve_length_report(const MetricSpec& spec, const Curve& curve, std::size_t n_nodes,
                                 Exec exec = Exec::Parallel);
double curve_length(const MetricSpec& spec, const Curve& curve, std::size_t n_nodes,
                    Exec exec = Exec::Parallel);

// delta1 = sin angle(g, h); delta2 = sqrt(2 - 2 cos angle(g, h)), the chord
// between the unit-sphere points of the two F-lines (evaluated as 2 sin(angle / 2)).
double delta1(const Vector& g, const Vector& h);
double delta2(const Vector& g, const Vector& h);

enum class Delta { One, Two };

// Sum of delta(gamma(t_k), gamma(t_{k+1})) over a uniform partition.
double polygonal_delta_length(Delta which, const Curve& curve, std::size_t n_segments,
                              Exec exec = Exec::Parallel);

struct IntrinsificationRow {
    double step = 0;    // |t - s|
    double ratio1 = 0;  // delta1(gamma(s), gamma(t)) / |t - s|
    double ratio2 = 0;
};

struct IntrinsificationTable {
    double sigma_speed = 0;  // sqrt(sigma_gamma(t)(gamma'(t), gamma'(t))), Fubini-Study profile
    bool degenerate = false;  // |gamma'(t)| = 0
    std::vector<IntrinsificationRow> rows;
    // |ratio - sigma_speed| never increases down the table.
    bool monotone() const;
    double final_error() const;
    Table to_table() const;
};

IntrinsificationTable intrinsification_ratio(const Curve& curve, double t,
                                             std::span<const double> steps);

struct GeodesicOptions {
    std::size_t n_vertices = 16;  // including both endpoints
    std::size_t n_iterations = 100;
    std::size_t n_starts = 3;
    std::uint64_t seed = 0;
    Exec exec = Exec::Parallel;
};

struct GeodesicResult {
    double value = 0;
    double initial_length = 0;  // length of the unperturbed initial path (chord when valid)
    std::size_t iterations = 0;
    std::vector<double> history;  // length after each sweep, non-increasing
    Curve path = Curve::polyline({Vector::zero(1, Field::Real), Vector::zero(1, Field::Real)});
};

// Length of the piecewise-linear path through the vertices, integrating
// rho along every segment by adaptive Simpson quadrature.
double polyline_quadrature_length(const MetricSpec& spec, std::span<const Vector> vertices);

// Derivative-free coordinate descent over the interior vertices of a
// polyline from g to h. Throws NonPositiveMetric when the metric is negative
// on the initial path and NumericError when no path inside the domain is found.
GeodesicResult geodesic_distance(const MetricSpec& spec, const Vector& g, const Vector& h,
                                 const GeodesicOptions& opts = {});

// Rows (t, x1..xn) and, for complex paths, (y1..yn) imaginary parts.
Table path_table(const Curve& path);
// {value, iterations, initial_length}.
Json to_json(const GeodesicResult& r);

}  // namespace finsler
