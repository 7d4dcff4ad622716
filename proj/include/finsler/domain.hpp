#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "finsler/rng.hpp"

namespace finsler {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lo, hi) in [0, inf); hi may be +inf.
struct Interval {
    double lo = 0;
    double hi = kInf;
};

// The set R of admissible radii |g|: a finite union of disjoint open
// intervals, optionally together with the point 0. The base-point set is
// G = union over r in R of the sphere of radius r.
class RadiusDomain {
public:
    // (0, inf)
    RadiusDomain();
    RadiusDomain(std::vector<Interval> intervals, bool includes_zero);

    static RadiusDomain positive() { return {}; }

    bool contains(double r) const noexcept;
    // [r - margin, r + margin] lies inside a single interval.
    bool contains_with_margin(double r, double margin) const noexcept;

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool includes_zero() const noexcept { return includes_zero_; }
    bool is_positive_half_line() const noexcept;

    RadiusDomain with_zero(bool include) const;
    // Images under r -> r^2 and r -> sqrt(r) (both monotone bijections of [0, inf)).
    RadiusDomain squared() const;
    RadiusDomain square_rooted() const;
    // Random radius strictly inside an interval (log-uniform on a bounded
    // window of each interval, intervals chosen uniformly).
    double sample(Rng& rng) const;
    // n interior quantile points spread over all intervals, ascending.
    std::vector<double> grid(std::size_t n) const;

private:
    std::vector<Interval> intervals_;
    bool includes_zero_ = false;
};

}  // namespace finsler
