#include "finsler/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

namespace {

// Bounded window [a, b] used for sampling inside an interval.
std::pair<double, double> window(const Interval& iv) {
    double a = iv.lo;
    double b = iv.hi;
    if (std::isinf(b)) b = iv.lo > 0 ? iv.lo * 8.0 : 4.0;
    if (a <= 0.0) a = std::isinf(iv.hi) ? 0.25 : iv.hi * 1e-2;
    return {a, b};
}

double log_interp(double a, double b, double u) { return a * std::pow(b / a, u); }

}  // namespace

RadiusDomain::RadiusDomain() : intervals_{Interval{0.0, kInf}} {}

RadiusDomain::RadiusDomain(std::vector<Interval> intervals, bool includes_zero)
    : intervals_(std::move(intervals)), includes_zero_(includes_zero) {
    for (const auto& iv : intervals_) {
        if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo < 0.0 || !(iv.lo < iv.hi) ||
            std::isinf(iv.lo))
            throw InvalidArgument("radius domain: invalid interval (" + std::to_string(iv.lo) +
                                  ", " + std::to_string(iv.hi) + ")");
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < intervals_.size(); ++i)
        if (intervals_[i].lo < intervals_[i - 1].hi)
            throw InvalidArgument("radius domain: intervals overlap");
    if (intervals_.empty() && !includes_zero_) throw InvalidArgument("radius domain is empty");
}

bool RadiusDomain::contains(double r) const noexcept {
    if (r == 0.0 && includes_zero_) return true;
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [r](const Interval& iv) { return iv.lo < r && r < iv.hi; });
}

bool RadiusDomain::contains_with_margin(double r, double margin) const noexcept {
    return std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
        return iv.lo < r - margin && r + margin < iv.hi;
    });
}

bool RadiusDomain::is_positive_half_line() const noexcept {
    return intervals_.size() == 1 && intervals_[0].lo == 0.0 && std::isinf(intervals_[0].hi);
}

RadiusDomain RadiusDomain::with_zero(bool include) const {
    RadiusDomain d = *this;
    d.includes_zero_ = include;
    return d;
}

RadiusDomain RadiusDomain::squared() const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) out.push_back({iv.lo * iv.lo, iv.hi * iv.hi});
    return RadiusDomain(std::move(out), includes_zero_);
}

RadiusDomain RadiusDomain::square_rooted() const {
    std::vector<Interval> out;
    for (const auto& iv : intervals_) out.push_back({std::sqrt(iv.lo), std::sqrt(iv.hi)});
    return RadiusDomain(std::move(out), includes_zero_);
}

double RadiusDomain::sample(Rng& rng) const {
    if (intervals_.empty()) return 0.0;
    std::uniform_int_distribution<std::size_t> pick(0, intervals_.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const Interval& iv = intervals_[pick(rng)];
        const auto [a, b] = window(iv);
        const double r = log_interp(a, b, unit(rng));
        if (contains(r) && r > 0.0) return r;
    }
}

std::vector<double> RadiusDomain::grid(std::size_t n) const {
    std::vector<double> out;
    if (intervals_.empty() || n == 0) return out;
    const std::size_t k = intervals_.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t m = n / k + (i < n % k ? 1 : 0);
        const auto [a, b] = window(intervals_[i]);
        for (std::size_t j = 0; j < m; ++j) {
            const double u = static_cast<double>(j + 1) / static_cast<double>(m + 1);
            const double r = log_interp(a, b, u);
            if (contains(r)) out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace finsler
