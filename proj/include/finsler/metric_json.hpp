#pragma once

// JSON form of a MetricSpec, shared by the CLI and test fixtures:
//
//   { "family": "theta", "dim": 3, "field": "real",
//     "domain": { "intervals": [[0, null]], "includes_zero": false },
//     "params": { "theta": "1+cos(tau)" } }
//
// The domain always describes radii |g|; null stands for +inf. Profiles are
// carried as expression text, so callable-backed specs cannot be serialized.

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "finsler/metric.hpp"

namespace finsler {

using Json = nlohmann::json;

Json to_json(const RadiusDomain& d);
RadiusDomain domain_from_json(const Json& j);

Json to_json(const Vector& v);
Json to_json(const LinearMap& m);  // row-major entries

// Throws InvalidArgument for Custom specs and profiles without source text.
Json to_json(const MetricSpec& spec);

// `dim` and `field` override the object's own fields when given.
MetricSpec metric_from_json(const Json& j, std::optional<std::size_t> dim = std::nullopt,
                            std::optional<Field> field = std::nullopt);

// Accepts a built-in name (euclidean, fubini-study, fubini-study-riemann,
// norm-quotient, area), a constructor (lambda:EXPR, theta:EXPR,
// nonsym-lambda:EXPR, congruence:EXPR, riemann:PHI;PSI, area:B), inline JSON
// or @path to a JSON file. Defaults: dim 3 (2 for area), real field.
MetricSpec parse_metric_argument(const std::string& text,
                                 std::optional<std::size_t> dim = std::nullopt,
                                 std::optional<Field> field = std::nullopt);

// Deterministic serialization: keys sorted, numbers with 17 significant
// digits (integers verbatim), non-finite numbers as the strings "inf",
// "-inf", "nan". indent < 0 gives a single line.
std::string write_json(const Json& j, int indent = 2);

// %.17g, the number format used by every report.
std::string format_double(double x);

}  // namespace finsler
