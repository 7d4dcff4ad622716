#include "finsler/metric_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler {

namespace {

const Json& require(const Json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key))
        throw InvalidArgument(std::string(where) + ": missing \"" + key + "\"");
    return obj.at(key);
}

std::string string_param(const Json& params, const char* key, const char* family) {
    const Json& v = require(params, key, family);
    if (!v.is_string())
        throw InvalidArgument(std::string(family) + ": \"" + key + "\" must be an expression string");
    return v.get<std::string>();
}

double number_param(const Json& params, const char* key, double fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (!v.is_number()) throw InvalidArgument(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

void write_string(std::ostringstream& os, const std::string& s) {
    os << Json(s).dump();
}

void write_value(std::ostringstream& os, const Json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                write_string(os, it.key());
                os << (indent < 0 ? ":" : ": ");
                write_value(os, it.value(), indent, depth + 1);
            }
            newline(depth);
            os << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << (indent < 0 ? "," : ", ");
                first = false;
                write_value(os, v, -1, depth + 1);
            }
            os << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (std::isnan(x))
                os << "\"nan\"";
            else if (std::isinf(x))
                os << (x > 0 ? "\"inf\"" : "\"-inf\"");
            else
                os << format_double(x);
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string write_json(const Json& j, int indent) {
    std::ostringstream os;
    write_value(os, j, indent, 0);
    return os.str();
}

Json to_json(const RadiusDomain& d) {
    Json intervals = Json::array();
    for (const auto& iv : d.intervals())
        intervals.push_back({iv.lo, std::isinf(iv.hi) ? Json(nullptr) : Json(iv.hi)});
    return {{"intervals", intervals}, {"includes_zero", d.includes_zero()}};
}

RadiusDomain domain_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("domain must be an object");
    std::vector<Interval> out;
    if (j.contains("intervals")) {
        const Json& list = j.at("intervals");
        if (!list.is_array()) throw InvalidArgument("domain.intervals must be an array");
        for (const auto& iv : list) {
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() ||
                !(iv[1].is_number() || iv[1].is_null()))
                throw InvalidArgument("domain interval must be [lo, hi] with hi a number or null");
            out.push_back({iv[0].get<double>(), iv[1].is_null() ? kInf : iv[1].get<double>()});
        }
    }
    bool zero = false;
    if (j.contains("includes_zero")) {
        if (!j.at("includes_zero").is_boolean())
            throw InvalidArgument("domain.includes_zero must be a boolean");
        zero = j.at("includes_zero").get<bool>();
    }
    return RadiusDomain(std::move(out), zero);
}

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v.field() == Field::Real)
            out.push_back(v[i].real());
        else
            out.push_back({v[i].real(), v[i].imag()});
    }
    return out;
}

Json to_json(const LinearMap& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Scalar z = m.data()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (m.field() == Field::Real)
                out.push_back(z.real());
            else
                out.push_back({z.real(), z.imag()});
        }
    return out;
}

Json to_json(const MetricSpec& spec) {
    Json params = Json::object();
    std::string family(family_name(spec.family()));
    auto need = [&](const std::string& src) {
        if (src.empty())
            throw InvalidArgument("metric '" + spec.name() +
                                  "' is backed by a callable and cannot be serialized");
        return src;
    };
    switch (spec.family()) {
        case Family::FromLambda:
            params["lambda"] = need(spec.lambda()->source);
            params["alpha"] = spec.lambda()->alpha;
            break;
        case Family::FromTheta: params["theta"] = need(spec.theta()->source); break;
        case Family::FromNonSymLambda:
            params["lambda"] = need(spec.nonsym_lambda()->source);
            break;
        case Family::FromRiemann:
            params["phi"] = need(spec.riemann()->phi_source);
            params["psi"] = need(spec.riemann()->psi_source);
            break;
        case Family::CongruenceInvariant:
            params["vartheta"] = need(spec.vartheta()->source);
            break;
        case Family::AreaDim2: params["b"] = spec.constant(); break;
        case Family::ZeroExtended:
            params["b"] = spec.constant();
            params["inner"] = to_json(*spec.inner());
            break;
        case Family::Custom:
            throw InvalidArgument("custom metric '" + spec.name() + "' cannot be serialized");
        default: break;
    }
    return {{"family", family},
            {"dim", spec.dim()},
            {"field", std::string(to_string(spec.field()))},
            {"domain", to_json(spec.domain())},
            {"params", params}};
}

MetricSpec metric_from_json(const Json& j, std::optional<std::size_t> dim_override,
                            std::optional<Field> field_override) {
    if (!j.is_object()) throw InvalidArgument("metric must be a JSON object");
    const Json& fam = require(j, "family", "metric");
    if (!fam.is_string()) throw InvalidArgument("metric.family must be a string");
    const std::string family = fam.get<std::string>();

    std::optional<std::size_t> dim = dim_override;
    if (!dim && j.contains("dim")) {
        if (!j.at("dim").is_number_integer() || j.at("dim").get<long long>() < 1)
            throw InvalidArgument("metric.dim must be a positive integer");
        dim = j.at("dim").get<std::size_t>();
    }
    Field field = Field::Real;
    if (field_override)
        field = *field_override;
    else if (j.contains("field")) {
        if (!j.at("field").is_string()) throw InvalidArgument("metric.field must be a string");
        field = field_from_string(j.at("field").get<std::string>());
    }
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (!params.is_object()) throw InvalidArgument("metric.params must be an object");
    const std::optional<RadiusDomain> domain =
        j.contains("domain") ? std::optional(domain_from_json(j.at("domain"))) : std::nullopt;
    const RadiusDomain dom = domain.value_or(RadiusDomain::positive());
    const std::size_t n = dim.value_or(family == "area" ? 2 : 3);
    const char* f = family.c_str();

    if (family == "euclidean") return MetricSpec::euclidean(n, field);
    if (family == "fubini-study") return MetricSpec::fubini_study(n, field);
    if (family == "fubini-study-riemann")
        return MetricSpec::from_riemann(fubini_study_profile(), n, field);
    if (family == "norm-quotient") return MetricSpec::norm_quotient(n, field);
    if (family == "congruence-invariant")
        return MetricSpec::congruence_invariant(
            vartheta_profile(string_param(params, "vartheta", f)), n, field);
    if (family == "congruence-riemann")
        return MetricSpec::from_riemann(congruence_invariant_riemann(number_param(params, "a", 1.0),
                                                                     number_param(params, "b", -1.0)),
                                        n, field);
    if (family == "lambda")
        return MetricSpec::from_lambda(
            lambda_profile(string_param(params, "lambda", f), number_param(params, "alpha", 1.0)),
            n, field, dom);
    if (family == "theta")
        return MetricSpec::from_theta(theta_profile(string_param(params, "theta", f)), n, field,
                                      dom);
    if (family == "nonsym-lambda")
        return MetricSpec::from_nonsym_lambda(
            nonsym_lambda_profile(string_param(params, "lambda", f)), n, field, dom);
    if (family == "riemann")
        return MetricSpec::from_riemann(riemann_profile(string_param(params, "phi", f),
                                                        string_param(params, "psi", f),
                                                        dom.squared()),
                                        n, field);
    if (family == "area") {
        if (n != 2) throw InvalidArgument("area metric requires dim 2");
        return MetricSpec::area_dim2(number_param(params, "b", 1.0), field);
    }
    if (family == "zero-extended") {
        const Json& inner = require(params, "inner", "zero-extended");
        return MetricSpec::zero_extended(number_param(params, "b", 0.0),
                                         metric_from_json(inner, dim.value_or(n), field));
    }
    throw InvalidArgument("unknown metric family '" + family + "'");
}

MetricSpec parse_metric_argument(const std::string& text, std::optional<std::size_t> dim,
                                 std::optional<Field> field) {
    if (text.empty()) throw InvalidArgument("empty metric argument");
    auto parse_text = [&](const std::string& body) {
        Json j = Json::parse(body, nullptr, false);
        if (j.is_discarded()) throw InvalidArgument("metric JSON is malformed");
        return metric_from_json(j, dim, field);
    };
    if (text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw InvalidArgument("cannot read metric file '" + text.substr(1) + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str());
    }
    if (text.front() == '{') return parse_text(text);

    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    Json j = {{"family", head}, {"params", Json::object()}};
    if (colon == std::string::npos) {
        // Plain names map straight onto families.
    } else if (head == "lambda" || head == "nonsym-lambda") {
        j["params"]["lambda"] = body;
    } else if (head == "theta") {
        j["params"]["theta"] = body;
    } else if (head == "congruence") {
        j["family"] = "congruence-invariant";
        j["params"]["vartheta"] = body;
    } else if (head == "riemann") {
        const auto semi = body.find(';');
        if (semi == std::string::npos)
            throw InvalidArgument("riemann: expects 'riemann:PHI;PSI'");
        j["params"]["phi"] = body.substr(0, semi);
        j["params"]["psi"] = body.substr(semi + 1);
    } else if (head == "area") {
        double b = 0;
        std::size_t used = 0;
        try {
            b = std::stod(body, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != body.size())
            throw InvalidArgument("area: constant '" + body + "' is not a number");
        j["params"]["b"] = b;
    } else {
        throw InvalidArgument("unknown metric constructor '" + head + ":'");
    }
    return metric_from_json(j, dim, field);
}

}  // namespace finsler
