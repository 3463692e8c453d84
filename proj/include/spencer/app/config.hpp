#pragma once

// JSON configuration ingestion for the command-line tool.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spencer/assembly.hpp"
#include "spencer/char_class.hpp"
#include "spencer/error.hpp"
#include "spencer/spectral.hpp"

namespace spencer::app {

using Json = nlohmann::json;

inline constexpr const char* kConfigSchema = "spencer-mirror/config.v1";
inline constexpr const char* kManifoldSchema = "spencer-mirror/manifold.v1";

[[nodiscard]] inline Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::input, "cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        fail(ErrorKind::input, "malformed JSON in '" + path.string() + "': " + e.what());
    }
}

namespace detail {

[[noreturn]] inline void bad_field(const std::string& field, const std::string& why) {
    fail(ErrorKind::input, "field '" + field + "': " + why);
}

inline double number_field(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = j.at(key);
    if (!v.is_number()) bad_field(path + key, "expected a number");
    return v.get<double>();
}

inline int integer_field(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = j.at(key);
    if (!v.is_number_integer()) bad_field(path + key, "expected an integer");
    return v.get<int>();
}

inline std::string string_field(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = j.at(key);
    if (!v.is_string()) bad_field(path + key, "expected a string");
    return v.get<std::string>();
}

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) bad_field(path + key, "unknown field");
    }
}

}  // namespace detail

/// Fields of one run. Missing fields fall back to the reference setup.
struct RunConfig {
    std::string id = "run";
    CurveParams curve;
    std::string algebra = "su2_epsilon";
    std::vector<double> lambda{0.0, 0.0, 0.0};
    LaplacianMode mode = LaplacianMode::simplified;
    MetricKind metric = MetricKind::constraint_strength;
    int q_max = kDefaultQMax;
    double tol = kDefaultHarmonicTol;
    std::optional<std::vector<double>> curvature_norm_sq;
    FaultInjection fault = FaultInjection::none;
};

/// Overlays the keys present in j onto base.
[[nodiscard]] inline RunConfig merge_run_config(RunConfig base, const Json& j, const std::string& path) {
    if (!j.is_object()) detail::bad_field(path.empty() ? "<root>" : path, "expected an object");
    detail::reject_unknown(j,
                           {"schema", "id", "curve", "algebra", "lambda", "mode", "metric", "q_max", "tol",
                            "output_dir", "curvature_norm_sq", "fault_injection"},
                           path);
    if (j.contains("id")) base.id = detail::string_field(j, "id", path);
    if (j.contains("curve")) {
        const Json& c = j.at("curve");
        const std::string cp = path + "curve.";
        if (!c.is_object()) detail::bad_field(path + "curve", "expected an object");
        detail::reject_unknown(c, {"a", "b", "R", "N"}, cp);
        if (c.contains("a")) base.curve.a = detail::number_field(c, "a", cp);
        if (c.contains("b")) base.curve.b = detail::number_field(c, "b", cp);
        if (c.contains("R")) base.curve.R = detail::number_field(c, "R", cp);
        if (c.contains("N")) base.curve.N = detail::integer_field(c, "N", cp);
        if (base.curve.N < 3) detail::bad_field(cp + "N", "must be >= 3");
        if (!(base.curve.R > 0.0)) detail::bad_field(cp + "R", "must be positive");
    }
    if (j.contains("algebra")) {
        base.algebra = detail::string_field(j, "algebra", path);
        if (base.algebra != "su2_epsilon") detail::bad_field(path + "algebra", "only 'su2_epsilon' is supported");
    }
    if (j.contains("lambda")) {
        const Json& l = j.at("lambda");
        if (!l.is_array() || l.size() != 3) detail::bad_field(path + "lambda", "expected an array of 3 numbers");
        base.lambda.clear();
        for (const auto& v : l) {
            if (!v.is_number()) detail::bad_field(path + "lambda", "expected an array of 3 numbers");
            base.lambda.push_back(v.get<double>());
        }
    }
    if (j.contains("mode")) {
        const std::string m = detail::string_field(j, "mode", path);
        if (m == "faithful") base.mode = LaplacianMode::faithful;
        else if (m == "simplified") base.mode = LaplacianMode::simplified;
        else detail::bad_field(path + "mode", "expected 'faithful' or 'simplified'");
    }
    if (j.contains("metric")) {
        const std::string m = detail::string_field(j, "metric", path);
        if (m == "constraint") base.metric = MetricKind::constraint_strength;
        else if (m == "curvature") base.metric = MetricKind::curvature_geometric;
        else detail::bad_field(path + "metric", "expected 'constraint' or 'curvature'");
    }
    if (j.contains("q_max")) {
        base.q_max = detail::integer_field(j, "q_max", path);
        if (base.q_max < 2) detail::bad_field(path + "q_max", "must be >= 2");
    }
    if (j.contains("tol")) {
        base.tol = detail::number_field(j, "tol", path);
        if (!(base.tol > 0.0)) detail::bad_field(path + "tol", "must be positive");
    }
    if (j.contains("curvature_norm_sq")) {
        const Json& c = j.at("curvature_norm_sq");
        if (c.is_number()) {
            if (c.get<double>() < 0.0) detail::bad_field(path + "curvature_norm_sq", "must be nonnegative");
            base.curvature_norm_sq = std::vector<double>{c.get<double>()};
        } else if (c.is_array()) {
            std::vector<double> values;
            for (const auto& v : c) {
                if (!v.is_number() || v.get<double>() < 0.0) {
                    detail::bad_field(path + "curvature_norm_sq", "expected nonnegative numbers");
                }
                values.push_back(v.get<double>());
            }
            base.curvature_norm_sq = std::move(values);
        } else {
            detail::bad_field(path + "curvature_norm_sq", "expected a number or an array");
        }
    }
    if (j.contains("fault_injection")) {
#ifdef SPENCER_ENABLE_FAULT_INJECTION
        const std::string f = detail::string_field(j, "fault_injection", path);
        if (f == "none") base.fault = FaultInjection::none;
        else if (f == "drop_mirror_coupling") base.fault = FaultInjection::drop_mirror_coupling;
        else detail::bad_field(path + "fault_injection", "unknown fault");
#else
        detail::bad_field(path + "fault_injection", "only available in test builds");
#endif
    }
    return base;
}

[[nodiscard]] inline MirrorConfig to_mirror_config(const RunConfig& rc) {
    MirrorConfig c;
    c.id = rc.id;
    c.curve = rc.curve;
    c.lambda = DualFunctional{Eigen::Map<const Eigen::VectorXd>(rc.lambda.data(), 3)};
    c.mode = rc.mode;
    c.metric = rc.metric;
    c.q_max = rc.q_max;
    c.tol = rc.tol;
    c.fault = rc.fault;
    if (rc.curvature_norm_sq) {
        const auto& v = *rc.curvature_norm_sq;
        if (v.size() == 1) {
            c.connection = ConnectionData{std::vector<double>(static_cast<std::size_t>(rc.curve.N), v.front())};
        } else if (v.size() == static_cast<std::size_t>(rc.curve.N)) {
            c.connection = ConnectionData{v};
        } else {
            fail(ErrorKind::input, "field 'curvature_norm_sq': expected 1 or N = " + std::to_string(rc.curve.N) +
                                       " values");
        }
    }
    return c;
}

[[nodiscard]] inline Json to_json(const RunConfig& rc) {
    Json j{{"id", rc.id},
           {"curve", {{"a", rc.curve.a}, {"b", rc.curve.b}, {"R", rc.curve.R}, {"N", rc.curve.N}}},
           {"algebra", rc.algebra},
           {"lambda", rc.lambda},
           {"mode", to_string(rc.mode)},
           {"metric", to_string(rc.metric)},
           {"q_max", rc.q_max},
           {"tol", rc.tol}};
    if (rc.curvature_norm_sq) j["curvature_norm_sq"] = *rc.curvature_norm_sq;
    if (rc.fault != FaultInjection::none) j["fault_injection"] = "drop_mirror_coupling";
    return j;
}

inline void check_schema_tag(const Json& j, const char* expected) {
    if (j.contains("schema") && (!j.at("schema").is_string() || j.at("schema").get<std::string>() != expected)) {
        detail::bad_field("schema", std::string("expected '") + expected + "'");
    }
}

/// Single run document.
[[nodiscard]] inline RunConfig parse_run_config(const Json& j) {
    check_schema_tag(j, kConfigSchema);
    return merge_run_config(RunConfig{}, j, "");
}

/// Sweep document: {"defaults": {...}, "configs": [{...}, ...]}.
[[nodiscard]] inline std::vector<RunConfig> parse_sweep_config(const Json& j) {
    if (!j.is_object()) detail::bad_field("<root>", "expected an object");
    check_schema_tag(j, kConfigSchema);
    detail::reject_unknown(j, {"schema", "defaults", "configs", "output_dir"}, "");
    RunConfig defaults;
    if (j.contains("defaults")) defaults = merge_run_config(defaults, j.at("defaults"), "defaults.");
    if (!j.contains("configs")) detail::bad_field("configs", "missing");
    const Json& list = j.at("configs");
    if (!list.is_array()) detail::bad_field("configs", "expected an array");
    std::vector<RunConfig> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        RunConfig rc = defaults;
        rc.id = "config" + std::to_string(i);
        out.push_back(merge_run_config(rc, list[i], "configs[" + std::to_string(i) + "]."));
    }
    return out;
}

[[nodiscard]] inline std::optional<std::string> output_dir_of(const Json& j) {
    if (j.is_object() && j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) detail::bad_field("output_dir", "expected a string");
        return j.at("output_dir").get<std::string>();
    }
    return std::nullopt;
}

/// Manifold and bundle data for the Riemann-Roch calculator.
struct ManifoldInput {
    CYManifoldData manifold;
    std::vector<CohomologyClass> bundle_ch;
    std::string todd = "roots";  // or "published"

    [[nodiscard]] ToddCoefficients coefficients() const {
        return todd == "published" ? ToddCoefficients::published() : ToddCoefficients::from_roots();
    }
};

namespace detail {

inline Rational rational_value(const Json& v, const std::string& field) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const Error& e) {
            bad_field(field, e.what());
        }
    }
    bad_field(field, "expected an integer or a rational string such as \"3/2\"");
}

/// Parses "c2", "c2^2", "c2*c3", "1" into an exponent vector.
inline Exponents parse_monomial(const RingPtr& ring, const std::string& text, const std::string& field) {
    Exponents e(ring->size(), 0);
    if (text == "1") return e;
    std::stringstream ss(text);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        int power = 1;
        const auto caret = factor.find('^');
        std::string name = factor;
        if (caret != std::string::npos) {
            name = factor.substr(0, caret);
            try {
                power = std::stoi(factor.substr(caret + 1));
            } catch (const std::exception&) {
                bad_field(field, "bad exponent in monomial '" + text + "'");
            }
            if (power < 1) bad_field(field, "bad exponent in monomial '" + text + "'");
        }
        try {
            e[ring->index_of(name)] += power;
        } catch (const Error&) {
            bad_field(field, "unknown generator '" + name + "' in monomial '" + text + "'");
        }
    }
    return e;
}

/// Canonical monomial name as produced by CohomologyClass::monomial_name.
inline std::string canonical_monomial(const RingPtr& ring, const std::string& text, const std::string& field) {
    const CohomologyClass probe(ring);
    return probe.monomial_name(parse_monomial(ring, text, field));
}

}  // namespace detail

[[nodiscard]] inline ManifoldInput parse_manifold(const Json& j) {
    if (!j.is_object()) detail::bad_field("<root>", "expected an object");
    check_schema_tag(j, kManifoldSchema);
    detail::reject_unknown(j, {"schema", "name", "n", "intersection_numbers", "bundle_ch", "todd", "output_dir"}, "");
    ManifoldInput in;
    if (j.contains("name")) in.manifold.name = detail::string_field(j, "name", "");
    if (!j.contains("n")) detail::bad_field("n", "missing");
    in.manifold.n = detail::integer_field(j, "n", "");
    if (in.manifold.n < 1 || in.manifold.n > 4) detail::bad_field("n", "must be between 1 and 4");
    const RingPtr ring = in.manifold.ring();
    if (j.contains("intersection_numbers")) {
        const Json& numbers = j.at("intersection_numbers");
        if (!numbers.is_object()) detail::bad_field("intersection_numbers", "expected an object");
        for (const auto& [key, value] : numbers.items()) {
            const std::string field = "intersection_numbers." + key;
            in.manifold.intersections[detail::canonical_monomial(ring, key, field)] =
                detail::rational_value(value, field);
        }
    }
    if (!j.contains("bundle_ch")) detail::bad_field("bundle_ch", "missing");
    const Json& list = j.at("bundle_ch");
    if (!list.is_array()) detail::bad_field("bundle_ch", "expected an array");
    if (list.size() != static_cast<std::size_t>(in.manifold.n + 1)) {
        detail::bad_field("bundle_ch", "expected n + 1 = " + std::to_string(in.manifold.n + 1) + " entries");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string field = "bundle_ch[" + std::to_string(k) + "]";
        if (!list[k].is_object()) detail::bad_field(field, "expected an object of monomial coefficients");
        CohomologyClass cls(ring);
        for (const auto& [key, value] : list[k].items()) {
            cls.add_term(detail::parse_monomial(ring, key, field + "." + key),
                         detail::rational_value(value, field + "." + key));
        }
        in.bundle_ch.push_back(std::move(cls));
    }
    if (j.contains("todd")) {
        in.todd = detail::string_field(j, "todd", "");
        if (in.todd != "roots" && in.todd != "published") detail::bad_field("todd", "expected 'roots' or 'published'");
    }
    return in;
}

/// Named manifold inputs.
[[nodiscard]] inline ManifoldInput manifold_preset(const std::string& name) {
    if (name == "k3") return {k3_surface(), k3_flat_rank3_bundle(), "roots"};
    fail(ErrorKind::input, "unknown preset '" + name + "' (available: k3)");
}

[[nodiscard]] inline Json class_to_json(const CohomologyClass& cls) {
    Json j = Json::object();
    for (const auto& [e, c] : cls.terms()) j[cls.monomial_name(e)] = to_string(c);
    return j;
}

[[nodiscard]] inline Json to_json(const ManifoldInput& in) {
    Json numbers = Json::object();
    for (const auto& [k, v] : in.manifold.intersections) numbers[k] = to_string(v);
    Json ch = Json::array();
    for (const auto& c : in.bundle_ch) ch.push_back(class_to_json(c));
    return {{"name", in.manifold.name}, {"n", in.manifold.n}, {"intersection_numbers", numbers},
            {"bundle_ch", ch}, {"todd", in.todd}};
}

}  // namespace spencer::app
