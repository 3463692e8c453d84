#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "spencer/app/commands.hpp"
#include "spencer/csv.hpp"

using namespace spencer;
using namespace spencer::app;

namespace {

std::string error_message(const Json& j) {
    try {
        (void)parse_run_config(j);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::input);
        return e.what();
    }
    return "";
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("spencer-config-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("run config defaults and overrides", "[config]") {
    const RunConfig rc = parse_run_config(Json::parse(R"({"lambda": [1, 0, 0], "mode": "faithful", "curve": {"N": 50}})"));
    CHECK(rc.curve.a == -2.0);
    CHECK(rc.curve.b == 1.0);
    CHECK(rc.curve.N == 50);
    CHECK(rc.mode == LaplacianMode::faithful);
    CHECK(rc.metric == MetricKind::constraint_strength);
    CHECK(rc.q_max == 3);
    CHECK(rc.tol == 1e-8);
    const MirrorConfig mc = to_mirror_config(rc);
    CHECK(mc.lambda.coeffs == Eigen::Vector3d(1, 0, 0));
    CHECK_FALSE(mc.connection.has_value());
}

TEST_CASE("config errors name the offending field", "[config]") {
    CHECK(error_message(Json::parse(R"({"lambda": [1, 0]})")).find("'lambda'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"curve": {"N": 2}})")).find("'curve.N'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"mode": "exact"})")).find("'mode'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"metric": 3})")).find("'metric'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"tol": -1})")).find("'tol'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"lamda": [1, 0, 0]})")).find("'lamda'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"algebra": "su3"})")).find("'algebra'") != std::string::npos);
    CHECK(error_message(Json::parse(R"({"schema": "other"})")).find("'schema'") != std::string::npos);
#ifndef SPENCER_ENABLE_FAULT_INJECTION
    CHECK(error_message(Json::parse(R"({"fault_injection": "drop_mirror_coupling"})")).find("'fault_injection'") !=
          std::string::npos);
#endif
}

TEST_CASE("curvature data expands to one value per node", "[config]") {
    const RunConfig rc = parse_run_config(Json::parse(R"({"curve": {"N": 5}, "curvature_norm_sq": 0.25, "metric": "curvature"})"));
    const MirrorConfig mc = to_mirror_config(rc);
    REQUIRE(mc.connection.has_value());
    CHECK(mc.connection->curvature_norm_sq == std::vector<double>(5, 0.25));
    const RunConfig bad = parse_run_config(Json::parse(R"({"curve": {"N": 5}, "curvature_norm_sq": [1, 2]})"));
    CHECK_THROWS_AS(to_mirror_config(bad), Error);
}

TEST_CASE("sweep documents merge defaults into each entry", "[config]") {
    const auto runs = parse_sweep_config(Json::parse(R"({
        "defaults": {"curve": {"N": 40}, "mode": "faithful"},
        "configs": [{"id": "a", "lambda": [1, 0, 0]}, {"lambda": [0, 1, 0], "mode": "simplified"}]})"));
    REQUIRE(runs.size() == 2);
    CHECK(runs[0].id == "a");
    CHECK(runs[0].curve.N == 40);
    CHECK(runs[0].mode == LaplacianMode::faithful);
    CHECK(runs[1].id == "config1");
    CHECK(runs[1].mode == LaplacianMode::simplified);
    CHECK(parse_sweep_config(Json::parse(R"({"configs": []})")).empty());
    CHECK_THROWS_AS(parse_sweep_config(Json::parse(R"({"defaults": {}})")), Error);
    try {
        (void)parse_sweep_config(Json::parse(R"({"configs": [{}, {"q_max": 1}]})"));
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("configs[1].q_max") != std::string::npos);
    }
}

TEST_CASE("manifold documents", "[config]") {
    const ManifoldInput in = parse_manifold(Json::parse(R"({
        "n": 2, "intersection_numbers": {"c2": 24},
        "bundle_ch": [{"1": 1}, {"1": 6, "c2": "-3"}, {"1": "6"}]})"));
    CHECK(in.manifold.n == 2);
    CHECK(in.manifold.intersections.at("c2") == 24);
    REQUIRE(in.bundle_ch.size() == 3);
    const ManifoldInput preset = manifold_preset("k3");
    for (std::size_t k = 0; k < 3; ++k) CHECK(in.bundle_ch[k] == preset.bundle_ch[k]);
    CHECK(in.coefficients() == ToddCoefficients::from_roots());

    const ManifoldInput cy3 = parse_manifold(Json::parse(R"({
        "n": 3, "intersection_numbers": {"c3": "-200"}, "todd": "published",
        "bundle_ch": [{"1": 1}, {}, {}, {"c3": "1/2"}]})"));
    CHECK(cy3.coefficients() == ToddCoefficients::published());

    CHECK_THROWS_AS(parse_manifold(Json::parse(R"({"n": 2, "bundle_ch": [{}, {}]})")), Error);
    CHECK_THROWS_AS(parse_manifold(Json::parse(R"({"n": 2, "bundle_ch": [{"c5": 1}, {}, {}]})")), Error);
    CHECK_THROWS_AS(parse_manifold(Json::parse(R"({"n": 2, "bundle_ch": [{"1": 0.5}, {}, {}]})")), Error);
    CHECK_THROWS_AS(manifold_preset("quintic"), Error);
}

TEST_CASE("SRR JSON does not depend on the lambda tag", "[config]") {
    const ManifoldInput k3 = manifold_preset("k3");
    const Json j = srr_result_json(k3);
    CHECK(j.at("plus").dump() == j.at("minus").dump());
    CHECK(j.at("relations").at("lambda_tag_invariant").get<bool>());
    CHECK(j.at("relations").at("chi_equals_euler_srr").get<bool>());
    CHECK(j.at("plus").at("chi").get<std::string>() == "74");
}

TEST_CASE("CSV quoting follows RFC 4180", "[config]") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    std::ostringstream os;
    csv::Writer w(os);
    w.row({"x", "y,z"});
    CHECK(os.str() == "x,\"y,z\"\r\n");
    std::ostringstream d;
    csv::write_delta_matrix(d, Eigen::MatrixXd::Zero(3, 1), 0);
    CHECK(d.str().rfind("out\\in,1\r\ne1,0\r\n", 0) == 0);
}

TEST_CASE("output directory precedence", "[config]") {
    CommandOptions opts;
    ::unsetenv("SPENCER_MIRROR_OUT");
    CHECK(resolve_output_dir(opts, std::nullopt) == fs::path("spencer-mirror-out"));
    CHECK(resolve_output_dir(opts, std::string("cfg")) == fs::path("cfg"));
    ::setenv("SPENCER_MIRROR_OUT", "envdir", 1);
    CHECK(resolve_output_dir(opts, std::string("cfg")) == fs::path("envdir"));
    opts.out = "flag";
    CHECK(resolve_output_dir(opts, std::string("cfg")) == fs::path("flag"));
    ::unsetenv("SPENCER_MIRROR_OUT");
}

TEST_CASE("exit codes", "[config]") {
    CHECK(exit_code_for(ErrorKind::input) == 1);
    CHECK(exit_code_for(ErrorKind::capacity) == 1);
    CHECK(exit_code_for(ErrorKind::numeric) == 3);
    CHECK(exit_code_for(ErrorKind::consistency) == 3);

    const fs::path dir = temp_dir("exit");
    std::ostringstream out, err;
    CommandOptions opts;
    opts.out = dir;
    opts.config = dir / "missing.json";
    CHECK(run_command("verify-mirror", opts, out, err) == 1);
    {
        std::ofstream bad(dir / "bad.json");
        bad << "{\"lambda\": [1, 0, 0],";
    }
    opts.config = dir / "bad.json";
    CHECK(run_command("verify-mirror", opts, out, err) == 1);
    CHECK(run_command("unknown", opts, out, err) == 1);

    {
        std::ofstream good(dir / "good.json");
        good << R"({"lambda": [1, 0, 0], "curve": {"N": 30}, "mode": "faithful", "id": "tiny"})";
    }
    opts.config = dir / "good.json";
    opts.dump_matrices = true;
    CHECK(run_command("verify-mirror", opts, out, err) == 0);
    CHECK(fs::exists(dir / "verify_mirror.json"));
    CHECK(fs::exists(dir / "eigenvalues" / "tiny_k0_plus.csv"));
    CHECK(fs::exists(dir / "matrices" / "tiny" / "delta_sym1.csv"));
    CHECK(fs::exists(dir / "matrices" / "tiny" / "K1.csv"));
    const Json report = read_json(dir / "verify_mirror.json");
    CHECK(report.at("passed").get<bool>());
    CHECK(report.at("results").at(0).at("degrees").size() == 2);

    {
        std::ofstream empty(dir / "empty.json");
        empty << R"({"configs": []})";
    }
    opts.config = dir / "empty.json";
    opts.dump_matrices = false;
    CHECK(run_command("sweep", opts, out, err) == 0);
    CHECK(read_json(dir / "sweep.json").at("results").at("rows").empty());
    fs::remove_all(dir);
}
