#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cpf/report.hpp"

using namespace cpf;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

int line_count(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST_CASE("config parsing, defaults and validation") {
    nlohmann::json j = {{"model", {{"type", "dephasing"}, {"tau_c", 0.05}}},
                        {"scheme", "xxx"},
                        {"output", "x.csv"}};
    ExperimentConfig c = ExperimentConfig::from_json(j);
    CHECK(c.gamma == 1.0);
    CHECK(c.tau_c == 0.05);
    CHECK(c.max_order == 3);

    CHECK_THROWS_AS(ExperimentConfig::from_json({{"scheme", "yyy"}}),
                    validation_error);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"bogus_key", 1}}),
                    validation_error);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json({{"initial_state", {{"p", 1.5}}}}),
        validation_error);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json(
            {{"oracle", {{"kind", "mc"}, {"n_traj", 10}}}}),
        validation_error);

    // Round trip through the embedded-config JSON.
    ExperimentConfig c2 = ExperimentConfig::from_json(c.to_json());
    CHECK(c2.to_json() == c.to_json());
}

TEST_CASE("dotted-path overrides") {
    spit("test_cfg.json", R"({"scheme":"xzx","grid":{"n_points":7}})");
    nlohmann::json j = load_config(
        "test_cfg.json", {"grid.n_points=3", "model.tau_c=0.5", "scheme=zzz"});
    CHECK(j["grid"]["n_points"] == 3);
    CHECK(j["model"]["tau_c"] == 0.5);
    CHECK(j["scheme"] == "zzz");
    CHECK_THROWS_AS(load_config("missing.json", {}), validation_error);
    CHECK_THROWS_AS(load_config("test_cfg.json", {"no_equals_sign"}),
                    validation_error);
    std::remove("test_cfg.json");
}

TEST_CASE("empty grid produces a header-only CSV") {
    ExperimentConfig c;
    c.n_points = 0;
    c.output = "test_empty.csv";
    CHECK(cmd_simulate(c) == 0);
    std::string s = slurp("test_empty.csv");
    CHECK(line_count(s) == 3);  // version, config, column header
    CHECK(s.rfind("# cpfkit", 0) == 0);
    CHECK(s.find("t_axis,t,tau,y,cpf_order_1") != std::string::npos);
    std::remove("test_empty.csv");
}

TEST_CASE("simulate output is deterministic") {
    ExperimentConfig c;
    c.tau_c = 0.1;
    c.scheme = "xxx";
    c.t_max = 1.0;
    c.n_points = 2;
    c.quad_nodes = 9;
    c.max_order = 2;
    c.oracle_kind = "mc";
    c.n_traj = 5000;
    c.output = "test_run_a.csv";
    CHECK(cmd_simulate(c) == 0);
    c.output = "test_run_b.csv";
    CHECK(cmd_simulate(c) == 0);
    std::string a = slurp("test_run_a.csv"), b = slurp("test_run_b.csv");
    // Outputs must be byte-identical apart from the embedded output path.
    size_t pa = a.find("test_run_a"), pb = b.find("test_run_b");
    REQUIRE(pa != std::string::npos);
    a.replace(pa, 10, "X");
    b.replace(pb, 10, "X");
    CHECK(a == b);
    CHECK(line_count(a) == 3 + 2 * 2);
    std::remove("test_run_a.csv");
    std::remove("test_run_b.csv");
}

TEST_CASE("unsupported model/oracle combinations are rejected") {
    ExperimentConfig c;
    c.model_type = "bosonic";
    c.oracle_kind = "gaussian";
    c.n_points = 1;
    c.output = "test_bad.csv";
    CHECK_THROWS_AS(cmd_simulate(c), model_error);
    c.model_type = "dephasing";
    c.oracle_kind = "pseudomode";
    CHECK_THROWS_AS(cmd_simulate(c), model_error);
    std::remove("test_bad.csv");
}
