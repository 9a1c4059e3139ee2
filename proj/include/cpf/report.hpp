#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpf/types.hpp"

namespace cpf {

/// Resolved experiment description; parsed and validated from a JSON config.
struct ExperimentConfig {
    // model
    std::string model_type = "dephasing";  // "dephasing" | "bosonic"
    double gamma = 1.0;
    double tau_c = 0.1;
    double nbar = 0.0;
    std::string finite_t_style = "pseudomode";  // "pseudomode" | "ansatz"
    // scheme
    std::string scheme = "xxx";  // "zzz" | "xzx" | "xxx"
    // initial state |psi0> = sqrt(p)|+> + sqrt(1-p)|->
    double p = 1.0;
    // sweep grid (t = tau, n_points samples of gamma t in (0, t_max])
    double t_max = 4.0;
    int n_points = 20;
    int quad_nodes = 41;
    // series
    int max_order = 3;
    // oracle
    std::string oracle_kind = "none";  // "none" | "mc" | "gaussian" | "pseudomode"
    long n_traj = 100000;
    std::uint64_t seed = 12345;
    int fock_cutoff = -1;
    // compare
    double tolerance = 0.01;
    // output
    std::string output = "out.csv";

    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;
    nlohmann::json to_json() const;
};

/// Loads a JSON config file and applies dotted-path overrides of the form
/// "grid.n_points=5" (values parsed as JSON when possible, else strings).
nlohmann::json load_config(const std::string& path,
                           const std::vector<std::string>& overrides);

// Subcommand drivers. Return process exit codes:
// 0 success, 2 config error, 3 accuracy/convergence failure,
// 4 unsupported combination.
int cmd_simulate(const ExperimentConfig& cfg);
int cmd_compare(const ExperimentConfig& cfg);
int cmd_validate();
int cmd_figure_data(int fig, const nlohmann::json& overrides,
                    const std::string& out_dir);

}  // namespace cpf
