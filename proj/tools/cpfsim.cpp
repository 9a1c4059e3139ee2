#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpf/report.hpp"
#include "cpf/types.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Conditional past-future correlation simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_dir = ".", overrides_json = "{}";
    std::vector<std::string> overrides;
    int fig = 1;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("-c,--config", config_path, "JSON config file");
        if (config_required) opt->required();
        sub->add_option("-s,--set", overrides,
                        "Dotted-path config override, e.g. grid.n_points=5");
        sub->add_option("-o,--output", out_path, "Output CSV path (overrides config)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Sweep the perturbative CPF");
    add_common(sim, true);
    CLI::App* cmp = app.add_subcommand(
        "compare", "Sweep series vs oracle and check the tolerance");
    add_common(cmp, true);
    CLI::App* val =
        app.add_subcommand("validate", "Run built-in structural self-checks");
    CLI::App* figcmd =
        app.add_subcommand("figure-data", "Emit CSV data for a reference figure");
    figcmd->add_option("-f,--fig", fig, "Figure number (1, 2 or 3)")->required();
    figcmd->add_option("-d,--out-dir", out_dir, "Output directory");
    figcmd->add_option("--overrides", overrides_json,
                       "JSON merge patch applied to every run config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (val->parsed()) return cpf::cmd_validate();
        if (figcmd->parsed()) {
            nlohmann::json patch = nlohmann::json::parse(overrides_json, nullptr, false);
            if (patch.is_discarded())
                throw cpf::validation_error("--overrides is not valid JSON");
            return cpf::cmd_figure_data(fig, patch, out_dir);
        }
        nlohmann::json j = cpf::load_config(config_path, overrides);
        cpf::ExperimentConfig cfg = cpf::ExperimentConfig::from_json(j);
        if (!out_path.empty()) cfg.output = out_path;
        if (sim->parsed()) return cpf::cmd_simulate(cfg);
        return cpf::cmd_compare(cfg);
    } catch (const cpf::validation_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cpf::accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const cpf::model_error& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
