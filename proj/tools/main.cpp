#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chernoff_lab/config.hpp"
#include "chernoff_lab/errors.hpp"
#include "chernoff_lab/runner.hpp"

using namespace chernoff_lab;

int main(int argc, char** argv) {
    CLI::App app{"Chernoff approximations to translation and heat semigroups: "
                 "exact shift-mixture powers, semigroup oracles, convergence-rate "
                 "experiments"};
    app.require_subcommand(1);

    const std::vector<ExperimentKind> kinds{
        ExperimentKind::rates,    ExperimentKind::compare,  ExperimentKind::slow,
        ExperimentKind::tangency, ExperimentKind::moments,  ExperimentKind::subspace,
        ExperimentKind::linearity};

    std::string config_path;
    std::string selected_kind;
    for (ExperimentKind k : kinds) {
        auto* sub = app.add_subcommand(kind_name(k), std::string("run a ") + kind_name(k) +
                                                         " experiment from a JSON config");
        sub->add_option("--config", config_path, "path to the JSON config file")->required();
        sub->callback([&selected_kind, k] { selected_kind = kind_name(k); });
    }

    auto* list_cmd = app.add_subcommand("list", "print the family / function / rate catalogs");

    std::string init_kind, init_path;
    auto* init_cmd =
        app.add_subcommand("init", "write a ready-to-edit template config for a kind");
    init_cmd->add_option("kind", init_kind, "experiment kind")->required();
    init_cmd->add_option("--config", init_path, "where to write the template (default <kind>.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            std::cout << catalog_text();
            return 0;
        }
        if (init_cmd->parsed()) {
            const ExperimentKind k = parse_kind(init_kind);
            if (init_path.empty()) init_path = init_kind + ".json";
            std::ofstream out(init_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write \"" << init_path << "\"\n";
                return 1;
            }
            out << serialize_config(template_config(k));
            std::cout << "wrote " << init_path << "\n";
            return 0;
        }
        ExperimentConfig cfg = load_config(config_path);
        if (kind_name(cfg.kind) != selected_kind) {
            std::cerr << "error: config kind \"" << kind_name(cfg.kind)
                      << "\" does not match subcommand \"" << selected_kind << "\"\n";
            return 2;
        }
        run(cfg);
        std::cout << "wrote " << cfg.output << ".csv and " << cfg.output << ".report.txt\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
