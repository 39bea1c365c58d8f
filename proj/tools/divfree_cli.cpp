#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "divfree/scenario.hpp"

using divfree::Scenario;

namespace {

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale divergence-free approximation toolkit"};
    app.require_subcommand(1);

    std::string scenario_name, config_path, out_dir = ".";
    std::uint64_t seed = 1;
    double gamma = -1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_name, "scenario name")->required();
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--gamma", gamma, "Holder exponent override");
    };
    CLI::App* run = app.add_subcommand("run", "run a scenario and write reports");
    CLI::App* val = app.add_subcommand("validate", "dry-run compatibility checks");
    add_common(run);
    add_common(val);

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario sc;
        sc.name = scenario_name;
        sc.config = load_config(config_path);
        if (gamma >= 0.0) sc.config["gamma"] = gamma;
        sc.seed = seed;
        sc.out_dir = out_dir;

        bool known = false;
        for (const auto& n : divfree::scenario_names()) known = known || n == sc.name;
        if (!known) throw std::invalid_argument("unknown scenario: " + sc.name);

        if (val->parsed()) {
            auto problems = divfree::validate_scenario(sc);
            if (problems.empty()) {
                std::cout << "validate " << sc.name << ": no problems\n";
            } else {
                for (const auto& p : problems) std::cout << "validate " << sc.name << ": " << p << "\n";
            }
            return 0;  // problems are report entries, not failures
        }
        int rc = divfree::run_scenario(sc);
        std::cout << "run " << sc.name << ": " << (rc == 0 ? "pass" : "ACCEPTANCE FAILURE")
                  << " (reports in " << sc.out_dir << ")\n";
        return rc;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
