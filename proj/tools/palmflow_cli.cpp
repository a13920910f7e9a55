#include "palmflow/experiments.hpp"
#include "palmflow/systems_zoo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"palmflow: entry/return-time point processes over suspension "
                 "semi-flows, with Palm-distribution identity checks"};
    app.require_subcommand(1);

    int default_jobs = 1;
    if (const char* env = std::getenv("PALMFLOW_JOBS")) {
        try {
            default_jobs = std::max(1, std::stoi(env));
        } catch (...) {
            std::cerr << nlohmann::json{{"error", "PALMFLOW_JOBS is not an integer"}}.dump()
                      << '\n';
            return 2;
        }
    }

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    long long seed = -1;
    int jobs = -1;
    bool keep_ensembles = false;

    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--set", overrides, "override a config key (key=value); flags win");
    run->add_option("--seed", seed, "override the base seed");
    run->add_option("--jobs", jobs, "worker count (default: PALMFLOW_JOBS or 1)");
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_flag("--keep-ensembles", keep_ensembles, "also write ensembles/*.ndjson");

    auto* zoo = app.add_subcommand("zoo", "list available systems and their parameters");
    auto* schema = app.add_subcommand("schema", "describe the report.json layout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (zoo->parsed()) {
            for (const auto& entry : palmflow::zoo_catalog()) {
                std::cout << entry.id << ": " << entry.summary << '\n';
                for (const auto& [name, desc] : entry.params)
                    std::cout << "    " << name << " — " << desc << '\n';
            }
            return 0;
        }
        if (schema->parsed()) {
            std::cout << palmflow::report_schema().dump(2) << '\n';
            return 0;
        }

        palmflow::Config cfg = palmflow::parse_config_file(config_path);
        for (const auto& kv : overrides) palmflow::apply_override(cfg, kv);
        if (seed >= 0) cfg["seed"] = std::to_string(seed);
        cfg["jobs"] = std::to_string(jobs >= 1 ? jobs : default_jobs);

        palmflow::RunArtifacts artifacts = palmflow::run_experiment(cfg);
        palmflow::write_artifacts(artifacts, out_dir, keep_ensembles);

        std::size_t total = artifacts.report["reports"].size();
        std::size_t passed = 0;
        for (const auto& r : artifacts.report["reports"])
            if (r.at("pass").get<bool>()) ++passed;
        std::cout << artifacts.report["kind"].get<std::string>() << ": " << passed << "/"
                  << total << " identities pass"
                  << (artifacts.all_pass ? "" : " [FAIL]") << '\n';
        return artifacts.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 2;
    }
}
