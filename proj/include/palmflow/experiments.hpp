#pragma once

#include "palmflow/serialize.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace palmflow {

// Flat dotted key-value configuration. Later assignments win, so flag
// overrides are just late insertions.
using Config = std::map<std::string, std::string>;

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::filesystem::path& path);
void apply_override(Config& cfg, const std::string& key_eq_value); // "k=v"

std::string version_string();
int report_schema_version();
nlohmann::json report_schema(); // field documentation for `schema` subcommand

struct RunArtifacts {
    nlohmann::json report; // schema, version, kind, resolved config, reports, pass
    std::vector<std::pair<std::string, CsvTable>> tables;
    std::vector<std::pair<std::string, std::vector<PointMeasure>>> ensembles;
    bool all_pass = false;
};

// executes the experiment named by cfg["kind"]; throws std::invalid_argument
// on config errors
RunArtifacts run_experiment(const Config& cfg);

// report.json (+ timestamp), tables/*.csv, ensembles/*.ndjson
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir,
                     bool keep_ensembles);

} // namespace palmflow
