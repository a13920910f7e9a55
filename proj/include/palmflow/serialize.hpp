#pragma once

#include "palmflow/convergence.hpp"
#include "palmflow/palm.hpp"
#include "palmflow/point_measure.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace palmflow {

nlohmann::json to_json(const PointMeasure& pm);
PointMeasure point_measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IdentityReport& r);
IdentityReport identity_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SummaryStat& s);
nlohmann::json to_json(const FamilyIndexResult& r);
nlohmann::json to_json(const TwoOfThreeReport& r);

// one realization per line
void write_ndjson(const std::filesystem::path& path, std::span<const PointMeasure> ensemble);
std::vector<PointMeasure> read_ndjson(const std::filesystem::path& path);

// minimal CSV writer; fields containing separators or quotes get quoted
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::string format_double(double x); // shortest round-trip representation

} // namespace palmflow
