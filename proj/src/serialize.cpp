#include "palmflow/serialize.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace palmflow {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

json to_json(const PointMeasure& pm) {
    json atoms = json::array();
    for (const Atom& a : pm.atoms()) atoms.push_back(json::array({a.t, a.k}));
    return json{{"window", {pm.window_lo(), pm.window_hi()}}, {"atoms", std::move(atoms)}};
}

PointMeasure point_measure_from_json(const json& j) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({a.at(0).get<double>(), a.at(1).get<std::int64_t>()});
    return PointMeasure(j.at("window").at(0).get<double>(), j.at("window").at(1).get<double>(),
                        std::move(atoms));
}

json to_json(const IdentityReport& r) {
    return json{{"name", r.name},
                {"lhs", r.lhs},
                {"lhs_se", r.lhs_se},
                {"rhs", r.rhs},
                {"rhs_se", r.rhs_se},
                {"discrepancy", r.discrepancy},
                {"threshold", r.threshold},
                {"pass", r.pass},
                {"lhs_samples", r.lhs_samples},
                {"rhs_samples", r.rhs_samples},
                {"censored", r.censored},
                {"warnings", r.warnings}};
}

IdentityReport identity_report_from_json(const json& j) {
    IdentityReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = j.at("lhs").get<double>();
    r.lhs_se = j.at("lhs_se").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.rhs_se = j.at("rhs_se").get<double>();
    r.discrepancy = j.at("discrepancy").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.lhs_samples = j.at("lhs_samples").get<std::size_t>();
    r.rhs_samples = j.at("rhs_samples").get<std::size_t>();
    r.censored = j.at("censored").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

json to_json(const SummaryStat& s) {
    return json{{"mean", s.mean}, {"se", s.se}, {"n", s.n}};
}

namespace {

json to_json(const CountLaw& c) {
    json freq = json::object();
    for (const auto& [k, cnt] : c.freq) freq[std::to_string(k)] = cnt;
    return json{{"window", {c.lo, c.hi}}, {"freq", std::move(freq)}, {"total", c.total}};
}

} // namespace

json to_json(const FamilyIndexResult& r) {
    json xi = json::array(), eta = json::array();
    for (const auto& c : r.xi_counts) xi.push_back(to_json(c));
    for (const auto& c : r.eta_counts) eta.push_back(to_json(c));
    json out{{"n", r.n},
             {"intensity", to_json(r.intensity)},
             {"p_nonzero", to_json(r.p_nonzero)},
             {"mean_tau1_eta", to_json(r.mean_tau1_eta)},
             {"mean_tau1_eta_exact", r.mean_tau1_eta_exact},
             {"xi_counts", std::move(xi)},
             {"eta_counts", std::move(eta)},
             {"eta_central_mass", to_json(r.eta_central_mass)},
             {"eta_central_mass_min", r.eta_central_mass_min},
             {"samples", r.samples},
             {"censored", r.censored},
             {"palm_source", r.palm_source}};
    if (r.eta_central_mass_bound) out["eta_central_mass_bound"] = *r.eta_central_mass_bound;
    return out;
}

json to_json(const TwoOfThreeReport& r) {
    return json{{"intensity_conv", to_string(r.intensity_conv)},
                {"xi_conv", to_string(r.xi_conv)},
                {"eta_conv", to_string(r.eta_conv)},
                {"intensity_by_n", r.intensity_by_n},
                {"xi_tv_by_n", r.xi_tv_by_n},
                {"eta_tv_by_n", r.eta_tv_by_n},
                {"eta_central_mass_by_n", r.eta_central_mass_by_n},
                {"mass_bound_satisfied", r.mass_bound_satisfied},
                {"caveat", r.caveat}};
}

void write_ndjson(const std::filesystem::path& path, std::span<const PointMeasure> ensemble) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_ndjson: cannot open " + path.string());
    for (const PointMeasure& pm : ensemble) out << to_json(pm).dump() << '\n';
}

std::vector<PointMeasure> read_ndjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_ndjson: cannot open " + path.string());
    std::vector<PointMeasure> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(point_measure_from_json(json::parse(line)));
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string& f = row[i];
            bool quote = f.find_first_of(",\"\n") != std::string::npos;
            if (i) out << ',';
            if (quote) {
                out << '"';
                for (char c : f) {
                    if (c == '"') out << '"';
                    out << c;
                }
                out << '"';
            } else {
                out << f;
            }
        }
        out << '\n';
    };
    emit_row(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        emit_row(row);
    }
}

} // namespace palmflow
