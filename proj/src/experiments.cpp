#include "palmflow/experiments.hpp"

#include "palmflow/convergence.hpp"
#include "palmflow/ensemble.hpp"
#include "palmflow/palm.hpp"
#include "palmflow/suspension.hpp"
#include "palmflow/systems_zoo.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace palmflow {

using nlohmann::json;

namespace {

constexpr double kDefaultAlpha = 0.41421356237309515; // sqrt(2) - 1

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::string get_str(const Config& cfg, const std::string& key, const std::string& def) {
    auto it = cfg.find(key);
    return it == cfg.end() ? def : it->second;
}

double get_double(const Config& cfg, const std::string& key, double def) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return def;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: " + key + " is not a number: " + it->second);
    }
}

long long get_int(const Config& cfg, const std::string& key, long long def) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return def;
    try {
        std::size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: " + key + " is not an integer: " + it->second);
    }
}

bool get_bool(const Config& cfg, const std::string& key, bool def) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config: " + key + " is not a boolean: " + it->second);
}

std::vector<double> get_double_list(const Config& cfg, const std::string& key,
                                    std::vector<double> def) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return def;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("config: " + key + " is empty");
    return out;
}

std::vector<int> get_int_list(const Config& cfg, const std::string& key, std::vector<int> def) {
    auto vals = get_double_list(cfg, key, {});
    if (vals.empty()) return def;
    std::vector<int> out;
    for (double v : vals) out.push_back(static_cast<int>(std::llround(v)));
    return out;
}

Tolerance tolerance_from(const Config& cfg) {
    Tolerance tol;
    tol.abs = get_double(cfg, "tol.abs", 0.0);
    tol.se_mult = get_double(cfg, "tol.se_mult", 3.0);
    tol.bias = get_double(cfg, "tol.bias", 0.0);
    return tol;
}

void validate_r_grid(const std::vector<double>& grid) {
    double prev = -1.0;
    for (double r : grid) {
        if (r < 0.0 || r <= prev)
            throw std::invalid_argument("config: r_grid must be nonnegative, strictly increasing");
        prev = r;
    }
}

TwoCircleParams two_circle_params(const Config& cfg) {
    return {get_double(cfg, "system.q1", 0.5), get_double(cfg, "system.ell0", 1.0),
            get_double(cfg, "system.ell1", 2.0)};
}

std::pair<BaseSystem, TargetSet> build_suspension(const Config& cfg) {
    std::string id = get_str(cfg, "system", "");
    if (id == "rotation") {
        RoofSpec roof{get_double(cfg, "system.roof.level", 1.0),
                      get_double(cfg, "system.roof.amp", 0.0)};
        BaseSystem sys = make_rotation(get_double(cfg, "system.alpha", kDefaultAlpha), roof);
        TargetSet target = rotation_interval_target(get_double(cfg, "target.a", 0.0),
                                                    get_double(cfg, "target.b", 0.05));
        return {std::move(sys), std::move(target)};
    }
    if (id == "bernoulli") {
        BaseSystem sys = make_bernoulli_shift();
        TargetSet target =
            bernoulli_cylinder_target(static_cast<int>(get_int(cfg, "system.depth", 3)));
        return {std::move(sys), std::move(target)};
    }
    if (id == "shear") {
        BaseSystem sys = make_torus_shear();
        std::string t = get_str(cfg, "target", "hstrip");
        double w = get_double(cfg, "target.width", 0.1);
        double h = get_double(cfg, "target.height", 0.5);
        TargetSet target = t == "hstrip"   ? shear_hstrip_target(h)
                           : t == "vstrip" ? shear_vstrip_target(w)
                           : t == "box"    ? shear_box_target(w, h)
                                           : throw std::invalid_argument(
                                                 "config: unknown shear target " + t);
        return {std::move(sys), std::move(target)};
    }
    if (id == "two_circle") {
        TwoCircleParams p = two_circle_params(cfg);
        BaseSystem sys = make_two_circle(p);
        std::string t = get_str(cfg, "target", "one");
        TargetSet target = t == "one"   ? two_circle_target_one(p)
                           : t == "all" ? two_circle_target_all()
                                        : throw std::invalid_argument(
                                              "config: unknown two_circle target " + t);
        return {std::move(sys), std::move(target)};
    }
    throw std::invalid_argument("unknown system: " + (id.empty() ? "<unset>" : id));
}

ProcessSource build_source(const Config& cfg) {
    if (get_str(cfg, "system", "") == "poisson")
        return poisson_source(get_double(cfg, "system.lambda", 1.0));
    auto [sys, target] = build_suspension(cfg);
    return suspension_source(sys, target);
}

struct Context {
    std::size_t samples;
    double horizon;
    std::uint64_t seed;
    int jobs;
    Tolerance tol;
};

// ---------------------------------------------------------------------------
// per-kind runners; each returns reports and may add tables/ensembles

void run_intensity(const Config& cfg, const Context& c, RunArtifacts& out) {
    ProcessSource src = build_source(cfg);
    auto ensemble = parallel_map<PointMeasure>(
        c.samples, c.jobs, c.seed, "intensity:" + src.name,
        [&](std::size_t, Rng& rng) { return src.sample_entry(rng, c.horizon); },
        PointMeasure(0.0, c.horizon, {}));
    SummaryStat est = estimate_intensity(ensemble);
    out.report["reports"].push_back(to_json(make_report(
        "intensity:" + src.name, est, {src.intensity, 0.0, 0}, c.tol)));
    out.ensembles.emplace_back("entry", std::move(ensemble));
}

void run_kac(const Config& cfg, const Context& c, RunArtifacts& out) {
    auto [sys, target] = build_suspension(cfg);
    auto n_max = get_int(cfg, "n_max_steps", 100000);
    out.report["reports"].push_back(
        to_json(kac_check(sys, target, c.samples, n_max, c.horizon, c.seed, c.jobs, c.tol)));
}

void run_khinchin(const Config& cfg, const Context& c, RunArtifacts& out, int order) {
    ProcessSource src = build_source(cfg);
    auto r_grid = get_double_list(cfg, "r_grid", {0.5, 1.0, 2.0});
    validate_r_grid(r_grid);
    std::vector<IdentityReport> reports =
        order <= 1 ? palm_khinchin_check(src, r_grid, c.samples, c.horizon, c.seed, c.jobs, c.tol)
                   : higher_order_check(src, order, r_grid, c.samples, c.horizon, c.seed, c.jobs,
                                        c.tol);
    CsvTable table{{"name", "lhs", "lhs_se", "rhs", "rhs_se", "discrepancy", "threshold", "pass"},
                   {}};
    for (const auto& r : reports) {
        table.rows.push_back({r.name, format_double(r.lhs), format_double(r.lhs_se),
                              format_double(r.rhs), format_double(r.rhs_se),
                              format_double(r.discrepancy), format_double(r.threshold),
                              r.pass ? "true" : "false"});
        out.report["reports"].push_back(to_json(r));
    }
    out.tables.emplace_back(order <= 1 ? "khinchin" : "higher_order", std::move(table));
}

void run_inversion(const Config& cfg, const Context& c, RunArtifacts& out) {
    ProcessSource src = build_source(cfg);
    auto r_grid = get_double_list(cfg, "r_grid", {0.5, 1.0, 2.0});
    validate_r_grid(r_grid);
    for (const auto& r :
         inversion_check(src, r_grid, c.samples, c.horizon, c.seed, c.jobs, c.tol))
        out.report["reports"].push_back(to_json(r));
}

void run_palm_compare(const Config& cfg, const Context& c, RunArtifacts& out) {
    auto [sys, target] = build_suspension(cfg);
    double rr = get_double(cfg, "read_radius", c.horizon / 4.0);
    double cap = get_double(cfg, "cap", 1.0);
    double void_t = get_double(cfg, "void_t", 1.0);
    std::vector<PalmFunctional> family = {pf_tau(1, rr), pf_min_tau1(cap, rr),
                                          pf_void(void_t, rr)};
    for (const auto& r :
         palm_compare(sys, target, family, c.samples, c.horizon, c.seed, c.jobs, c.tol))
        out.report["reports"].push_back(to_json(r));
}

void run_slivnyak(const Config& cfg, const Context& c, RunArtifacts& out) {
    double lambda = get_double(cfg, "system.lambda", 1.0);
    double alpha = get_double(cfg, "confidence_alpha", 1e-3);
    for (const auto& r : slivnyak_check(lambda, c.samples, c.horizon, c.seed, c.jobs, alpha))
        out.report["reports"].push_back(to_json(r));
}

std::unique_ptr<ProcessFamily> build_family(const Config& cfg) {
    std::string id = get_str(cfg, "system", "lattice_cluster");
    if (id == "lattice_cluster") {
        if (auto it = cfg.find("system.a"); it != cfg.end()) {
            double a = std::stod(it->second);
            return lattice_cluster_family([a](int) { return a; });
        }
        return lattice_cluster_family();
    }
    if (id == "poisson") return poisson_family(get_double(cfg, "system.lambda", 1.0));
    if (id == "rotation") {
        double alpha = get_double(cfg, "system.alpha", kDefaultAlpha);
        double width = get_double(cfg, "target.width", 0.5);
        return suspension_family(
            "rotation_shrinking",
            [alpha, width](int n) {
                return std::make_pair(make_rotation(alpha),
                                      rotation_interval_target(0.0, width / n));
            },
            get_bool(cfg, "rescale", true));
    }
    throw std::invalid_argument("unknown converge family: " + id);
}

LimitLaw build_rho(const Config& cfg) {
    std::string id = get_str(cfg, "rho", "delta0");
    if (id == "delta0") return limit_delta0();
    if (id.rfind("exp:", 0) == 0) return limit_exponential(std::stod(id.substr(4)));
    throw std::invalid_argument("unknown rho: " + id);
}

LimitProcessLaw build_process_limit(const std::string& id) {
    if (id == "zero") return limit_zero_process();
    if (id == "undeclared") return limit_undeclared();
    if (id.rfind("poisson:", 0) == 0) return limit_poisson_process(std::stod(id.substr(8)));
    throw std::invalid_argument("unknown limit process: " + id);
}

void run_converge(const Config& cfg, const Context& c, RunArtifacts& out) {
    auto family = build_family(cfg);
    auto n_list = get_int_list(cfg, "n_list", {10, 100, 1000});
    auto r_grid = get_double_list(cfg, "r_grid", {0.5, 1.0, 2.0});
    validate_r_grid(r_grid);
    FamilyResult fr = run_family(*family, n_list, c.samples, c.horizon, c.seed, c.jobs);

    CsvTable table{{"n", "intensity", "intensity_se", "p_nonzero", "mean_tau1_eta",
                    "mean_tau1_eta_se", "censor_frac"},
                   {}};
    json per_n = json::array();
    std::vector<IdentityReport> invariants;
    for (const auto& ir : fr.per_n) {
        table.rows.push_back(
            {std::to_string(ir.n), format_double(ir.intensity.mean),
             format_double(ir.intensity.se), format_double(ir.p_nonzero.mean),
             format_double(ir.mean_tau1_eta.mean), format_double(ir.mean_tau1_eta.se),
             format_double(static_cast<double>(ir.censored) /
                           static_cast<double>(ir.samples))});
        per_n.push_back(to_json(ir));
        // unit-intensity Kac relation: P(xi != 0) = I E tau_1(eta)
        double rhs = ir.intensity.mean * ir.mean_tau1_eta.mean;
        double rhs_se = combined_se(ir.intensity.se * ir.mean_tau1_eta.mean,
                                    ir.intensity.mean * ir.mean_tau1_eta.se);
        invariants.push_back(make_report("converge:kac:n=" + std::to_string(ir.n), ir.p_nonzero,
                                         {rhs, rhs_se, ir.samples}, c.tol));
    }
    out.tables.emplace_back("converge", std::move(table));
    out.report["family"] = json{{"name", fr.family}, {"per_n", std::move(per_n)}};

    EquivalenceReport eq = check_equivalence(fr, build_rho(cfg), r_grid, c.tol);
    TwoOfThreeReport t3 = two_of_three_report(
        fr, build_process_limit(get_str(cfg, "xi_limit", "zero")),
        build_process_limit(get_str(cfg, "eta_limit", "undeclared")));
    std::vector<double> k_grid = get_double_list(cfg, "k_grid", {5.0, 10.0, 20.0});
    auto tight = tightness_diagnostic(fr, k_grid);

    out.report["equivalence"] =
        json{{"side_i_trending", eq.side_i_trending}, {"side_ii_trending", eq.side_ii_trending}};
    out.report["two_of_three"] = to_json(t3);
    CsvTable ttab{{"window_lo", "window_hi", "k", "markov_bound", "empirical_sup", "se",
                   "violation"},
                  {}};
    bool tight_ok = true;
    for (const auto& row : tight) {
        ttab.rows.push_back({format_double(row.window_lo), format_double(row.window_hi),
                             format_double(row.k), format_double(row.markov_bound),
                             format_double(row.empirical_sup), format_double(row.se),
                             row.violation ? "true" : "false"});
        tight_ok = tight_ok && !row.violation;
    }
    out.tables.emplace_back("tightness", std::move(ttab));

    // overall pass: invariants hold, both equivalence sides trend toward the
    // candidate law, the identity closes at the largest n, no Markov violation
    bool pass = tight_ok && eq.side_i_trending && eq.side_ii_trending;
    std::string last_tag = ":n=" + std::to_string(n_list.back()) + ":";
    for (auto& r : eq.reports) {
        bool final_n = r.name.find(last_tag) != std::string::npos;
        if (final_n) pass = pass && r.pass;
        out.report["reports"].push_back(to_json(r));
    }
    for (auto& r : invariants) {
        pass = pass && r.pass;
        out.report["reports"].push_back(to_json(r));
    }
    out.report["converge_pass"] = pass;
}

void run_zoo_selftest(const Config& cfg, const Context& c, RunArtifacts& out) {
    std::vector<IdentityReport> reports;
    auto push = [&](IdentityReport r) { out.report["reports"].push_back(to_json(r)); };

    { // two-circle exact oracle against the sampling path
        TwoCircleParams p = two_circle_params(cfg);
        OracleReport oracle = two_circle_oracle(p, TwoCircleTarget::One);
        BaseSystem sys = make_two_circle(p);
        TargetSet one = two_circle_target_one(p);
        ProcessSource src = suspension_source(sys, one);
        auto ensemble = parallel_map<PointMeasure>(
            c.samples, c.jobs, c.seed, "selftest:two_circle",
            [&](std::size_t, Rng& rng) { return src.sample_entry(rng, c.horizon); },
            PointMeasure(0.0, c.horizon, {}));
        push(make_report("selftest:two_circle:intensity", estimate_intensity(ensemble),
                         {oracle.intensity, 0.0, 0}, c.tol));
        Rng rng = Rng::stream(c.seed, "selftest:two_circle:return", 0);
        PointMeasure ret = return_process(sys, one, sample_conditional(sys, one, rng), c.horizon);
        push(make_report("selftest:two_circle:first_return", {*ret.tau(1), 0.0, 1},
                         {oracle.mean_return, 0.0, 0}, {.abs = 1e-12}));
    }
    { // lattice-cluster per-period count and exact mean return
        LatticeClusterParams p{static_cast<int>(get_int(cfg, "system.n", 5)),
                               get_double(cfg, "system.a", 1.0 / 6.0)};
        LatticeClusterOracle oracle = lattice_cluster_oracle(p);
        Rng rng = Rng::stream(c.seed, "selftest:lattice", 0);
        double period = 2.0 * p.n + 1.0;
        PointMeasure z = make_lattice_cluster(p, rng, 0.0, 2.0 * period);
        push(make_report("selftest:lattice:per_period_atoms",
                         {static_cast<double>(z.count(0.0, period)), 0.0, 1},
                         {period, 0.0, 0}, {.abs = 0.5}));
        push(make_report("selftest:lattice:mean_tau1", {oracle.mean_tau1, 0.0, 1},
                         {1.0, 0.0, 0}, {.abs = 1e-12}));
    }
    { // shear with an invariant strip: every return takes exactly one step
        BaseSystem sys = make_torus_shear();
        TargetSet strip = shear_hstrip_target(0.5);
        Rng rng = Rng::stream(c.seed, "selftest:shear", 0);
        PointMeasure ret =
            return_process(sys, strip, sample_conditional(sys, strip, rng), 4.0);
        push(make_report("selftest:shear:first_return", {*ret.tau(1), 0.0, 1}, {1.0, 0.0, 0},
                         {.abs = 1e-12}));
    }
    { // rotation intensity equals the target length at unit roof
        BaseSystem sys = make_rotation(kDefaultAlpha);
        TargetSet target = rotation_interval_target(0.0, 0.05);
        ProcessSource src = suspension_source(sys, target);
        auto ensemble = parallel_map<PointMeasure>(
            c.samples, c.jobs, c.seed, "selftest:rotation",
            [&](std::size_t, Rng& rng) { return src.sample_entry(rng, c.horizon); },
            PointMeasure(0.0, c.horizon, {}));
        push(make_report("selftest:rotation:intensity", estimate_intensity(ensemble),
                         {0.05, 0.0, 0}, c.tol));
    }
    { // bernoulli cylinder measure
        BaseSystem sys = make_bernoulli_shift();
        TargetSet cyl = bernoulli_cylinder_target(2);
        push(make_report("selftest:bernoulli:cylinder_measure",
                         estimate_target_measure(sys, cyl, c.samples, c.seed, c.jobs),
                         {0.25, 0.0, 0}, c.tol));
    }
    (void)reports;
}

} // namespace

// ---------------------------------------------------------------------------
// config plumbing

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg[key] = value;
    }
    return cfg;
}

Config parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(Config& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override must look like key=value: " + kv);
    cfg[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
}

std::string version_string() { return "palmflow 1.0.0"; }
int report_schema_version() { return 1; }

json report_schema() {
    return json{
        {"schema", "integer, version of this report layout"},
        {"version", "artifact version string"},
        {"kind", "experiment kind that produced the report"},
        {"config", "full resolved key-value configuration"},
        {"reports",
         "array of identity reports: name, lhs/rhs with standard errors, "
         "discrepancy, threshold, pass, sample counts, censored count, warnings"},
        {"pass", "true iff every identity report passed"},
        {"generated", "ISO-8601 timestamp, added at write time"},
        {"family", "converge only: per-n family statistics"},
        {"equivalence", "converge only: trend flags for the two identity sides"},
        {"two_of_three", "converge only: verdicts for the three convergence statements"}};
}

RunArtifacts run_experiment(const Config& cfg) {
    Context c;
    long long samples = get_int(cfg, "samples", 100000);
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    c.samples = static_cast<std::size_t>(samples);
    c.horizon = get_double(cfg, "horizon", 50.0);
    if (!(c.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    c.seed = static_cast<std::uint64_t>(get_int(cfg, "seed", 1));
    c.jobs = static_cast<int>(get_int(cfg, "jobs", 1));
    if (c.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    c.tol = tolerance_from(cfg);

    std::string kind = get_str(cfg, "kind", "");
    if (kind.empty()) throw std::invalid_argument("config: kind is required");

    RunArtifacts out;
    out.report = json{{"schema", report_schema_version()},
                      {"version", version_string()},
                      {"kind", kind},
                      {"reports", json::array()}};

    if (kind == "intensity") {
        run_intensity(cfg, c, out);
    } else if (kind == "kac") {
        run_kac(cfg, c, out);
    } else if (kind == "khinchin") {
        run_khinchin(cfg, c, out, 1);
    } else if (kind.rfind("higher_order", 0) == 0) {
        int j = static_cast<int>(get_int(cfg, "j", 2));
        if (kind.size() > 13 && kind[12] == ':') j = std::stoi(kind.substr(13));
        if (j < 2) throw std::invalid_argument("higher_order: j must be >= 2");
        run_khinchin(cfg, c, out, j);
    } else if (kind == "inversion") {
        run_inversion(cfg, c, out);
    } else if (kind == "palm_compare") {
        run_palm_compare(cfg, c, out);
    } else if (kind == "slivnyak") {
        run_slivnyak(cfg, c, out);
    } else if (kind == "converge") {
        run_converge(cfg, c, out);
    } else if (kind == "zoo_selftest") {
        run_zoo_selftest(cfg, c, out);
    } else {
        throw std::invalid_argument("unknown experiment kind: " + kind);
    }

    // jobs is an execution parameter, not part of the experiment definition;
    // leaving it out keeps the report byte-identical across worker counts
    json config_echo = json::object();
    for (const auto& [k, v] : cfg)
        if (k != "jobs") config_echo[k] = v;
    config_echo["samples"] = std::to_string(c.samples);
    config_echo["horizon"] = format_double(c.horizon);
    config_echo["seed"] = std::to_string(c.seed);
    out.report["config"] = std::move(config_echo);

    bool pass = true;
    for (const auto& r : out.report["reports"]) pass = pass && r.at("pass").get<bool>();
    if (out.report.contains("converge_pass")) pass = out.report["converge_pass"].get<bool>();
    out.all_pass = pass;
    out.report["pass"] = pass;
    return out;
}

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir,
                     bool keep_ensembles) {
    std::filesystem::create_directories(out_dir);
    json report = artifacts.report;
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    report["generated"] = buf;
    std::ofstream(out_dir / "report.json") << report.dump(2) << '\n';

    if (!artifacts.tables.empty()) {
        std::filesystem::create_directories(out_dir / "tables");
        for (const auto& [name, table] : artifacts.tables)
            write_csv(out_dir / "tables" / (name + ".csv"), table);
    }
    if (keep_ensembles && !artifacts.ensembles.empty()) {
        std::filesystem::create_directories(out_dir / "ensembles");
        for (const auto& [name, ensemble] : artifacts.ensembles)
            write_ndjson(out_dir / "ensembles" / (name + ".ndjson"), ensemble);
    }
}

} // namespace palmflow
