#pragma once

// Command implementations behind the `ris` tool. Each command has an options
// struct that round-trips through JSON; the manifest stores that JSON so a run
// can be replayed exactly.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ris/array_model.hpp"
#include "ris/code_families.hpp"
#include "ris/error.hpp"
#include "ris/ga.hpp"
#include "ris/io.hpp"
#include "ris/metrics.hpp"
#include "ris/reproduce.hpp"
#include "ris/se_sim.hpp"

namespace ris::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kReproductionFailure = 3 };

inline int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

/// RIS_OUT_DIR when set, else the working directory.
inline std::string default_out_dir() {
    const char* env = std::getenv("RIS_OUT_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

struct CommandResult {
    std::vector<std::string> outputs;
    bool reproduction_ok = true;
};

inline std::string iso8601_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json make_manifest(const std::string& command, const json& config, const std::vector<std::string>& outputs) {
    return json{{"command", command},
                {"config", config},
                {"tool_version", kToolVersion},
                {"timestamp", iso8601_now()},
                {"outputs", outputs}};
}

// ---------------------------------------------------------------- code gen

struct CodeGenOptions {
    std::string family;
    int m = 0;
    std::optional<int> q;  // chu; searched when absent
    bool alternate = false;  // barker
    int trials = reference::kRandomBestTrials;
    std::uint64_t seed = reference::kRandomBestSeed;
    double phi0 = 0.0;
    double theta_h = 0.0;
    double spacing_ratio = 0.5;
    int d = 1000;
    std::string out_dir = ".";
    std::string name;  // file stem; default code_<family>_m<M>

    std::string stem() const { return name.empty() ? "code_" + family + "_m" + std::to_string(m) : name; }
};

inline json to_json(const CodeGenOptions& o) {
    return json{{"family", o.family},       {"m", o.m},
                {"q", o.q ? json(*o.q) : json(nullptr)},
                {"alternate", o.alternate}, {"trials", o.trials},
                {"seed", o.seed},           {"phi0", o.phi0},
                {"theta_h", o.theta_h},     {"spacing_ratio", o.spacing_ratio},
                {"d", o.d},                 {"out_dir", o.out_dir},
                {"name", o.stem()}};
}

inline CodeGenOptions code_gen_options_from_json(const json& j) {
    CodeGenOptions o;
    o.family = j.at("family").get<std::string>();
    o.m = j.at("m").get<int>();
    if (!j.at("q").is_null()) o.q = j.at("q").get<int>();
    o.alternate = j.at("alternate").get<bool>();
    o.trials = j.at("trials").get<int>();
    o.seed = j.at("seed").get<std::uint64_t>();
    o.phi0 = j.at("phi0").get<double>();
    o.theta_h = j.at("theta_h").get<double>();
    o.spacing_ratio = j.at("spacing_ratio").get<double>();
    o.d = j.at("d").get<int>();
    o.out_dir = j.at("out_dir").get<std::string>();
    o.name = j.at("name").get<std::string>();
    return o;
}

inline io::CodeFile generate_code(const CodeGenOptions& o) {
    const ArrayGeometry geom(o.m, o.spacing_ratio, o.theta_h);
    io::CodeFile f;
    f.m = o.m;
    f.theta_h_design = o.theta_h;
    f.spacing_ratio = o.spacing_ratio;
    f.family = o.family;
    if (o.family == "barker") {
        f.code = barker(o.m, o.alternate);
        f.params = {{"alternate", o.alternate}};
    } else if (o.family == "frank") {
        f.code = frank(o.m);
    } else if (o.family == "chu") {
        if (o.q) {
            f.code = chu(o.m, *o.q);
            f.params = {{"q", *o.q}, {"searched", false}};
        } else {
            auto best = chu_best_q(o.m, geom, AngularGrid(o.d));
            f.code = std::move(best.code);
            f.params = {{"q", best.q}, {"searched", true}, {"d", o.d}, {"a_min_db", io::db_or_floor(best.fitness)}};
        }
    } else if (o.family == "random-best") {
        f.code = random_best(o.m, o.trials, o.seed, geom, AngularGrid(o.d));
        f.params = {{"trials", o.trials}, {"seed", o.seed}, {"d", o.d}};
    } else if (o.family == "max-average") {
        f.code = max_average(o.m, geom, o.phi0);
        f.params = {{"phi0", o.phi0}};
    } else if (o.family == "proposed") {
        f.code = table_proposed(o.m);
        if (o.theta_h != 0.0) f.code = retarget(f.code, ArrayGeometry(o.m, o.spacing_ratio, 0.0), o.theta_h);
        f.params = {{"retargeted_from_theta_h", 0.0}};
    } else {
        throw InvalidInput("unknown code family '" + o.family +
                           "' (expected barker, frank, chu, random-best, max-average, proposed)");
    }
    if (o.family != "proposed" && o.family != "max-average" && o.phi0 != 0.0)
        throw InvalidInput("--phi0 only applies to the max-average family");
    return f;
}

inline CommandResult run_code_gen(const CodeGenOptions& o) {
    const io::CodeFile f = generate_code(o);
    const fs::path dir(o.out_dir);
    const auto code_path = (dir / (o.stem() + ".json")).string();
    io::write_json(code_path, io::to_json(f));
    CommandResult r{{code_path}};
    io::write_json(dir / (o.stem() + ".manifest.json"), make_manifest("code gen", to_json(o), r.outputs));
    return r;
}

// ---------------------------------------------------------------- code retarget

struct RetargetOptions {
    std::string code_path;
    double theta_h = 0.0;
    std::string out_dir = ".";
    std::string name;
};

inline json to_json(const RetargetOptions& o) {
    return json{{"code_path", o.code_path}, {"theta_h", o.theta_h}, {"out_dir", o.out_dir}, {"name", o.name}};
}

inline RetargetOptions retarget_options_from_json(const json& j) {
    return {j.at("code_path").get<std::string>(), j.at("theta_h").get<double>(), j.at("out_dir").get<std::string>(),
            j.at("name").get<std::string>()};
}

inline CommandResult run_code_retarget(RetargetOptions o) {
    const io::CodeFile in = io::read_code_file(o.code_path);
    if (o.name.empty()) o.name = fs::path(o.code_path).stem().string() + "_retargeted";
    io::CodeFile out = in;
    out.code = retarget(in.code, in.geometry(), o.theta_h);
    out.theta_h_design = o.theta_h;
    out.params = {{"source", in.family}, {"source_params", in.params}, {"source_theta_h", in.theta_h_design}};
    out.family = in.family;
    const fs::path dir(o.out_dir);
    const auto path = (dir / (o.name + ".json")).string();
    io::write_json(path, io::to_json(out));
    CommandResult r{{path}};
    io::write_json(dir / (o.name + ".manifest.json"), make_manifest("code retarget", to_json(o), r.outputs));
    return r;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOptions {
    int m = 0;
    double theta_h = 0.0;
    double spacing_ratio = 0.5;
    std::vector<int> population_sizes{1000};
    int runs = 1;
    GaConfig ga;  // population_size is taken from population_sizes
    int threads = 1;
    std::string out_dir = ".";
    bool quiet = false;
};

inline json to_json(const OptimizeOptions& o) {
    json ga = io::to_json(o.ga);
    ga.erase("population_size");
    return json{{"m", o.m},
                {"theta_h", o.theta_h},
                {"spacing_ratio", o.spacing_ratio},
                {"population_sizes", o.population_sizes},
                {"runs", o.runs},
                {"ga", ga},
                {"threads", o.threads},
                {"out_dir", o.out_dir}};
}

inline OptimizeOptions optimize_options_from_json(const json& j) {
    OptimizeOptions o;
    o.m = j.at("m").get<int>();
    o.theta_h = j.at("theta_h").get<double>();
    o.spacing_ratio = j.at("spacing_ratio").get<double>();
    o.population_sizes = j.at("population_sizes").get<std::vector<int>>();
    o.runs = j.at("runs").get<int>();
    json ga = j.at("ga");
    ga["population_size"] = o.population_sizes.empty() ? 2 : o.population_sizes.front();
    o.ga = io::ga_config_from_json(ga);
    o.threads = j.at("threads").get<int>();
    o.out_dir = j.at("out_dir").get<std::string>();
    return o;
}

/// "6000", "1000,2000" or "1000:8000:1000" (inclusive range).
inline std::vector<int> parse_population_list(const std::vector<std::string>& items) {
    std::vector<int> out;
    auto to_int = [](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size()) throw InvalidInput("cannot parse population size '" + s + "'");
        return v;
    };
    for (const auto& raw : items) {
        std::stringstream ss(raw);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.empty()) continue;
            if (part.find(':') != std::string::npos) {
                std::vector<int> f;
                std::stringstream rs(part);
                std::string x;
                while (std::getline(rs, x, ':')) f.push_back(to_int(x));
                if (f.size() != 3 || f[2] <= 0 || f[0] > f[1])
                    throw InvalidInput("population range must be lo:hi:step with lo <= hi and step > 0, got '" + part + "'");
                for (int p = f[0]; p <= f[1]; p += f[2]) out.push_back(p);
            } else {
                out.push_back(to_int(part));
            }
        }
    }
    if (out.empty()) throw InvalidInput("no population sizes given");
    return out;
}

inline CommandResult run_optimize(const OptimizeOptions& o) {
    const ArrayGeometry geom(o.m, o.spacing_ratio, o.theta_h);
    MultiStartConfig ms;
    ms.population_sizes = o.population_sizes;
    ms.runs = o.runs;
    ms.base = o.ga;
    for (int p : ms.population_sizes) {
        GaConfig c = o.ga;
        c.population_size = p;
        c.validate();
    }
    const auto result = run_multistart(ms, geom, o.threads, [&](int pop, int run, const GaRun& r) {
        if (!o.quiet)
            std::fprintf(stderr, "pop %d run %d: a_min %.4f dB\n", pop, run, io::db_or_floor(r.best_fitness));
    });

    const fs::path dir(o.out_dir);
    CommandResult out;

    json runs = json::array();
    std::vector<std::string> header{"generation"};
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& r = result.runs[i];
        json entry{{"index", i},
                   {"population_size", r.config.population_size},
                   {"run", static_cast<int>(i % static_cast<std::size_t>(o.runs))},
                   {"seed", r.config.seed}};
        entry.update(io::to_json(r));
        runs.push_back(entry);
        header.push_back("pop" + std::to_string(r.config.population_size) + "_run" +
                         std::to_string(i % static_cast<std::size_t>(o.runs)));
    }
    const auto& best = result.best();

    io::CodeFile code;
    code.code = best.best_code;
    code.m = o.m;
    code.theta_h_design = o.theta_h;
    code.spacing_ratio = o.spacing_ratio;
    code.family = "cga";
    code.params = {{"population_size", best.config.population_size},
                   {"run", static_cast<int>(result.best_index % static_cast<std::size_t>(o.runs))},
                   {"seed", best.config.seed},
                   {"generations", best.config.generations},
                   {"d", best.config.grid_d},
                   {"a_min_db", io::db_or_floor(best.best_fitness)}};
    const auto code_path = (dir / "best_code.json").string();
    io::write_json(code_path, io::to_json(code));
    out.outputs.push_back(code_path);

    const auto runs_path = (dir / "runs.json").string();
    io::write_json(runs_path, json{{"best_index", result.best_index}, {"runs", runs}});
    out.outputs.push_back(runs_path);

    io::CsvWriter trace(header);
    for (int g = 0; g < o.ga.generations; ++g) {
        std::vector<double> row{static_cast<double>(g + 1)};
        for (const auto& r : result.runs) row.push_back(io::db_or_floor(r.trace[static_cast<std::size_t>(g)].best_so_far));
        trace.row(row);
    }
    const auto trace_path = (dir / "trace.csv").string();
    io::write_text(trace_path, trace.str());
    out.outputs.push_back(trace_path);

    io::write_json(dir / "manifest.json", make_manifest("optimize", to_json(o), out.outputs));
    return out;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
    std::string code_path;
    std::optional<int> m;
    std::optional<double> theta_h;
    std::optional<double> spacing_ratio;
    int d = 1000;
    std::string out_dir = ".";
};

namespace detail {

template <typename T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

inline io::CodeFile load_code(const std::string& path, std::optional<int> m) {
    io::CodeFile f = io::read_code_file(path);
    if (m && *m != f.m)
        throw InvalidInput(path + ": code has M = " + std::to_string(f.m) + " but --m " + std::to_string(*m) + " was given");
    return f;
}

}  // namespace detail

inline json to_json(const EvalOptions& o) {
    return json{{"code_path", o.code_path}, {"m", detail::opt_json(o.m)},
                {"theta_h", detail::opt_json(o.theta_h)}, {"spacing_ratio", detail::opt_json(o.spacing_ratio)},
                {"d", o.d}, {"out_dir", o.out_dir}};
}

inline EvalOptions eval_options_from_json(const json& j) {
    EvalOptions o;
    o.code_path = j.at("code_path").get<std::string>();
    o.m = detail::opt_from<int>(j, "m");
    o.theta_h = detail::opt_from<double>(j, "theta_h");
    o.spacing_ratio = detail::opt_from<double>(j, "spacing_ratio");
    o.d = j.at("d").get<int>();
    o.out_dir = j.at("out_dir").get<std::string>();
    return o;
}

struct EvalOutcome {
    CommandResult files;
    MetricsReport report;
};

inline EvalOutcome run_eval(const EvalOptions& o) {
    const io::CodeFile f = detail::load_code(o.code_path, o.m);
    const ArrayGeometry geom(f.m, o.spacing_ratio.value_or(f.spacing_ratio), o.theta_h.value_or(f.theta_h_design));
    const AngularGrid grid(o.d);
    EvalOutcome out;
    out.report = metrics_report(f.code, geom, grid);

    const fs::path dir(o.out_dir);
    const auto metrics_path = (dir / "metrics.json").string();
    json mj = io::to_json(out.report);
    mj["code"] = {{"path", o.code_path}, {"family", f.family}};
    io::write_json(metrics_path, mj);
    const auto profile_path = (dir / "profile.csv").string();
    io::write_text(profile_path, io::profile_csv(pdaf_profile(f.code, geom, grid)));
    const auto acf_path = (dir / "acf.csv").string();
    io::write_text(acf_path, io::acf_csv(acf(f.code)));
    out.files.outputs = {metrics_path, profile_path, acf_path};
    io::write_json(dir / "manifest.json", make_manifest("eval", to_json(o), out.files.outputs));
    return out;
}

// ---------------------------------------------------------------- sim

struct SimOptions {
    std::string code_path;
    std::optional<int> m;
    std::string preset = "paper-sim";
    SimScenario scenario;  // fully resolved
    bool bounds = false;
    int d = 1000;
    std::string out_dir = ".";
};

inline json to_json(const SimOptions& o) {
    return json{{"code_path", o.code_path}, {"m", detail::opt_json(o.m)}, {"preset", o.preset},
                {"scenario", io::to_json(o.scenario)}, {"bounds", o.bounds}, {"d", o.d},
                {"out_dir", o.out_dir}};
}

inline SimOptions sim_options_from_json(const json& j) {
    SimOptions o;
    o.code_path = j.at("code_path").get<std::string>();
    o.m = detail::opt_from<int>(j, "m");
    o.preset = j.at("preset").get<std::string>();
    o.scenario = io::scenario_from_json(j.at("scenario"));
    o.bounds = j.at("bounds").get<bool>();
    o.d = j.at("d").get<int>();
    o.out_dir = j.at("out_dir").get<std::string>();
    return o;
}

inline SimScenario preset_scenario(const std::string& name) {
    if (name == "paper-sim") return SimScenario::paper_sim();
    if (name == "prop1") return SimScenario::prop1();
    throw InvalidInput("unknown preset '" + name + "' (expected paper-sim or prop1)");
}

struct SimOutcome {
    CommandResult files;
    SeReport report;
    std::optional<SeBounds> bounds;
};

inline SimOutcome run_sim(const SimOptions& o) {
    o.scenario.validate();
    const io::CodeFile f = detail::load_code(o.code_path, o.m);
    const ArrayGeometry geom = f.geometry();
    SimOutcome out;
    out.report = run_mcmc(f.code, geom, o.scenario);

    const fs::path dir(o.out_dir);
    const auto se_path = (dir / "se_report.json").string();
    io::write_json(se_path, io::to_json(out.report));
    const auto ecdf_path = (dir / "ecdf.csv").string();
    io::write_text(ecdf_path, io::ecdf_csv(out.report));
    out.files.outputs = {se_path, ecdf_path};
    if (o.bounds) {
        out.bounds = prop1_bounds(f.code, geom, o.scenario, AngularGrid(o.d));
        json bj = io::to_json(*out.bounds);
        bj["s_mean"] = out.report.s_mean;
        bj["sandwich_holds"] = out.bounds->lower <= out.report.s_mean && out.report.s_mean <= out.bounds->upper;
        bj["scenario_is_half_ring"] = o.scenario.theta_min == -kHalfPi && o.scenario.theta_max == kHalfPi;
        const auto bounds_path = (dir / "bounds.json").string();
        io::write_json(bounds_path, bj);
        out.files.outputs.push_back(bounds_path);
    }
    io::write_json(dir / "manifest.json", make_manifest("sim", to_json(o), out.files.outputs));
    return out;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceOptions {
    int table = 3;
    int seeds = reference::kTable4Seeds;
    int ue_count = 10000;
    std::string out_dir = ".";
};

inline json to_json(const ReproduceOptions& o) {
    return json{{"table", o.table}, {"seeds", o.seeds}, {"ue_count", o.ue_count}, {"out_dir", o.out_dir}};
}

inline ReproduceOptions reproduce_options_from_json(const json& j) {
    return {j.at("table").get<int>(), j.at("seeds").get<int>(), j.at("ue_count").get<int>(),
            j.at("out_dir").get<std::string>()};
}

inline CommandResult run_reproduce(const ReproduceOptions& o, std::ostream& log = std::cout) {
    if (o.table != 1 && o.table != 3 && o.table != 4)
        throw InvalidInput("--table must be 1, 3 or 4, got " + std::to_string(o.table));
    if (o.seeds < 1) throw InvalidInput("--seeds must be >= 1");
    if (o.ue_count < 2) throw InvalidInput("--k must be >= 2");
    const fs::path dir(o.out_dir);
    CommandResult out;
    auto flag = [](bool b) { return std::string(b ? "pass" : "FAIL"); };
    auto num = io::fmt_num;

    if (o.table == 1) {
        io::CsvWriter w({"m", "code", "sidelobe_ratio_db", "paper_db", "ratio_pass", "max_sidelobe_abs_re",
                         "max_sidelobe_abs_im", "acf_pass"});
        for (const auto& r : reference::regenerate_table1()) {
            w.row_strings({std::to_string(r.m), r.alternate ? "alternate" : "primary", num(r.ratio_db), num(r.paper_db),
                           flag(r.ratio_pass), num(r.max_sidelobe_abs_re), num(r.max_sidelobe_abs_im), flag(r.acf_pass)});
            out.reproduction_ok = out.reproduction_ok && r.ratio_pass && r.acf_pass;
            log << "M=" << r.m << (r.alternate ? " (alt)" : "") << " ratio " << num(r.ratio_db) << " dB vs "
                << num(r.paper_db) << " " << flag(r.ratio_pass) << ", ACF " << flag(r.acf_pass) << "\n";
        }
        const auto path = (dir / "table1.csv").string();
        io::write_text(path, w.str());
        out.outputs.push_back(path);
    } else if (o.table == 3) {
        io::CsvWriter w({"code", "m", "a_min_db", "paper_a_min_db", "a_min_tol_db", "a_min_pass", "u_half",
                         "paper_u_half", "u_tol", "u_pass", "checked"});
        for (const auto& r : reference::regenerate_table3()) {
            const bool det = r.paper.deterministic;
            w.row_strings({r.paper.code, std::to_string(r.paper.m), num(r.a_min_db), num(r.paper.a_min_db),
                           num(reference::a_min_tolerance(r.paper.code)), det ? flag(r.a_min_pass) : "n/a",
                           num(r.u_half), num(r.paper.u_half), num(reference::kUTol), det ? flag(r.u_pass) : "n/a",
                           det ? "yes" : "informational"});
            if (det) out.reproduction_ok = out.reproduction_ok && r.a_min_pass && r.u_pass;
            log << r.paper.code << " M=" << r.paper.m << ": A_min " << num(r.a_min_db) << " dB (paper "
                << num(r.paper.a_min_db) << ") " << (det ? flag(r.a_min_pass) : "n/a") << ", U " << num(r.u_half)
                << " (paper " << num(r.paper.u_half) << ") " << (det ? flag(r.u_pass) : "n/a") << "\n";
        }
        const auto path = (dir / "table3.csv").string();
        io::write_text(path, w.str());
        out.outputs.push_back(path);
    } else {
        const auto res = reference::regenerate_table4(o.seeds, o.ue_count);
        io::CsvWriter w({"code", "m", "seed", "s_min", "s_mean", "ci95_low", "ci95_high", "paper_s_min",
                         "paper_s_mean", "paper_ci_half", "ci_overlap"});
        for (const auto& r : res.runs)
            w.row_strings({r.paper.code, std::to_string(r.paper.m), std::to_string(r.seed), num(r.report.s_min),
                           num(r.report.s_mean), num(r.report.ci95_low), num(r.report.ci95_high), num(r.paper.s_min),
                           num(r.paper.s_mean), num(r.paper.ci_half), r.ci_overlap ? "yes" : "no"});
        const auto path = (dir / "table4.csv").string();
        io::write_text(path, w.str());
        out.outputs.push_back(path);

        io::CsvWriter s({"check", "code", "m", "seed", "value", "pass"});
        for (const auto& sm : res.summary) {
            const bool det = sm.code != "random";
            s.row_strings({"mean_ci_overlap", sm.code, std::to_string(sm.m), "all",
                           std::to_string(sm.overlaps) + "/" + std::to_string(sm.runs), det ? flag(sm.mean_pass) : "n/a"});
            if (det) out.reproduction_ok = out.reproduction_ok && sm.mean_pass;
            log << "s_mean " << sm.code << " M=" << sm.m << ": " << sm.overlaps << "/" << sm.runs << " overlap "
                << (det ? flag(sm.mean_pass) : "n/a") << "\n";
        }
        for (const auto& oc : res.ordering) {
            s.row_strings({"s_min_ordering", "all", std::to_string(oc.m), std::to_string(reference::table4_seed(oc.seed_index)),
                           oc.detail, flag(oc.pass)});
            out.reproduction_ok = out.reproduction_ok && oc.pass;
            if (!oc.pass) log << "s_min ordering M=" << oc.m << " seed " << reference::table4_seed(oc.seed_index)
                              << " FAIL: " << oc.detail << "\n";
        }
        const auto spath = (dir / "table4_summary.csv").string();
        io::write_text(spath, s.str());
        out.outputs.push_back(spath);
    }
    log << (out.reproduction_ok ? "table " + std::to_string(o.table) + ": all checks pass\n"
                                : "table " + std::to_string(o.table) + ": some checks FAILED\n");
    io::write_json(dir / "manifest.json", make_manifest("reproduce", to_json(o), out.outputs));
    return out;
}

// ---------------------------------------------------------------- replay

/// Re-runs the command recorded in a manifest, optionally into another directory.
inline CommandResult run_replay(const std::string& manifest_path, const std::optional<std::string>& out_dir,
                                std::ostream& log = std::cout) {
    const json m = io::parse_json(io::read_text(manifest_path), manifest_path);
    if (!m.is_object() || !m.contains("command") || !m.contains("config"))
        throw InvalidInput(manifest_path + ": not a run manifest (missing 'command' or 'config')");
    const std::string cmd = m.at("command").get<std::string>();
    json cfg = m.at("config");
    if (out_dir) cfg["out_dir"] = *out_dir;
    try {
        if (cmd == "code gen") return run_code_gen(code_gen_options_from_json(cfg));
        if (cmd == "code retarget") return run_code_retarget(retarget_options_from_json(cfg));
        if (cmd == "optimize") {
            auto o = optimize_options_from_json(cfg);
            o.quiet = true;
            return run_optimize(o);
        }
        if (cmd == "eval") return run_eval(eval_options_from_json(cfg)).files;
        if (cmd == "sim") return run_sim(sim_options_from_json(cfg)).files;
        if (cmd == "reproduce") return run_reproduce(reproduce_options_from_json(cfg), log);
    } catch (const json::exception& e) {
        throw InvalidInput(manifest_path + ": malformed config: " + e.what());
    }
    throw InvalidInput(manifest_path + ": unknown command '" + cmd + "'");
}

}  // namespace ris::cli
