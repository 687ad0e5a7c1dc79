// ris: code generation, CGA optimization, evaluation, SE simulation and
// table reproduction for flat-beam RIS phase codes.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ris/cli.hpp"

namespace {

using namespace ris;

struct AngleOpt {
    std::string text;
    double value(double fallback) const { return text.empty() ? fallback : io::parse_angle(text); }
};

void add_geometry(CLI::App* app, cli::CodeGenOptions& o, AngleOpt& theta) {
    app->add_option("--theta-h", theta.text, "incidence angle of the feed, e.g. 0, 30deg, 0.5236rad");
    app->add_option("--spacing", o.spacing_ratio, "element spacing over wavelength")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flat-beam RIS phase-code toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cli::kToolVersion);
    const std::string out_default = cli::default_out_dir();

    // code gen / code retarget
    auto* code = app.add_subcommand("code", "generate or transform phase codes");
    code->require_subcommand(1);
    cli::CodeGenOptions gen;
    gen.out_dir = out_default;
    AngleOpt gen_theta, gen_phi0;
    int gen_q = 0;
    auto* gen_cmd = code->add_subcommand("gen", "generate a code of a given family");
    gen_cmd->add_option("--family", gen.family, "barker | frank | chu | random-best | max-average | proposed")->required();
    gen_cmd->add_option("--m", gen.m, "number of elements")->required();
    auto* q_opt = gen_cmd->add_option("--q", gen_q, "Chu root (searched over coprime q when omitted)");
    gen_cmd->add_flag("--alternate", gen.alternate, "second Barker code for M = 2 or 4");
    gen_cmd->add_option("--trials", gen.trials, "random-best trial count")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "random-best seed")->capture_default_str();
    gen_cmd->add_option("--phi0", gen_phi0.text, "max-average phase offset");
    gen_cmd->add_option("--d", gen.d, "angular grid resolution D")->capture_default_str();
    gen_cmd->add_option("--out", gen.out_dir, "output directory (default $RIS_OUT_DIR or .)");
    gen_cmd->add_option("--name", gen.name, "output file stem");
    add_geometry(gen_cmd, gen, gen_theta);

    cli::RetargetOptions rt;
    rt.out_dir = out_default;
    AngleOpt rt_theta;
    auto* rt_cmd = code->add_subcommand("retarget", "adapt a code to a new incidence angle");
    rt_cmd->add_option("--code", rt.code_path, "input code JSON")->required();
    rt_cmd->add_option("--theta-h", rt_theta.text, "new incidence angle")->required();
    rt_cmd->add_option("--out", rt.out_dir, "output directory");
    rt_cmd->add_option("--name", rt.name, "output file stem");

    // optimize
    cli::OptimizeOptions opt;
    opt.out_dir = out_default;
    opt.threads = cli::default_threads();
    std::vector<std::string> pops{"1000"};
    AngleOpt opt_theta;
    auto* opt_cmd = app.add_subcommand("optimize", "multi-start CGA search for max-min PDAF codes");
    opt_cmd->add_option("--m", opt.m, "number of elements")->required();
    opt_cmd->add_option("--theta-h", opt_theta.text, "incidence angle");
    opt_cmd->add_option("--spacing", opt.spacing_ratio, "element spacing over wavelength")->capture_default_str();
    opt_cmd->add_option("--pop", pops, "population sizes: 6000, 1000,2000 or 1000:8000:1000")->capture_default_str();
    opt_cmd->add_option("--gens", opt.ga.generations, "generations")->capture_default_str();
    opt_cmd->add_option("--d", opt.ga.grid_d, "angular grid resolution D")->capture_default_str();
    opt_cmd->add_option("--runs", opt.runs, "independent runs per population size")->capture_default_str();
    opt_cmd->add_option("--seed", opt.ga.seed, "base seed")->capture_default_str();
    opt_cmd->add_option("--mutation-scale", opt.ga.mutation_scale, "Gaussian mutation std-dev, radians")->capture_default_str();
    opt_cmd->add_option("--mutation-prob", opt.ga.mutation_prob, "per-gene mutation probability")->capture_default_str();
    opt_cmd->add_option("--elitism", opt.ga.elitism_count, "elite count")->capture_default_str();
    opt_cmd->add_option("--crossover-lo", opt.ga.crossover_weight_lo, "blend weight lower bound")->capture_default_str();
    opt_cmd->add_option("--crossover-hi", opt.ga.crossover_weight_hi, "blend weight upper bound")->capture_default_str();
    opt_cmd->add_option("--threads", opt.threads, "worker threads (results do not depend on it)");
    opt_cmd->add_option("--out", opt.out_dir, "output directory");
    opt_cmd->add_flag("--quiet", opt.quiet, "no per-run progress");

    // eval
    cli::EvalOptions ev;
    ev.out_dir = out_default;
    int ev_m = 0;
    double ev_spacing = 0.0;
    AngleOpt ev_theta;
    auto* ev_cmd = app.add_subcommand("eval", "PDAF metrics, profile and ACF of a code");
    ev_cmd->add_option("--code", ev.code_path, "code JSON")->required();
    auto* ev_m_opt = ev_cmd->add_option("--m", ev_m, "expected number of elements");
    ev_cmd->add_option("--theta-h", ev_theta.text, "override the design incidence angle");
    auto* ev_sp_opt = ev_cmd->add_option("--spacing", ev_spacing, "override the design spacing ratio");
    ev_cmd->add_option("--d", ev.d, "angular grid resolution D")->capture_default_str();
    ev_cmd->add_option("--out", ev.out_dir, "output directory");

    // sim
    cli::SimOptions sim;
    sim.out_dir = out_default;
    int sim_m = 0;
    std::string scenario_file;
    std::map<std::string, std::string> overrides;
    auto* sim_cmd = app.add_subcommand("sim", "Monte-Carlo spectral efficiency of a code");
    sim_cmd->add_option("--code", sim.code_path, "code JSON")->required();
    auto* sim_m_opt = sim_cmd->add_option("--m", sim_m, "expected number of elements");
    auto* preset_opt = sim_cmd->add_option("--preset", sim.preset, "paper-sim | prop1")->capture_default_str();
    sim_cmd->add_option("--scenario", scenario_file, "flat key = value scenario file");
    sim_cmd->add_flag("--bounds", sim.bounds, "also compute the SE lower/upper bounds");
    sim_cmd->add_option("--d", sim.d, "grid resolution for the bounds")->capture_default_str();
    sim_cmd->add_option("--out", sim.out_dir, "output directory");
    const std::vector<std::pair<std::string, std::string>> scenario_flags{
        {"k", "ue_count"},          {"seed", "seed"},           {"tx-power", "tx_power_dbm"},
        {"noise", "noise_power_dbm"}, {"r-h", "r_h_m"},          {"r-min", "r_min_m"},
        {"r-max", "r_max_m"},       {"theta-min", "theta_min"}, {"theta-max", "theta_max"},
    };
    for (const auto& [flag, key] : scenario_flags) {
        const std::string k = key;
        sim_cmd->add_option_function<std::string>("--" + flag, [&overrides, k](const std::string& v) { overrides[k] = v; },
                                                   "scenario field " + key);
    }

    // reproduce
    cli::ReproduceOptions rep;
    rep.out_dir = out_default;
    auto* rep_cmd = app.add_subcommand("reproduce", "regenerate a reference table with pass/fail checks");
    rep_cmd->add_option("--table", rep.table, "1, 3 or 4")->required();
    rep_cmd->add_option("--seeds", rep.seeds, "table 4: independent seeds")->capture_default_str();
    rep_cmd->add_option("--k", rep.ue_count, "table 4: UEs per run")->capture_default_str();
    rep_cmd->add_option("--out", rep.out_dir, "output directory");

    // replay
    std::string manifest;
    std::string replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a command from its manifest");
    replay_cmd->add_option("--manifest", manifest, "manifest JSON")->required();
    replay_cmd->add_option("--out", replay_out, "write into this directory instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kInvalidInput;
    }

    try {
        cli::CommandResult res;
        if (gen_cmd->parsed()) {
            if (*q_opt) gen.q = gen_q;
            gen.theta_h = gen_theta.value(0.0);
            gen.phi0 = gen_phi0.value(0.0);
            res = cli::run_code_gen(gen);
        } else if (rt_cmd->parsed()) {
            rt.theta_h = rt_theta.value(0.0);
            res = cli::run_code_retarget(rt);
        } else if (opt_cmd->parsed()) {
            opt.population_sizes = cli::parse_population_list(pops);
            opt.theta_h = opt_theta.value(0.0);
            if (opt.threads < 1) throw InvalidInput("--threads must be >= 1");
            res = cli::run_optimize(opt);
            std::cout << "best a_min_db "
                      << io::fmt_num(io::read_code_file(res.outputs.front()).params.at("a_min_db").get<double>()) << "\n";
        } else if (ev_cmd->parsed()) {
            if (*ev_m_opt) ev.m = ev_m;
            if (*ev_sp_opt) ev.spacing_ratio = ev_spacing;
            if (!ev_theta.text.empty()) ev.theta_h = ev_theta.value(0.0);
            const auto out = cli::run_eval(ev);
            std::cout << "a_min_db " << io::fmt_num(out.report.a_min_db) << "\n"
                      << "a_avg " << io::fmt_num(out.report.a_avg_linear) << "\n";
            if (out.report.u_half) std::cout << "u_half " << io::fmt_num(*out.report.u_half) << "\n";
            res = out.files;
        } else if (sim_cmd->parsed()) {
            if (*sim_m_opt) sim.m = sim_m;
            if (!scenario_file.empty()) {
                auto text = io::read_text(scenario_file);
                if (*preset_opt) text = "preset = " + sim.preset + "\n" + text;
                sim.scenario = io::parse_scenario_text(text, scenario_file);
                if (!*preset_opt) sim.preset = "file";
            } else {
                sim.scenario = cli::preset_scenario(sim.preset);
            }
            for (const auto& [k, v] : overrides) io::set_scenario_field(sim.scenario, k, v);
            const auto out = cli::run_sim(sim);
            std::cout << "s_min " << io::fmt_num(out.report.s_min) << "\n"
                      << "s_mean " << io::fmt_num(out.report.s_mean) << " +- " << io::fmt_num(1.96 * out.report.std_error)
                      << "\n";
            if (out.bounds)
                std::cout << "bounds [" << io::fmt_num(out.bounds->lower) << ", " << io::fmt_num(out.bounds->upper) << "]\n";
            res = out.files;
        } else if (rep_cmd->parsed()) {
            res = cli::run_reproduce(rep);
        } else if (replay_cmd->parsed()) {
            res = cli::run_replay(manifest, replay_out.empty() ? std::nullopt : std::optional<std::string>(replay_out));
        }
        for (const auto& f : res.outputs) std::cout << "wrote " << f << "\n";
        return res.reproduction_ok ? cli::kOk : cli::kReproductionFailure;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kInvalidInput;
    } catch (const UnsupportedConfiguration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
