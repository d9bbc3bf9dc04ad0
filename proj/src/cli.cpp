#include "rmab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rmab/error.hpp"
#include "rmab/harness.hpp"
#include "rmab/markov.hpp"
#include "rmab/report.hpp"
#include "rmab/scenario_io.hpp"
#include "rmab/scenarios.hpp"
#include "rmab/theory.hpp"

namespace rmab {

namespace {

namespace fs = std::filesystem;

// RMAB_OUTPUT_DIR is the only environment setting: the directory that
// relative output paths land in.
fs::path output_path(const std::string& given) {
    fs::path p(given);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("RMAB_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p;
    return p;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
    f << text;
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
}

ScenarioModel with_mode(const ScenarioModel& m, SwitchMode mode) {
    return make_scenario(m.name, m.global, m.arms, mode);
}

// A preset name or a scenario file.
ScenarioModel resolve_scenario(const std::string& name, const std::optional<std::string>& mode_flag) {
    const auto mode = mode_flag ? parse_switch_mode(*mode_flag) : SwitchMode::StationaryRedraw;
    if (auto preset = find_builtin(name, mode)) return *preset;
    if (!fs::exists(name))
        throw Error(ErrorKind::InvalidConfig, "unknown scenario '" + name + "' (not a preset or a file)");
    auto model = load_scenario_file(name);
    return mode_flag ? with_mode(model, mode) : model;
}

std::string vec(const std::vector<double>& xs, int precision) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << '(';
    for (std::size_t k = 0; k < xs.size(); ++k) out << (k ? ", " : "") << xs[k];
    out << ')';
    return out.str();
}

void describe_chain(std::ostream& out, const std::string& label, const StochasticMatrix& p) {
    const auto a = analyze(p);
    out << label << ": pi = " << vec(a.stationary, 4) << ", lambda = " << std::setprecision(6)
        << a.second_eigenvalue_modulus << ", max hitting time = " << a.max_hitting_time() << '\n';
}

struct RunFlags {
    std::string scenario;
    std::string policies = "lemp,dsee,avg-best,genie";
    std::uint64_t horizon = 200000;
    std::size_t runs = 200;
    std::uint64_t seed = 1;
    std::string out = "results.csv";
    std::optional<std::string> json;
    unsigned jobs = 0;
    std::optional<std::string> switch_mode;
    std::string init = "stationary";
    std::string constants = "calibrated";
    std::optional<double> epsilon, l_eff, cond1, cond2, delta_floor;
    std::optional<std::uint64_t> growth_base, exploit_multiplier;
    std::size_t grid_points = 64;
    bool no_assert = false;
    bool with_bound = false;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
    auto model = std::make_shared<const ScenarioModel>(resolve_scenario(f.scenario, f.switch_mode));

    ExperimentSpec spec;
    spec.scenario = model;
    spec.policies = parse_policy_list(f.policies);
    spec.horizon = f.horizon;
    spec.runs = f.runs;
    spec.base_seed = f.seed;
    spec.jobs = f.jobs;
    spec.assertions = !f.no_assert;
    spec.constants = parse_constants_mode(f.constants);
    if (f.horizon >= 2) spec.log_grid = geometric_grid(f.horizon, f.grid_points);
    if (f.init == "stationary") {
        spec.init = InitMode::stationary_start();
    } else {
        std::size_t g = 0;
        try {
            g = std::stoul(f.init);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidConfig, "--init must be 'stationary' or a global state index");
        }
        if (g >= model->num_states()) throw Error(ErrorKind::InvalidConfig, "--init state out of range");
        spec.init = InitMode::fixed(g);
    }

    const double eps = f.epsilon.value_or(0.05);
    spec.lemp = spec.constants == ConstantsMode::Calibrated ? calibrated_config(*model)
                                                            : theoretical_config(*model, eps);
    if (f.epsilon) spec.lemp.epsilon = *f.epsilon;
    if (f.l_eff) spec.lemp.l_eff = *f.l_eff;
    if (f.cond1) spec.lemp.cond1_coeff = *f.cond1;
    if (f.cond2) spec.lemp.cond2_coeff = *f.cond2;
    if (f.delta_floor) spec.lemp.delta_floor = *f.delta_floor;
    if (f.growth_base) spec.lemp.growth_base = *f.growth_base;
    if (f.exploit_multiplier) spec.lemp.exploit_multiplier = *f.exploit_multiplier;
    spec.validate_and_normalize();

    std::optional<BoundReport> bound;
    if (f.with_bound) bound = bound_report(compute_constants(*model), eps, spec.log_grid);

    const auto result = run_monte_carlo(spec);
    const auto csv_path = output_path(f.out);
    write_file(csv_path, aggregate_csv(result));
    std::optional<fs::path> json_path;
    if (f.json) {
        json_path = output_path(*f.json);
        write_file(*json_path, experiment_json(spec, result, bound).dump(2) + "\n");
    }

    const double log_t = std::log(static_cast<double>(spec.horizon));
    for (const auto& p : result.policies) {
        const std::size_t last = result.grid.size() - 1;
        out << std::left << std::setw(15) << to_string(p.policy) << std::right
            << " r(T) = " << std::setprecision(6) << p.mean[last] << " +/- " << p.ci95[last]
            << "  r(T)/ln T = " << p.mean[last] / log_t << "  (T = " << spec.horizon
            << ", R = " << spec.runs << ")\n";
    }
    out << "wrote " << csv_path.string() << '\n';
    if (json_path) out << "wrote " << json_path->string() << '\n';
    return kExitOk;
}

int cmd_bound(const std::string& scenario, const std::optional<std::string>& mode, double epsilon,
              const std::vector<std::uint64_t>& t, const std::optional<std::string>& out_file,
              std::ostream& out) {
    const auto model = resolve_scenario(scenario, mode);
    const auto constants = compute_constants(model);
    const auto report = bound_report(constants, epsilon, t);
    nlohmann::json doc = {{"scenario", model.name},
                          {"constants", constants_json(constants)},
                          {"bound", bound_json(report)}};
    const std::string text = doc.dump(2) + "\n";
    if (out_file) write_file(output_path(*out_file), text);
    out << text;
    return kExitOk;
}

int cmd_validate(const std::string& scenario, const std::optional<std::string>& mode, std::ostream& out) {
    const auto model = resolve_scenario(scenario, mode);
    out << "scenario " << model.name << ": ok (" << model.num_states() << " global states, "
        << model.num_arms() << " arms, " << to_string(model.switch_mode) << ")\n";
    out << "pi_global = " << vec(model.global_stationary, 4) << '\n';
    describe_chain(out, "global", model.global);
    for (std::size_t i = 0; i < model.num_arms(); ++i)
        for (std::size_t s = 0; s < model.num_states(); ++s)
            describe_chain(out, "arm " + std::to_string(i) + " state " + std::to_string(s),
                           model.chain(s, i).transitions);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Restless bandit experiments under an exogenous global Markov chain", "rmab"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "Monte Carlo regret experiment");
    run->add_option("--scenario", rf.scenario, "preset name or scenario JSON file")->required();
    run->add_option("--policies", rf.policies, "comma-separated: lemp,dsee,avg-best,genie,uniform-random")
        ->capture_default_str();
    run->add_option("--horizon", rf.horizon, "slots per run")->capture_default_str();
    run->add_option("--runs", rf.runs, "Monte Carlo runs")->capture_default_str();
    run->add_option("--seed", rf.seed, "base seed; run r uses seed + r")->capture_default_str();
    run->add_option("--out", rf.out, "CSV output path")->capture_default_str();
    run->add_option("--json", rf.json, "JSON output path");
    run->add_option("--jobs", rf.jobs, "worker threads, 0 = all cores")->capture_default_str();
    run->add_option("--switch-mode", rf.switch_mode, "stationary-redraw or index-carryover");
    run->add_option("--init", rf.init, "'stationary' or a fixed initial global state")->capture_default_str();
    run->add_option("--constants", rf.constants, "calibrated or theoretical")->capture_default_str();
    run->add_option("--epsilon", rf.epsilon, "accuracy parameter");
    run->add_option("--l-eff", rf.l_eff, "effective L in the hardness estimate");
    run->add_option("--cond1", rf.cond1, "coefficient floor of the per-cell sample condition");
    run->add_option("--cond2", rf.cond2, "coefficient of the global-visit condition");
    run->add_option("--delta-floor", rf.delta_floor, "lower clamp of the estimated squared gap");
    run->add_option("--growth-base", rf.growth_base, "phase-length growth base (default 4)");
    run->add_option("--exploit-multiplier", rf.exploit_multiplier, "exploitation length multiplier (default 2)");
    run->add_option("--grid-points", rf.grid_points, "logged grid points")->capture_default_str();
    run->add_flag("--no-assert", rf.no_assert, "skip the phase-count assertions");
    run->add_flag("--with-bound", rf.with_bound, "add the bound report to the JSON output");

    std::string b_scenario;
    std::optional<std::string> b_mode, b_out;
    double b_eps = 0.05;
    std::vector<std::uint64_t> b_t{100, 1000, 10000};
    auto* bound = app.add_subcommand("bound", "Evaluate the regret bound with theoretical constants");
    bound->add_option("--scenario", b_scenario, "preset name or scenario JSON file")->required();
    bound->add_option("--switch-mode", b_mode, "stationary-redraw or index-carryover");
    bound->add_option("--epsilon", b_eps, "accuracy parameter")->capture_default_str();
    bound->add_option("--t", b_t, "slots to evaluate at")->capture_default_str()->delimiter(',');
    bound->add_option("--out", b_out, "also write the JSON here");

    std::string v_scenario;
    std::optional<std::string> v_mode;
    auto* validate = app.add_subcommand("validate", "Check a scenario and print chain summaries");
    validate->add_option("scenario", v_scenario, "scenario JSON file or preset name")->required();
    validate->add_option("--switch-mode", v_mode, "stationary-redraw or index-carryover");

    auto* scenarios = app.add_subcommand("scenarios", "Built-in scenarios");
    scenarios->require_subcommand(1);
    auto* list = scenarios->add_subcommand("list", "List preset names");
    std::string show_name;
    auto* show = scenarios->add_subcommand("show", "Print a preset as scenario JSON");
    show->add_option("name", show_name)->required();

    std::vector<std::string> argv_store{"rmab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(rf, out);
        if (*bound) return cmd_bound(b_scenario, b_mode, b_eps, b_t, b_out, out);
        if (*validate) return cmd_validate(v_scenario, v_mode, out);
        if (*list) {
            for (const auto& name : builtin_names()) out << name << '\n';
            return kExitOk;
        }
        if (*show) {
            const auto model = find_builtin(show_name);
            if (!model) throw Error(ErrorKind::InvalidConfig, "unknown preset '" + show_name + "'");
            out << save_scenario(*model) << '\n';
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::AssertionFailure ? kExitAssertion : kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
    return kExitConfig;
}

} // namespace rmab
