#include "rmab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rmab/error.hpp"
#include "rmab/random.hpp"
#include "rmab/theory.hpp"

namespace rmab {

namespace {

// Calibrated presets shared by every built-in scenario.
constexpr double kCalibratedEpsilon = 0.05;
constexpr double kCalibratedLEff = 1.0;
constexpr double kCalibratedCond1 = 2.0;
constexpr double kCalibratedCond2 = 2.0;

std::unique_ptr<Policy> make_policy(const ExperimentSpec& spec, PolicyKind kind,
                                    const TrueValues& values, std::size_t initial_global,
                                    std::uint64_t seed) {
    const auto& model = *spec.scenario;
    auto phase = [&](PhasePolicy::Variant v) {
        return std::make_unique<PhasePolicy>(v, spec.lemp, model.num_states(), model.num_arms(),
                                             spec.keep_slot_trace);
    };
    switch (kind) {
    case PolicyKind::Lemp: return phase(PhasePolicy::Variant::Lemp);
    case PolicyKind::Dsee: return phase(PhasePolicy::Variant::Dsee);
    case PolicyKind::AvgBest: return phase(PhasePolicy::Variant::AvgBest);
    case PolicyKind::Genie: return std::make_unique<GeniePolicy>(values, initial_global);
    case PolicyKind::UniformRandom:
        return std::make_unique<UniformRandomPolicy>(model.num_arms(), mix_seed(seed, 1));
    }
    throw Error(ErrorKind::InvalidConfig, "unknown policy");
}

// Counting laws of the phase machine, evaluated after slot t.
void check_phase_laws(const PhaseCounters& c, std::uint64_t t, std::vector<AssertionOutcome>& out) {
    const auto cap = exploit_phase_cap(t);
    if (c.exploit_phases > cap)
        out.push_back({"exploitation-phase-count", false,
                       "t=" + std::to_string(t) + ": n_I=" + std::to_string(c.exploit_phases) +
                           " > ceil(log4(3t/2+1))=" + std::to_string(cap)});

    const double log_t = std::log(static_cast<double>(t));
    for (std::size_t i = 0; i < c.explore_phases.size(); ++i) {
        if (c.explore_phases[i] == 0) continue;
        const double inner = 3.0 * c.effective_coeff[i] * log_t + 1.0;
        const double phase_cap = std::floor(std::log(inner) / std::log(4.0)) + 1.0;
        if (static_cast<double>(c.explore_phases[i]) > phase_cap)
            out.push_back({"exploration-phase-count", false,
                           "t=" + std::to_string(t) + " arm " + std::to_string(i) + ": n_O=" +
                               std::to_string(c.explore_phases[i]) + " > " + std::to_string(phase_cap)});
        const double slot_cap = (4.0 * inner - 1.0) / 3.0 +
                                static_cast<double>(c.max_sb1_length[i] * c.explore_phases[i]);
        if (static_cast<double>(c.explore_slots[i]) > slot_cap)
            out.push_back({"exploration-slot-count", false,
                           "t=" + std::to_string(t) + " arm " + std::to_string(i) + ": slots=" +
                               std::to_string(c.explore_slots[i]) + " > " + std::to_string(slot_cap)});
    }
}

} // namespace

std::string to_string(ConstantsMode mode) {
    return mode == ConstantsMode::Calibrated ? "calibrated" : "theoretical";
}

ConstantsMode parse_constants_mode(const std::string& text) {
    if (text == "calibrated") return ConstantsMode::Calibrated;
    if (text == "theoretical") return ConstantsMode::Theoretical;
    throw Error(ErrorKind::InvalidConfig, "unknown constants mode '" + text + "'");
}

LempConfig calibrated_config(const ScenarioModel& model) {
    LempConfig cfg;
    cfg.epsilon = kCalibratedEpsilon;
    cfg.l_eff = kCalibratedLEff;
    cfg.cond1_coeff = kCalibratedCond1;
    cfg.cond2_coeff = kCalibratedCond2;
    try {
        cfg.delta_floor = compute_constants(model).delta;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateGap) throw;
        cfg.delta_floor = 1.0;  // no separable pair of arms; any positive floor works
    }
    return cfg;
}

LempConfig theoretical_config(const ScenarioModel& model, double epsilon) {
    const auto constants = compute_constants(model);
    const auto cc = condition_coefficients(constants, epsilon);
    LempConfig cfg;
    cfg.epsilon = epsilon;
    cfg.delta_floor = constants.delta;
    cfg.l_eff = cc.l;
    cfg.cond1_coeff = cc.cond1;
    cfg.cond2_coeff = cc.cond2;
    return cfg;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t horizon, std::size_t points) {
    std::vector<std::uint64_t> grid;
    if (horizon < 2 || points == 0) return {horizon};
    const std::uint64_t first = 2;
    const std::size_t n = static_cast<std::size_t>(
        std::min<std::uint64_t>(points, horizon - first + 1));
    const double ratio = static_cast<double>(horizon) / static_cast<double>(first);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = n == 1 ? static_cast<double>(horizon)
                                : first * std::pow(ratio, static_cast<double>(k) / static_cast<double>(n - 1));
        auto slot = static_cast<std::uint64_t>(std::llround(x));
        // Keep room for the remaining points below the horizon.
        const std::uint64_t lowest = grid.empty() ? first : grid.back() + 1;
        const std::uint64_t highest = horizon - (n - 1 - k);
        grid.push_back(std::clamp(slot, lowest, highest));
    }
    grid.back() = horizon;
    return grid;
}

void ExperimentSpec::validate_and_normalize() {
    if (!scenario) throw Error(ErrorKind::InvalidConfig, "experiment has no scenario");
    if (policies.empty()) throw Error(ErrorKind::InvalidConfig, "experiment has no policies");
    if (horizon < scenario->num_arms() + 1)
        throw Error(ErrorKind::InvalidConfig, "horizon must be at least N + 1");
    if (runs < 1) throw Error(ErrorKind::InvalidConfig, "need at least one run");
    if (log_grid.empty()) log_grid = geometric_grid(horizon);
    if (!std::is_sorted(log_grid.begin(), log_grid.end()) ||
        std::adjacent_find(log_grid.begin(), log_grid.end()) != log_grid.end() ||
        log_grid.front() < 1 || log_grid.back() > horizon)
        throw Error(ErrorKind::InvalidConfig, "log grid must be strictly increasing within [1, T]");
    lemp.validate();
}

RunResult run_single(const ExperimentSpec& spec, PolicyKind kind, std::uint64_t seed) {
    const auto& model = *spec.scenario;
    const auto values = true_values(model);
    const double x_max = model.x_max();

    RunResult result;
    result.policy = kind;
    result.seed = seed;
    result.grid = spec.log_grid;

    EnvState env = reset(model, seed, spec.init);
    result.initial_global = env.global;
    auto policy = make_policy(spec, kind, values, env.global, seed);

    // Slot n is judged against V_{s_{n-1}}; slot 1 uses the initial state.
    std::size_t reference = env.global;
    double regret = 0.0;
    double pseudo = 0.0;
    std::size_t next_grid = 0;
    Observation obs;

    for (std::uint64_t n = 1; n <= spec.horizon; ++n) {
        const std::size_t arm = policy->next_action();
        step_into(model, env, arm, obs);
        if (values.is_suboptimal(reference, arm)) {
            const std::size_t genie = genie_action(values, reference);
            regret += obs.all_rewards[genie] - obs.all_rewards[arm];
            pseudo += values.best_value(reference) - values.v[reference][arm];
        }
        if (spec.keep_observation_log) result.observation_log.push_back({obs.global, arm, obs.all_rewards});
        policy->observe(to_feedback(obs));
        reference = obs.global;

        if (next_grid == spec.log_grid.size() || n != spec.log_grid[next_grid]) continue;
        ++next_grid;
        result.regret.push_back(regret);
        result.pseudo_regret.push_back(pseudo);
        if (!spec.assertions) continue;

        std::vector<AssertionOutcome> failures;
        if (regret > x_max * static_cast<double>(n))
            failures.push_back({"regret-cap", false, "r(t) exceeds x_max * t at t=" + std::to_string(n)});
        if (const auto* c = policy->counters()) check_phase_laws(*c, n, failures);
        if (!failures.empty()) {
            result.assertions.insert(result.assertions.end(), failures.begin(), failures.end());
            throw Error(ErrorKind::AssertionFailure,
                        failures.front().invariant + " violated (" + failures.front().detail + ")");
        }
    }

    if (spec.assertions)
        for (const char* name : {"regret-cap", "exploitation-phase-count", "exploration-phase-count",
                                 "exploration-slot-count"})
            result.assertions.push_back({name, true, ""});
    if (const auto* c = policy->counters()) result.counters = *c;
    if (const auto* tr = policy->trace()) result.trace = *tr;
    if (const auto* t = policy->tables()) result.tables = *t;
    return result;
}

const PolicyAggregate& AggregateResult::of(PolicyKind kind) const {
    for (const auto& p : policies)
        if (p.policy == kind) return p;
    throw Error(ErrorKind::InvalidConfig, "policy " + to_string(kind) + " not in result");
}

AggregateResult run_monte_carlo(ExperimentSpec spec) {
    spec.validate_and_normalize();
    AggregateResult out;
    out.grid = spec.log_grid;
    for (std::size_t r = 0; r < spec.runs; ++r) out.seeds.push_back(spec.base_seed + r);

    const std::size_t per_policy = spec.runs;
    const std::size_t total = per_policy * spec.policies.size();
    std::vector<std::optional<RunResult>> results(total);
    std::vector<std::exception_ptr> errors(total);

    unsigned jobs = spec.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const auto policy = spec.policies[job / per_policy];
            const auto seed = out.seeds[job % per_policy];
            try {
                results[job] = run_single(spec, policy, seed);
            } catch (...) {
                errors[job] = std::current_exception();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
    }

    for (std::size_t job = 0; job < total; ++job) {
        if (!errors[job]) continue;
        const std::string where = "run " + std::to_string(job % per_policy) + " of policy " +
                                  to_string(spec.policies[job / per_policy]);
        try {
            std::rethrow_exception(errors[job]);
        } catch (const Error& e) {
            throw Error(e.kind(), where + ": " + e.what());
        }
    }

    const std::size_t g = out.grid.size();
    const double runs = static_cast<double>(per_policy);
    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
        PolicyAggregate agg;
        agg.policy = spec.policies[p];
        agg.mean.assign(g, 0.0);
        agg.stddev.assign(g, 0.0);
        agg.ci95.assign(g, 0.0);
        agg.mean_over_log.assign(g, 0.0);
        agg.min.assign(g, 0.0);
        agg.max.assign(g, 0.0);
        for (std::size_t r = 0; r < per_policy; ++r) agg.runs.push_back(std::move(*results[p * per_policy + r]));

        for (std::size_t k = 0; k < g; ++k) {
            double sum = 0.0;
            agg.min[k] = agg.max[k] = agg.runs.front().regret[k];
            for (const auto& run : agg.runs) {
                sum += run.regret[k];
                agg.min[k] = std::min(agg.min[k], run.regret[k]);
                agg.max[k] = std::max(agg.max[k], run.regret[k]);
            }
            // Clamp guards the last-ulp drift of sum / R when all runs agree.
            const double mean = std::clamp(sum / runs, agg.min[k], agg.max[k]);
            double ss = 0.0;
            for (const auto& run : agg.runs) ss += (run.regret[k] - mean) * (run.regret[k] - mean);
            agg.mean[k] = mean;
            agg.stddev[k] = per_policy > 1 ? std::sqrt(ss / (runs - 1.0)) : 0.0;
            agg.ci95[k] = 1.96 * agg.stddev[k] / std::sqrt(runs);
            const double log_t = std::log(static_cast<double>(out.grid[k]));
            agg.mean_over_log[k] = log_t > 0.0 ? mean / log_t : std::nan("");
        }
        out.policies.push_back(std::move(agg));
    }
    return out;
}

} // namespace rmab
