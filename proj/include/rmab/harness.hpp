#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmab/environment.hpp"
#include "rmab/estimators.hpp"
#include "rmab/policies.hpp"

namespace rmab {

enum class ConstantsMode { Calibrated, Theoretical };

std::string to_string(ConstantsMode mode);
ConstantsMode parse_constants_mode(const std::string& text);

// Desk-scale constants: delta_floor is the model's exact Delta, the other
// coefficients are fixed presets (see README).
LempConfig calibrated_config(const ScenarioModel& model);

// Literal theory constants: L, 2/(eps^2 I_L), 2/(eps^2 I_G).
LempConfig theoretical_config(const ScenarioModel& model, double epsilon);

// Up to `points` strictly increasing slots in [2, horizon], geometric
// spacing, always ending at horizon.
std::vector<std::uint64_t> geometric_grid(std::uint64_t horizon, std::size_t points = 64);

struct ExperimentSpec {
    std::shared_ptr<const ScenarioModel> scenario;
    std::vector<PolicyKind> policies;
    std::uint64_t horizon = 0;
    std::size_t runs = 1;
    std::uint64_t base_seed = 1;
    std::vector<std::uint64_t> log_grid;  // empty = geometric_grid(horizon)
    InitMode init = InitMode::stationary_start();
    ConstantsMode constants = ConstantsMode::Calibrated;
    LempConfig lemp;
    bool assertions = true;
    bool keep_slot_trace = false;
    bool keep_observation_log = false;
    unsigned jobs = 0;  // 0 = hardware concurrency

    // Throws InvalidConfig on T < N + 1, R < 1, or a bad grid; fills the default grid.
    void validate_and_normalize();
};

struct AssertionOutcome {
    std::string invariant;
    bool passed = true;
    std::string detail;
};

struct LoggedSlot {
    std::size_t global = 0;  // s_n, the state the rewards were realized under
    std::size_t arm = 0;
    std::vector<double> all_rewards;
};

struct RunResult {
    PolicyKind policy = PolicyKind::Lemp;
    std::uint64_t seed = 0;
    std::size_t initial_global = 0;
    std::vector<std::uint64_t> grid;
    std::vector<double> regret;         // pathwise r(t) at the grid points
    std::vector<double> pseudo_regret;  // sum of V*_s - V_s^a over counted slots
    PolicyTrace trace;
    std::optional<PhaseCounters> counters;
    CountTables tables;
    std::vector<AssertionOutcome> assertions;
    std::vector<LoggedSlot> observation_log;
};

RunResult run_single(const ExperimentSpec& spec, PolicyKind policy, std::uint64_t seed);

struct PolicyAggregate {
    PolicyKind policy = PolicyKind::Lemp;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<double> ci95;  // 1.96 * stddev / sqrt(R)
    std::vector<double> mean_over_log;
    std::vector<double> min;
    std::vector<double> max;
    std::vector<RunResult> runs;
};

struct AggregateResult {
    std::vector<std::uint64_t> grid;
    std::vector<std::uint64_t> seeds;
    std::vector<PolicyAggregate> policies;

    const PolicyAggregate& of(PolicyKind kind) const;
};

// Runs R seeds (base_seed + r) per policy; the reduction is in run order, so
// the result does not depend on `jobs`.
AggregateResult run_monte_carlo(ExperimentSpec spec);

} // namespace rmab
