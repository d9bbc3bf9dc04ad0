#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmab/markov.hpp"
#include "rmab/random.hpp"

namespace rmab {

// What happens to local states when the global state changes.
enum class SwitchMode {
    StationaryRedraw,  // fresh draw from the new chain's stationary law
    IndexCarryover,    // keep the local index (equal cardinalities required)
};

std::string to_string(SwitchMode mode);
SwitchMode parse_switch_mode(const std::string& text);

// Local chain of one arm under one global state.
struct ArmChain {
    StochasticMatrix transitions;
    std::vector<double> rewards;  // one strictly positive value per local state

    friend bool operator==(const ArmChain& a, const ArmChain& b) {
        return a.transitions == b.transitions && a.rewards == b.rewards;
    }
};

// Ground-truth model: global chain plus arms[i][s] local chains.
// Build through make_scenario() so every chain is validated and the
// stationary laws used by the simulator are cached.
struct ScenarioModel {
    std::string name;
    StochasticMatrix global;
    std::vector<std::vector<ArmChain>> arms;  // [arm][global state]
    SwitchMode switch_mode = SwitchMode::StationaryRedraw;

    // Derived on construction; not part of equality.
    std::vector<double> global_stationary;
    std::vector<std::vector<std::vector<double>>> local_stationary;  // [arm][state][x]

    std::size_t num_states() const { return global.size(); }
    std::size_t num_arms() const { return arms.size(); }
    const ArmChain& chain(std::size_t state, std::size_t arm) const { return arms[arm][state]; }
    double x_max() const;

    friend bool operator==(const ScenarioModel& a, const ScenarioModel& b) {
        return a.name == b.name && a.global == b.global && a.arms == b.arms &&
               a.switch_mode == b.switch_mode;
    }
};

ScenarioModel make_scenario(std::string name, StochasticMatrix global,
                            std::vector<std::vector<ArmChain>> arms,
                            SwitchMode mode = SwitchMode::StationaryRedraw);

struct TrueValues {
    std::vector<std::vector<double>> mu;  // [state][arm]
    std::vector<std::vector<double>> v;   // [state][arm]
    std::vector<std::size_t> best_arm;    // [state]
    std::vector<std::vector<std::size_t>> sigma;  // [state] arms by decreasing V

    double best_value(std::size_t state) const { return v[state][best_arm[state]]; }
    bool is_suboptimal(std::size_t state, std::size_t arm) const {
        return v[state][arm] < best_value(state);
    }
};

TrueValues true_values(const ScenarioModel& model);

// Identity of a local state: states of different global states are disjoint.
struct LocalStateId {
    std::size_t global = 0;
    std::size_t arm = 0;
    std::size_t index = 0;

    friend bool operator==(const LocalStateId&, const LocalStateId&) = default;
};

struct InitMode {
    bool stationary = true;
    std::size_t global = 0;  // used when !stationary; locals start at index 0

    static InitMode stationary_start() { return {}; }
    static InitMode fixed(std::size_t global_state) { return {false, global_state}; }
};

struct EnvState {
    std::uint64_t slot = 1;
    std::size_t global = 0;
    std::vector<std::size_t> locals;
    RandomStream rng;

    friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct Observation {
    std::uint64_t slot = 0;
    std::size_t arm = 0;
    double reward = 0.0;
    LocalStateId local;
    std::size_t global = 0;
    std::vector<double> all_rewards;  // harness-only counterfactual channel
};

EnvState reset(const ScenarioModel& model, std::uint64_t seed,
               InitMode init = InitMode::stationary_start());

// Emits the observation for the current slot, then advances the global
// state, then every arm's local state (arms in index order).
Observation step(const ScenarioModel& model, EnvState& state, std::size_t arm);

// Same as step(), reusing the caller's buffers.
void step_into(const ScenarioModel& model, EnvState& state, std::size_t arm, Observation& out);

} // namespace rmab
