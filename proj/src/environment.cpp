#include "rmab/environment.hpp"

#include <algorithm>
#include <numeric>

#include "rmab/error.hpp"

namespace rmab {

std::string to_string(SwitchMode mode) {
    return mode == SwitchMode::StationaryRedraw ? "stationary-redraw" : "index-carryover";
}

SwitchMode parse_switch_mode(const std::string& text) {
    if (text == "stationary-redraw") return SwitchMode::StationaryRedraw;
    if (text == "index-carryover") return SwitchMode::IndexCarryover;
    throw Error(ErrorKind::InvalidConfig, "unknown switch mode '" + text + "'");
}

double ScenarioModel::x_max() const {
    double best = 0.0;
    for (const auto& per_state : arms)
        for (const auto& c : per_state)
            for (double r : c.rewards) best = std::max(best, r);
    return best;
}

ScenarioModel make_scenario(std::string name, StochasticMatrix global,
                            std::vector<std::vector<ArmChain>> arms, SwitchMode mode) {
    ScenarioModel m;
    m.name = std::move(name);
    m.global = std::move(global);
    m.arms = std::move(arms);
    m.switch_mode = mode;

    require_valid(m.global);
    if (m.arms.empty()) throw Error(ErrorKind::InvalidConfig, "scenario needs at least one arm");
    const std::size_t states = m.global.size();
    m.global_stationary = stationary_distribution(m.global);
    m.local_stationary.resize(m.arms.size());

    for (std::size_t i = 0; i < m.arms.size(); ++i) {
        if (m.arms[i].size() != states)
            throw Error(ErrorKind::InvalidConfig,
                        "arm " + std::to_string(i) + " must define a chain for every global state");
        for (std::size_t s = 0; s < states; ++s) {
            const auto& c = m.arms[i][s];
            require_valid(c.transitions);
            if (c.rewards.size() != c.transitions.size())
                throw Error(ErrorKind::InvalidConfig, "reward vector length must match local chain");
            for (double r : c.rewards)
                if (!(r > 0.0))
                    throw Error(ErrorKind::InvalidConfig, "rewards must be strictly positive");
            m.local_stationary[i].push_back(stationary_distribution(c.transitions));
        }
        if (mode == SwitchMode::IndexCarryover) {
            for (std::size_t s = 1; s < states; ++s)
                if (m.arms[i][s].transitions.size() != m.arms[i][0].transitions.size())
                    throw Error(ErrorKind::InvalidConfig,
                                "index-carryover needs equal local cardinalities across global states");
        }
    }
    return m;
}

TrueValues true_values(const ScenarioModel& model) {
    const std::size_t states = model.num_states();
    const std::size_t n = model.num_arms();
    TrueValues tv;
    tv.mu.assign(states, std::vector<double>(n, 0.0));
    tv.v.assign(states, std::vector<double>(n, 0.0));

    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t i = 0; i < n; ++i) {
            const auto& rewards = model.chain(s, i).rewards;
            const auto& pi = model.local_stationary[i][s];
            tv.mu[s][i] = std::inner_product(rewards.begin(), rewards.end(), pi.begin(), 0.0);
        }
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t next = 0; next < states; ++next)
                tv.v[s][i] += model.global(s, next) * tv.mu[next][i];

    tv.best_arm.resize(states);
    tv.sigma.resize(states);
    for (std::size_t s = 0; s < states; ++s) {
        auto& order = tv.sigma[s];
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return tv.v[s][a] > tv.v[s][b]; });
        tv.best_arm[s] = order.front();
    }
    return tv;
}

EnvState reset(const ScenarioModel& model, std::uint64_t seed, InitMode init) {
    EnvState st;
    st.rng = RandomStream(seed);
    st.slot = 1;
    st.locals.assign(model.num_arms(), 0);
    if (init.stationary) {
        st.global = sample_index(model.global_stationary, st.rng.uniform());
        for (std::size_t i = 0; i < model.num_arms(); ++i)
            st.locals[i] = sample_index(model.local_stationary[i][st.global], st.rng.uniform());
    } else {
        if (init.global >= model.num_states())
            throw Error(ErrorKind::InvalidConfig, "fixed initial global state out of range");
        st.global = init.global;
    }
    return st;
}

Observation step(const ScenarioModel& model, EnvState& state, std::size_t arm) {
    Observation obs;
    step_into(model, state, arm, obs);
    return obs;
}

void step_into(const ScenarioModel& model, EnvState& state, std::size_t arm, Observation& obs) {
    const std::size_t n = model.num_arms();
    if (arm >= n) throw Error(ErrorKind::InvalidArm, "arm " + std::to_string(arm) + " out of range");

    obs.slot = state.slot;
    obs.arm = arm;
    obs.global = state.global;
    obs.all_rewards.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        obs.all_rewards[i] = model.chain(state.global, i).rewards[state.locals[i]];
    obs.reward = obs.all_rewards[arm];
    obs.local = {state.global, arm, state.locals[arm]};

    const std::size_t previous = state.global;
    state.global = sample_next(model.global, previous, state.rng);
    if (state.global == previous) {
        for (std::size_t i = 0; i < n; ++i)
            state.locals[i] = sample_next(model.chain(previous, i).transitions, state.locals[i],
                                          state.rng);
    } else if (model.switch_mode == SwitchMode::StationaryRedraw) {
        for (std::size_t i = 0; i < n; ++i)
            state.locals[i] = sample_index(model.local_stationary[i][state.global], state.rng.uniform());
    }
    ++state.slot;
}

} // namespace rmab
