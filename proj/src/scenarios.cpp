#include "rmab/scenarios.hpp"

namespace rmab {

namespace {

// Per global state: stay-in-1 and 2-to-1 probabilities and the two reward
// levels, one entry per arm.
struct StateSpec {
    std::vector<double> p11;
    std::vector<double> p21;
    std::vector<double> r1;
    std::vector<double> r2;
};

ScenarioModel build(std::string name, std::vector<std::vector<double>> global,
                    const std::vector<StateSpec>& states, SwitchMode mode) {
    const std::size_t arms = states.front().p11.size();
    std::vector<std::vector<ArmChain>> chains(arms);
    for (std::size_t i = 0; i < arms; ++i)
        for (const auto& st : states)
            chains[i].push_back({StochasticMatrix({{st.p11[i], 1.0 - st.p11[i]},
                                                   {st.p21[i], 1.0 - st.p21[i]}}),
                                 {st.r1[i], st.r2[i]}});
    return make_scenario(std::move(name), StochasticMatrix(global), std::move(chains), mode);
}

const std::vector<std::vector<double>> kTwoStateGlobal = {{0.4, 0.6}, {0.75, 0.25}};

} // namespace

std::vector<ScenarioModel> builtin_scenarios(SwitchMode mode) {
    std::vector<ScenarioModel> out;

    out.push_back(build("s1-base", kTwoStateGlobal,
                        {{{0.5, 0.6, 0.7}, {0.5, 0.4, 0.3}, {4, 5.8, 1}, {6, 8.2, 2}},
                         {{0.55, 0.65, 0.75}, {0.45, 0.35, 0.25}, {10, 9, 2.5}, {14, 11, 3}}},
                        mode));

    out.push_back(build("s2-sixarms", kTwoStateGlobal,
                        {{{0.5, 0.6, 0.7, 0.7, 0.6, 0.5},
                          {0.5, 0.4, 0.3, 0.3, 0.4, 0.5},
                          {4, 5.8, 1, 1.1, 0.6, 1.2},
                          {6, 8.2, 2, 1.9, 0.9, 2.2}},
                         {{0.55, 0.65, 0.75, 0.75, 0.65, 0.55},
                          {0.45, 0.35, 0.25, 0.25, 0.35, 0.45},
                          {10, 9, 2.5, 3, 2.56, 2.7},
                          {14, 11, 3, 2.8, 3.1, 3.3}}},
                        mode));

    out.push_back(build("s3-threestates",
                        {{0.85, 0.1, 0.05}, {0.08, 0.85, 0.07}, {0.06, 0.09, 0.85}},
                        {{{0.5, 0.6, 0.7}, {0.5, 0.4, 0.3}, {4, 1, 1.2}, {6, 3, 1.8}},
                         {{0.55, 0.65, 0.75}, {0.45, 0.35, 0.25}, {5, 9, 4.5}, {7, 11, 8.5}},
                         {{0.52, 0.62, 0.72}, {0.48, 0.38, 0.28}, {9.9, 9.5, 14}, {10.3, 11.5, 16}}},
                        mode));

    out.push_back(build("s4-smallgap", kTwoStateGlobal,
                        {{{0.5, 0.6, 0.7}, {0.5, 0.4, 0.3}, {4, 5.8, 1}, {6, 9.2, 2}},
                         {{0.55, 0.65, 0.75}, {0.45, 0.35, 0.25}, {10, 9, 2.5}, {14, 11, 3}}},
                        mode));
    return out;
}

std::optional<ScenarioModel> find_builtin(const std::string& name, SwitchMode mode) {
    for (auto& m : builtin_scenarios(mode))
        if (m.name == name) return std::move(m);
    return std::nullopt;
}

std::vector<std::string> builtin_names() {
    return {"s1-base", "s2-sixarms", "s3-threestates", "s4-smallgap"};
}

} // namespace rmab
