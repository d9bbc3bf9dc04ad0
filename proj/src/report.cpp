#include "rmab/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rmab {

namespace {

using nlohmann::json;

json optional_grid(const std::vector<std::vector<std::optional<double>>>& grid) {
    json out = json::array();
    for (const auto& row : grid) {
        json r = json::array();
        for (const auto& x : row) r.push_back(x ? json(*x) : json(nullptr));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string aggregate_csv(const AggregateResult& result) {
    std::ostringstream out;
    out << "policy,t,mean_regret,std_regret,ci95,mean_regret_over_lnt\n";
    for (const auto& p : result.policies)
        for (std::size_t k = 0; k < result.grid.size(); ++k)
            out << to_string(p.policy) << ',' << result.grid[k] << ',' << format_double(p.mean[k]) << ','
                << format_double(p.stddev[k]) << ',' << format_double(p.ci95[k]) << ','
                << format_double(p.mean_over_log[k]) << '\n';
    return out.str();
}

nlohmann::json constants_json(const SystemConstants& c) {
    return {
        {"num_states", c.num_states},
        {"num_arms", c.num_arms},
        {"x_max", c.x_max},
        {"x_card_max", c.x_card_max},
        {"pi_min", c.pi_min},
        {"pi_hat_max", c.pi_hat_max},
        {"lambda_max", c.lambda_max},
        {"lambda_bar_min", c.lambda_bar_min},
        {"symmetrized_gap_min", c.symmetrized_gap_min},
        {"m_state_max", c.m_state_max},
        {"m_max", c.m_max},
        {"v_star_max", c.v_star_max},
        {"gap_sq", c.gap_sq},
        {"delta_state", c.delta_state},
        {"delta", c.delta},
        {"global_stationary", c.global_stationary},
        {"mu", c.values.mu},
        {"v", c.values.v},
        {"best_arm", c.values.best_arm},
        {"sigma", c.sigma},
    };
}

nlohmann::json bound_json(const BoundReport& r) {
    return {
        {"epsilon", r.epsilon},
        {"i_l", r.coefficients.i_l},
        {"i_g", r.coefficients.i_g},
        {"l", r.coefficients.l},
        {"cond1", r.coefficients.cond1},
        {"cond2", r.coefficients.cond2},
        {"d_bar", optional_grid(r.hardness.d_bar)},
        {"d_bar_max", optional_grid(r.hardness.d_bar_max)},
        {"k_sets", r.hardness.k_sets},
        {"a", r.hardness.a},
        {"a_uses_k_case", r.hardness.a_uses_k_case},
        {"t", r.t},
        {"bound", r.bound},
        {"excludes_constant_term", r.excludes_constant_term},
    };
}

nlohmann::json config_json(const LempConfig& c) {
    return {
        {"epsilon", c.epsilon},
        {"delta_floor", c.delta_floor},
        {"l_eff", c.l_eff},
        {"cond1", c.cond1_coeff},
        {"cond2", c.cond2_coeff},
        {"growth_base", c.growth_base},
        {"exploit_multiplier", c.exploit_multiplier},
    };
}

nlohmann::json experiment_json(const ExperimentSpec& spec, const AggregateResult& result,
                               const std::optional<BoundReport>& bound) {
    json policies = json::array();
    for (auto p : spec.policies) policies.push_back(to_string(p));

    json out;
    out["spec"] = {
        {"scenario", spec.scenario ? spec.scenario->name : ""},
        {"switch_mode", spec.scenario ? to_string(spec.scenario->switch_mode) : ""},
        {"policies", policies},
        {"horizon", spec.horizon},
        {"runs", spec.runs},
        {"base_seed", spec.base_seed},
        {"log_grid", spec.log_grid},
        {"init", spec.init.stationary ? json("stationary") : json(spec.init.global)},
        {"constants", to_string(spec.constants)},
        {"lemp", config_json(spec.lemp)},
        {"assertions", spec.assertions},
    };
    out["seeds"] = result.seeds;
    out["grid"] = result.grid;

    json aggregates = json::array();
    for (const auto& p : result.policies) {
        json final_regret = json::array();
        for (const auto& run : p.runs) final_regret.push_back(run.regret.back());
        aggregates.push_back({
            {"policy", to_string(p.policy)},
            {"mean", p.mean},
            {"std", p.stddev},
            {"ci95", p.ci95},
            {"mean_over_lnt", p.mean_over_log},
            {"min", p.min},
            {"max", p.max},
            {"final_regret_per_run", final_regret},
        });
    }
    out["aggregates"] = std::move(aggregates);
    if (bound) out["bound"] = bound_json(*bound);
    return out;
}

} // namespace rmab
