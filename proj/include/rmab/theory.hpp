#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmab/environment.hpp"

namespace rmab {

// Closed-form system constants of the regret analysis, all computed from the
// exact model (never from estimates).
struct SystemConstants {
    std::size_t num_states = 0;
    std::size_t num_arms = 0;
    double x_max = 0.0;
    std::size_t x_card_max = 0;  // largest local state space
    double pi_min = 0.0;         // smallest local stationary mass
    double pi_hat_max = 0.0;     // max over local states of max{pi, 1 - pi}
    double lambda_max = 0.0;     // largest second-eigenvalue modulus over local chains
    double lambda_bar_min = 1.0; // 1 - lambda_max
    double symmetrized_gap_min = 1.0;
    std::vector<std::vector<double>> m_state_max;  // [arm][state] max_{x != y} hitting time
    std::vector<double> m_max;                     // [arm]
    double v_star_max = 0.0;
    std::vector<std::vector<double>> gap_sq;  // Delta_s^i = (V*_s - V_s^i)^2, [state][arm]
    std::vector<double> delta_state;          // Delta_s over suboptimal arms
    double delta = 0.0;
    std::vector<double> global_stationary;
    std::vector<std::vector<std::size_t>> sigma;  // [state] arms by decreasing V
    TrueValues values;
};

// Throws DegenerateGap when a state has two arms tied for the top value, or
// when there is no suboptimal arm at all.
SystemConstants compute_constants(const ScenarioModel& model);

struct ConditionCoefficients {
    double i_l = 0.0;
    double i_g = 0.0;
    double l = 0.0;
    double cond1 = 0.0;  // 2 / (eps^2 I_L)
    double cond2 = 0.0;  // 2 / (eps^2 I_G)
};

ConditionCoefficients condition_coefficients(const SystemConstants& c, double epsilon);

struct Hardness {
    // nullopt for the best arm of a state (not applicable).
    std::vector<std::vector<std::optional<double>>> d_bar;      // 4L / Delta_s^i
    // nullopt where Delta_s^i - 2 eps <= 0.
    std::vector<std::vector<std::optional<double>>> d_bar_max;  // 4L / (Delta_s^i - 2 eps)
    std::vector<std::vector<std::size_t>> k_sets;               // arms in K_s, per state
    std::vector<double> a;                                      // A_i
    std::vector<bool> a_uses_k_case;                            // true when i in K_s for all s
};

Hardness hardness(const SystemConstants& c, const ConditionCoefficients& cc, double epsilon);

// ceil(log4(3t/2 + 1)): cap on the number of exploitation phases by slot t.
std::uint64_t exploit_phase_cap(std::uint64_t t);

// Explicit part of the regret bound at slot t; the additive O(1) term is not
// included.
double regret_bound(const SystemConstants& c, const std::vector<double>& a, std::uint64_t t);

struct BoundReport {
    double epsilon = 0.0;
    ConditionCoefficients coefficients;
    Hardness hardness;
    std::vector<std::uint64_t> t;
    std::vector<double> bound;
    bool excludes_constant_term = true;
};

BoundReport bound_report(const SystemConstants& c, double epsilon, const std::vector<std::uint64_t>& t);

} // namespace rmab
