#include "rmab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmab/error.hpp"
#include "rmab/markov.hpp"

namespace rmab {

SystemConstants compute_constants(const ScenarioModel& model) {
    SystemConstants c;
    c.num_states = model.num_states();
    c.num_arms = model.num_arms();
    c.x_max = model.x_max();
    c.values = true_values(model);
    c.global_stationary = model.global_stationary;
    c.sigma = c.values.sigma;

    c.pi_min = std::numeric_limits<double>::infinity();
    c.m_state_max.assign(c.num_arms, std::vector<double>(c.num_states, 0.0));
    c.m_max.assign(c.num_arms, 0.0);
    for (std::size_t i = 0; i < c.num_arms; ++i)
        for (std::size_t s = 0; s < c.num_states; ++s) {
            const auto& chain = model.chain(s, i).transitions;
            const auto a = analyze(chain);
            c.x_card_max = std::max(c.x_card_max, chain.size());
            for (double p : a.stationary) {
                c.pi_min = std::min(c.pi_min, p);
                c.pi_hat_max = std::max({c.pi_hat_max, p, 1.0 - p});
            }
            c.lambda_max = std::max(c.lambda_max, a.second_eigenvalue_modulus);
            c.symmetrized_gap_min = std::min(c.symmetrized_gap_min, a.symmetrized_gap);
            c.m_state_max[i][s] = a.max_hitting_time();
            c.m_max[i] = std::max(c.m_max[i], c.m_state_max[i][s]);
        }
    c.lambda_bar_min = 1.0 - c.lambda_max;

    c.gap_sq.assign(c.num_states, std::vector<double>(c.num_arms, 0.0));
    c.delta_state.assign(c.num_states, std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < c.num_states; ++s) {
        const double best = c.values.best_value(s);
        c.v_star_max = s == 0 ? best : std::max(c.v_star_max, best);
        for (std::size_t i = 0; i < c.num_arms; ++i) {
            const double gap = best - c.values.v[s][i];
            c.gap_sq[s][i] = gap * gap;
            if (i != c.values.best_arm[s]) {
                if (gap <= 0.0)
                    throw Error(ErrorKind::DegenerateGap,
                                "arms tied for the top value in global state " + std::to_string(s));
                c.delta_state[s] = std::min(c.delta_state[s], c.gap_sq[s][i]);
            }
        }
        if (!std::isfinite(c.delta_state[s]))
            throw Error(ErrorKind::DegenerateGap, "no suboptimal arm in global state " + std::to_string(s));
    }
    c.delta = *std::min_element(c.delta_state.begin(), c.delta_state.end());
    return c;
}

ConditionCoefficients condition_coefficients(const SystemConstants& c, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidConfig, "epsilon must be positive");
    const double states = static_cast<double>(c.num_states);
    const double v_plus = c.v_star_max + 2.0;
    const double x_plus = c.x_max + 2.0;

    ConditionCoefficients out;
    const double local_term =
        x_plus * x_plus * static_cast<double>(c.x_card_max) * c.pi_hat_max * states * v_plus;
    out.i_l = c.lambda_bar_min / (3072.0 * local_term * local_term);
    const double global_term = x_plus * states * v_plus;
    out.i_g = 1.0 / (128.0 * global_term * global_term);
    out.l = 1.0 / (16.0 * v_plus * v_plus) * std::max(1.0 / out.i_l, 1.0 / out.i_g);
    out.cond1 = 2.0 / (epsilon * epsilon * out.i_l);
    out.cond2 = 2.0 / (epsilon * epsilon * out.i_g);
    return out;
}

Hardness hardness(const SystemConstants& c, const ConditionCoefficients& cc, double epsilon) {
    Hardness h;
    h.d_bar.assign(c.num_states, std::vector<std::optional<double>>(c.num_arms));
    h.d_bar_max.assign(c.num_states, std::vector<std::optional<double>>(c.num_arms));
    h.k_sets.assign(c.num_states, {});

    for (std::size_t s = 0; s < c.num_states; ++s) {
        for (std::size_t i = 0; i < c.num_arms; ++i) {
            if (i == c.values.best_arm[s]) continue;
            h.d_bar[s][i] = 4.0 * cc.l / c.gap_sq[s][i];
            const double shrunk = c.gap_sq[s][i] - 2.0 * epsilon;
            if (shrunk > 0.0) h.d_bar_max[s][i] = 4.0 * cc.l / shrunk;
        }
        // Ranks 2..N of sigma whose shrunk gap still exceeds Delta_s.
        for (std::size_t rank = 1; rank < c.num_arms; ++rank) {
            const std::size_t arm = c.sigma[s][rank];
            if (c.gap_sq[s][arm] - 2.0 * epsilon > c.delta_state[s]) h.k_sets[s].push_back(arm);
        }
        std::sort(h.k_sets[s].begin(), h.k_sets[s].end());
    }

    const double floor = std::max(cc.cond1, cc.cond2);
    h.a.assign(c.num_arms, 0.0);
    h.a_uses_k_case.assign(c.num_arms, false);
    for (std::size_t i = 0; i < c.num_arms; ++i) {
        bool in_all = true;
        for (std::size_t s = 0; s < c.num_states; ++s)
            in_all = in_all && std::binary_search(h.k_sets[s].begin(), h.k_sets[s].end(), i);
        h.a_uses_k_case[i] = in_all;
        if (in_all) {
            // Membership in K_s implies d_bar_max is defined in every state.
            double worst = 0.0;
            for (std::size_t s = 0; s < c.num_states; ++s)
                if (h.d_bar_max[s][i]) worst = std::max(worst, *h.d_bar_max[s][i]);
            h.a[i] = std::max(floor, worst);
        } else {
            h.a[i] = std::max(floor, 4.0 * cc.l / c.delta);
        }
    }
    return h;
}

std::uint64_t exploit_phase_cap(std::uint64_t t) {
    // Smallest k with 4^k >= 3t/2 + 1, i.e. 2 * 4^k >= 3t + 2, in exact integers.
    const unsigned __int128 target = static_cast<unsigned __int128>(t) * 3 + 2;
    unsigned __int128 power = 2;
    std::uint64_t k = 0;
    while (power < target) {
        power *= 4;
        ++k;
    }
    return k;
}

double regret_bound(const SystemConstants& c, const std::vector<double>& a, std::uint64_t t) {
    if (t == 0) throw Error(ErrorKind::InvalidConfig, "bound needs t >= 1");
    const double log_t = std::log(static_cast<double>(t));
    const double log4 = std::log(4.0);

    double exploration = 0.0;
    for (std::size_t i = 0; i < c.num_arms; ++i) {
        const double inner = 3.0 * a[i] * log_t + 1.0;
        exploration += (4.0 * inner - 1.0) / 3.0 + c.m_max[i] * std::log(inner) / log4;
    }

    const double states = static_cast<double>(c.num_states);
    const double max_pi = *std::max_element(c.global_stationary.begin(), c.global_stationary.end());
    const double phases = static_cast<double>(exploit_phase_cap(t));
    const double exploitation =
        6.0 * static_cast<double>(c.num_arms) * states *
        (states * static_cast<double>(c.x_card_max) / c.pi_min + 2.0 * states) * max_pi * phases;

    return c.x_max * (exploration + exploitation);
}

BoundReport bound_report(const SystemConstants& c, double epsilon, const std::vector<std::uint64_t>& t) {
    BoundReport r;
    r.epsilon = epsilon;
    r.coefficients = condition_coefficients(c, epsilon);
    r.hardness = hardness(c, r.coefficients, epsilon);
    r.t = t;
    for (auto slot : t) r.bound.push_back(regret_bound(c, r.hardness.a, slot));
    return r;
}

} // namespace rmab
