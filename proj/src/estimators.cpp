#include "rmab/estimators.hpp"

#include <algorithm>
#include <limits>

namespace rmab {

CountTables::CountTables(std::size_t num_states, std::size_t num_arms, bool keep_sample_log)
    : num_arms_(num_arms),
      samples_(num_states, std::vector<std::uint64_t>(num_arms, 0)),
      reward_sum_(num_states, std::vector<double>(num_arms, 0.0)),
      visits_(num_states, 0),
      transitions_(num_states, std::vector<std::uint64_t>(num_states, 0)),
      keep_log_(keep_sample_log) {
    if (keep_log_) log_.resize(num_states * num_arms);
}

void CountTables::record_sample(std::size_t state, std::size_t arm, double reward) {
    ++samples_[state][arm];
    reward_sum_[state][arm] += reward;
}

void CountTables::record_sample(std::size_t state, std::size_t arm, double reward,
                                std::size_t local_index) {
    record_sample(state, arm, reward);
    if (keep_log_) log_[state * num_arms_ + arm].push_back(local_index);
}

void CountTables::record_first_state(std::size_t state) {
    ++visits_[state];
    ++total_visits_;
    last_state_ = state;
}

void CountTables::record_global_transition(std::size_t previous, std::size_t next) {
    ++transitions_[previous][next];
    ++visits_[next];
    ++total_visits_;
    last_state_ = next;
}

std::uint64_t CountTables::arm_samples(std::size_t arm) const {
    std::uint64_t total = 0;
    for (const auto& row : samples_) total += row[arm];
    return total;
}

std::optional<double> mu_hat(const CountTables& t, std::size_t state, std::size_t arm) {
    const auto n = t.samples(state, arm);
    if (n == 0) return std::nullopt;
    return t.reward_sum(state, arm) / static_cast<double>(n);
}

std::optional<double> p_hat(const CountTables& t, std::size_t from, std::size_t to) {
    const auto n = t.visits(from);
    if (n == 0) return std::nullopt;
    return static_cast<double>(t.transitions(from, to)) / static_cast<double>(n);
}

std::optional<double> EstimateView::best_value(std::size_t state) const {
    std::optional<double> best;
    for (const auto& cell : v[state]) {
        if (cell && (!best || *cell > *best)) best = cell;
    }
    return best;
}

EstimateView estimate(const CountTables& t) {
    const std::size_t states = t.num_states();
    const std::size_t arms = t.num_arms();
    EstimateView view;
    view.mu.assign(states, std::vector<std::optional<double>>(arms));
    view.p.assign(states, std::vector<std::optional<double>>(states));
    view.v.assign(states, std::vector<std::optional<double>>(arms));

    for (std::size_t s = 0; s < states; ++s) {
        for (std::size_t i = 0; i < arms; ++i) view.mu[s][i] = mu_hat(t, s, i);
        for (std::size_t next = 0; next < states; ++next) view.p[s][next] = p_hat(t, s, next);
    }
    for (std::size_t s = 0; s < states; ++s) {
        if (t.visits(s) == 0) continue;
        for (std::size_t i = 0; i < arms; ++i) {
            double value = 0.0;
            bool defined = view.mu[s][i].has_value();
            for (std::size_t next = 0; next < states && defined; ++next) {
                if (t.transitions(s, next) == 0) continue;
                if (!view.mu[next][i]) {
                    defined = false;
                    break;
                }
                value += *view.p[s][next] * *view.mu[next][i];
            }
            if (defined) view.v[s][i] = value;
        }
    }
    return view;
}

double d_hat(const EstimateView& view, std::size_t state, std::size_t arm, const HardnessParams& h) {
    const auto best = view.best_value(state);
    const auto& own = view.v[state][arm];
    // Only the cell's own undefined value forces +inf; an undefined rival
    // must not starve the other arms of exploration.
    if (!best || !own) return std::numeric_limits<double>::infinity();
    const double gap = *best - *own;
    return 4.0 * h.l_eff / std::max(h.delta_floor, gap * gap - h.epsilon);
}

double d_hat(const CountTables& t, std::size_t state, std::size_t arm, const HardnessParams& h) {
    return d_hat(estimate(t), state, arm, h);
}

} // namespace rmab
