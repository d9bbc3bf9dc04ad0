#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace rmab {

// Online sufficient statistics of the learner.
//   samples[s][i]     T_s^i, exploration samples of arm i taken in global state s
//   reward_sum[s][i]  running reward total over those samples
//   visits[s]         N_s, slots spent in global state s
//   transitions[s][s'] N_{ss'}, observed one-step global transitions
class CountTables {
public:
    CountTables() = default;
    CountTables(std::size_t num_states, std::size_t num_arms, bool keep_sample_log = false);

    std::size_t num_states() const { return visits_.size(); }
    std::size_t num_arms() const { return num_arms_; }

    void record_sample(std::size_t state, std::size_t arm, double reward);
    // Local-state index accompanying a sample; only kept when logging is on.
    void record_sample(std::size_t state, std::size_t arm, double reward, std::size_t local_index);

    // First slot of a run: N[s_1] = 1, nothing to pair it with yet.
    void record_first_state(std::size_t state);
    void record_global_transition(std::size_t previous, std::size_t next);

    std::uint64_t samples(std::size_t state, std::size_t arm) const { return samples_[state][arm]; }
    double reward_sum(std::size_t state, std::size_t arm) const { return reward_sum_[state][arm]; }
    std::uint64_t visits(std::size_t state) const { return visits_[state]; }
    std::uint64_t transitions(std::size_t from, std::size_t to) const { return transitions_[from][to]; }
    std::uint64_t total_visits() const { return total_visits_; }
    std::uint64_t arm_samples(std::size_t arm) const;
    std::optional<std::size_t> last_state() const { return last_state_; }

    bool logging() const { return keep_log_; }
    // Empty when logging is off.
    const std::vector<std::size_t>& sample_log(std::size_t state, std::size_t arm) const {
        static const std::vector<std::size_t> none;
        return keep_log_ ? log_[state * num_arms_ + arm] : none;
    }

private:
    std::size_t num_arms_ = 0;
    std::vector<std::vector<std::uint64_t>> samples_;
    std::vector<std::vector<double>> reward_sum_;
    std::vector<std::uint64_t> visits_;
    std::vector<std::vector<std::uint64_t>> transitions_;
    std::uint64_t total_visits_ = 0;
    std::optional<std::size_t> last_state_;
    bool keep_log_ = false;
    std::vector<std::vector<std::size_t>> log_;
};

// Plug-in estimators; std::nullopt marks a cell without data.
std::optional<double> mu_hat(const CountTables& t, std::size_t state, std::size_t arm);
std::optional<double> p_hat(const CountTables& t, std::size_t from, std::size_t to);

struct HardnessParams {
    double l_eff = 1.0;        // L in the 4L numerator
    double delta_floor = 1.0;  // lower clamp on the squared-gap denominator
    double epsilon = 0.05;     // slack subtracted from the estimated squared gap
};

// Snapshot of every estimate at one instant.
struct EstimateView {
    std::vector<std::vector<std::optional<double>>> mu;  // [state][arm]
    std::vector<std::vector<std::optional<double>>> p;   // [state][next]
    std::vector<std::vector<std::optional<double>>> v;   // [state][arm]

    // max over the defined v[state][i]; nullopt when none is defined.
    std::optional<double> best_value(std::size_t state) const;
};

// V^_s^i = sum_s' p^_{ss'} mu^_{s'}^i. Defined when N_s > 0, mu^_s^i is defined
// and every mu^_{s'}^i with an observed s -> s' transition is defined.
EstimateView estimate(const CountTables& t);

// 4 L / max{delta_floor, (V^*_s - V^_s^i)^2 - epsilon}; +inf when a needed value
// is undefined.
double d_hat(const EstimateView& view, std::size_t state, std::size_t arm, const HardnessParams& h);
double d_hat(const CountTables& t, std::size_t state, std::size_t arm, const HardnessParams& h);

} // namespace rmab
