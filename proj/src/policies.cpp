#include "rmab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmab/error.hpp"

namespace rmab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// base^exponent, saturating instead of wrapping.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent) {
    std::uint64_t out = 1;
    for (std::uint64_t k = 0; k < exponent; ++k) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

// T <= coeff * ln t, with ln t = 0 collapsing the threshold to zero even for
// an infinite coefficient.
bool below_threshold(double count, double coeff, double log_t) {
    const double threshold = log_t > 0.0 ? coeff * log_t : 0.0;
    return count <= threshold;
}

} // namespace

std::string to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::Lemp: return "lemp";
    case PolicyKind::Dsee: return "dsee";
    case PolicyKind::AvgBest: return "avg-best";
    case PolicyKind::Genie: return "genie";
    case PolicyKind::UniformRandom: return "uniform-random";
    }
    return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
    for (auto k : {PolicyKind::Lemp, PolicyKind::Dsee, PolicyKind::AvgBest, PolicyKind::Genie,
                   PolicyKind::UniformRandom})
        if (to_string(k) == name) return k;
    throw Error(ErrorKind::InvalidConfig, "unknown policy '" + name + "'");
}

std::vector<PolicyKind> parse_policy_list(const std::string& comma_separated) {
    std::vector<PolicyKind> out;
    std::stringstream in(comma_separated);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(parse_policy(item));
    if (out.empty()) throw Error(ErrorKind::InvalidConfig, "no policies given");
    return out;
}

std::string to_string(PhaseKind kind) {
    switch (kind) {
    case PhaseKind::Init: return "init";
    case PhaseKind::SB1: return "sb1";
    case PhaseKind::SB2: return "sb2";
    case PhaseKind::Exploit: return "exploit";
    case PhaseKind::Direct: return "direct";
    }
    return "unknown";
}

void LempConfig::validate() const {
    if (!(epsilon > 0.0) || !(delta_floor > 0.0) || !(l_eff > 0.0) || !(cond1_coeff > 0.0) ||
        !(cond2_coeff > 0.0))
        throw Error(ErrorKind::InvalidConfig, "LEMP constants must all be positive");
    if (growth_base < 2) throw Error(ErrorKind::InvalidConfig, "growth base must be at least 2");
    if (exploit_multiplier < 1)
        throw Error(ErrorKind::InvalidConfig, "exploitation multiplier must be positive");
}

Feedback to_feedback(const Observation& obs) {
    return {obs.slot, obs.arm, obs.reward, obs.local, obs.global};
}

void PolicyTrace::open(PhaseKind kind, std::uint64_t start, std::size_t arm) {
    phases.push_back({kind, start, 0, arm});
}

void PolicyTrace::extend(std::uint64_t slot, PhaseKind kind, std::size_t arm) {
    ++phases.back().length;
    if (keep_slots) slots.push_back({slot, kind, arm});
}

// ---------------------------------------------------------------------------

ExplorationBlock::ExplorationBlock(std::size_t arm, LocalStateId anchor, std::uint64_t sb2_length)
    : arm_(arm), anchor_(anchor), last_(anchor), sb2_remaining_(sb2_length) {}

bool ExplorationBlock::observe(const Feedback& fb, CountTables& tables) {
    if (fb.arm != arm_) throw Error(ErrorKind::ProtocolViolation, "exploration block fed another arm");
    last_ = fb.local;
    if (in_sb1_) {
        ++sb1_length_;
        if (!(fb.local == anchor_)) return false;
        in_sb1_ = false;
    } else {
        --sb2_remaining_;
    }
    tables.record_sample(fb.global, arm_, fb.reward, fb.local.index);
    return done();
}

// ---------------------------------------------------------------------------

PhaseDecision check_explore_conditions(const LempConfig& config, const CountTables& tables,
                                       std::uint64_t t, RateRule rule) {
    const std::size_t states = tables.num_states();
    const std::size_t arms = tables.num_arms();
    const double log_t = std::log(static_cast<double>(t));
    const auto hardness = config.hardness();
    const auto view = estimate(tables);

    std::vector<std::vector<double>> rate(states, std::vector<double>(arms));
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t i = 0; i < arms; ++i)
            rate[s][i] = rule == RateRule::Estimated ? d_hat(view, s, i, hardness)
                                                     : config.worst_case_rate();

    PhaseDecision out;
    std::optional<std::size_t> explore_arm;
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t i = 0; i < arms; ++i) {
            const double coeff = std::max(rate[s][i], config.cond1_coeff);
            if (below_threshold(static_cast<double>(tables.samples(s, i)), coeff, log_t) &&
                (!explore_arm || i < *explore_arm)) {
                explore_arm = i;
                out.coefficient = coeff;
            }
        }
    if (explore_arm) {
        out.kind = PhaseDecision::Kind::Explore;
        out.arm = *explore_arm;
        return out;
    }

    for (std::size_t s = 0; s < states; ++s) {
        if (below_threshold(static_cast<double>(tables.visits(s)), config.cond2_coeff, log_t)) {
            std::size_t arg = 0;
            double best = kInf;
            for (std::size_t i = 0; i < arms; ++i) {
                double lowest = kInf;
                for (std::size_t z = 0; z < states; ++z) lowest = std::min(lowest, rate[z][i]);
                if (lowest < best) {
                    best = lowest;
                    arg = i;
                }
            }
            out.kind = PhaseDecision::Kind::ExploreGlobal;
            out.arm = arg;
            out.coefficient = config.cond2_coeff;
            return out;
        }
    }
    out.kind = PhaseDecision::Kind::Exploit;
    return out;
}

// ---------------------------------------------------------------------------

std::size_t Policy::next_action() {
    if (pending_)
        throw Error(ErrorKind::ProtocolViolation,
                    "next_action called before the previous slot was observed");
    pending_ = choose();
    return *pending_;
}

void Policy::observe(const Feedback& fb) {
    if (!pending_ || fb.slot != next_slot_ || fb.arm != *pending_)
        throw Error(ErrorKind::ProtocolViolation,
                    "observation for slot " + std::to_string(fb.slot) + " does not answer the pending action");
    pending_.reset();
    ++next_slot_;
    fold(fb);
}

// ---------------------------------------------------------------------------

PhasePolicy::PhasePolicy(Variant variant, LempConfig config, std::size_t num_states,
                         std::size_t num_arms, bool keep_slot_trace, bool keep_sample_log)
    : variant_(variant),
      config_(config),
      num_arms_(num_arms),
      tables_(num_states, num_arms, keep_sample_log),
      n_o_(num_arms, 1),
      anchors_(num_arms),
      phase_(InitPhase{}) {
    config_.validate();
    counters_.explore_phases.assign(num_arms, 0);
    counters_.explore_slots.assign(num_arms, 0);
    counters_.max_sb1_length.assign(num_arms, 0);
    counters_.effective_coeff.assign(num_arms, 0.0);
    counters_.max_threshold_coeff.assign(num_arms, 0.0);
    trace_.keep_slots = keep_slot_trace;
    trace_.open(PhaseKind::Init, 1);
}

PhaseKind PhasePolicy::current_phase() const {
    if (std::holds_alternative<InitPhase>(phase_)) return PhaseKind::Init;
    if (const auto* block = std::get_if<ExplorationBlock>(&phase_))
        return block->in_sb1() ? PhaseKind::SB1 : PhaseKind::SB2;
    if (std::holds_alternative<ExploitPhase>(phase_)) return PhaseKind::Exploit;
    return PhaseKind::Direct;
}

std::vector<std::size_t> PhasePolicy::exploitation_arms() const {
    const std::size_t states = tables_.num_states();
    std::vector<std::size_t> best(states, 0);

    if (variant_ == Variant::AvgBest) {
        // One arm for every state: argmax_i sum_s pi^_s mu^_s^i.
        const double total = static_cast<double>(tables_.total_visits());
        double top = -kInf;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < num_arms_; ++i) {
            double score = 0.0;
            for (std::size_t s = 0; s < states && score > -kInf; ++s) {
                if (tables_.visits(s) == 0) continue;
                const auto mu = mu_hat(tables_, s, i);
                score = mu ? score + static_cast<double>(tables_.visits(s)) / total * *mu : -kInf;
            }
            if (score > top) {
                top = score;
                arg = i;
            }
        }
        std::fill(best.begin(), best.end(), arg);
        return best;
    }

    const auto view = estimate(tables_);
    for (std::size_t s = 0; s < states; ++s) {
        double top = -kInf;
        for (std::size_t i = 0; i < num_arms_; ++i)
            if (view.v[s][i] && *view.v[s][i] > top) {
                top = *view.v[s][i];
                best[s] = i;
            }
    }
    return best;
}

void PhasePolicy::start_next_phase() {
    const auto rule = variant_ == Variant::Dsee ? RateRule::WorstCase : RateRule::Estimated;
    const auto decision = check_explore_conditions(config_, tables_, played_, rule);

    if (decision.kind == PhaseDecision::Kind::Exploit) {
        ExploitPhase ex;
        ex.remaining = config_.exploit_multiplier *
                       saturating_pow(config_.growth_base, exploit_index_ - 1);
        ex.best_by_state = exploitation_arms();
        ++counters_.exploit_phases;
        trace_.open(PhaseKind::Exploit, played_ + 1);
        phase_ = std::move(ex);
        return;
    }

    const std::size_t arm = decision.arm;
    const double log_t = std::log(static_cast<double>(played_));
    const double effective =
        log_t > 0.0 ? static_cast<double>(tables_.arm_samples(arm)) / log_t : kInf;
    counters_.effective_coeff[arm] = std::max(counters_.effective_coeff[arm], effective);
    counters_.max_threshold_coeff[arm] =
        std::max(counters_.max_threshold_coeff[arm], decision.coefficient);
    ++counters_.explore_phases[arm];

    trace_.open(PhaseKind::SB1, played_ + 1, arm);
    phase_ = ExplorationBlock(arm, *anchors_[arm], saturating_pow(config_.growth_base, n_o_[arm] - 1));
}

std::size_t PhasePolicy::choose() {
    if (std::holds_alternative<Boundary>(phase_)) start_next_phase();

    if (const auto* init = std::get_if<InitPhase>(&phase_)) return init->cursor;
    if (const auto* block = std::get_if<ExplorationBlock>(&phase_)) return block->arm();
    const auto& ex = std::get<ExploitPhase>(phase_);
    return ex.best_by_state[last_global_.value_or(0)];
}

void PhasePolicy::fold(const Feedback& fb) {
    if (played_ == 0)
        tables_.record_first_state(fb.global);
    else
        tables_.record_global_transition(*last_global_, fb.global);
    last_global_ = fb.global;
    played_ = fb.slot;

    if (auto* init = std::get_if<InitPhase>(&phase_)) {
        trace_.extend(fb.slot, PhaseKind::Init, fb.arm);
        tables_.record_sample(fb.global, fb.arm, fb.reward, fb.local.index);
        anchors_[fb.arm] = fb.local;
        ++n_o_[fb.arm];
        if (++init->cursor == num_arms_) phase_ = Boundary{};
        return;
    }

    if (auto* block = std::get_if<ExplorationBlock>(&phase_)) {
        const bool was_sb1 = block->in_sb1();
        trace_.extend(fb.slot, was_sb1 ? PhaseKind::SB1 : PhaseKind::SB2, fb.arm);
        ++counters_.explore_slots[fb.arm];
        const bool finished = block->observe(fb, tables_);
        if (was_sb1) {
            // Tracks the running SB1 too, so an unfinished SB1 is covered.
            counters_.max_sb1_length[fb.arm] =
                std::max(counters_.max_sb1_length[fb.arm], block->sb1_length());
            if (!block->in_sb1() && !finished) trace_.open(PhaseKind::SB2, fb.slot + 1, fb.arm);
        }
        if (finished) {
            anchors_[fb.arm] = block->last_state();
            ++n_o_[fb.arm];
            phase_ = Boundary{};
        }
        return;
    }

    auto& ex = std::get<ExploitPhase>(phase_);
    trace_.extend(fb.slot, PhaseKind::Exploit, fb.arm);
    if (--ex.remaining == 0) {
        ++exploit_index_;
        phase_ = Boundary{};
    }
}

// ---------------------------------------------------------------------------

std::size_t genie_action(const TrueValues& values, std::size_t last_global) {
    const auto& row = values.v[last_global];
    return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

GeniePolicy::GeniePolicy(TrueValues values, std::size_t initial_state)
    : values_(std::move(values)), state_(initial_state) {}

std::size_t GeniePolicy::choose() { return genie_action(values_, state_); }

std::size_t UniformRandomPolicy::choose() {
    return std::min(num_arms_ - 1, static_cast<std::size_t>(rng_.uniform() * static_cast<double>(num_arms_)));
}

} // namespace rmab
