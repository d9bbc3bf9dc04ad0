#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rmab/environment.hpp"
#include "rmab/estimators.hpp"
#include "rmab/random.hpp"

namespace rmab {

enum class PolicyKind { Lemp, Dsee, AvgBest, Genie, UniformRandom };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);
std::vector<PolicyKind> parse_policy_list(const std::string& comma_separated);

struct LempConfig {
    double epsilon = 0.05;
    double delta_floor = 0.16;  // known lower bound on the squared value gap
    double l_eff = 1.0;
    double cond1_coeff = 2.0;   // floor on the per-cell exploration rate
    double cond2_coeff = 2.0;   // global-state visit rate
    std::uint64_t growth_base = 4;
    std::uint64_t exploit_multiplier = 2;

    void validate() const;
    HardnessParams hardness() const { return {l_eff, delta_floor, epsilon}; }
    double worst_case_rate() const { return 4.0 * l_eff / delta_floor; }
};

// The policy-visible part of an Observation (no counterfactual rewards).
struct Feedback {
    std::uint64_t slot = 0;
    std::size_t arm = 0;
    double reward = 0.0;
    LocalStateId local;
    std::size_t global = 0;
};

Feedback to_feedback(const Observation& obs);

enum class PhaseKind : std::uint8_t { Init, SB1, SB2, Exploit, Direct };

std::string to_string(PhaseKind kind);

struct SlotRecord {
    std::uint64_t slot = 0;
    PhaseKind kind = PhaseKind::Direct;
    std::size_t arm = 0;
};

struct PhaseRecord {
    PhaseKind kind = PhaseKind::Direct;
    std::uint64_t start = 0;
    std::uint64_t length = 0;
    std::size_t arm = 0;  // explored arm; unused for Init/Exploit
};

struct PolicyTrace {
    bool keep_slots = false;
    std::vector<SlotRecord> slots;
    std::vector<PhaseRecord> phases;

    void open(PhaseKind kind, std::uint64_t start, std::size_t arm = 0);
    void extend(std::uint64_t slot, PhaseKind kind, std::size_t arm);
};

// Phase bookkeeping exposed to the harness for the counting-law checks.
struct PhaseCounters {
    std::uint64_t exploit_phases = 0;             // started
    std::vector<std::uint64_t> explore_phases;    // started, per arm (init excluded)
    std::vector<std::uint64_t> explore_slots;     // SB1 + SB2 slots, per arm
    std::vector<std::uint64_t> max_sb1_length;    // per arm, hit slot included
    // max over phase starts tau of (samples of the arm at tau) / ln tau
    std::vector<double> effective_coeff;
    // max over phase starts of the per-cell rate coefficient max{D^, cond1}
    std::vector<double> max_threshold_coeff;
};

// SB1 then SB2 for one arm: play until the anchor local state reappears
// (that hit is recorded as a sample), then record sb2_length further samples.
class ExplorationBlock {
public:
    ExplorationBlock(std::size_t arm, LocalStateId anchor, std::uint64_t sb2_length);

    std::size_t arm() const { return arm_; }
    bool in_sb1() const { return in_sb1_; }
    bool done() const { return !in_sb1_ && sb2_remaining_ == 0; }
    std::uint64_t sb1_length() const { return sb1_length_; }
    const LocalStateId& last_state() const { return last_; }

    // Folds one slot played on arm(); returns true when the block completes.
    bool observe(const Feedback& fb, CountTables& tables);

private:
    std::size_t arm_;
    LocalStateId anchor_;
    LocalStateId last_;
    bool in_sb1_ = true;
    std::uint64_t sb1_length_ = 0;
    std::uint64_t sb2_remaining_;
};

enum class RateRule {
    Estimated,  // D^ from the current estimates
    WorstCase,  // 4 L / delta_floor for every cell
};

struct PhaseDecision {
    enum class Kind { Explore, ExploreGlobal, Exploit };
    Kind kind = Kind::Exploit;
    std::size_t arm = 0;
    double coefficient = 0.0;  // max{rate, cond1} of the triggering cell
};

// t is the number of slots played so far; natural logarithm.
PhaseDecision check_explore_conditions(const LempConfig& config, const CountTables& tables,
                                       std::uint64_t t, RateRule rule = RateRule::Estimated);

// Arm selection protocol: next_action() then observe() for the same slot,
// strictly alternating. Violations throw ProtocolViolation.
class Policy {
public:
    virtual ~Policy() = default;

    std::size_t next_action();
    void observe(const Feedback& fb);

    virtual PhaseKind current_phase() const { return PhaseKind::Direct; }
    virtual const PhaseCounters* counters() const { return nullptr; }
    virtual const PolicyTrace* trace() const { return nullptr; }
    virtual const CountTables* tables() const { return nullptr; }

protected:
    virtual std::size_t choose() = 0;
    virtual void fold(const Feedback& fb) = 0;

private:
    std::uint64_t next_slot_ = 1;
    std::optional<std::size_t> pending_;
};

// LEMP and the two baselines sharing its phase machine.
class PhasePolicy final : public Policy {
public:
    enum class Variant { Lemp, Dsee, AvgBest };

    PhasePolicy(Variant variant, LempConfig config, std::size_t num_states, std::size_t num_arms,
                bool keep_slot_trace = false, bool keep_sample_log = false);

    PhaseKind current_phase() const override;
    const PhaseCounters* counters() const override { return &counters_; }
    const PolicyTrace* trace() const override { return &trace_; }
    const CountTables* tables() const override { return &tables_; }

    std::uint64_t exploration_counter(std::size_t arm) const { return n_o_[arm]; }
    const std::optional<LocalStateId>& anchor(std::size_t arm) const { return anchors_[arm]; }

protected:
    std::size_t choose() override;
    void fold(const Feedback& fb) override;

private:
    struct InitPhase {
        std::size_t cursor = 0;
    };
    struct ExploitPhase {
        std::uint64_t remaining = 0;
        std::vector<std::size_t> best_by_state;
    };
    struct Boundary {};

    void start_next_phase();
    std::vector<std::size_t> exploitation_arms() const;

    Variant variant_;
    LempConfig config_;
    std::size_t num_arms_;
    CountTables tables_;
    std::vector<std::uint64_t> n_o_;  // starts at 1, bumped by the init play
    std::uint64_t exploit_index_ = 1;  // 1-based index of the next exploitation phase
    std::vector<std::optional<LocalStateId>> anchors_;
    std::variant<InitPhase, ExplorationBlock, ExploitPhase, Boundary> phase_;
    std::optional<std::size_t> last_global_;
    std::uint64_t played_ = 0;
    PhaseCounters counters_;
    PolicyTrace trace_;
};

// Myopic comparator: argmax_i V_{s}^i for the last observed global state.
class GeniePolicy final : public Policy {
public:
    // initial_state conditions the very first choice (no observation yet).
    GeniePolicy(TrueValues values, std::size_t initial_state);

protected:
    std::size_t choose() override;
    void fold(const Feedback& fb) override { state_ = fb.global; }

private:
    TrueValues values_;
    std::size_t state_;
};

class UniformRandomPolicy final : public Policy {
public:
    UniformRandomPolicy(std::size_t num_arms, std::uint64_t seed) : num_arms_(num_arms), rng_(seed) {}

protected:
    std::size_t choose() override;
    void fold(const Feedback&) override {}

private:
    std::size_t num_arms_;
    RandomStream rng_;
};

std::size_t genie_action(const TrueValues& values, std::size_t last_global);

} // namespace rmab
