#include <gtest/gtest.h>

#include <cmath>

#include "rmab/error.hpp"
#include "rmab/harness.hpp"
#include "rmab/policies.hpp"
#include "rmab/scenarios.hpp"
#include "oracles.hpp"

using namespace rmab;

namespace {

ScenarioModel preset(const std::string& name) { return *find_builtin(name); }

ArmChain chain(double a, double b, double r0, double r1) {
    return {oracle::matrix({{1 - a, a}, {b, 1 - b}}), {r0, r1}};
}

// Drives a policy for `slots` slots; returns the chosen arms.
std::vector<std::size_t> drive(const ScenarioModel& m, Policy& p, std::uint64_t slots, std::uint64_t seed) {
    auto env = reset(m, seed);
    std::vector<std::size_t> arms;
    Observation obs;
    for (std::uint64_t n = 0; n < slots; ++n) {
        const auto a = p.next_action();
        step_into(m, env, a, obs);
        p.observe(to_feedback(obs));
        arms.push_back(a);
    }
    return arms;
}

PhasePolicy lemp(const ScenarioModel& m, PhasePolicy::Variant v = PhasePolicy::Variant::Lemp,
                 bool slots = false) {
    return PhasePolicy(v, calibrated_config(m), m.num_states(), m.num_arms(), slots);
}

ScenarioModel scaled(const ScenarioModel& m, double c) {
    auto arms = m.arms;
    for (auto& arm : arms)
        for (auto& ch : arm)
            for (auto& r : ch.rewards) r *= c;
    return make_scenario(m.name, m.global, arms, m.switch_mode);
}

} // namespace

TEST(PolicyNames, ParseAndPrint) {
    for (auto k : {PolicyKind::Lemp, PolicyKind::Dsee, PolicyKind::AvgBest, PolicyKind::Genie,
                   PolicyKind::UniformRandom})
        EXPECT_EQ(parse_policy(to_string(k)), k);
    EXPECT_EQ(parse_policy_list("lemp,dsee,avg-best,genie").size(), 4u);
    EXPECT_THROW(parse_policy("ucb"), Error);
    EXPECT_THROW(parse_policy_list(""), Error);
}

TEST(LempConfig, Validation) {
    LempConfig c;
    EXPECT_NO_THROW(c.validate());
    c.epsilon = 0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.growth_base = 1;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.delta_floor = -1;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Lemp, InitPlaysArmsInOrderThenFirstPhaseLengths) {
    const auto m = preset("s1-base");
    auto p = lemp(m, PhasePolicy::Variant::Lemp, true);
    const auto arms = drive(m, p, 3, 1);
    EXPECT_EQ(arms, (std::vector<std::size_t>{0, 1, 2}));
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(p.exploration_counter(i), 2u);
        ASSERT_TRUE(p.anchor(i).has_value());
        EXPECT_EQ(p.anchor(i)->arm, i);
    }
    EXPECT_EQ(p.tables()->samples(0, 0) + p.tables()->samples(1, 0), 1u);
}

TEST(Lemp, FirstExplorationHasFourSb2SlotsAndExploitLengthsGrow) {
    const auto m = preset("s1-base");
    auto p = lemp(m, PhasePolicy::Variant::Lemp, true);
    drive(m, p, 50000, 3);
    const auto& phases = p.trace()->phases;
    bool saw_first_sb2 = false;
    std::vector<std::uint64_t> exploit_lengths;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        if (phases[k].kind == PhaseKind::SB2 && !saw_first_sb2) {
            EXPECT_EQ(phases[k].length, 4u);
            saw_first_sb2 = true;
        }
        if (phases[k].kind == PhaseKind::Exploit) exploit_lengths.push_back(phases[k].length);
    }
    EXPECT_TRUE(saw_first_sb2);
    ASSERT_GE(exploit_lengths.size(), 3u);
    EXPECT_EQ(exploit_lengths[0], 2u);
    EXPECT_EQ(exploit_lengths[1], 8u);
    EXPECT_EQ(exploit_lengths[2], 32u);
}

TEST(Lemp, PhasesPartitionTheHorizon) {
    for (const auto& m : builtin_scenarios()) {
        for (auto v : {PhasePolicy::Variant::Lemp, PhasePolicy::Variant::Dsee, PhasePolicy::Variant::AvgBest}) {
            auto p = lemp(m, v, true);
            const std::uint64_t T = 30000;
            drive(m, p, T, 5);
            const auto& tr = *p.trace();
            std::uint64_t next = 1;
            for (const auto& ph : tr.phases) {
                EXPECT_EQ(ph.start, next);
                EXPECT_GT(ph.length, 0u);
                next += ph.length;
            }
            EXPECT_EQ(next, T + 1);
            ASSERT_EQ(tr.slots.size(), T);
            for (std::uint64_t n = 0; n < T; ++n) EXPECT_EQ(tr.slots[n].slot, n + 1);
        }
    }
}

TEST(Lemp, ExploitationFollowsLastGlobalState) {
    const auto m = preset("s1-base");
    auto p = lemp(m, PhasePolicy::Variant::Lemp, true);
    auto env = reset(m, 2);
    Observation obs;
    std::size_t last = env.global;
    int checked = 0, matches = 0;
    for (int n = 0; n < 100000; ++n) {
        const auto a = p.next_action();
        if (p.current_phase() == PhaseKind::Exploit && n > 50000) {
            ++checked;
            matches += a == (last == 0 ? 0u : 1u);
        }
        step_into(m, env, a, obs);
        p.observe(to_feedback(obs));
        last = obs.global;
    }
    ASSERT_GT(checked, 1000);
    EXPECT_EQ(matches, checked);  // late exploitation tracks the per-state best arm
}

TEST(Lemp, ProtocolViolations) {
    const auto m = preset("s1-base");
    auto p = lemp(m);
    auto env = reset(m, 1);
    EXPECT_THROW(p.observe(to_feedback(step(m, env, 0))), Error);  // observe before choose
    auto p2 = lemp(m);
    auto env2 = reset(m, 1);
    const auto a = p2.next_action();
    EXPECT_THROW(p2.next_action(), Error);  // choose twice
    const auto wrong = step(m, env2, (a + 1) % 3);
    try {
        p2.observe(to_feedback(wrong));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ProtocolViolation);
    }
}

TEST(ExploreConditions, ThresholdVanishesAtFirstSlot) {
    LempConfig c;
    CountTables t(1, 2);
    t.record_first_state(0);
    t.record_sample(0, 0, 1.0);
    t.record_sample(0, 1, 1.0);
    EXPECT_EQ(check_explore_conditions(c, t, 1).kind, PhaseDecision::Kind::Exploit);
}

TEST(ExploreConditions, ZeroSamplesForceExploration) {
    LempConfig c;
    CountTables t(1, 2);
    t.record_first_state(0);
    for (int k = 0; k < 5; ++k) t.record_global_transition(0, 0);
    // Arm 0 clears its threshold 25 ln 6 ~ 44.8; arm 1 has no sample at all.
    for (int k = 0; k < 50; ++k) t.record_sample(0, 0, 1.0);
    const auto d = check_explore_conditions(c, t, 6);
    EXPECT_EQ(d.kind, PhaseDecision::Kind::Explore);
    EXPECT_EQ(d.arm, 1u);
}

TEST(ExploreConditions, ThresholdArithmetic) {
    // cond1 = 10 and D^ = 25 in every cell (equal estimates), t = 7:
    // threshold = 25 ln 7 = 48.65.
    LempConfig c;
    c.cond1_coeff = 10;
    c.cond2_coeff = 1;
    c.l_eff = 1;
    c.delta_floor = 0.16;
    auto tables = [](std::uint64_t samples) {
        CountTables t(1, 2);
        t.record_first_state(0);
        for (int k = 0; k < 1000; ++k) t.record_global_transition(0, 0);
        for (std::uint64_t k = 0; k < samples; ++k) {
            t.record_sample(0, 0, 3.0);
            t.record_sample(0, 1, 3.0);
        }
        return t;
    };
    EXPECT_EQ(check_explore_conditions(c, tables(49), 7).kind, PhaseDecision::Kind::Exploit);
    const auto d = check_explore_conditions(c, tables(48), 7);
    EXPECT_EQ(d.kind, PhaseDecision::Kind::Explore);
    EXPECT_EQ(d.arm, 0u);
    EXPECT_EQ(d.coefficient, 25.0);
}

TEST(ExploreConditions, GlobalConditionPicksLowestRate) {
    LempConfig c;
    c.cond1_coeff = 1;
    c.cond2_coeff = 100;
    CountTables t(2, 2);
    t.record_first_state(0);
    for (int k = 0; k < 99; ++k) t.record_global_transition(0, 0);
    t.record_global_transition(0, 1);
    t.record_global_transition(1, 0);
    for (int k = 0; k < 200; ++k) {
        t.record_sample(0, 0, 5.0);
        t.record_sample(0, 1, 1.0);
        t.record_sample(1, 0, 5.0);
        t.record_sample(1, 1, 1.0);
    }
    // Arm 1 has the large gap, hence the smaller D^.
    const auto d = check_explore_conditions(c, t, 101);
    EXPECT_EQ(d.kind, PhaseDecision::Kind::ExploreGlobal);
    EXPECT_EQ(d.arm, 1u);
}

TEST(Dsee, CoincidesWithLempWhenGapsAreBelowFloor) {
    // All arms identical: every estimated gap is tiny, so D^ sits on the floor.
    const auto m = make_scenario("equal", oracle::matrix({{0.4, 0.6}, {0.75, 0.25}}),
                                 {{chain(0.5, 0.5, 4, 6), chain(0.5, 0.5, 8, 9)},
                                  {chain(0.5, 0.5, 4, 6), chain(0.5, 0.5, 8, 9)}});
    LempConfig c;
    c.delta_floor = 1.0;
    PhasePolicy a(PhasePolicy::Variant::Lemp, c, 2, 2), b(PhasePolicy::Variant::Dsee, c, 2, 2);
    EXPECT_EQ(drive(m, a, 20000, 4), drive(m, b, 20000, 4));
}

TEST(Dsee, SmallGapMakesDseeOversampleBadArm) {
    const auto m = preset("s4-smallgap");
    auto l = lemp(m, PhasePolicy::Variant::Lemp);
    auto d = lemp(m, PhasePolicy::Variant::Dsee);
    drive(m, l, 100000, 6);
    drive(m, d, 100000, 6);
    // Arm 3 is far from the top in both states; only DSEE keeps sampling it.
    EXPECT_GT(d.counters()->explore_slots[2], 5 * l.counters()->explore_slots[2]);
}

TEST(AvgBest, PlaysBestArmOnAverage) {
    const auto m = preset("s1-base");
    auto p = lemp(m, PhasePolicy::Variant::AvgBest, true);
    drive(m, p, 100000, 8);
    int late = 0;
    for (const auto& s : p.trace()->slots)
        if (s.kind == PhaseKind::Exploit && s.slot > 50000) {
            EXPECT_EQ(s.arm, 1u);
            ++late;
        }
    EXPECT_GT(late, 1000);
}

TEST(AvgBest, SingleStateMatchesLemp) {
    const auto m = make_scenario("one", oracle::matrix({{1.0}}),
                                 {{chain(0.5, 0.5, 4, 6)}, {chain(0.3, 0.5, 5, 7)}, {chain(0.2, 0.2, 1, 2)}});
    LempConfig c;
    c.delta_floor = 0.5;
    PhasePolicy a(PhasePolicy::Variant::Lemp, c, 1, 3), b(PhasePolicy::Variant::AvgBest, c, 1, 3);
    EXPECT_EQ(drive(m, a, 30000, 2), drive(m, b, 30000, 2));
}

TEST(Genie, WorkedExamples) {
    const auto tv = true_values(preset("s1-base"));
    EXPECT_EQ(genie_action(tv, 0), 0u);
    EXPECT_EQ(genie_action(tv, 1), 1u);
    const auto one = make_scenario("one", oracle::matrix({{1.0}}), {{chain(0.5, 0.5, 1, 2)}});
    EXPECT_EQ(genie_action(true_values(one), 0), 0u);
}

TEST(Genie, FollowsObservedState) {
    const auto m = preset("s3-threestates");
    const auto tv = true_values(m);
    auto env = reset(m, 3);
    GeniePolicy g(tv, env.global);
    std::size_t last = env.global;
    Observation obs;
    for (int n = 0; n < 1000; ++n) {
        const auto a = g.next_action();
        EXPECT_EQ(a, tv.best_arm[last]);
        step_into(m, env, a, obs);
        g.observe(to_feedback(obs));
        last = obs.global;
    }
}

TEST(UniformRandom, CoversAllArms) {
    const auto m = preset("s2-sixarms");
    UniformRandomPolicy u(6, 1);
    std::vector<int> counts(6, 0);
    for (auto a : drive(m, u, 60000, 1)) ++counts[a];
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(ArgmaxInvariance, ScalingRewardsKeepsChoices) {
    const double c = 2.0;  // power of two keeps every product exact
    for (const auto& name : {"s1-base", "s3-threestates"}) {
        const auto m = preset(name);
        const auto ms = scaled(m, c);
        auto cfg = calibrated_config(m);
        auto cfg_s = cfg;
        cfg_s.l_eff *= c * c;
        cfg_s.delta_floor *= c * c;
        cfg_s.epsilon *= c * c;
        for (auto v : {PhasePolicy::Variant::Lemp, PhasePolicy::Variant::Dsee, PhasePolicy::Variant::AvgBest}) {
            PhasePolicy a(v, cfg, m.num_states(), m.num_arms()), b(v, cfg_s, m.num_states(), m.num_arms());
            EXPECT_EQ(drive(m, a, 40000, 12), drive(ms, b, 40000, 12)) << name;
        }
        const auto env = reset(m, 12);
        GeniePolicy g(true_values(m), env.global), gs(true_values(ms), env.global);
        EXPECT_EQ(drive(m, g, 5000, 12), drive(ms, gs, 5000, 12));
    }
}

TEST(ExplorationBlock, HitThenSb2) {
    CountTables t(1, 1);
    const LocalStateId anchor{0, 0, 1};
    ExplorationBlock b(0, anchor, 2);
    auto fb = [](std::uint64_t slot, std::size_t idx, double r) {
        return Feedback{slot, 0, r, LocalStateId{0, 0, idx}, 0};
    };
    EXPECT_FALSE(b.observe(fb(1, 0, 1.0), t));
    EXPECT_TRUE(b.in_sb1());
    EXPECT_EQ(t.samples(0, 0), 0u);
    EXPECT_FALSE(b.observe(fb(2, 1, 2.0), t));  // the hit is a sample
    EXPECT_FALSE(b.in_sb1());
    EXPECT_EQ(b.sb1_length(), 2u);
    EXPECT_EQ(t.samples(0, 0), 1u);
    EXPECT_FALSE(b.observe(fb(3, 0, 1.0), t));
    EXPECT_TRUE(b.observe(fb(4, 0, 1.0), t));
    EXPECT_EQ(t.samples(0, 0), 3u);
    EXPECT_EQ(b.last_state(), (LocalStateId{0, 0, 0}));
    EXPECT_THROW(b.observe(Feedback{5, 1, 1.0, LocalStateId{0, 1, 0}, 0}, t), Error);
}

TEST(ExplorationBlock, AnchorNeedsMatchingGlobalState) {
    CountTables t(2, 1);
    ExplorationBlock b(0, LocalStateId{1, 0, 0}, 1);
    EXPECT_FALSE(b.observe(Feedback{1, 0, 1.0, LocalStateId{0, 0, 0}, 0}, t));
    EXPECT_TRUE(b.in_sb1());
}
