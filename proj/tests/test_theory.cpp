#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rmab/error.hpp"
#include "rmab/scenarios.hpp"
#include "rmab/theory.hpp"

using namespace rmab;

namespace {

ScenarioModel preset(const std::string& name) { return *find_builtin(name); }

double rel(double x, const oracle::Big& ref) {
    return std::abs(x - ref.convert_to<double>()) / std::abs(ref.convert_to<double>());
}

} // namespace

TEST(Constants, FirstScenario) {
    const auto c = compute_constants(preset("s1-base"));
    EXPECT_EQ(c.x_max, 14.0);
    EXPECT_NEAR(c.delta_state[0], 0.16, 1e-12);
    EXPECT_NEAR(c.delta_state[1], 1.0, 1e-12);
    EXPECT_NEAR(c.delta, 0.16, 1e-12);
    EXPECT_EQ(c.x_card_max, 2u);
    EXPECT_NEAR(c.pi_min, 0.5, 1e-12);
    EXPECT_NEAR(c.pi_hat_max, 0.5, 1e-12);
    EXPECT_NEAR(c.lambda_max, 0.5, 1e-12);
    EXPECT_NEAR(c.lambda_bar_min, 0.5, 1e-12);
    EXPECT_NEAR(c.v_star_max, 9.2, 1e-12);
    EXPECT_NEAR(c.m_state_max[0][0], 2.0, 1e-12);  // first arm, first state: lambda 0
    EXPECT_NEAR(c.m_max[2], 4.0, 1e-12);
}

TEST(Constants, SmallGapScenario) {
    EXPECT_NEAR(compute_constants(preset("s4-smallgap")).delta, 0.04, 1e-12);
}

TEST(Constants, RejectsTies) {
    const ArmChain a{oracle::matrix({{0.5, 0.5}, {0.5, 0.5}}), {1, 3}};
    const ArmChain b{oracle::matrix({{0.5, 0.5}, {0.5, 0.5}}), {3, 1}};
    try {
        compute_constants(make_scenario("tie", oracle::matrix({{1.0}}), {{a}, {b}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateGap);
    }
    EXPECT_THROW(compute_constants(make_scenario("one", oracle::matrix({{1.0}}), {{a}})), Error);
}

TEST(Constants, InvariantUnderLocalRelabeling) {
    const auto m = preset("s1-base");
    auto arms = m.arms;
    for (auto& arm : arms)
        for (auto& ch : arm) {
            const auto p = ch.transitions;
            ch.transitions = oracle::matrix({{p(1, 1), p(1, 0)}, {p(0, 1), p(0, 0)}});
            std::swap(ch.rewards[0], ch.rewards[1]);
        }
    const auto a = compute_constants(m);
    const auto b = compute_constants(make_scenario("relabeled", m.global, arms));
    EXPECT_EQ(a.x_max, b.x_max);
    EXPECT_NEAR(a.pi_min, b.pi_min, 1e-12);
    EXPECT_NEAR(a.lambda_max, b.lambda_max, 1e-12);
    EXPECT_NEAR(a.delta, b.delta, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.m_max[i], b.m_max[i], 1e-12);
    const auto ca = condition_coefficients(a, 0.05), cb = condition_coefficients(b, 0.05);
    EXPECT_NEAR(ca.l / cb.l, 1.0, 1e-12);
}

TEST(Coefficients, MatchOracle) {
    const auto c = compute_constants(preset("s1-base"));
    const auto cc = condition_coefficients(c, 0.05);
    const auto ref = oracle::theory_constants(oracle::s1(), oracle::Big("0.05"));
    EXPECT_LT(rel(cc.i_l, ref.i_l), 1e-12);
    EXPECT_LT(rel(cc.i_g, ref.i_g), 1e-12);
    EXPECT_LT(rel(cc.l, ref.l), 1e-12);
    EXPECT_LT(rel(cc.cond1, ref.cond1), 1e-12);
    EXPECT_LT(rel(cc.cond2, ref.cond2), 1e-12);
    EXPECT_NEAR(cc.i_g, 1.0 / (128.0 * std::pow(16.0 * 2.0 * 11.2, 2)), 1e-20);
    EXPECT_NEAR(cc.i_g, 6.08e-8, 0.01e-8);
}

TEST(Coefficients, StructuralRelations) {
    for (const auto& m : builtin_scenarios()) {
        const auto c = compute_constants(m);
        const auto cc = condition_coefficients(c, 0.05);
        EXPECT_GE(cc.l * cc.i_l * 16.0 * std::pow(c.v_star_max + 2.0, 2), 1.0 - 1e-12);
        EXPECT_LE(cc.i_l, cc.i_g) << m.name;
        EXPECT_NEAR(cc.l, 1.0 / (16.0 * std::pow(c.v_star_max + 2.0, 2) * cc.i_l), 1e-9 * cc.l);
    }
    EXPECT_THROW(condition_coefficients(compute_constants(preset("s1-base")), 0.0), Error);
}

TEST(Hardness, WorkedExamples) {
    const auto c = compute_constants(preset("s1-base"));
    ConditionCoefficients cc;
    cc.l = 1.0;
    cc.cond1 = 3.0;
    cc.cond2 = 7.0;
    const auto h = hardness(c, cc, 0.05);
    EXPECT_NEAR(*h.d_bar[0][1], 25.0, 1e-9);  // gap 0.4
    EXPECT_FALSE(h.d_bar[0][0].has_value());
    EXPECT_FALSE(h.d_bar[1][1].has_value());
    // Third arm in state 0: (9.2 - 2.25)^2 = 48.3 > 0.16 + 0.1.
    EXPECT_EQ(h.k_sets[0], (std::vector<std::size_t>{2}));
    // Second arm's shrunk gap (0.06) is below Delta_0.
    EXPECT_NEAR(*h.d_bar_max[0][1], 4.0 / 0.06, 1e-9);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t i = 0; i < 3; ++i)
            if (h.d_bar_max[s][i]) {
                EXPECT_LE(*h.d_bar[s][i], *h.d_bar_max[s][i]);
            }
    // Third arm is in K_s in both states: A uses the D_max case.
    EXPECT_TRUE(h.a_uses_k_case[2]);
    EXPECT_NEAR(h.a[2], std::max(7.0, std::max(*h.d_bar_max[0][2], *h.d_bar_max[1][2])), 1e-12);
    EXPECT_FALSE(h.a_uses_k_case[0]);
    EXPECT_NEAR(h.a[0], 25.0, 1e-9);
    for (double a : h.a) EXPECT_GE(a, 7.0);
}

TEST(Hardness, LargeEpsilonEmptiesK) {
    const auto c = compute_constants(preset("s1-base"));
    ConditionCoefficients cc;
    cc.l = 2.0;
    cc.cond1 = 3.0;
    cc.cond2 = 7.0;
    const auto h = hardness(c, cc, 100.0);
    for (const auto& k : h.k_sets) EXPECT_TRUE(k.empty());
    for (double a : h.a) EXPECT_NEAR(a, std::max({3.0, 7.0, 8.0 / 0.16}), 1e-9);
}

TEST(ExploitPhaseCap, MatchesDefinition) {
    // ceil(log4(1.5 t + 1)) via exact integer search.
    for (std::uint64_t t = 1; t <= 200000; ++t) {
        std::uint64_t k = 0, p = 1;
        while (2 * p < 3 * t + 2) {
            p *= 4;
            ++k;
        }
        ASSERT_EQ(exploit_phase_cap(t), k) << t;
    }
    EXPECT_EQ(exploit_phase_cap(1), 1u);   // 4^1 >= 2.5
    EXPECT_EQ(exploit_phase_cap(2), 1u);   // 4^1 >= 4 exactly
    EXPECT_EQ(exploit_phase_cap(10), 2u);  // 4^2 >= 16 exactly
    EXPECT_EQ(exploit_phase_cap(11), 3u);
    EXPECT_EQ(exploit_phase_cap(0xFFFFFFFFFFFFFFFFull), 33u);
}

TEST(Bound, MatchesArbitraryPrecisionWithFixedA) {
    const auto c = compute_constants(preset("s1-base"));
    const std::vector<double> a(3, 100.0);
    const std::vector<oracle::Big> big_a(3, oracle::Big(100));
    for (std::uint64_t t : {100ull, 1000ull, 10000ull, 123457ull})
        EXPECT_LT(rel(regret_bound(c, a, t), oracle::regret_bound(oracle::s1(), big_a, t)), 1e-9) << t;
}

TEST(Bound, TheoreticalReportMatchesOracle) {
    const auto c = compute_constants(preset("s1-base"));
    const std::vector<std::uint64_t> t{100, 1000, 10000};
    const auto report = bound_report(c, 0.05, t);
    const auto ref = oracle::theory_constants(oracle::s1(), oracle::Big("0.05"));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(report.hardness.a[i], ref.a[i]), 1e-12);
    for (std::size_t k = 0; k < t.size(); ++k)
        EXPECT_LT(rel(report.bound[k], oracle::regret_bound(oracle::s1(), ref.a, t[k])), 1e-9);
    EXPECT_TRUE(report.excludes_constant_term);
}

TEST(Bound, FirstSlotExplorationCollapsesToXmaxN) {
    const auto c = compute_constants(preset("s1-base"));
    const std::vector<double> a(3, 50.0);
    const double pi_max = 5.0 / 9.0;
    const double exploitation = 6.0 * 3 * 2 * (2.0 * 2 / 0.5 + 2.0 * 2) * pi_max * 1.0;
    EXPECT_NEAR(regret_bound(c, a, 1), 14.0 * (3.0 + exploitation), 1e-9);
    EXPECT_THROW(regret_bound(c, a, 0), Error);
}

TEST(Bound, Monotone) {
    for (const auto& m : builtin_scenarios()) {
        const auto c = compute_constants(m);
        const auto r = bound_report(c, 0.05, {});
        double prev = 0.0;
        for (std::uint64_t t = 3; t < 10000000; t = t * 3 / 2 + 1) {
            const double b = regret_bound(c, r.hardness.a, t);
            EXPECT_GE(b, prev);
            EXPECT_GE(regret_bound(c, r.hardness.a, 2 * t), b);
            prev = b;
        }
    }
}
