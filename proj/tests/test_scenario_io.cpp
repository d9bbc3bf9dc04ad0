#include <gtest/gtest.h>

#include <filesystem>

#include "rmab/error.hpp"
#include "rmab/scenario_io.hpp"
#include "rmab/scenarios.hpp"
#include "oracles.hpp"

using namespace rmab;

TEST(ScenarioIo, RoundTripIsExact) {
    for (auto mode : {SwitchMode::StationaryRedraw, SwitchMode::IndexCarryover})
        for (const auto& m : builtin_scenarios(mode)) {
            const auto text = save_scenario(m);
            const auto back = load_scenario(text);
            EXPECT_EQ(back, m) << m.name;
            EXPECT_EQ(save_scenario(back), text);
        }
}

TEST(ScenarioIo, AwkwardDoublesSurvive) {
    const auto m = make_scenario(
        "odd", oracle::matrix({{1.0 / 3.0, 2.0 / 3.0}, {0.1, 0.9}}),
        {{ArmChain{oracle::matrix({{0.7, 0.30000000000000004}, {0.2, 0.8}}), {1e-300, 12345.678901234567}},
          ArmChain{oracle::matrix({{0.5, 0.5}, {0.5, 0.5}}), {0.1, 0.2}}}});
    EXPECT_EQ(load_scenario(save_scenario(m)), m);
}

TEST(ScenarioIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "rmab_io_test.json";
    const auto m = *find_builtin("s3-threestates");
    save_scenario_file(m, path);
    EXPECT_EQ(load_scenario_file(path), m);
    std::filesystem::remove(path);
}

TEST(ScenarioIo, ArmsMayBeKeyedByState) {
    const std::string text = R"({
      "name": "keyed", "global": [[0.4, 0.6], [0.75, 0.25]],
      "arms": [ { "0": {"transitions": [[0.5,0.5],[0.5,0.5]], "rewards": [4,6]},
                  "1": {"transitions": [[0.55,0.45],[0.45,0.55]], "rewards": [10,14]} } ],
      "switch_mode": "index-carryover" })";
    const auto m = load_scenario(text);
    EXPECT_EQ(m.num_arms(), 1u);
    EXPECT_EQ(m.chain(1, 0).rewards[1], 14.0);
    EXPECT_EQ(m.switch_mode, SwitchMode::IndexCarryover);
}

TEST(ScenarioIo, Errors) {
    auto kind_of = [](const std::string& text) {
        try {
            load_scenario(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::AssertionFailure;
    };
    EXPECT_EQ(kind_of("{not json"), ErrorKind::ParseError);
    EXPECT_EQ(kind_of(R"({"name": "x"})"), ErrorKind::ParseError);
    EXPECT_EQ(kind_of(R"({"name":"x","global":[[0.5,0.4],[0.5,0.5]],
        "arms":[[{"transitions":[[1]],"rewards":[1]},{"transitions":[[1]],"rewards":[1]}]]})"),
              ErrorKind::RowNotStochastic);
    EXPECT_EQ(kind_of(R"({"name":"x","global":[[1]],
        "arms":[[{"transitions":[[1,0],[0,1]],"rewards":[1,2]}]]})"),
              ErrorKind::Reducible);
    EXPECT_EQ(kind_of(R"({"name":"x","global":[[1]],"switch_mode":"sideways",
        "arms":[[{"transitions":[[1]],"rewards":[1]}]]})"),
              ErrorKind::InvalidConfig);
}
