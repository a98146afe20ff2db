#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "dersim/error.hpp"
#include "dersim/scenario.hpp"

using namespace dersim;

namespace {

const char* kMinimal = R"({
  "name": "mini",
  "graph": {"n": 3, "preset": "chain"},
  "network": {"lines": [[0, 1, 2.0], [1, 2, 2.0]]},
  "loads": [{"p": 1000, "q": 100}, {"p": 1000, "q": 100}, {"p": 1000, "q": 100}]
})";

std::vector<std::string> Paths(const ConfigError& e) {
  std::vector<std::string> out;
  for (const auto& i : e.issues()) out.push_back(i.path);
  return out;
}

bool HasPath(const ConfigError& e, const std::string& p) {
  const auto v = Paths(e);
  return std::find(v.begin(), v.end(), p) != v.end();
}

}  // namespace

TEST(Scenario, MinimalDefaults) {
  const auto cfg = ParseScenario(kMinimal);
  EXPECT_EQ(cfg.name, "mini");
  EXPECT_EQ(cfg.n_agents(), 3);
  EXPECT_EQ(cfg.dt, 1e-3);
  EXPECT_EQ(cfg.n_steps(), 10000);
  EXPECT_FALSE(cfg.mca.enabled);
  EXPECT_EQ(cfg.plant.network.susceptance(0, 1), 2.0);
  EXPECT_EQ(cfg.plant.network.susceptance(0, 2), 0.0);
  // MCA time constants follow the controller gains
  EXPECT_DOUBLE_EQ(cfg.mca.tc_p, cfg.sc.kp_omega / cfg.sc.ki_omega);
  cfg.Validate();
}

TEST(Scenario, CommentsAreAllowed) {
  const std::string text = std::string("// header\n") + kMinimal;
  EXPECT_EQ(ParseScenario(text).name, "mini");
}

TEST(Scenario, UnknownKeysAreRejectedWithPath) {
  try {
    ParseScenario(R"({"graph": {"n": 2, "preset": "chain", "colour": 1},
                      "network": {"lines": [[0, 1, 1.0]]},
                      "loads": [{"p": 1, "q": 1}, {"p": 1, "q": 1}], "sc": {"kp": 1}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(HasPath(e, "graph.colour"));
    EXPECT_TRUE(HasPath(e, "sc.kp"));
  }
}

TEST(Scenario, ReportsEveryProblem) {
  try {
    ParseScenario(R"({"dt": -1, "graph": {"n": 2, "preset": "chain"},
                      "network": {"lines": [[0, 1, 1.0]]},
                      "loads": [{"p": 1, "q": 1}, {"p": 1, "q": 1}],
                      "sc": {"ki_v": 0},
                      "mca": {"beta": 0},
                      "attacks": [{"kind": "dropout", "p": 2.0}, {"kind": "warp"}]})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(HasPath(e, "dt"));
    EXPECT_TRUE(HasPath(e, "sc.ki_v"));
    EXPECT_TRUE(HasPath(e, "mca.beta"));
    EXPECT_TRUE(HasPath(e, "attacks[0].p"));
    EXPECT_TRUE(HasPath(e, "attacks[1].kind"));
  }
}

TEST(Scenario, MalformedJsonIsConfigError) {
  EXPECT_THROW(ParseScenario("{ not json"), ConfigError);
}

TEST(Scenario, AttackBlock) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "attacks": [
    {"kind": "latency", "tau": 0.05, "start": 5.0, "stop": 8.0, "edges": [[0, 1]]},
    {"kind": "fdia", "agents": [2], "alpha": [[0.1, 0.0, 0.0]], "lambda": 1},
    {"kind": "tsa", "n_shift": -3, "t_s": 0.002}])");
  const auto cfg = ParseScenario(text);
  ASSERT_EQ(cfg.attacks.size(), 3u);
  EXPECT_EQ(cfg.attacks[0].kind, AttackKind::kLatency);
  EXPECT_EQ(cfg.attacks[0].tau, 0.05);
  EXPECT_EQ(cfg.attacks[0].stop, 8.0);
  EXPECT_EQ(cfg.attacks[0].edges.front(), std::make_pair(0, 1));
  EXPECT_EQ(cfg.attacks[1].agents, std::vector<int>{2});
  EXPECT_EQ(cfg.attacks[2].n_shift, -3);
}

TEST(Scenario, SchedulesAndLoads) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "topology_schedule": [{"t": 2.0, "graph": {"n": 3, "preset": "complete"}}],
    "network_schedule": [{"t": 3.0, "network": {"lines": [[0, 1, 1.0], [0, 2, 1.0]]}}])");
  const auto cfg = ParseScenario(text);
  EXPECT_EQ(cfg.topology.GraphAt(2.5), CyberGraph::Complete(3));
  ASSERT_EQ(cfg.network_schedule.size(), 1u);
  EXPECT_EQ(cfg.network_schedule[0].susceptance(0, 2), 1.0);
}

TEST(Scenario, AbstractModeNeedsInitialPerAgent) {
  const char* text = R"({"mode": "abstract", "graph": {"n": 2, "preset": "chain"},
                         "abstract": {"tau": 0.1, "initial": [[1, 0, 0]]}})";
  try {
    ParseScenario(text);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(HasPath(e, "abstract.initial"));
  }
}

TEST(Scenario, LoadFromFileAndBuiltin) {
  const auto dir = std::filesystem::temp_directory_path() / "dersim_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "mini.json";
  std::ofstream(path) << kMinimal;
  EXPECT_EQ(LoadScenario(path.string()).name, "mini");
  EXPECT_THROW(LoadScenario((dir / "missing.json").string()), Error);
  EXPECT_EQ(LoadScenario("builtin:attack-free-k5").name, "attack-free-k5");
  EXPECT_THROW(LoadScenario("builtin:nope"), ConfigError);
}

TEST(Scenario, EveryBuiltinParsesAndValidates) {
  ASSERT_GE(BuiltinScenarios().size(), 10u);
  for (const auto& b : BuiltinScenarios()) {
    SCOPED_TRACE(b.name);
    const auto cfg = LoadBuiltin(b.name);
    EXPECT_EQ(cfg.name, b.name);
    EXPECT_FALSE(b.description.empty());
    cfg.Validate();
  }
}
