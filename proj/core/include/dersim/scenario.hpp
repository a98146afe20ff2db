#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dersim/attacks.hpp"
#include "dersim/cyber_graph.hpp"
#include "dersim/mca.hpp"
#include "dersim/plant.hpp"
#include "dersim/secondary_control.hpp"

namespace dersim {

enum class ScenarioMode { kPlant, kAbstract };

struct NetworkSwitch {
  double t = 0.0;
  SquareMatrix susceptance;
};

struct MetricsSettings {
  double disturbance_t = 0.0;
  double tol_freq = 1e-3;   // rad/s
  double tol_share = 0.01;  // fraction of |mean|
  double dwell = 0.5;       // s
  // Only the first `horizon` seconds after the disturbance count.
  double horizon = std::numeric_limits<double>::infinity();
};

struct AbstractSettings {
  double tau = 0.0;
  std::vector<Psi> initial;
};

struct OutputSettings {
  bool trace = true;
  bool mca_trace = true;
  bool packets = false;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::string description;
  ScenarioMode mode = ScenarioMode::kPlant;
  double dt = 1e-3;
  double t_end = 10.0;
  std::uint64_t seed = 1;
  // Attack-free, MCA-free settling run before t = 0; not recorded.
  double warmup = 0.0;

  TopologySchedule topology{CyberGraph::Complete(2)};
  PlantModel plant;
  std::vector<NetworkSwitch> network_schedule;
  ScParams sc;
  McaParams mca;
  std::vector<AttackSpec> attacks;
  MetricsSettings metrics;
  AbstractSettings abstract_mode;
  OutputSettings output;

  int n_agents() const { return topology.GraphAt(0.0).n_agents(); }
  long n_steps() const;
  // Throws ConfigError listing every problem with its field path.
  void Validate() const;
};

ScenarioConfig ParseScenario(std::string_view json_text, std::string_view origin = "<string>");
ScenarioConfig LoadScenarioFile(const std::filesystem::path& path);
// Accepts "builtin:<name>" or a file path.
ScenarioConfig LoadScenario(std::string_view ref);

struct BuiltinScenario {
  std::string name;
  std::string description;
  std::string json;
};

const std::vector<BuiltinScenario>& BuiltinScenarios();
ScenarioConfig LoadBuiltin(std::string_view name);

}  // namespace dersim
