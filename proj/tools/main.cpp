#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "dersim/emit.hpp"
#include "dersim/engine.hpp"
#include "dersim/error.hpp"
#include "dersim/metrics.hpp"
#include "dersim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDivergence = 2;

using dersim::ConvergenceReport;
using dersim::ScenarioConfig;
using dersim::ScenarioMode;
using dersim::Trace;

std::string Seconds(double x) {
  if (!(x == x)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", x);
  return buf;
}

ConvergenceReport Assess(const ScenarioConfig& cfg, const Trace& trace) {
  return cfg.mode == ScenarioMode::kAbstract ? dersim::AssessConsensus(trace)
                                             : dersim::AssessConvergence(trace, cfg.metrics);
}

void PrintReport(const std::string& label, const ConvergenceReport& r, long triggers) {
  std::printf("%-8s converged=%-5s conv_time=%-9s freq_err=%.3g p_spread=%.3g q_spread=%.3g "
              "triggers=%ld%s\n",
              label.c_str(), r.converged ? "true" : "false", Seconds(r.conv_time).c_str(),
              r.freq_error_final, r.p_share_spread_final, r.q_share_spread_final, triggers,
              r.diverged ? " DIVERGED" : "");
}

void WriteOutputs(const ScenarioConfig& cfg, const Trace& trace, const ConvergenceReport& r,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (cfg.output.trace) dersim::WriteTraceCsv(trace, dir / "trace.csv");
  if (cfg.output.mca_trace && cfg.mca.enabled) dersim::WriteMcaCsv(trace, dir / "mca.csv");
  if (cfg.output.packets) dersim::WritePacketCsv(trace.packet_log, dir / "packets.csv");
  dersim::WriteSummaryJson(dersim::Summarize(cfg, trace, r), dir / "summary.json");
}

int Run(const std::string& ref, const std::string& out_dir, std::optional<std::uint64_t> seed,
        bool no_mca) {
  ScenarioConfig cfg = dersim::LoadScenario(ref);
  if (seed) cfg.seed = *seed;
  if (no_mca) cfg.mca.enabled = false;
  const Trace trace = dersim::Simulate(cfg);
  const ConvergenceReport r = Assess(cfg, trace);
  WriteOutputs(cfg, trace, r, out_dir);
  PrintReport(cfg.mca.enabled ? "mca" : "no-mca", r, trace.trigger_count);
  std::printf("wrote %s\n", out_dir.c_str());
  if (trace.divergence) {
    std::fprintf(stderr, "error: simulation diverged at step %ld (agent %d): %s\n",
                 trace.divergence->step, trace.divergence->agent,
                 trace.divergence->what.c_str());
    return kExitDivergence;
  }
  return kExitOk;
}

int Compare(const std::string& ref, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  ScenarioConfig base = dersim::LoadScenario(ref);
  if (seed) base.seed = *seed;
  std::printf("scenario %s\n", base.name.c_str());
  for (bool mca : {false, true}) {
    ScenarioConfig cfg = base;
    cfg.mca.enabled = mca;
    const Trace trace = dersim::Simulate(cfg);
    const ConvergenceReport r = Assess(cfg, trace);
    PrintReport(mca ? "mca" : "no-mca", r, trace.trigger_count);
    if (!out_dir.empty()) WriteOutputs(cfg, trace, r, std::filesystem::path(out_dir) / (mca ? "mca" : "no-mca"));
  }
  return kExitOk;
}

int SweepDelay(const std::string& ref, const std::vector<double>& taus) {
  const ScenarioConfig cfg = dersim::LoadScenario(ref);
  std::printf("%-12s %-10s %-10s\n", "tau", "converged", "conv_time");
  for (const auto& p : dersim::SweepDelay(cfg, taus)) {
    std::printf("%-12.6g %-10s %-10s\n", p.tau, p.converged ? "true" : "false",
                Seconds(p.conv_time).c_str());
  }
  return kExitOk;
}

int ListScenarios() {
  for (const auto& b : dersim::BuiltinScenarios())
    std::printf("builtin:%-24s %s\n", b.name.c_str(), b.description.c_str());
  return kExitOk;
}

int ShowScenario(const std::string& name) {
  for (const auto& b : dersim::BuiltinScenarios())
    if (b.name == name) {
      std::cout << b.json;
      return kExitOk;
    }
  throw dersim::ConfigError("scenario", "no built-in scenario named '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed secondary control simulator with cyber attacks and MCA compensation"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool no_mca = false;
  std::vector<double> taus;

  auto* run = app.add_subcommand("run", "Run one scenario and write trace/summary files");
  run->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_flag("--no-mca", no_mca, "Disable MCA regardless of the scenario");

  auto* sweep = app.add_subcommand("sweep-delay", "Classify convergence for several delays");
  sweep->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  sweep->add_option("--taus", taus, "Comma-separated delays in seconds")
      ->required()
      ->delimiter(',');

  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Run with and without MCA and print both reports");
  compare->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  compare->add_option("--out", compare_out, "Write both runs under this directory");
  compare->add_option("--seed", seed, "Override the scenario seed");

  app.add_subcommand("list-scenarios", "List the built-in scenario library");

  std::string show_name;
  auto* show = app.add_subcommand("show-scenario", "Print a built-in scenario's JSON");
  show->add_option("name", show_name, "Built-in scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return Run(scenario, out_dir, seed, no_mca);
    if (*sweep) return SweepDelay(scenario, taus);
    if (*compare) return Compare(scenario, compare_out, seed);
    if (app.got_subcommand("list-scenarios")) return ListScenarios();
    if (*show) return ShowScenario(show_name);
  } catch (const dersim::ConfigError& e) {
    std::fprintf(stderr, "invalid scenario:\n");
    for (const auto& is : e.issues())
      std::fprintf(stderr, "  %s: %s\n", is.path.c_str(), is.message.c_str());
    return kExitValidation;
  } catch (const dersim::DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDivergence;
  } catch (const dersim::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
