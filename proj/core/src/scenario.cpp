#include "dersim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dersim/error.hpp"

namespace dersim {
namespace {

using nlohmann::json;

// Walks one JSON object, recording problems against dotted field paths and
// flagging keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<FieldIssue>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {
    if (!obj_.is_object()) Issue("", "expected an object");
  }

  ~ObjectReader() = default;
  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  std::string Path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  void Issue(std::string_view key, std::string msg) {
    issues_.push_back({key.empty() ? path_ : Path(key), std::move(msg)});
  }

  const json* Find(std::string_view key) {
    used_.insert(std::string(key));
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(std::string(key));
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  bool Has(std::string_view key) { return Find(key) != nullptr; }

  double Number(std::string_view key, double fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_number()) {
      Issue(key, "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  long Integer(std::string_view key, long fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      Issue(key, "expected an integer");
      return fallback;
    }
    return v->get<long>();
  }

  std::uint64_t Unsigned(std::string_view key, std::uint64_t fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      Issue(key, "expected a non-negative integer");
      return fallback;
    }
    return v->get<std::uint64_t>();
  }

  bool Bool(std::string_view key, bool fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      Issue(key, "expected true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string String(std::string_view key, std::string fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_string()) {
      Issue(key, "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  void RejectUnknown() {
    if (!obj_.is_object()) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) Issue(it.key(), "unknown field");
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<FieldIssue>& issues_;
  std::set<std::string> used_;
};

std::string Index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

bool NumberArray(const json& v, std::size_t expected, const std::string& path,
                 std::vector<FieldIssue>& issues, std::vector<double>& out) {
  out.clear();
  if (!v.is_array() || (expected && v.size() != expected)) {
    issues.push_back({path, expected ? "expected an array of " + std::to_string(expected) +
                                           " numbers"
                                     : "expected an array of numbers"});
    return false;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      issues.push_back({Index(path, i), "expected a number"});
      return false;
    }
    out.push_back(v[i].get<double>());
  }
  return true;
}

CyberGraph ParseGraph(const json& v, const std::string& path, std::vector<FieldIssue>& issues,
                      int expected_n) {
  ObjectReader r(v, path, issues);
  const int n = static_cast<int>(r.Integer("n", expected_n));
  const bool directed = r.Bool("directed", false);
  const std::string preset = r.String("preset", "");
  const double weight = r.Number("weight", 1.0);
  std::vector<Edge> edges;
  if (const json* e = r.Find("edges")) {
    if (!e->is_array()) {
      r.Issue("edges", "expected an array of [from, to] or [from, to, weight]");
    } else {
      for (std::size_t i = 0; i < e->size(); ++i) {
        std::vector<double> vals;
        const auto& item = (*e)[i];
        if (!item.is_array() || (item.size() != 2 && item.size() != 3) ||
            !NumberArray(item, item.size(), Index(r.Path("edges"), i), issues, vals)) {
          issues.push_back({Index(r.Path("edges"), i), "expected [from, to] or [from, to, weight]"});
          continue;
        }
        edges.push_back({static_cast<int>(vals[0]), static_cast<int>(vals[1]),
                         vals.size() == 3 ? vals[2] : weight});
      }
    }
  }
  r.RejectUnknown();
  if (n < 1) {
    r.Issue("n", "must be >= 1");
    return CyberGraph::Complete(1);
  }
  if (expected_n > 0 && n != expected_n) {
    r.Issue("n", "agent count must stay " + std::to_string(expected_n));
  }
  try {
    if (preset == "complete") return CyberGraph::Complete(n, weight);
    if (preset == "chain") return CyberGraph::Chain(n, weight);
    if (!preset.empty()) {
      r.Issue("preset", "unknown preset '" + preset + "' (complete, chain)");
      return CyberGraph::Complete(n);
    }
    return CyberGraph::Build(n, edges, directed);
  } catch (const ContractError& e) {
    r.Issue("edges", e.what());
    return CyberGraph::Complete(n);
  }
}

SquareMatrix ParseNetwork(const json& v, const std::string& path, int n,
                          std::vector<FieldIssue>& issues) {
  ObjectReader r(v, path, issues);
  SquareMatrix b(static_cast<std::size_t>(n), 0.0);
  if (const json* m = r.Find("susceptance")) {
    if (!m->is_array() || static_cast<int>(m->size()) != n) {
      r.Issue("susceptance", "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                                 " matrix");
    } else {
      for (int i = 0; i < n; ++i) {
        std::vector<double> row;
        if (NumberArray((*m)[i], n, Index(r.Path("susceptance"), i), issues, row))
          for (int k = 0; k < n; ++k) b(i, k) = row[k];
      }
    }
  }
  if (const json* lines = r.Find("lines")) {
    if (!lines->is_array()) {
      r.Issue("lines", "expected an array of [bus, bus, susceptance]");
    } else {
      for (std::size_t i = 0; i < lines->size(); ++i) {
        std::vector<double> vals;
        const std::string at = Index(r.Path("lines"), i);
        if (!NumberArray((*lines)[i], 3, at, issues, vals)) continue;
        const int a = static_cast<int>(vals[0]);
        const int c = static_cast<int>(vals[1]);
        if (a < 0 || c < 0 || a >= n || c >= n || a == c) {
          issues.push_back({at, "bus index out of range or self-line"});
          continue;
        }
        b(a, c) += vals[2];
        b(c, a) += vals[2];
      }
    }
  }
  r.RejectUnknown();
  return b;
}

std::vector<Alpha> ParseAlpha(const json& v, const std::string& path,
                              std::vector<FieldIssue>& issues) {
  std::vector<Alpha> out;
  if (!v.is_array()) {
    issues.push_back({path, "expected [w, p, q] or a list of them"});
    return out;
  }
  if (!v.empty() && v[0].is_number()) {
    std::vector<double> vals;
    if (NumberArray(v, 3, path, issues, vals)) out.push_back({vals[0], vals[1], vals[2]});
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::vector<double> vals;
    if (NumberArray(v[i], 3, Index(path, i), issues, vals)) out.push_back({vals[0], vals[1], vals[2]});
  }
  return out;
}

AttackSpec ParseAttack(const json& v, const std::string& path, std::vector<FieldIssue>& issues) {
  ObjectReader r(v, path, issues);
  AttackSpec a;
  const std::string kind = r.String("kind", "");
  if (auto k = ParseAttackKind(kind)) {
    a.kind = *k;
  } else {
    r.Issue("kind", "expected one of latency, dropout, tsa, fdia");
  }
  a.start = r.Number("start", 0.0);
  a.stop = r.Number("stop", std::numeric_limits<double>::infinity());
  if (const json* e = r.Find("edges")) {
    if (!e->is_array()) {
      r.Issue("edges", "expected an array of [src, dst]");
    } else {
      for (std::size_t i = 0; i < e->size(); ++i) {
        std::vector<double> vals;
        if (NumberArray((*e)[i], 2, Index(r.Path("edges"), i), issues, vals))
          a.edges.emplace_back(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
      }
    }
  }
  if (const json* ag = r.Find("agents")) {
    std::vector<double> vals;
    if (NumberArray(*ag, 0, r.Path("agents"), issues, vals))
      for (double x : vals) a.agents.push_back(static_cast<int>(x));
  }
  a.tau = r.Number("tau", 0.0);
  a.p = r.Number("p", 0.0);
  a.n_shift = static_cast<int>(r.Integer("n_shift", 0));
  a.t_s = r.Number("t_s", 0.0);
  if (const json* al = r.Find("alpha")) a.alpha = ParseAlpha(*al, r.Path("alpha"), issues);
  a.lambda = static_cast<int>(r.Integer("lambda", 1));
  r.RejectUnknown();
  return a;
}

void ParseLoads(const json& v, const std::string& path, std::vector<BusLoad>& loads,
                std::vector<FieldIssue>& issues) {
  if (!v.is_array()) {
    issues.push_back({path, "expected one load object per bus"});
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    ObjectReader r(v[i], Index(path, i), issues);
    BusLoad load;
    load.p = r.Number("p", 0.0);
    load.q = r.Number("q", 0.0);
    if (const json* steps = r.Find("steps")) {
      if (!steps->is_array()) {
        r.Issue("steps", "expected an array of {t, p, q}");
      } else {
        for (std::size_t k = 0; k < steps->size(); ++k) {
          ObjectReader sr((*steps)[k], Index(r.Path("steps"), k), issues);
          BusLoad::Step s;
          s.t = sr.Number("t", 0.0);
          s.p = sr.Number("p", load.p);
          s.q = sr.Number("q", load.q);
          sr.RejectUnknown();
          if (!load.steps.empty() && s.t <= load.steps.back().t)
            sr.Issue("t", "load steps must be in increasing time order");
          load.steps.push_back(s);
        }
      }
    }
    r.RejectUnknown();
    loads.push_back(std::move(load));
  }
}

ScenarioConfig FromJson(const json& root) {
  std::vector<FieldIssue> issues;
  ScenarioConfig cfg;
  ObjectReader r(root, "", issues);

  cfg.name = r.String("name", cfg.name);
  cfg.description = r.String("description", "");
  const std::string mode = r.String("mode", "plant");
  if (mode == "plant") {
    cfg.mode = ScenarioMode::kPlant;
  } else if (mode == "abstract") {
    cfg.mode = ScenarioMode::kAbstract;
  } else {
    r.Issue("mode", "expected plant or abstract");
  }
  cfg.dt = r.Number("dt", cfg.dt);
  cfg.t_end = r.Number("t_end", cfg.t_end);
  cfg.seed = r.Unsigned("seed", cfg.seed);
  cfg.warmup = r.Number("warmup", 0.0);

  int n = 0;
  if (const json* g = r.Find("graph")) {
    CyberGraph graph = ParseGraph(*g, "graph", issues, 0);
    n = graph.n_agents();
    cfg.topology = TopologySchedule(std::move(graph));
  } else {
    r.Issue("graph", "required");
  }
  if (const json* sched = r.Find("topology_schedule")) {
    if (!sched->is_array()) {
      r.Issue("topology_schedule", "expected an array of {t, graph}");
    } else {
      for (std::size_t i = 0; i < sched->size(); ++i) {
        const std::string at = Index("topology_schedule", i);
        ObjectReader sr((*sched)[i], at, issues);
        const double t = sr.Number("t", 0.0);
        CyberGraph graph = CyberGraph::Complete(std::max(n, 1));
        if (const json* g = sr.Find("graph")) {
          graph = ParseGraph(*g, at + ".graph", issues, n);
        } else {
          sr.Issue("graph", "required");
        }
        sr.RejectUnknown();
        try {
          cfg.topology.Add(t, std::move(graph));
        } catch (const ContractError& e) {
          sr.Issue("t", e.what());
        }
      }
    }
  }

  if (const json* d = r.Find("droop")) {
    ObjectReader dr(*d, "droop", issues);
    auto& dp = cfg.plant.droop;
    dp.m_p = dr.Number("m_p", dp.m_p);
    dp.n_q = dr.Number("n_q", dp.n_q);
    dp.omega_nom = dr.Number("omega_nom", dp.omega_nom);
    dp.v_nom = dr.Number("v_nom", dp.v_nom);
    dr.RejectUnknown();
  }
  if (const json* d = r.Find("inner")) {
    ObjectReader ir(*d, "inner", issues);
    auto& ip = cfg.plant.inner;
    ip.kp_v = ir.Number("kp_v", ip.kp_v);
    ip.ki_v = ir.Number("ki_v", ip.ki_v);
    ip.kp_i = ir.Number("kp_i", ip.kp_i);
    ip.ki_i = ir.Number("ki_i", ip.ki_i);
    ip.omega_c = ir.Number("omega_c", ip.omega_c);
    ir.RejectUnknown();
  }
  if (const json* d = r.Find("sc")) {
    ObjectReader sr(*d, "sc", issues);
    auto& sc = cfg.sc;
    sc.c = sr.Number("c", sc.c);
    sc.kp_omega = sr.Number("kp_omega", sc.kp_omega);
    sc.ki_omega = sr.Number("ki_omega", sc.ki_omega);
    sc.kp_v = sr.Number("kp_v", sc.kp_v);
    sc.ki_v = sr.Number("ki_v", sc.ki_v);
    sr.RejectUnknown();
  }

  const McaParams derived = McaParams::FromController(cfg.sc);
  cfg.mca.tc_p = derived.tc_p;
  cfg.mca.tc_q = derived.tc_q;
  if (const json* d = r.Find("mca")) {
    ObjectReader mr(*d, "mca", issues);
    auto& m = cfg.mca;
    m.enabled = mr.Bool("enabled", m.enabled);
    m.d_factor = static_cast<int>(mr.Integer("d_factor", m.d_factor));
    m.window = static_cast<int>(mr.Integer("window", m.window));
    if (const json* imp = mr.Find("impulse")) {
      NumberArray(*imp, 0, "mca.impulse", issues, m.impulse);
    } else {
      m.impulse.assign(static_cast<std::size_t>(std::max(m.window, 1)), 0.0);
      m.impulse[0] = 1.0;
    }
    m.beta = mr.Number("beta", m.beta);
    m.g1 = mr.Number("g1", m.g1);
    m.g2 = mr.Number("g2", m.g2);
    m.tc_p = mr.Number("tc_p", m.tc_p);
    m.tc_q = mr.Number("tc_q", m.tc_q);
    m.trigger_floor = mr.Number("trigger_floor", m.trigger_floor);
    mr.RejectUnknown();
  }

  if (cfg.mode == ScenarioMode::kPlant && n > 0) {
    if (const json* net = r.Find("network")) {
      cfg.plant.network.susceptance = ParseNetwork(*net, "network", n, issues);
    } else {
      r.Issue("network", "required in plant mode");
    }
    if (const json* loads = r.Find("loads")) {
      ParseLoads(*loads, "loads", cfg.plant.network.loads, issues);
    } else {
      r.Issue("loads", "required in plant mode");
    }
    if (const json* sched = r.Find("network_schedule")) {
      if (!sched->is_array()) {
        r.Issue("network_schedule", "expected an array of {t, network}");
      } else {
        for (std::size_t i = 0; i < sched->size(); ++i) {
          const std::string at = Index("network_schedule", i);
          ObjectReader sr((*sched)[i], at, issues);
          NetworkSwitch sw;
          sw.t = sr.Number("t", 0.0);
          if (const json* nv = sr.Find("network")) {
            sw.susceptance = ParseNetwork(*nv, at + ".network", n, issues);
          } else {
            sr.Issue("network", "required");
          }
          sr.RejectUnknown();
          cfg.network_schedule.push_back(std::move(sw));
        }
      }
    }
  } else {
    r.Find("network");
    r.Find("loads");
    r.Find("network_schedule");
  }

  if (const json* atk = r.Find("attacks")) {
    if (!atk->is_array()) {
      r.Issue("attacks", "expected an array");
    } else {
      for (std::size_t i = 0; i < atk->size(); ++i)
        cfg.attacks.push_back(ParseAttack((*atk)[i], Index("attacks", i), issues));
    }
  }

  if (const json* d = r.Find("metrics")) {
    ObjectReader mr(*d, "metrics", issues);
    auto& m = cfg.metrics;
    m.disturbance_t = mr.Number("disturbance_t", m.disturbance_t);
    m.tol_freq = mr.Number("tol_freq", m.tol_freq);
    m.tol_share = mr.Number("tol_share", m.tol_share);
    m.dwell = mr.Number("dwell", m.dwell);
    m.horizon = mr.Number("horizon", m.horizon);
    mr.RejectUnknown();
  }

  if (const json* d = r.Find("abstract")) {
    ObjectReader ar(*d, "abstract", issues);
    cfg.abstract_mode.tau = ar.Number("tau", 0.0);
    if (const json* init = ar.Find("initial")) {
      if (!init->is_array()) {
        ar.Issue("initial", "expected one value or [w, p, q] per agent");
      } else {
        for (std::size_t i = 0; i < init->size(); ++i) {
          const auto& item = (*init)[i];
          if (item.is_number()) {
            const double x = item.get<double>();
            cfg.abstract_mode.initial.push_back({x, x, x});
            continue;
          }
          std::vector<double> vals;
          if (NumberArray(item, 3, Index("abstract.initial", i), issues, vals))
            cfg.abstract_mode.initial.push_back({vals[0], vals[1], vals[2]});
        }
      }
    }
    ar.RejectUnknown();
  }

  if (const json* d = r.Find("output")) {
    ObjectReader orr(*d, "output", issues);
    cfg.output.trace = orr.Bool("trace", cfg.output.trace);
    cfg.output.mca_trace = orr.Bool("mca_trace", cfg.output.mca_trace);
    cfg.output.packets = orr.Bool("packets", cfg.output.packets);
    orr.RejectUnknown();
  }
  r.RejectUnknown();

  if (issues.empty()) {
    cfg.Validate();
    return cfg;
  }
  // Report semantic problems alongside the structural ones, skipping paths
  // already flagged while reading.
  try {
    cfg.Validate();
  } catch (const ConfigError& e) {
    for (const auto& is : e.issues()) {
      const bool dup = std::any_of(issues.begin(), issues.end(),
                                   [&](const FieldIssue& f) { return f.path == is.path; });
      if (!dup) issues.push_back(is);
    }
  } catch (const Error&) {
    // The partial config may not be coherent enough to check further.
  }
  throw ConfigError(std::move(issues));
}

}  // namespace

long ScenarioConfig::n_steps() const { return std::lround(t_end / dt); }

void ScenarioConfig::Validate() const {
  std::vector<FieldIssue> issues;
  if (!(dt > 0.0) || !std::isfinite(dt)) issues.push_back({"dt", "must be > 0"});
  if (!(t_end > dt)) issues.push_back({"t_end", "must exceed dt"});
  if (!(warmup >= 0.0)) issues.push_back({"warmup", "must be >= 0"});
  if (topology.empty()) {
    issues.push_back({"graph", "required"});
    throw ConfigError(std::move(issues));
  }
  const int n = n_agents();

  if (mode == ScenarioMode::kPlant) {
    try {
      plant.network.Validate();
    } catch (const ConfigError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
    if (plant.network.n_buses() != n)
      issues.push_back({"network", "bus count must equal agent count " + std::to_string(n)});
    for (std::size_t i = 0; i < network_schedule.size(); ++i) {
      ElectricalNetwork net{network_schedule[i].susceptance, plant.network.loads};
      try {
        net.Validate();
      } catch (const ConfigError& e) {
        for (const auto& is : e.issues())
          issues.push_back({Index("network_schedule", i) + "." + is.path, is.message});
      }
      if (i > 0 && network_schedule[i].t <= network_schedule[i - 1].t)
        issues.push_back({Index("network_schedule", i) + ".t", "must increase"});
    }
    if (!(plant.inner.kp_v > 0.0 && plant.inner.ki_v > 0.0))
      issues.push_back({"inner", "kp_v and ki_v must be > 0"});
    if (!(dt / plant.inner.voltage_time_constant() < 1.0))
      issues.push_back({"inner", "dt must be shorter than the voltage time constant"});
    if (!(plant.inner.omega_c > 0.0 && dt * plant.inner.omega_c < 1.0))
      issues.push_back({"inner.omega_c", "must be > 0 with dt * omega_c < 1"});
    if (!(plant.droop.m_p >= 0.0)) issues.push_back({"droop.m_p", "must be >= 0"});
    if (!(plant.droop.n_q >= 0.0)) issues.push_back({"droop.n_q", "must be >= 0"});
  } else {
    for (const auto& e : topology.entries())
      if (e.graph.directed()) issues.push_back({"graph.directed", "abstract mode needs undirected"});
    if (!(abstract_mode.tau >= 0.0)) issues.push_back({"abstract.tau", "must be >= 0"});
    if (static_cast<int>(abstract_mode.initial.size()) != n)
      issues.push_back({"abstract.initial", "expected one entry per agent (" + std::to_string(n) + ")"});
  }

  if (!(sc.c > 0.0)) issues.push_back({"sc.c", "must be > 0"});
  if (!(sc.kp_omega >= 0.0)) issues.push_back({"sc.kp_omega", "must be >= 0"});
  if (!(sc.ki_omega > 0.0)) issues.push_back({"sc.ki_omega", "must be > 0"});
  if (!(sc.kp_v >= 0.0)) issues.push_back({"sc.kp_v", "must be >= 0"});
  if (!(sc.ki_v > 0.0)) issues.push_back({"sc.ki_v", "must be > 0"});

  try {
    mca.Validate();
  } catch (const ConfigError& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }

  for (std::size_t i = 0; i < attacks.size(); ++i) {
    const auto& a = attacks[i];
    const std::string at = Index("attacks", i);
    if (!(a.start < a.stop)) issues.push_back({at + ".stop", "must be later than start"});
    if (!(a.start >= 0.0)) issues.push_back({at + ".start", "must be >= 0"});
    if (!(a.tau >= 0.0)) issues.push_back({at + ".tau", "must be >= 0"});
    if (!(a.p >= 0.0 && a.p <= 1.0)) issues.push_back({at + ".p", "must be in [0, 1]"});
    if (!(a.t_s >= 0.0)) issues.push_back({at + ".t_s", "must be >= 0"});
    if (a.lambda != 0 && a.lambda != 1) issues.push_back({at + ".lambda", "must be 0 or 1"});
    for (std::size_t k = 0; k < a.agents.size(); ++k)
      if (a.agents[k] < 0 || a.agents[k] >= n)
        issues.push_back({Index(at + ".agents", k), "no such agent"});
    for (std::size_t k = 0; k < a.edges.size(); ++k) {
      const auto [s, d] = a.edges[k];
      if (s < 0 || d < 0 || s >= n || d >= n || s == d)
        issues.push_back({Index(at + ".edges", k), "no such link"});
    }
    if (a.kind == AttackKind::kFdia) {
      const std::size_t targets =
          !a.edges.empty() ? a.edges.size() : (!a.agents.empty() ? a.agents.size() : n);
      if (a.alpha.empty()) issues.push_back({at + ".alpha", "required for fdia"});
      else if (a.alpha.size() != 1 && a.alpha.size() != targets)
        issues.push_back({at + ".alpha", "expected 1 or " + std::to_string(targets) + " vectors"});
    }
  }

  if (!(metrics.tol_freq > 0.0)) issues.push_back({"metrics.tol_freq", "must be > 0"});
  if (!(metrics.tol_share > 0.0)) issues.push_back({"metrics.tol_share", "must be > 0"});
  if (!(metrics.dwell >= 0.0)) issues.push_back({"metrics.dwell", "must be >= 0"});
  if (!(metrics.horizon > 0.0)) issues.push_back({"metrics.horizon", "must be > 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ScenarioConfig ParseScenario(std::string_view json_text, std::string_view origin) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(origin), std::string("malformed JSON: ") + e.what());
  }
  return FromJson(root);
}

ScenarioConfig LoadScenarioFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseScenario(ss.str(), path.string());
}

ScenarioConfig LoadScenario(std::string_view ref) {
  constexpr std::string_view kPrefix = "builtin:";
  if (ref.substr(0, kPrefix.size()) == kPrefix) return LoadBuiltin(ref.substr(kPrefix.size()));
  return LoadScenarioFile(std::filesystem::path(ref));
}

ScenarioConfig LoadBuiltin(std::string_view name) {
  for (const auto& b : BuiltinScenarios())
    if (b.name == name) return ParseScenario(b.json, "builtin:" + b.name);
  throw ConfigError("scenario", "no built-in scenario named '" + std::string(name) + "'");
}

}  // namespace dersim
