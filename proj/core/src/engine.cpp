#include "dersim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dersim/error.hpp"
#include "dersim/mca.hpp"
#include "dersim/metrics.hpp"

namespace dersim {
namespace {

bool Finite(const DerState& s, double omega) {
  return std::isfinite(omega) && std::isfinite(s.theta) && std::isfinite(s.v_d) &&
         std::isfinite(s.v_q) && std::isfinite(s.p_filt) && std::isfinite(s.q_filt) &&
         std::isfinite(s.sc_integrators[0]) && std::isfinite(s.sc_integrators[1]);
}

const SquareMatrix& SusceptanceAt(const ScenarioConfig& cfg, double t) {
  const SquareMatrix* b = &cfg.plant.network.susceptance;
  for (const auto& sw : cfg.network_schedule)
    if (t >= sw.t) b = &sw.susceptance;
  return *b;
}

Trace SimulatePlant(const ScenarioConfig& cfg) {
  const int n = cfg.n_agents();
  const double dt = cfg.dt;
  const DroopParams& dp = cfg.plant.droop;
  const long n_steps = cfg.n_steps();
  const long n_warm = std::lround(cfg.warmup / dt);

  Trace trace;
  trace.n_agents = n;
  trace.dt = dt;
  trace.omega_nom = dp.omega_nom;
  trace.rows.reserve(static_cast<std::size_t>(n_steps));

  PlantModel model = cfg.plant;
  std::vector<DerState> states(static_cast<std::size_t>(n));
  for (auto& s : states) s.v_d = dp.v_nom;
  std::vector<double> omegas(static_cast<std::size_t>(n), dp.omega_nom);

  std::vector<McaState> mca(static_cast<std::size_t>(n), McaState(cfg.mca));
  AttackPipeline pipeline(n, cfg.attacks, cfg.seed, dt, cfg.output.packets);

  std::vector<Psi> own(static_cast<std::size_t>(n));
  std::vector<DroopReference> refs(static_cast<std::size_t>(n));
  std::vector<Vec2> integ(static_cast<std::size_t>(n));
  std::vector<NeighborPsi> received;

  auto send_all = [&](long step, const std::vector<DerState>& st, const std::vector<double>& om) {
    const double t = step * dt;
    const CyberGraph& g = cfg.topology.GraphAt(t);
    for (int j = 0; j < n; ++j)
      for (int m : g.Neighbors(j))
        pipeline.Send({m, j, PackPsi(st[m], om[m], dp), t, step});
  };
  if (n_warm == 0) send_all(0, states, omegas);

  for (long k = -n_warm; k < n_steps; ++k) {
    const double t = k * dt;
    const bool live = k >= 0;
    const CyberGraph& g = cfg.topology.GraphAt(std::max(t, 0.0));
    for (int j = 0; j < n; ++j) own[j] = PackPsi(states[j], omegas[j], dp);

    TraceRow row;
    if (live) {
      row.step = k;
      row.t = t;
      row.agents.resize(static_cast<std::size_t>(n));
    }

    for (int j = 0; j < n; ++j) {
      received.clear();
      bool arrived = false;
      double stamp = 0.0;
      for (int m : g.Neighbors(j)) {
        if (!live) {
          received.push_back({m, own[m]});
          continue;
        }
        if (auto p = pipeline.Deliver(m, j, k)) {
          received.push_back({m, p->psi});
          stamp = arrived ? std::max(stamp, p->stamp) : p->stamp;
          arrived = true;
        }
      }
      const Zeta zeta = ConsensusInput(own[j], received, g, j, cfg.sc.c);

      Zeta zf = zeta;
      McaOutput mo;
      if (live && cfg.mca.enabled) {
        mo = McaStep(mca[j], cfg.mca, {k, t, states[j].vc_error, zeta, arrived, stamp});
        zf = mo.zeta_final;
      }

      const PiOutput fc = FrequencyCorrection(zf.p, omegas[j], dp.omega_nom, cfg.sc, dt,
                                              states[j].sc_integrators[0]);
      const PiOutput vc = VoltageCorrection(zf.q, cfg.sc, dt, states[j].sc_integrators[1]);
      integ[j] = {fc.integrator, vc.integrator};
      refs[j] = DroopReferences(states[j], dp, fc.correction, vc.correction);

      if (live) {
        AgentSample& a = row.agents[j];
        const DerState& s = states[j];
        a.omega = omegas[j];
        a.p_filt = s.p_filt;
        a.q_filt = s.q_filt;
        a.mp_p = own[j].mp_p;
        a.nq_q = own[j].nq_q;
        a.v_d = s.v_d;
        a.zeta_p = zeta.p;
        a.zeta_q = zeta.q;
        a.zeta_pf = zf.p;
        a.zeta_qf = zf.q;
        a.d_omega = fc.correction;
        a.d_v = vc.correction;
        a.vc_err_d = s.vc_error[0];
        a.vc_err_q = s.vc_error[1];
        a.triggered = mo.triggered;
        a.rho_p = mo.rho[0];
        a.rho_q = mo.rho[1];
        a.recon_p = mo.recon[0];
        a.recon_q = mo.recon[1];
        a.freshness = mo.freshness;
        a.relevance_p = mo.relevance[0];
        a.relevance_q = mo.relevance[1];
      }
    }

    const double t_next = (k + 1) * dt;
    model.network.susceptance = SusceptanceAt(cfg, t_next);
    PlantStep next = IntegratePlant(states, refs, model, dt, t_next);
    for (int j = 0; j < n; ++j) next.states[j].sc_integrators = integ[j];

    if (live) trace.rows.push_back(std::move(row));

    for (int j = 0; j < n; ++j) {
      if (!Finite(next.states[j], next.omegas[j])) {
        trace.divergence = Divergence{k, j, "non-finite state at t = " + std::to_string(t)};
        break;
      }
    }
    if (trace.divergence) break;

    states = std::move(next.states);
    omegas = std::move(next.omegas);
    if (k + 1 >= 0 && k + 1 < n_steps) send_all(k + 1, states, omegas);
  }

  for (const auto& m : mca) {
    trace.trigger_count += m.trigger_count;
    trace.clock_skew_count += m.clock_skew_count;
  }
  trace.packets = pipeline.stats();
  trace.packet_log = pipeline.log();
  return trace;
}

}  // namespace

Trace RunAbstractConsensus(const ScenarioConfig& cfg) {
  cfg.Validate();
  if (cfg.mode != ScenarioMode::kAbstract) {
    throw ContractError("scenario '" + cfg.name + "' is not an abstract-consensus scenario");
  }
  const int n = cfg.n_agents();
  const double dt = cfg.dt;
  const long n_steps = cfg.n_steps();
  const double lag_real = cfg.abstract_mode.tau / dt;
  const long lag = static_cast<long>(std::ceil(lag_real - 1e-9 * std::max(1.0, lag_real)));

  Trace trace;
  trace.n_agents = n;
  trace.dt = dt;
  trace.rows.reserve(static_cast<std::size_t>(n_steps));

  std::vector<Psi> psi = cfg.abstract_mode.initial;
  std::deque<std::vector<Psi>> history;  // history.front() is lag steps old
  for (long k = 0; k < n_steps; ++k) {
    const double t = k * dt;
    history.push_back(psi);
    while (static_cast<long>(history.size()) > lag + 1) history.pop_front();
    const std::vector<Psi>& old = history.front();

    TraceRow row{k, t, std::vector<AgentSample>(static_cast<std::size_t>(n))};
    for (int j = 0; j < n; ++j) {
      row.agents[j].omega = psi[j].omega;
      row.agents[j].mp_p = psi[j].mp_p;
      row.agents[j].nq_q = psi[j].nq_q;
    }
    trace.rows.push_back(std::move(row));

    const SquareMatrix& l = Laplacian(cfg.topology.GraphAt(t)).laplacian;
    std::vector<Psi> next = psi;
    for (int j = 0; j < n; ++j) {
      Psi d;
      for (int m = 0; m < n; ++m) {
        const double w = l(j, m);
        if (w == 0.0) continue;
        d.omega += w * old[m].omega;
        d.mp_p += w * old[m].mp_p;
        d.nq_q += w * old[m].nq_q;
      }
      next[j].omega -= dt * d.omega;
      next[j].mp_p -= dt * d.mp_p;
      next[j].nq_q -= dt * d.nq_q;
      if (!std::isfinite(next[j].omega) || !std::isfinite(next[j].mp_p) ||
          !std::isfinite(next[j].nq_q)) {
        trace.divergence = Divergence{k, j, "non-finite consensus state"};
      }
    }
    if (trace.divergence) break;
    psi = std::move(next);
  }
  return trace;
}

Trace Simulate(const ScenarioConfig& cfg) {
  cfg.Validate();
  if (cfg.mode == ScenarioMode::kAbstract) return RunAbstractConsensus(cfg);
  return SimulatePlant(cfg);
}

Trace RunScenario(const ScenarioConfig& cfg) {
  Trace trace = Simulate(cfg);
  if (trace.divergence) {
    throw DivergenceError(trace.divergence->step, trace.divergence->agent,
                          trace.divergence->what);
  }
  return trace;
}

std::vector<DelaySweepPoint> SweepDelay(const ScenarioConfig& cfg,
                                        const std::vector<double>& taus) {
  std::vector<DelaySweepPoint> out;
  for (double tau : taus) {
    ScenarioConfig c = cfg;
    if (c.mode == ScenarioMode::kAbstract) {
      c.abstract_mode.tau = tau;
    } else {
      bool found = false;
      for (auto& a : c.attacks)
        if (a.kind == AttackKind::kLatency) {
          a.tau = tau;
          found = true;
        }
      if (!found) {
        AttackSpec a;
        a.kind = AttackKind::kLatency;
        a.tau = tau;
        a.start = c.metrics.disturbance_t;
        c.attacks.push_back(a);
      }
    }
    const Trace trace = Simulate(c);
    const ConvergenceReport r = c.mode == ScenarioMode::kAbstract
                                    ? AssessConsensus(trace)
                                    : AssessConvergence(trace, c.metrics);
    out.push_back({tau, r.converged, r.conv_time, r.diverged});
  }
  return out;
}

}  // namespace dersim
