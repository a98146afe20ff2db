#include "dersim/plant.hpp"

#include <cmath>
#include <string>

#include "dersim/error.hpp"

namespace dersim {

std::pair<double, double> BusLoad::At(double t) const {
  double p_now = p;
  double q_now = q;
  for (const auto& s : steps) {
    if (t >= s.t) {
      p_now = s.p;
      q_now = s.q;
    }
  }
  return {p_now, q_now};
}

void ElectricalNetwork::Validate() const {
  std::vector<FieldIssue> issues;
  const auto n = susceptance.size();
  if (n == 0) issues.push_back({"network.susceptance", "empty matrix"});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::string at = "network.susceptance[" + std::to_string(r) + "][" +
                             std::to_string(c) + "]";
      const double b = susceptance(r, c);
      if (r == c && b != 0.0) issues.push_back({at, "diagonal must be zero"});
      if (b < 0.0 || !std::isfinite(b)) issues.push_back({at, "must be finite and >= 0"});
      if (b != susceptance(c, r)) issues.push_back({at, "matrix must be symmetric"});
    }
  }
  if (loads.size() != n) {
    issues.push_back({"loads", "expected one load entry per bus (" + std::to_string(n) + ")"});
  }
  // Connectivity through lines.
  if (n > 0 && issues.empty()) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const auto j = stack.back();
      stack.pop_back();
      for (std::size_t m = 0; m < n; ++m)
        if (!seen[m] && susceptance(j, m) > 0.0) {
          seen[m] = 1;
          stack.push_back(m);
        }
    }
    for (std::size_t m = 0; m < n; ++m)
      if (!seen[m]) {
        issues.push_back({"network.susceptance", "bus " + std::to_string(m) + " is isolated"});
        break;
      }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

DroopReference DroopReferences(const DerState& s, const DroopParams& dp, double d_omega,
                               double d_v) {
  DroopReference ref;
  ref.omega_star = dp.omega_nom - dp.m_p * s.p_filt + d_omega;
  ref.v_star = {dp.v_nom - dp.n_q * s.q_filt + d_v, 0.0};
  return ref;
}

VcStep VcLoopStep(const DerState& s, const Vec2& v_star, const InnerLoopParams& ilp, double dt) {
  VcStep out;
  out.vc_error = {v_star[0] - s.v_d, v_star[1] - s.v_q};
  const double rate = dt / ilp.voltage_time_constant();
  out.v_d = s.v_d + rate * out.vc_error[0];
  out.v_q = s.v_q + rate * out.vc_error[1];
  return out;
}

std::vector<PowerFlow> NetworkPowers(const std::vector<DerState>& states,
                                     const ElectricalNetwork& net, double t) {
  const std::size_t n = states.size();
  std::vector<double> mag(n);
  for (std::size_t j = 0; j < n; ++j) mag[j] = std::hypot(states[j].v_d, states[j].v_q);

  std::vector<PowerFlow> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double p = 0.0;
    double q = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double b = net.susceptance(j, m);
      if (b == 0.0) continue;
      const double dtheta = states[j].theta - states[m].theta;
      p += b * mag[j] * mag[m] * std::sin(dtheta);
      q += b * (mag[j] - mag[m] * std::cos(dtheta));
    }
    const auto [pl, ql] = net.loads[j].At(t);
    out[j].p_load = pl;
    out[j].q_load = ql;
    out[j].p = p + pl;
    out[j].q = mag[j] * q + ql;
  }
  return out;
}

double MeasureFilter(double raw, double filt_prev, double omega_c, double dt) {
  const double a = dt * omega_c;
  if (!(a < 1.0)) {
    throw ConfigError("inner.omega_c", "dt * omega_c must be < 1 for the explicit filter");
  }
  return filt_prev + a * (raw - filt_prev);
}

PlantStep IntegratePlant(const std::vector<DerState>& states,
                         const std::vector<DroopReference>& refs, const PlantModel& model,
                         double dt, double t_next) {
  const std::size_t n = states.size();
  PlantStep out;
  out.states = states;
  out.omegas.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& s = out.states[j];
    out.omegas[j] = refs[j].omega_star;
    s.theta += dt * (refs[j].omega_star - model.droop.omega_nom);
    const VcStep vc = VcLoopStep(states[j], refs[j].v_star, model.inner, dt);
    s.v_d = vc.v_d;
    s.v_q = vc.v_q;
    s.vc_error = vc.vc_error;
  }
  out.powers = NetworkPowers(out.states, model.network, t_next);
  for (std::size_t j = 0; j < n; ++j) {
    auto& s = out.states[j];
    s.p_filt = MeasureFilter(out.powers[j].p, s.p_filt, model.inner.omega_c, dt);
    s.q_filt = MeasureFilter(out.powers[j].q, s.q_filt, model.inner.omega_c, dt);
  }
  return out;
}

}  // namespace dersim
