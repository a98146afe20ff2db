#include "dersim/secondary_control.hpp"

#include <string>

#include "dersim/error.hpp"

namespace dersim {

Psi PackPsi(const DerState& s, double omega_j, const DroopParams& dp) {
  return {omega_j, dp.m_p * s.p_filt, dp.n_q * s.q_filt};
}

Zeta ConsensusInput(const Psi& own, const std::vector<NeighborPsi>& received,
                    const CyberGraph& g, int j, double c) {
  std::vector<char> seen(static_cast<std::size_t>(g.n_agents()), 0);
  double sum_p = 0.0;
  double sum_q = 0.0;
  for (const auto& r : received) {
    if (r.agent < 0 || r.agent >= g.n_agents() || g.weight(j, r.agent) <= 0.0) {
      throw ContractError("agent " + std::to_string(j) + " received data from non-neighbour " +
                          std::to_string(r.agent));
    }
    if (seen[r.agent]++) {
      throw ContractError("duplicate data from neighbour " + std::to_string(r.agent));
    }
    const double e = g.weight(j, r.agent);
    sum_p += e * ((r.psi.omega - own.omega) + (r.psi.mp_p - own.mp_p));
    sum_q += e * (r.psi.nq_q - own.nq_q);
  }
  return {c * sum_p, c * sum_q};
}

PiOutput FrequencyCorrection(double zeta_p, double omega_j, double omega_nom,
                             const ScParams& params, double dt, double integ) {
  const double u = (omega_nom - omega_j) + zeta_p;
  PiOutput out;
  out.integrator = integ + params.ki_omega * u * dt;
  out.correction = params.kp_omega * u + out.integrator;
  return out;
}

PiOutput VoltageCorrection(double zeta_q, const ScParams& params, double dt, double integ) {
  PiOutput out;
  out.integrator = integ + params.ki_v * zeta_q * dt;
  out.correction = params.kp_v * zeta_q + out.integrator;
  return out;
}

}  // namespace dersim
