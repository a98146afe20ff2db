#include "dersim/mca.hpp"

#include <cmath>
#include <string>

#include "dersim/error.hpp"

namespace dersim {
namespace {

template <typename SampleAt>
Vec2 Downsample(SampleAt&& at, const McaParams& p, long n) {
  Vec2 out{0.0, 0.0};
  const long base = n * p.d_factor;
  for (int w = 0; w < p.window; ++w) {
    const double d = p.impulse[static_cast<std::size_t>(w)];
    if (d == 0.0) continue;
    const Vec2 v = at(base - w);
    out[0] += v[0] * d;
    out[1] += v[1] * d;
  }
  return out;
}

}  // namespace

void McaParams::Validate() const {
  std::vector<FieldIssue> issues;
  if (d_factor < 1) issues.push_back({"mca.d_factor", "must be >= 1"});
  if (window < 1) issues.push_back({"mca.window", "must be >= 1"});
  if (static_cast<int>(impulse.size()) != window) {
    issues.push_back({"mca.impulse", "length must equal window (" + std::to_string(window) + ")"});
  }
  for (std::size_t i = 0; i < impulse.size(); ++i)
    if (!std::isfinite(impulse[i]))
      issues.push_back({"mca.impulse[" + std::to_string(i) + "]", "must be finite"});
  if (!(beta > 0.0)) issues.push_back({"mca.beta", "must be > 0"});
  if (!(tc_p > 0.0)) issues.push_back({"mca.tc_p", "must be > 0"});
  if (!(tc_q > 0.0)) issues.push_back({"mca.tc_q", "must be > 0"});
  if (!std::isfinite(g1)) issues.push_back({"mca.g1", "must be finite"});
  if (!std::isfinite(g2)) issues.push_back({"mca.g2", "must be finite"});
  if (!(trigger_floor >= 0.0)) issues.push_back({"mca.trigger_floor", "must be >= 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

McaParams McaParams::FromController(const ScParams& sc) {
  McaParams p;
  p.tc_p = sc.kp_omega / sc.ki_omega;
  p.tc_q = sc.kp_v / sc.ki_v;
  return p;
}

VcHistory::VcHistory(std::size_t capacity) : capacity_(capacity < 1 ? 1 : capacity) {}

void VcHistory::Push(long step, const Vec2& v) {
  if (!samples_.empty() && step != last_step() + 1) {
    throw ContractError("VC history must receive consecutive steps");
  }
  if (samples_.empty()) first_ = step;
  samples_.push_back(v);
  if (samples_.size() > capacity_) {
    samples_.pop_front();
    ++first_;
  }
}

Vec2 VcHistory::At(long step) const {
  if (samples_.empty()) return {0.0, 0.0};
  if (step <= first_) return samples_.front();
  if (step >= last_step()) return samples_.back();
  return samples_[static_cast<std::size_t>(step - first_)];
}

Vec2 SemanticDownsample(const VcHistory& hist, const McaParams& p, long n) {
  return Downsample([&](long k) { return hist.At(k); }, p, n);
}

Vec2 SemanticDownsample(const std::vector<Vec2>& hist, const McaParams& p, long n) {
  if (hist.empty()) return {0.0, 0.0};
  const long last = static_cast<long>(hist.size()) - 1;
  return Downsample(
      [&](long k) { return hist[static_cast<std::size_t>(k < 0 ? 0 : (k > last ? last : k))]; }, p,
      n);
}

Vec2 PredictionError(const Vec2& rho_d, const Zeta& zeta) {
  return {rho_d[0] - zeta.p, rho_d[1] - zeta.q};
}

bool TriggerCondition(const Vec2& rho, const Vec2& vc_now, double beta, double tc_p, double tc_q,
                      double t_since_ref, double floor) {
  if (t_since_ref < 0.0) throw ContractError("time since trigger reference must be >= 0");
  const Vec2 env{std::exp(-t_since_ref / tc_p) * vc_now[0],
                 std::exp(-t_since_ref / tc_q) * vc_now[1]};
  return Norm(rho) > beta * Norm(env) + floor;
}

McaState::McaState(const McaParams& p)
    : vc_history(static_cast<std::size_t>(p.window + p.d_factor)) {}

Vec2 Reconstruct(McaState& ms, const Vec2& rho, bool triggered, double t) {
  if (triggered) {
    ms.held_recon = rho;
    ms.last_trigger = t;
  }
  return ms.held_recon;
}

Semantics UpdateSemantics(McaState& ms, double t, bool packet_arrived, double stamp,
                          const Vec2& rho, const Vec2& rho_r) {
  if (packet_arrived) {
    if (stamp > t) ++ms.clock_skew_count;
    ms.last_packet_stamp = stamp;
  }
  ms.freshness = std::max(0.0, t - ms.last_packet_stamp);
  ms.relevance = {rho[0] - rho_r[0], rho[1] - rho_r[1]};
  return {ms.freshness, ms.relevance};
}

Vec2 Feedback(const Vec2& rho_r, double g1, double g2) { return {g1 * rho_r[0], g2 * rho_r[1]}; }

Zeta Compensate(const Zeta& zeta, const Vec2& phi) { return {zeta.p + phi[0], zeta.q + phi[1]}; }

McaOutput McaStep(McaState& ms, const McaParams& p, const McaInputs& in) {
  McaOutput out;
  ms.vc_history.Push(in.step, in.vc_now);

  const Vec2 rho_d = SemanticDownsample(ms.vc_history, p, in.step / p.d_factor);
  out.rho = PredictionError(rho_d, in.zeta);
  const double since = std::max(0.0, in.t - ms.last_trigger);
  out.triggered =
      TriggerCondition(out.rho, in.vc_now, p.beta, p.tc_p, p.tc_q, since, p.trigger_floor);
  if (out.triggered) ++ms.trigger_count;
  out.recon = Reconstruct(ms, out.rho, out.triggered, in.t);
  out.phi = Feedback(out.recon, p.g1, p.g2);
  out.zeta_final = Compensate(in.zeta, out.phi);

  // Freshness and relevance. The else-branch records no reconstruction, R = 0.
  const Vec2 rho_r = out.triggered ? out.recon : out.rho;
  const Semantics sem = UpdateSemantics(ms, in.t, in.packet_arrived, in.stamp, out.rho, rho_r);
  out.freshness = sem.freshness;
  out.relevance = sem.relevance;
  return out;
}

}  // namespace dersim
