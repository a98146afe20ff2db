#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "dersim/secondary_control.hpp"
#include "dersim/types.hpp"

namespace dersim {

struct McaParams {
  bool enabled = false;
  int d_factor = 10;
  int window = 1;
  std::vector<double> impulse{1.0};  // length == window
  double beta = 1.5;
  double tc_p = 1e-3;  // H1 kp/ki
  double tc_q = 1e-2;  // H2 kp/ki
  double g1 = 0.3;
  double g2 = 0.5;
  // Absolute slack added to the right side of the trigger test so that
  // round-off at an exact steady state does not fire.
  double trigger_floor = 1e-9;

  // Throws ConfigError with "mca.*" paths.
  void Validate() const;
  static McaParams FromController(const ScParams& sc);
};

// Per-agent record of VC-loop errors indexed by absolute step.
class VcHistory {
 public:
  explicit VcHistory(std::size_t capacity = 1);

  void Push(long step, const Vec2& v);
  // Sample at `step`, clamped into the retained range.
  Vec2 At(long step) const;
  bool empty() const { return samples_.empty(); }
  long first_step() const { return first_; }
  long last_step() const { return first_ + static_cast<long>(samples_.size()) - 1; }

 private:
  std::size_t capacity_;
  long first_ = 0;
  std::deque<Vec2> samples_;
};

// rho^D[n] = sum_w hist[n D - w] delta[w]; indices before the first retained
// sample read the earliest one.
Vec2 SemanticDownsample(const VcHistory& hist, const McaParams& p, long n);
Vec2 SemanticDownsample(const std::vector<Vec2>& hist, const McaParams& p, long n);

// [rho_d - zeta_p, rho_q - zeta_q]
Vec2 PredictionError(const Vec2& rho_d, const Zeta& zeta);

// ||rho|| > beta ||exp(-t_since_ref / tc) (.) vc_now|| + floor, with one time
// constant per axis.
bool TriggerCondition(const Vec2& rho, const Vec2& vc_now, double beta, double tc_p, double tc_q,
                      double t_since_ref, double floor = 0.0);
inline bool TriggerCondition(const Vec2& rho, const Vec2& vc_now, double beta, double t_c,
                             double t_since_ref) {
  return TriggerCondition(rho, vc_now, beta, t_c, t_c, t_since_ref);
}

struct McaState {
  explicit McaState(const McaParams& p = {});

  VcHistory vc_history;
  Vec2 held_recon{0.0, 0.0};
  double last_trigger = 0.0;
  double freshness = 0.0;
  Vec2 relevance{std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
  double last_packet_stamp = 0.0;
  long trigger_count = 0;
  long clock_skew_count = 0;
};

// Sample-and-hold update; returns the held value.
Vec2 Reconstruct(McaState& ms, const Vec2& rho, bool triggered, double t);

struct Semantics {
  double freshness = 0.0;
  Vec2 relevance{0.0, 0.0};
};

// S := stamp on arrival; F = max(t - S, 0); R = rho - rho_r. A stamp later
// than t is counted in clock_skew_count.
Semantics UpdateSemantics(McaState& ms, double t, bool packet_arrived, double stamp,
                          const Vec2& rho, const Vec2& rho_r);

Vec2 Feedback(const Vec2& rho_r, double g1, double g2);
Zeta Compensate(const Zeta& zeta, const Vec2& phi);

struct McaInputs {
  long step = 0;
  double t = 0.0;
  Vec2 vc_now{0.0, 0.0};
  Zeta zeta;
  bool packet_arrived = false;
  double stamp = 0.0;  // newest stamp among this step's arrivals
};

struct McaOutput {
  Zeta zeta_final;
  Vec2 rho{0.0, 0.0};
  Vec2 recon{0.0, 0.0};
  Vec2 phi{0.0, 0.0};
  bool triggered = false;
  double freshness = 0.0;
  Vec2 relevance{0.0, 0.0};
};

// One pass of the per-agent loop: freshness, downsample, trigger,
// reconstruction, feedback, compensation, relevance.
McaOutput McaStep(McaState& ms, const McaParams& p, const McaInputs& in);

}  // namespace dersim
