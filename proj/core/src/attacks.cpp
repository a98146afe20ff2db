#include "dersim/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dersim/error.hpp"

namespace dersim {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Relative slack so that tau = 50 dt lands on step +50 despite rounding.
constexpr double kGridSlack = 1e-9;

}  // namespace

std::string_view ToString(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLatency: return "latency";
    case AttackKind::kDropout: return "dropout";
    case AttackKind::kTsa: return "tsa";
    case AttackKind::kFdia: return "fdia";
  }
  return "unknown";
}

std::optional<AttackKind> ParseAttackKind(std::string_view name) {
  if (name == "latency") return AttackKind::kLatency;
  if (name == "dropout") return AttackKind::kDropout;
  if (name == "tsa") return AttackKind::kTsa;
  if (name == "fdia") return AttackKind::kFdia;
  return std::nullopt;
}

bool AttackSpec::Targets(int src, int dst) const {
  if (edges.empty() && agents.empty()) return true;
  for (const auto& [s, d] : edges)
    if (s == src && d == dst) return true;
  return std::find(agents.begin(), agents.end(), src) != agents.end();
}

Alpha AttackSpec::AlphaFor(int src, int dst) const {
  if (alpha.empty()) return {0.0, 0.0, 0.0};
  if (alpha.size() == 1) return alpha.front();
  if (!edges.empty()) {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].first == src && edges[i].second == dst) return alpha.at(i);
  }
  if (!agents.empty()) {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i] == src) return alpha.at(i);
  }
  if (edges.empty() && agents.empty()) return alpha.at(static_cast<std::size_t>(src));
  return {0.0, 0.0, 0.0};
}

CounterStream::CounterStream(std::uint64_t seed, std::string_view name)
    : key_(SplitMix64(seed ^ SplitMix64(Fnv1a(name)))) {}

double CounterStream::Uniform(std::uint64_t counter) const {
  const std::uint64_t bits = SplitMix64(key_ ^ SplitMix64(counter));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Channel::Channel(int src, int dst, std::uint64_t seed, std::size_t history_capacity)
    : src_(src),
      dst_(dst),
      stream_(seed, "link:" + std::to_string(src) + "->" + std::to_string(dst)),
      history_capacity_(std::max<std::size_t>(history_capacity, 1)) {
  if (src == dst) throw ContractError("channel endpoints must differ");
}

void Channel::RecordHistory(long step, const Psi& psi) {
  if (!history_.empty() && step <= history_.back().first) {
    throw ContractError("channel history must advance in step order");
  }
  history_.emplace_back(step, psi);
  while (history_.size() > history_capacity_) history_.pop_front();
}

Psi Channel::HistoryAt(long step, bool* clamped) const {
  if (clamped) *clamped = false;
  if (history_.empty()) throw ContractError("channel history is empty");
  if (step <= history_.front().first) {
    if (clamped) *clamped = step < history_.front().first;
    return history_.front().second;
  }
  if (step >= history_.back().first) return history_.back().second;
  const auto it = std::lower_bound(history_.begin(), history_.end(), step,
                                   [](const auto& e, long s) { return e.first < s; });
  return it->second;
}

void Channel::Schedule(const Packet& pkt, long due_step) {
  auto pos = std::upper_bound(buffer_.begin(), buffer_.end(), due_step,
                              [](long d, const InFlight& f) { return d < f.due_step; });
  buffer_.insert(pos, InFlight{pkt, due_step});
}

std::optional<Packet> Channel::Deliver(long step) {
  std::optional<Packet> newest;
  while (!buffer_.empty() && buffer_.front().due_step <= step) {
    const Packet& p = buffer_.front().packet;
    if (!newest || p.send_step >= newest->send_step) newest = p;
    buffer_.pop_front();
  }
  return newest;
}

long LatencyDueStep(const Packet& pkt, double tau, double dt) {
  if (tau < 0.0) throw ContractError("latency must be non-negative");
  const double due = (pkt.stamp + tau) / dt;
  const long due_step = static_cast<long>(std::ceil(due - kGridSlack * std::max(1.0, due)));
  return std::max(due_step, pkt.send_step);
}

void ApplyLatency(Channel& ch, const Packet& pkt, double tau, double dt) {
  ch.Schedule(pkt, LatencyDueStep(pkt, tau, dt));
}

bool ApplyDropout(const Channel& ch, const Packet& pkt, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("dropout probability must be in [0, 1]");
  if (p == 0.0) return true;
  return ch.stream().Uniform(static_cast<std::uint64_t>(pkt.send_step)) >= p;
}

TsaResult ApplyTsa(const Channel& ch, const Packet& pkt, int n_shift, double t_s, double dt) {
  TsaResult out{pkt, false};
  if (n_shift == 0) return out;
  const double period = t_s > 0.0 ? t_s : dt;
  if (n_shift < 0) {
    const long back = std::lround(-n_shift * period / dt);
    out.packet.psi = ch.HistoryAt(pkt.send_step - back, &out.clamped);
  } else {
    out.packet.stamp = std::max(0.0, pkt.stamp - n_shift * period);
  }
  return out;
}

Psi ApplyFdia(const Psi& psi, const Alpha& alpha, int lambda_flag) {
  if (lambda_flag == 0) return psi;
  const double l = static_cast<double>(lambda_flag);
  return {psi.omega + l * alpha[0], psi.mp_p + l * alpha[1], psi.nq_q + l * alpha[2]};
}

std::vector<Alpha> MakeFdia(int n, FdiaKind kind, double magnitude, std::mt19937_64& rng,
                            FdiaChannels channels) {
  if (n < 1) throw ContractError("FDIA needs at least one agent");
  const std::array<bool, 3> on{channels.omega, channels.mp_p, channels.nq_q};
  std::vector<Alpha> out(static_cast<std::size_t>(n), Alpha{0.0, 0.0, 0.0});
  if (kind == FdiaKind::kUnbalanced) {
    for (auto& a : out)
      for (int c = 0; c < 3; ++c) a[c] = on[c] ? magnitude : 0.0;
    return out;
  }
  if (n < 2) throw ContractError("balanced FDIA needs at least two agents");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 3; ++c) {
    if (!on[c]) continue;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(rng);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double peak = 0.0;
    for (auto& x : v) {
      x -= mean;
      peak = std::max(peak, std::abs(x));
    }
    if (peak == 0.0) {
      v.assign(v.size(), 0.0);
      v[0] = 1.0;
      v[1] = -1.0;
      peak = 1.0;
    }
    for (int j = 0; j < n; ++j) out[j][c] = magnitude * v[j] / peak;
    // Re-centre after scaling so the sum is zero to rounding.
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += out[j][c];
    out[0][c] -= s;
  }
  return out;
}

FdiaKind ClassifyFdia(const std::vector<Alpha>& alpha, const LaplacianView& lv) {
  if (!alpha.empty() && alpha.size() != lv.laplacian.size()) {
    throw ContractError("one FDIA vector per agent required");
  }
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (const auto& a : alpha) s += a[c];
    if (std::abs(s) > 1e-9) return FdiaKind::kUnbalanced;
  }
  return FdiaKind::kBalanced;
}

AttackPipeline::AttackPipeline(int n_agents, std::vector<AttackSpec> attacks, std::uint64_t seed,
                               double dt, bool log_packets)
    : n_(n_agents), dt_(dt), attacks_(std::move(attacks)), log_packets_(log_packets) {
  std::size_t capacity = 1;
  for (const auto& a : attacks_) {
    if (a.kind == AttackKind::kTsa && a.n_shift < 0) {
      const double period = a.t_s > 0.0 ? a.t_s : dt;
      capacity = std::max<std::size_t>(capacity, std::lround(-a.n_shift * period / dt) + 1);
    }
  }
  channels_.resize(static_cast<std::size_t>(n_) * n_);
  for (int s = 0; s < n_; ++s)
    for (int d = 0; d < n_; ++d)
      if (s != d) channels_[s * n_ + d] = Channel(s, d, seed, capacity);
}

Channel& AttackPipeline::mutable_channel(int src, int dst) {
  if (src < 0 || dst < 0 || src >= n_ || dst >= n_ || src == dst) {
    throw ContractError("no channel " + std::to_string(src) + "->" + std::to_string(dst));
  }
  return channels_[src * n_ + dst];
}

const Channel& AttackPipeline::channel(int src, int dst) const {
  return const_cast<AttackPipeline*>(this)->mutable_channel(src, dst);
}

void AttackPipeline::Send(const Packet& in) {
  Channel& ch = mutable_channel(in.src, in.dst);
  const double t = in.stamp;
  Packet pkt = in;
  ++stats_.sent;

  for (const auto& a : attacks_)
    if (a.kind == AttackKind::kFdia && a.ActiveAt(t) && a.Targets(pkt.src, pkt.dst))
      pkt.psi = ApplyFdia(pkt.psi, a.AlphaFor(pkt.src, pkt.dst), a.lambda);
  ch.RecordHistory(pkt.send_step, pkt.psi);

  for (const auto& a : attacks_)
    if (a.kind == AttackKind::kTsa && a.ActiveAt(t) && a.Targets(pkt.src, pkt.dst)) {
      auto r = ApplyTsa(ch, pkt, a.n_shift, a.t_s, dt_);
      pkt = r.packet;
      if (r.clamped) ++stats_.tsa_clamped;
    }

  double tau = 0.0;
  for (const auto& a : attacks_)
    if (a.kind == AttackKind::kLatency && a.ActiveAt(t) && a.Targets(pkt.src, pkt.dst))
      tau += a.tau;

  bool keep = true;
  for (const auto& a : attacks_)
    if (a.kind == AttackKind::kDropout && a.ActiveAt(t) && a.Targets(pkt.src, pkt.dst))
      keep = keep && ApplyDropout(ch, pkt, a.p);

  if (log_packets_) log_.push_back({pkt.send_step, t, pkt.src, pkt.dst, pkt.psi, pkt.stamp, !keep});
  if (!keep) {
    ++stats_.dropped;
    return;
  }
  // The due time is measured from the true send instant, not the forged stamp.
  Packet timing = pkt;
  timing.stamp = in.stamp;
  ch.Schedule(pkt, LatencyDueStep(timing, tau, dt_));
}

std::optional<Packet> AttackPipeline::Deliver(int src, int dst, long step) {
  auto p = mutable_channel(src, dst).Deliver(step);
  if (p) ++stats_.delivered;
  return p;
}

}  // namespace dersim
