#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dersim/cyber_graph.hpp"
#include "dersim/secondary_control.hpp"

namespace dersim {

using Alpha = std::array<double, 3>;  // [omega, m_p P, n_q Q]

struct Packet {
  int src = 0;
  int dst = 0;
  Psi psi;
  double stamp = 0.0;   // sender timestamp, seconds
  long send_step = 0;   // step at which the content is valid

  bool operator==(const Packet&) const = default;
};

enum class AttackKind { kLatency, kDropout, kTsa, kFdia };

std::string_view ToString(AttackKind kind);
std::optional<AttackKind> ParseAttackKind(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::kLatency;
  // Targets: explicit (src, dst) edges, or every outgoing edge of the listed
  // source agents. Both empty means every edge.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> agents;
  double start = 0.0;
  double stop = std::numeric_limits<double>::infinity();

  double tau = 0.0;   // latency, s
  double p = 0.0;     // dropout probability per packet
  int n_shift = 0;    // TSA shift in samples; negative serves past data
  double t_s = 0.0;   // TSA sample period, s (0 = engine dt)
  // FDIA: one vector per target (in `agents` or `edges` order), one per
  // agent when untargeted, or a single vector broadcast to all targets.
  std::vector<Alpha> alpha;
  int lambda = 1;

  bool ActiveAt(double t) const { return t >= start && t < stop; }
  bool Targets(int src, int dst) const;
  Alpha AlphaFor(int src, int dst) const;
};

// Deterministic counter-based uniform stream: the draw for a given counter
// depends only on (seed, name, counter), never on how many draws came before.
class CounterStream {
 public:
  CounterStream() = default;
  CounterStream(std::uint64_t seed, std::string_view name);

  double Uniform(std::uint64_t counter) const;

 private:
  std::uint64_t key_ = 0;
};

// One directed link src -> dst: in-flight buffer, sender-side history used by
// time-shift attacks, and the link's dropout stream.
class Channel {
 public:
  Channel() = default;
  Channel(int src, int dst, std::uint64_t seed, std::size_t history_capacity = 1);

  int src() const { return src_; }
  int dst() const { return dst_; }
  const CounterStream& stream() const { return stream_; }

  void RecordHistory(long step, const Psi& psi);
  // Content recorded at `step`, clamped to the oldest retained sample.
  // Sets *clamped when the requested step is older than the history.
  Psi HistoryAt(long step, bool* clamped = nullptr) const;

  void Schedule(const Packet& pkt, long due_step);
  // Newest packet due at or before `step`; older due packets are discarded.
  std::optional<Packet> Deliver(long step);
  std::size_t in_flight() const { return buffer_.size(); }

 private:
  struct InFlight {
    Packet packet;
    long due_step = 0;
  };
  int src_ = 0;
  int dst_ = 0;
  CounterStream stream_;
  std::size_t history_capacity_ = 1;
  std::deque<std::pair<long, Psi>> history_;
  std::deque<InFlight> buffer_;
};

// Delivery step for a packet delayed by tau (continuous due time, ceiling to
// the step grid).
long LatencyDueStep(const Packet& pkt, double tau, double dt);
void ApplyLatency(Channel& ch, const Packet& pkt, double tau, double dt);

// true = keep, false = drop.
bool ApplyDropout(const Channel& ch, const Packet& pkt, double p);

struct TsaResult {
  Packet packet;
  bool clamped = false;
};

// Negative shifts serve the source's content from n_shift * t_s earlier under
// the unchanged stamp. Positive shifts keep the content and back-date the
// stamp by n_shift * t_s, so the data is newer than its label.
TsaResult ApplyTsa(const Channel& ch, const Packet& pkt, int n_shift, double t_s, double dt);

Psi ApplyFdia(const Psi& psi, const Alpha& alpha, int lambda_flag);

enum class FdiaKind { kBalanced, kUnbalanced };

struct FdiaChannels {
  bool omega = true;
  bool mp_p = true;
  bool nq_q = true;
};

// Balanced: zero-mean random pattern per selected channel with max |alpha|
// equal to `magnitude`. Unbalanced: `magnitude` on every agent.
std::vector<Alpha> MakeFdia(int n, FdiaKind kind, double magnitude, std::mt19937_64& rng,
                            FdiaChannels channels = {});

// Balanced iff every channel's component sum vanishes (1e-9), i.e. -alpha is
// in the range of a connected symmetric Laplacian.
FdiaKind ClassifyFdia(const std::vector<Alpha>& alpha, const LaplacianView& lv);

struct PacketLogEntry {
  long step = 0;
  double t = 0.0;
  int src = 0;
  int dst = 0;
  Psi psi;
  double stamp = 0.0;
  bool dropped = false;
};

struct PipelineStats {
  long sent = 0;
  long dropped = 0;
  long delivered = 0;
  long tsa_clamped = 0;
};

// Per-link attack pipeline. Order is fixed: FDIA, TSA, latency, dropout.
class AttackPipeline {
 public:
  AttackPipeline(int n_agents, std::vector<AttackSpec> attacks, std::uint64_t seed, double dt,
                 bool log_packets = false);

  void Send(const Packet& pkt);
  std::optional<Packet> Deliver(int src, int dst, long step);

  const PipelineStats& stats() const { return stats_; }
  const std::vector<PacketLogEntry>& log() const { return log_; }
  const Channel& channel(int src, int dst) const;

 private:
  Channel& mutable_channel(int src, int dst);

  int n_;
  double dt_;
  std::vector<AttackSpec> attacks_;
  std::vector<Channel> channels_;
  bool log_packets_;
  std::vector<PacketLogEntry> log_;
  PipelineStats stats_;
};

}  // namespace dersim
