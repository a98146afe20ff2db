#pragma once

#include <cstddef>
#include <vector>

#include "dersim/types.hpp"

namespace dersim {

struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

// Communication topology among agents. weights(j, m) = e_jm is the weight
// with which agent j listens to agent m.
class CyberGraph {
 public:
  CyberGraph() = default;

  // Throws ContractError on self-loops, out-of-range indices or
  // non-positive weights. Undirected graphs insert both directions.
  static CyberGraph Build(int n, const std::vector<Edge>& edges, bool directed = false);
  static CyberGraph Complete(int n, double weight = 1.0);
  static CyberGraph Chain(int n, double weight = 1.0);

  int n_agents() const { return static_cast<int>(weights_.size()); }
  bool directed() const { return directed_; }
  const SquareMatrix& weights() const { return weights_; }
  double weight(int j, int m) const { return weights_(j, m); }

  // Agents m with e_jm > 0, ascending.
  std::vector<int> Neighbors(int j) const;
  bool IsConnected() const;

  CyberGraph Scaled(double factor) const;

  bool operator==(const CyberGraph&) const = default;

 private:
  SquareMatrix weights_;
  bool directed_ = false;
};

struct LaplacianView {
  std::vector<double> d_in;
  SquareMatrix laplacian;
};

LaplacianView Laplacian(const CyberGraph& g);

struct EigenOptions {
  int max_iterations = 100000;
  double tolerance = 1e-13;
};

// Largest Laplacian eigenvalue via shifted power iteration with a Rayleigh
// quotient estimate. Throws UnsupportedError for non-symmetric L.
double MaxLaplacianEigenvalue(const LaplacianView& lv, const EigenOptions& opts = {});

struct DelayBound {
  double tau_max = 0.0;       // pi / (2 lambda_max), seconds
  double lambda_max = 0.0;
  bool disconnected = false;  // bound only meaningful on a connected graph
};

DelayBound DelayStabilityBound(const LaplacianView& lv);

class TopologySchedule {
 public:
  struct Entry {
    double switch_time = 0.0;
    CyberGraph graph;
  };

  TopologySchedule() = default;
  explicit TopologySchedule(CyberGraph initial);

  // Appends a switch; times must be strictly increasing and the agent count
  // must match.
  void Add(double switch_time, CyberGraph graph);

  // Latest entry with switch_time <= t. Throws ContractError when t precedes
  // the first entry.
  const CyberGraph& GraphAt(double t) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

}  // namespace dersim
