#include "dersim/cyber_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <string>

#include "dersim/error.hpp"

namespace dersim {

CyberGraph CyberGraph::Build(int n, const std::vector<Edge>& edges, bool directed) {
  if (n <= 0) throw ContractError("graph needs at least one agent");
  CyberGraph g;
  g.weights_ = SquareMatrix(static_cast<std::size_t>(n));
  g.directed_ = directed;
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw ContractError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                          ") out of range for n=" + std::to_string(n));
    }
    if (e.from == e.to) {
      throw ContractError("self-loop at agent " + std::to_string(e.from));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ContractError("edge weight must be positive and finite");
    }
    g.weights_(e.from, e.to) = e.weight;
    if (!directed) g.weights_(e.to, e.from) = e.weight;
  }
  return g;
}

CyberGraph CyberGraph::Complete(int n, double weight) {
  std::vector<Edge> edges;
  for (int j = 0; j < n; ++j)
    for (int m = j + 1; m < n; ++m) edges.push_back({j, m, weight});
  return Build(n, edges);
}

CyberGraph CyberGraph::Chain(int n, double weight) {
  std::vector<Edge> edges;
  for (int j = 0; j + 1 < n; ++j) edges.push_back({j, j + 1, weight});
  return Build(n, edges);
}

std::vector<int> CyberGraph::Neighbors(int j) const {
  std::vector<int> out;
  for (int m = 0; m < n_agents(); ++m)
    if (weights_(j, m) > 0.0) out.push_back(m);
  return out;
}

bool CyberGraph::IsConnected() const {
  const int n = n_agents();
  if (n == 0) return false;
  // Weak connectivity: follow edges in either direction.
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int m = 0; m < n; ++m) {
      if (!seen[m] && (weights_(j, m) > 0.0 || weights_(m, j) > 0.0)) {
        seen[m] = 1;
        ++count;
        frontier.push(m);
      }
    }
  }
  return count == n;
}

CyberGraph CyberGraph::Scaled(double factor) const {
  CyberGraph g = *this;
  const auto n = weights_.size();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g.weights_(r, c) *= factor;
  return g;
}

LaplacianView Laplacian(const CyberGraph& g) {
  const auto n = static_cast<std::size_t>(g.n_agents());
  LaplacianView lv;
  lv.d_in.assign(n, 0.0);
  lv.laplacian = SquareMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double w = g.weights()(j, m);
      d += w;
      lv.laplacian(j, m) = -w;
    }
    lv.d_in[j] = d;
    lv.laplacian(j, j) = d;
  }
  return lv;
}

namespace {

bool IsSymmetric(const SquareMatrix& m) {
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = r + 1; c < m.size(); ++c)
      if (m(r, c) != m(c, r)) return false;
  return true;
}

void MultiplyShifted(const SquareMatrix& a, double shift, const std::vector<double>& x,
                     std::vector<double>& y) {
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < n; ++r) {
    double acc = -shift * x[r];
    for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double MaxLaplacianEigenvalue(const LaplacianView& lv, const EigenOptions& opts) {
  const SquareMatrix& l = lv.laplacian;
  const std::size_t n = l.size();
  if (!IsSymmetric(l)) {
    throw UnsupportedError("largest-eigenvalue bound is defined for undirected graphs only");
  }
  const double d_max = n == 0 ? 0.0 : *std::max_element(lv.d_in.begin(), lv.d_in.end());
  if (d_max <= 0.0) return 0.0;

  // Spectrum of L lies in [0, lambda_max] and lambda_max >= d_max, so
  // shifting by mu < lambda_max / 2 keeps lambda_max - mu dominant while
  // shrinking the ratio to the next eigenvalue.
  const double mu = 0.4 * d_max;

  // Fixed pseudo-random start so that no eigenvector is missed by symmetry.
  std::vector<double> v(n), w(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (auto& x : v) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }
  double norm = std::sqrt(Dot(v, v));
  for (auto& x : v) x /= norm;

  double theta = 0.0;
  double theta_prev = 0.0;
  int stalls = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    MultiplyShifted(l, mu, v, w);
    theta = Dot(v, w);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - theta * v[i];
      res2 += r * r;
    }
    if (std::sqrt(res2) <= opts.tolerance * std::abs(theta)) break;
    // A cluster of near-equal top eigenvalues slows the residual but not the
    // Rayleigh quotient; stop once it no longer moves.
    if (it > 0 && std::abs(theta - theta_prev) <= 1e-16 * std::abs(theta)) {
      if (++stalls >= 8) break;
    } else {
      stalls = 0;
    }
    theta_prev = theta;
    norm = std::sqrt(Dot(w, w));
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return theta + mu;
}

DelayBound DelayStabilityBound(const LaplacianView& lv) {
  DelayBound out;
  out.lambda_max = MaxLaplacianEigenvalue(lv);
  out.tau_max = std::numbers::pi / (2.0 * out.lambda_max);

  // Connectivity from the off-diagonal pattern of L.
  const std::size_t n = lv.laplacian.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  if (n > 0) seen[0] = 1;
  std::size_t count = n > 0 ? 1 : 0;
  while (!stack.empty()) {
    const auto j = stack.back();
    stack.pop_back();
    for (std::size_t m = 0; m < n; ++m) {
      if (!seen[m] && lv.laplacian(j, m) != 0.0 && m != j) {
        seen[m] = 1;
        ++count;
        stack.push_back(m);
      }
    }
  }
  out.disconnected = count != n;
  return out;
}

TopologySchedule::TopologySchedule(CyberGraph initial) { Add(0.0, std::move(initial)); }

void TopologySchedule::Add(double switch_time, CyberGraph graph) {
  if (!entries_.empty()) {
    if (!(switch_time > entries_.back().switch_time)) {
      throw ContractError("topology switch times must be strictly increasing");
    }
    if (graph.n_agents() != entries_.front().graph.n_agents()) {
      throw ContractError("all scheduled graphs must have the same agent count");
    }
  }
  entries_.push_back({switch_time, std::move(graph)});
}

const CyberGraph& TopologySchedule::GraphAt(double t) const {
  if (entries_.empty() || t < entries_.front().switch_time) {
    throw ContractError("no graph scheduled at t=" + std::to_string(t));
  }
  auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                             [](double x, const Entry& e) { return x < e.switch_time; });
  return std::prev(it)->graph;
}

}  // namespace dersim
