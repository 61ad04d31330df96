#pragma once

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <vector>

namespace ifpopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted directed graph on n nodes. Entry a(i,j) > 0 means node i
/// receives from node j with weight a(i,j). Diagonal must be zero and all
/// weights nonnegative and finite; the constructor enforces this.
class Digraph {
 public:
  explicit Digraph(Matrix adjacency);

  int size() const { return static_cast<int>(adj_.rows()); }
  const Matrix& adjacency() const { return adj_; }
  double weight(int i, int j) const { return adj_(i, j); }
  bool has_edge(int i, int j) const { return adj_(i, j) > 0.0; }

  Vector in_degrees() const { return adj_.rowwise().sum(); }
  Vector out_degrees() const { return adj_.colwise().sum().transpose(); }

  /// Directed unit-weight ring: node i receives from node (i+1) mod n.
  static Digraph ring(int n, double weight = 1.0);
  static Digraph empty(int n);
  /// Unit-weight bidirectional edges between all listed pairs.
  static Digraph from_bidirectional_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

 private:
  Matrix adj_;
};

/// L = W_in - A with W_in the diagonal of in-degrees; every row sums to zero.
Matrix laplacian(const Digraph& g);

inline constexpr double kBalanceTol = 1e-9;

/// In-degree equals out-degree at every node, equivalently 1^T L = 0.
bool is_weight_balanced(const Digraph& g, double tol = kBalanceTol);

/// Partition of {0..n-1} into strongly connected components, each sorted,
/// components ordered by smallest member.
std::vector<std::vector<int>> strongly_connected_components(const Digraph& g);

bool is_strongly_connected(const Digraph& g);

/// Edgewise maximum of the adjacency weights.
Digraph union_graph(const std::vector<const Digraph*>& graphs);

struct ScheduleSegment {
  double start = 0.0;
  Digraph graph;
};

/// Piecewise-constant, right-continuous graph signal. Segment start times are
/// strictly increasing with the first at t = 0; an optional period makes the
/// sequence repeat.
class SwitchingSchedule {
 public:
  explicit SwitchingSchedule(std::vector<ScheduleSegment> segments,
                             std::optional<double> period = std::nullopt);

  static SwitchingSchedule fixed(Digraph g);

  int agent_count() const { return segments_.front().graph.size(); }
  int segment_count() const { return static_cast<int>(segments_.size()); }
  const std::vector<ScheduleSegment>& segments() const { return segments_; }
  std::optional<double> period() const { return period_; }

  /// Index into segments() of the graph active at time t >= 0.
  int segment_index_at(double t) const;
  const Digraph& graph_at(double t) const { return segments_[segment_index_at(t)].graph; }

  /// Smallest switching instant strictly greater than t; +inf if none.
  double next_boundary_after(double t) const;

  /// All switching instants in [0, horizon], period expanded.
  std::vector<double> boundaries_up_to(double horizon) const;

 private:
  std::vector<ScheduleSegment> segments_;
  std::optional<double> period_;
};

/// True iff the union graph over every window [t_k, t_k + window] is strongly
/// connected, with t_k ranging over all switching instants in
/// [0, horizon - window]. Finite-horizon check only.
bool is_ujsc(const SwitchingSchedule& s, double window, double horizon);

}  // namespace ifpopt
