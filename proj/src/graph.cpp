#include "ifpopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ifpopt {

Digraph::Digraph(Matrix adjacency) : adj_(std::move(adjacency)) {
  if (adj_.rows() == 0 || adj_.rows() != adj_.cols()) {
    throw std::invalid_argument("Digraph: adjacency must be square and nonempty");
  }
  for (int i = 0; i < adj_.rows(); ++i) {
    if (adj_(i, i) != 0.0) {
      throw std::invalid_argument("Digraph: diagonal must be zero");
    }
    for (int j = 0; j < adj_.cols(); ++j) {
      const double w = adj_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("Digraph: weights must be nonnegative and finite");
      }
    }
  }
}

Digraph Digraph::ring(int n, double weight) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = weight;
  }
  return Digraph(a);
}

Digraph Digraph::empty(int n) { return Digraph(Matrix::Zero(n, n)); }

Digraph Digraph::from_bidirectional_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [i, j] : pairs) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return Digraph(a);
}

Matrix laplacian(const Digraph& g) {
  Matrix l = -g.adjacency();
  l.diagonal() = g.in_degrees();
  return l;
}

bool is_weight_balanced(const Digraph& g, double tol) {
  if (tol <= 0.0) {
    throw std::invalid_argument("is_weight_balanced: tol must be positive");
  }
  return (g.in_degrees() - g.out_degrees()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Iterative Tarjan; recursion depth is unbounded on long paths otherwise.
struct TarjanState {
  const Matrix* adj;
  int n;
  std::vector<int> index, lowlink, stack;
  std::vector<bool> on_stack;
  int next_index = 0;
  std::vector<std::vector<int>> components;

  explicit TarjanState(const Matrix& a)
      : adj(&a),
        n(static_cast<int>(a.rows())),
        index(n, -1),
        lowlink(n, 0),
        on_stack(n, false) {}

  void run(int root) {
    struct Frame {
      int v;
      int next_child;
    };
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      auto& [v, child] = call.back();
      bool descended = false;
      for (int w = child; w < n; ++w) {
        if ((*adj)(v, w) <= 0.0) continue;
        call.back().next_child = w + 1;
        if (index[w] < 0) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      }
      if (descended) continue;

      if (lowlink[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[finished]);
      }
    }
  }
};

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
  TarjanState st(g.adjacency());
  for (int v = 0; v < st.n; ++v) {
    if (st.index[v] < 0) st.run(v);
  }
  std::sort(st.components.begin(), st.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return st.components;
}

bool is_strongly_connected(const Digraph& g) {
  return strongly_connected_components(g).size() == 1;
}

Digraph union_graph(const std::vector<const Digraph*>& graphs) {
  if (graphs.empty()) {
    throw std::invalid_argument("union_graph: empty input");
  }
  Matrix a = graphs.front()->adjacency();
  for (size_t k = 1; k < graphs.size(); ++k) {
    if (graphs[k]->size() != graphs.front()->size()) {
      throw std::invalid_argument("union_graph: mismatched node counts");
    }
    a = a.cwiseMax(graphs[k]->adjacency());
  }
  return Digraph(std::move(a));
}

SwitchingSchedule::SwitchingSchedule(std::vector<ScheduleSegment> segments,
                                     std::optional<double> period)
    : segments_(std::move(segments)), period_(period) {
  if (segments_.empty()) {
    throw std::invalid_argument("SwitchingSchedule: at least one segment required");
  }
  if (segments_.front().start != 0.0) {
    throw std::invalid_argument("SwitchingSchedule: first segment must start at t = 0");
  }
  const int n = segments_.front().graph.size();
  for (size_t k = 0; k < segments_.size(); ++k) {
    if (segments_[k].graph.size() != n) {
      throw std::invalid_argument("SwitchingSchedule: all graphs must share node count");
    }
    if (k > 0 && segments_[k].start <= segments_[k - 1].start) {
      throw std::invalid_argument("SwitchingSchedule: segment starts must strictly increase");
    }
  }
  if (period_ && *period_ <= segments_.back().start) {
    throw std::invalid_argument("SwitchingSchedule: period must exceed the last segment start");
  }
}

SwitchingSchedule SwitchingSchedule::fixed(Digraph g) {
  std::vector<ScheduleSegment> seg;
  seg.push_back({0.0, std::move(g)});
  return SwitchingSchedule(std::move(seg));
}

int SwitchingSchedule::segment_index_at(double t) const {
  if (t < 0.0) {
    throw std::invalid_argument("SwitchingSchedule: negative time");
  }
  double tau = t;
  if (period_) {
    tau = std::fmod(t, *period_);
  }
  // last segment with start <= tau
  int lo = 0, hi = static_cast<int>(segments_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (segments_[mid].start <= tau) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

double SwitchingSchedule::next_boundary_after(double t) const {
  const double inf = std::numeric_limits<double>::infinity();
  if (!period_) {
    for (const auto& seg : segments_) {
      if (seg.start > t) return seg.start;
    }
    return inf;
  }
  const double p = *period_;
  const double cycle = std::floor(t / p);
  for (int k = 0; k < 2; ++k) {
    for (const auto& seg : segments_) {
      const double b = (cycle + k) * p + seg.start;
      if (b > t) return b;
    }
    const double b = (cycle + k + 1) * p;
    if (b > t) return b;
  }
  return inf;  // unreachable
}

std::vector<double> SwitchingSchedule::boundaries_up_to(double horizon) const {
  std::vector<double> out;
  if (!period_) {
    for (const auto& seg : segments_) {
      if (seg.start <= horizon) out.push_back(seg.start);
    }
    return out;
  }
  const double p = *period_;
  for (int cycle = 0;; ++cycle) {
    bool any = false;
    for (const auto& seg : segments_) {
      const double b = cycle * p + seg.start;
      if (b <= horizon) {
        out.push_back(b);
        any = true;
      }
    }
    if (!any) break;
  }
  return out;
}

bool is_ujsc(const SwitchingSchedule& s, double window, double horizon) {
  if (window <= 0.0) {
    throw std::invalid_argument("is_ujsc: window must be positive");
  }
  if (horizon < window) {
    throw std::invalid_argument("is_ujsc: horizon must cover at least one window");
  }
  const std::vector<double> all = s.boundaries_up_to(horizon);
  for (double t0 : all) {
    if (t0 > horizon - window) break;
    const double t1 = t0 + window;
    std::vector<const Digraph*> active;
    active.push_back(&s.graph_at(t0));
    for (double b : all) {
      if (b > t0 && b <= t1) active.push_back(&s.graph_at(b));
    }
    if (!is_strongly_connected(union_graph(active))) return false;
  }
  return true;
}

}  // namespace ifpopt
