#include "ifpopt/gains.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ifpopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double profile_sup(const GainProfile& p, double t0, double t1) {
  // Sampling plus the analytic bound; the profiles are bounded waves, so the
  // analytic bound is exact whenever any full period fits the interval.
  double sup = std::max(p(t0), p(t1));
  constexpr int kSamples = 1000;
  for (int k = 1; k < kSamples; ++k) {
    sup = std::max(sup, p(t0 + (t1 - t0) * k / kSamples));
  }
  return std::max(sup, p.max_value());
}

double component_bound(const Digraph& g, const Vector& nus, const std::vector<int>& comp) {
  const Vector d = g.in_degrees();
  double worst = 0.0;
  for (int j : comp) worst = std::max(worst, d(j) * std::abs(nus(j)));
  return worst == 0.0 ? kInf : 1.0 / (2.0 * worst);
}
}  // namespace

double GainProfile::operator()(double t) const {
  switch (wave) {
    case Wave::sin:
      return offset + amplitude * std::sin(omega * t);
    case Wave::cos:
      return offset + amplitude * std::cos(omega * t);
    case Wave::none:
      return offset;
  }
  return offset;
}

GainSchedule GainSchedule::shared(GainProfile profile, int n_agents) {
  GainSchedule g;
  g.n_ = n_agents;
  g.shared_ = profile;
  return g;
}

GainSchedule GainSchedule::per_agent_table(std::vector<std::vector<GainProfile>> table) {
  if (table.empty() || table.front().empty()) {
    throw std::invalid_argument("GainSchedule: empty profile table");
  }
  GainSchedule g;
  g.n_ = static_cast<int>(table.front().size());
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != g.n_) {
      throw std::invalid_argument("GainSchedule: ragged profile table");
    }
  }
  g.table_ = std::move(table);
  return g;
}

const GainProfile& GainSchedule::profile(int agent, int segment) const {
  if (table_.empty()) return shared_;
  return table_.at(segment).at(agent);
}

Vector GainSchedule::sigmas(int segment, double t) const {
  Vector out(n_);
  for (int i = 0; i < n_; ++i) out(i) = sigma(i, segment, t);
  return out;
}

double sigma_threshold_eigen(const Digraph& g, double nu_bar) {
  if (!(nu_bar < 0.0)) {
    throw std::invalid_argument("sigma_threshold_eigen: nu_bar must be negative");
  }
  const Matrix l = laplacian(g);
  if (l.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("sigma_threshold_eigen: zero Laplacian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> sym(l + l.transpose());
  const Vector ev = sym.eigenvalues();
  const double cutoff = 1e-9 * ev.cwiseAbs().maxCoeff();
  double s_plus = kInf;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) s_plus = std::min(s_plus, ev(i));
  }
  if (!std::isfinite(s_plus)) {
    throw std::invalid_argument("sigma_threshold_eigen: symmetric part has no positive spectrum");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> gram(l.transpose() * l);
  const double s_n = gram.eigenvalues().maxCoeff();
  return s_plus / (-2.0 * nu_bar * s_n);
}

double sigma_threshold_degree(const Vector& degrees, const Vector& nus) {
  if (degrees.size() != nus.size() || degrees.size() == 0) {
    throw std::invalid_argument("sigma_threshold_degree: size mismatch");
  }
  if ((nus.array() > 1e-12).any()) {
    throw std::invalid_argument("sigma_threshold_degree: indices must be nonpositive");
  }
  const double worst = (degrees.array() * nus.array().abs()).maxCoeff();
  if (worst == 0.0) {
    throw std::invalid_argument("sigma_threshold_degree: all degree-index products vanish");
  }
  return 1.0 / (2.0 * worst);
}

ThresholdReport threshold_report(const SwitchingSchedule& s, const Vector& nus) {
  ThresholdReport rep;
  rep.sigma_eig_min = kInf;
  rep.sigma_deg_min = kInf;
  const double nu_bar = nus.minCoeff();
  for (int k = 0; k < s.segment_count(); ++k) {
    const Digraph& g = s.segments()[k].graph;
    SegmentThresholds st;
    st.segment = k;
    st.sigma_eig = nu_bar < 0.0 ? sigma_threshold_eigen(g, nu_bar) : kInf;
    const double worst = (g.in_degrees().array() * nus.array().abs()).maxCoeff();
    st.sigma_deg = worst == 0.0 ? kInf : 1.0 / (2.0 * worst);
    rep.sigma_eig_min = std::min(rep.sigma_eig_min, st.sigma_eig);
    rep.sigma_deg_min = std::min(rep.sigma_deg_min, st.sigma_deg);
    rep.per_segment.push_back(st);
  }
  return rep;
}

MaxConsensusResult max_consensus_threshold(const Digraph& g, const Vector& initial,
                                           int max_iters) {
  if (initial.size() != g.size()) {
    throw std::invalid_argument("max_consensus_threshold: size mismatch");
  }
  MaxConsensusResult res;
  res.estimates = initial;
  for (int it = 1; it <= max_iters; ++it) {
    Vector next = res.estimates;
    for (int i = 0; i < g.size(); ++i) {
      for (int j = 0; j < g.size(); ++j) {
        if (g.has_edge(i, j)) next(i) = std::max(next(i), res.estimates(j));
      }
    }
    const bool stable = (next - res.estimates).cwiseAbs().maxCoeff() == 0.0;
    res.estimates = next;
    if (stable) {
      res.iterations = it - 1;
      break;
    }
    res.iterations = it;
  }
  res.thresholds.resize(initial.size());
  for (int i = 0; i < initial.size(); ++i) {
    res.thresholds(i) = res.estimates(i) == 0.0 ? kInf : 1.0 / (2.0 * res.estimates(i));
  }
  return res;
}

GainSchedule assign_subgraph_gains(const SwitchingSchedule& s, const Vector& nus,
                                   const std::vector<GainProfile>& base_profiles) {
  if (base_profiles.empty()) {
    throw std::invalid_argument("assign_subgraph_gains: no base profiles");
  }
  if (nus.size() != s.agent_count()) {
    throw std::invalid_argument("assign_subgraph_gains: nu count mismatch");
  }
  std::vector<std::vector<GainProfile>> table(s.segment_count(),
                                              std::vector<GainProfile>(s.agent_count()));
  for (int k = 0; k < s.segment_count(); ++k) {
    const auto& seg = s.segments()[k];
    if (!is_weight_balanced(seg.graph)) {
      throw std::invalid_argument("assign_subgraph_gains: segment graph is not weight-balanced");
    }
    const double seg_end = (k + 1 < s.segment_count()) ? s.segments()[k + 1].start
                                                       : seg.start + 1.0;
    const auto comps = strongly_connected_components(seg.graph);
    for (size_t c = 0; c < comps.size(); ++c) {
      const GainProfile& p = base_profiles[c % base_profiles.size()];
      const double bound = component_bound(seg.graph, nus, comps[c]);
      const double sup = profile_sup(p, seg.start, seg_end);
      if (p.min_value() <= 0.0 || sup >= bound) {
        std::ostringstream msg;
        msg << "assign_subgraph_gains: profile range (" << p.min_value() << ", " << sup
            << ") violates 0 < sigma < " << bound << " on segment " << k << " component "
            << comps[c].front();
        throw std::invalid_argument(msg.str());
      }
      for (int agent : comps[c]) table[k][agent] = p;
    }
  }
  return GainSchedule::per_agent_table(std::move(table));
}

GainAdmissibility check_gain_admissibility(const SwitchingSchedule& s, const Vector& nus,
                                           const GainSchedule& gains) {
  for (int k = 0; k < s.segment_count(); ++k) {
    const auto& seg = s.segments()[k];
    const double seg_end =
        (k + 1 < s.segment_count()) ? s.segments()[k + 1].start : seg.start + 1.0;
    for (const auto& comp : strongly_connected_components(seg.graph)) {
      const double bound = component_bound(seg.graph, nus, comp);
      const GainProfile& first = gains.profile(comp.front(), k);
      for (int agent : comp) {
        const GainProfile& p = gains.profile(agent, k);
        if (!(p == first)) {
          std::ostringstream msg;
          msg << "agents " << comp.front() << " and " << agent
              << " share a strongly connected component of segment " << k
              << " but carry different gain profiles";
          return {false, msg.str()};
        }
      }
      const double sup = profile_sup(first, seg.start, seg_end);
      if (first.min_value() <= 0.0 || sup >= bound) {
        std::ostringstream msg;
        msg << "gain range (" << first.min_value() << ", " << sup << ") on segment " << k
            << " violates the degree threshold 0 < sigma < 1/(2 max d_i|nu_i|) = " << bound;
        return {false, msg.str()};
      }
    }
  }
  return {true, ""};
}

}  // namespace ifpopt
