#pragma once

#include <string>
#include <vector>

#include "ifpopt/graph.hpp"

namespace ifpopt {

/// sigma(t) = offset + amplitude * wave(omega * t), wave in {1, sin, cos}.
struct GainProfile {
  enum class Wave { none, sin, cos };

  double offset = 0.0;
  double amplitude = 0.0;
  double omega = 1.0;
  Wave wave = Wave::none;

  static GainProfile constant(double sigma) { return {sigma, 0.0, 1.0, Wave::none}; }

  double operator()(double t) const;
  double max_value() const { return offset + std::abs(amplitude); }
  double min_value() const { return wave == Wave::none ? offset : offset - std::abs(amplitude); }

  friend bool operator==(const GainProfile&, const GainProfile&) = default;
};

/// Per-agent coupling gains, resolved per schedule segment. Agents sharing a
/// strongly connected component of the active graph always see identical
/// profiles.
class GainSchedule {
 public:
  static GainSchedule shared(GainProfile profile, int n_agents);
  static GainSchedule per_agent_table(std::vector<std::vector<GainProfile>> table);

  int agent_count() const { return n_; }
  bool is_shared() const { return table_.empty(); }
  double sigma(int agent, int segment, double t) const { return profile(agent, segment)(t); }
  Vector sigmas(int segment, double t) const;
  const GainProfile& profile(int agent, int segment) const;

 private:
  GainSchedule() = default;
  int n_ = 0;
  GainProfile shared_;
  std::vector<std::vector<GainProfile>> table_;  // [segment][agent]
};

/// sigma < s_+(L + L^T) / (-2 nu_bar s_N(L^T L)): eigenvalue-based admissible
/// gain bound for a weight-balanced graph; nu_bar is the most negative agent
/// index. "Nonzero" eigenvalues use an absolute cutoff of 1e-9 scaled by the
/// largest eigenvalue.
double sigma_threshold_eigen(const Digraph& g, double nu_bar);

/// sigma < 1 / (2 max_i d_i |nu_i|): degree-based admissible gain bound.
double sigma_threshold_degree(const Vector& degrees, const Vector& nus);

struct SegmentThresholds {
  int segment = 0;
  double sigma_eig = 0.0;
  double sigma_deg = 0.0;
};

struct ThresholdReport {
  std::vector<SegmentThresholds> per_segment;
  double sigma_eig_min = 0.0;
  double sigma_deg_min = 0.0;
};

ThresholdReport threshold_report(const SwitchingSchedule& s, const Vector& nus);

struct MaxConsensusResult {
  Vector estimates;   // per-agent converged max of the initial values
  Vector thresholds;  // 1 / (2 estimate), +inf where the estimate is zero
  int iterations = 0; // synchronous rounds until a fixed point
};

/// Synchronous max propagation D_i <- max(D_i, max over in-neighbors D_j);
/// on a strongly connected graph every agent holds the global maximum after
/// at most n rounds.
MaxConsensusResult max_consensus_threshold(const Digraph& g, const Vector& initial, int max_iters);

/// Assigns one base profile per strongly connected component of each segment
/// (components ordered by smallest node, profiles cycled) and verifies
/// 0 < sigma < 1 / (2 max over the component of d_j |nu_j|) throughout.
/// Throws std::invalid_argument when a profile violates its component bound.
GainSchedule assign_subgraph_gains(const SwitchingSchedule& s, const Vector& nus,
                                   const std::vector<GainProfile>& base_profiles);

struct GainAdmissibility {
  bool admissible = true;
  std::string detail;
};

/// Checks positivity, the per-component degree bound, and equality of
/// profiles inside every component, for every segment of the schedule.
GainAdmissibility check_gain_admissibility(const SwitchingSchedule& s, const Vector& nus,
                                           const GainSchedule& gains);

}  // namespace ifpopt
