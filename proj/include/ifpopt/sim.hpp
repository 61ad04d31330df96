#pragma once

#include <iosfwd>
#include <vector>

#include "ifpopt/dynamics.hpp"
#include "ifpopt/gains.hpp"

namespace ifpopt {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  int record_every = 10;
  Algorithm algorithm = Algorithm::alg1;
  bool monitor = true;           // storage-sum metric plus per-step supply-rate checks
  double divergence_norm = 1e9;  // truncate (with flag) past this state norm
};

struct MetricSample {
  double t = 0.0;
  double consensus_error = 0.0;      // max_{i,j} |x_i - x_j|
  double optimality_gap = 0.0;       // max_i |x_i - x*|
  double lyapunov = 0.0;             // sum_i V_i
  double multiplier_invariant = 0.0; // |sum K_i lam_i - sum K_i lam_i(0)|
};

/// Per-step check of V_i(t+h) - V_i(t) <= trapezoid(y_i'u_i - nu_i u_i'u_i) + tol,
/// accumulated over all agents and steps.
struct PassivityReport {
  long checked_steps = 0;
  long violations = 0;
  double max_excess = 0.0;  // worst (increment - supply integral), > 0 means violation margin
};

struct Trajectory {
  std::vector<double> times;
  std::vector<long> record_steps;
  std::vector<Vector> xs, lams;
  std::vector<MetricSample> metrics;
  long steps = 0;
  bool diverged = false;
  double divergence_time = 0.0;
  PassivityReport passivity;
};

/// Classic fixed-step RK4. Steps never straddle a switching instant: a step is
/// truncated to land exactly on the boundary and integration resumes there
/// with the new graph. Divergence (non-finite state or norm above the
/// threshold) truncates the trajectory with a flag rather than throwing, so
/// instability experiments stay representable.
///
/// `certified_nus`, when given, are the storage-certified per-agent indices
/// used by the supply-rate monitor; the dynamics always use the indices
/// stored in the network. Requires sum_i K_i lam_i(0) = 0 within 1e-10.
Trajectory integrate(const SimConfig& cfg, const AgentNetwork& net,
                     const SwitchingSchedule& schedule, const GainSchedule& gains,
                     const OptimalPoint& opt, const NetworkState& init,
                     const Vector* certified_nus = nullptr);

struct LyapunovReport {
  double max_increment = 0.0;
  long violations = 0;
};

/// Largest positive increment of the recorded storage sum between consecutive
/// samples; increments above 1e-6 * dt per elapsed step count as violations.
LyapunovReport monitor_lyapunov(const Trajectory& traj, const SimConfig& cfg);

/// Header: t, x_1..x_Nm, lam_1..lam_Nm, consensus_error, optimality_gap,
/// lyapunov, multiplier_invariant. Deterministic %.17g formatting.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace ifpopt
