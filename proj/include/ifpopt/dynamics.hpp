#pragma once

#include <vector>

#include "ifpopt/graph.hpp"
#include "ifpopt/objective.hpp"
#include "ifpopt/passivity.hpp"

namespace ifpopt {

/// Stacked network state: decision variables x and multipliers lam, each of
/// size N * m, plus the simulation clock.
struct NetworkState {
  Vector x;
  Vector lam;
  double t = 0.0;
};

/// Consensus optimum x* (size m) together with the induced multipliers
/// lam_i* = -K_i^{-1} alpha grad f_i(x*), stacked into size N * m.
struct OptimalPoint {
  Vector x_star;
  Vector lam_star;
};

/// Immutable assembly of N agents: shared constants (alpha, beta, gamma, C),
/// per-agent (J_i, K_i, nu_i, eta_i) and local objectives.
class AgentNetwork {
 public:
  AgentNetwork(std::vector<AgentParams> agents, std::vector<ObjectiveFunction> objectives);

  int agent_count() const { return static_cast<int>(agents_.size()); }
  int dim() const { return objectives_.front().dim; }
  int state_size() const { return agent_count() * dim(); }

  const AgentParams& agent(int i) const { return agents_[i]; }
  const ObjectiveFunction& objective(int i) const { return objectives_[i]; }
  const std::vector<ObjectiveFunction>& objectives() const { return objectives_; }
  const Matrix& j_inverse(int i) const { return j_inv_[i]; }
  const Matrix& k_inverse(int i) const { return k_inv_[i]; }

  Eigen::VectorBlock<const Vector> block(const Vector& stacked, int i) const {
    return stacked.segment(i * dim(), dim());
  }
  Vector nus() const;
  Vector sum_k_lambda(const Vector& lam) const;

 private:
  std::vector<AgentParams> agents_;
  std::vector<ObjectiveFunction> objectives_;
  std::vector<Matrix> j_inv_, k_inv_;
};

/// Newton solve of sum_i grad f_i(x) = 0 to residual 1e-12, with the induced
/// multipliers. Throws std::runtime_error after 100 iterations.
OptimalPoint centralized_optimum(const AgentNetwork& net, const Vector& x0);

enum class Algorithm { alg1, alg2 };

struct RhsResult {
  Vector x_dot;
  Vector lam_dot;
  Vector u;  // realized coupling inputs, stacked
};

/// Diffusive-coupling flow:
///   x_i'   = -alpha grad f_i(x_i) - K_i lam_i + beta u_i
///   lam_i' = -gamma J_i u_i
///   u_i    = sigma_i sum_j a_ij (C x_j - C x_i)
RhsResult alg1_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                   const NetworkState& state);

/// Derivative-feedback flow: the coupling acts on shifted outputs
/// y_i - nu_i u_i, which closes an algebraic loop. Solves
///   (I - J S L nu J^{-1}) lam' = gamma J S L C x
/// by dense LU and recovers u = -(1/gamma) J^{-1} lam',
///   x' = -alpha grad f(x) - K lam - (beta/gamma) J^{-1} lam'.
/// Throws std::runtime_error if the loop matrix is singular.
RhsResult alg2_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                   const NetworkState& state);

RhsResult evaluate_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                       const NetworkState& state, Algorithm alg);

/// Loop matrix M = I - J S L nu J^{-1} of the derivative-feedback flow,
/// with S = diag(sigma_i) (x) I_m.
Matrix alg2_loop_matrix(const AgentNetwork& net, const Digraph& g, const Vector& sigmas);

struct NonsingularityReport {
  bool nonsingular = false;
  double condition = 0.0;           // condition number of I - sigma J L nu J^{-1}
  double min_real_part = 0.0;       // smallest real part of the spectrum of -L nu
};

/// Diagnostics for the algebraic loop: verifies -1 is not an eigenvalue of
/// -sigma J L nu J^{-1} and reports the conditioning of the loop matrix plus
/// the spectral margin of -L nu (whose eigenvalues have nonnegative real
/// parts for weight-balanced graphs). Never throws; returns flags instead.
NonsingularityReport check_nonsingular(const Digraph& g, double sigma, const Vector& nus,
                                       const std::vector<Matrix>& j_blocks);

/// Error-system matrix [[-F - sigma L, -I], [sigma L, 0]] of the
/// diffusive-coupling flow with unit parameters and quadratic objectives
/// (F = block diag of the constant Hessians). Throws on non-quadratic input.
Matrix linearized_system_matrix(const std::vector<ObjectiveFunction>& fs, const Digraph& g,
                                double sigma);

/// Largest real part of the spectrum after dropping near-zero eigenvalues
/// (|ev| <= tol * max |ev|). The conserved multiplier sum pins one structural
/// zero eigenvalue on every such system; stability is decided by the rest.
double stability_abscissa(const Matrix& a, double zero_tol = 1e-9);

/// kron(L, I_m): expands a node-indexed matrix to stacked coordinates.
Matrix expand_blocks(const Matrix& l, int m);

}  // namespace ifpopt
