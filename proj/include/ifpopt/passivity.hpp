#pragma once

#include <Eigen/Core>

#include "ifpopt/objective.hpp"

namespace ifpopt {

/// Per-agent algorithm parameters. J and K are invertible with K J = C^T;
/// `nu` is the agent's passivity-shortage index (<= 0) used by the dynamics
/// and gain thresholds, and `eta` the storage parameter, strictly above
/// 1 / (mu * alpha * gamma).
struct AgentParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  Matrix J = Matrix::Identity(1, 1);
  Matrix K = Matrix::Identity(1, 1);
  Matrix C = Matrix::Identity(1, 1);
  double nu = 0.0;
  double eta = 0.0;

  static AgentParams scalar(double alpha, double beta, double gamma, double j, double k);
};

/// Throws std::invalid_argument on any violated parameter constraint.
/// `mu` is the strong-convexity constant of the agent's objective (needed for
/// the eta bound); pass eta = 0 to skip the eta check.
void validate_agent_params(const AgentParams& p, double mu);

struct EtaInterval {
  double lo;
  double hi;
};

/// Search interval ((1 + 1e-6) / (mu a g), 1e3 / (mu a g)); the optimum for
/// every catalog case lies well inside.
EtaInterval default_eta_search(double mu, double alpha, double gamma);

struct IfpIndexResult {
  double nu;
  double eta;
};

/// Passivity-shortage index of the agent's error subsystem:
///   nu = -min_eta max_H || eta (a b H - g C^T) - (b/g) I ||^2 / (4 (mu a eta - 1/g))
/// with H ranging over the Hessian values of f. For dim 1 the inner max is
/// taken over {mu, lip} plus the numerator zero crossing when it falls
/// inside; for dim > 1 the norm-relaxed bound is used instead. The eta
/// minimization is a golden-section refinement of a log-spaced grid.
IfpIndexResult ifp_index_minimax(const AgentParams& p, const ObjectiveFunction& f,
                                 const EtaInterval& search, int grid_points);
IfpIndexResult ifp_index_minimax(const AgentParams& p, const ObjectiveFunction& f);

/// Conservative norm-based relaxation
///   -min_eta ((eta a lip + 1/g)|b| + eta g ||C^T||)^2 / (4 (mu a eta - 1/g)),
/// never larger in value than the minimax index.
double ifp_index_relaxed(const AgentParams& p, double mu, double lip, const EtaInterval& search,
                         int grid_points);
double ifp_index_relaxed(const AgentParams& p, double mu, double lip);

struct StorageEvaluation {
  double value;
  Vector z;
};

/// Storage function of the error subsystem at (x, lam) relative to the
/// optimal pair (x*, lam*):
///   V = eta/2 z^T z - (1/g) dx^T K dl + (a/g)[f(x*) - f(x)] + (a/g) grad f(x*)^T dx,
///   z = a [grad f(x) - grad f(x*)] + K dl.
/// Nonnegative, and zero only at the optimal pair, whenever eta satisfies its
/// strict bound.
StorageEvaluation storage_value(const AgentParams& p, const ObjectiveFunction& f, const Vector& x,
                                const Vector& lam, const Vector& x_star, const Vector& lam_star);

}  // namespace ifpopt
