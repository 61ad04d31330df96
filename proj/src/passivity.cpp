#include "ifpopt/passivity.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ifpopt {

namespace {

double operator_norm(const Matrix& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  return m.jacobiSvd().singularValues()(0);
}

// Minimizes a continuous unimodal-after-gridding objective over [lo, hi]:
// log-spaced grid scan followed by golden-section refinement of the bracket
// around the best grid point.
template <typename F>
std::pair<double, double> grid_golden_min(F&& phi, double lo, double hi, int grid_points) {
  if (!(lo > 0.0) || hi <= lo) {
    throw std::invalid_argument("grid_golden_min: empty or invalid search interval");
  }
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  double best_eta = lo, best_val = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < grid_points; ++k) {
    const double t = static_cast<double>(k) / (grid_points - 1);
    const double eta = std::exp(log_lo + t * (log_hi - log_lo));
    const double v = phi(eta);
    if (v < best_val) {
      best_val = v;
      best_eta = eta;
      best_k = k;
    }
  }
  auto grid_at = [&](int k) {
    const double t = static_cast<double>(k) / (grid_points - 1);
    return std::exp(log_lo + t * (log_hi - log_lo));
  };
  double a = grid_at(std::max(0, best_k - 1));
  double b = grid_at(std::min(grid_points - 1, best_k + 1));
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 240 && (b - a) > 1e-13 * b; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = phi(x2);
    }
  }
  const double eta = 0.5 * (a + b);
  const double val = phi(eta);
  if (val <= best_val) return {eta, val};
  return {best_eta, best_val};
}

}  // namespace

AgentParams AgentParams::scalar(double alpha, double beta, double gamma, double j, double k) {
  AgentParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.J = Matrix::Constant(1, 1, j);
  p.K = Matrix::Constant(1, 1, k);
  p.C = Matrix::Constant(1, 1, k * j);
  return p;
}

void validate_agent_params(const AgentParams& p, double mu) {
  if (!(p.alpha > 0.0) || !(p.gamma > 0.0) || !std::isfinite(p.beta)) {
    throw std::invalid_argument("AgentParams: need alpha > 0, gamma > 0, finite beta");
  }
  const auto m = p.J.rows();
  if (p.J.cols() != m || p.K.rows() != m || p.K.cols() != m || p.C.rows() != m ||
      p.C.cols() != m) {
    throw std::invalid_argument("AgentParams: J, K, C must be square of equal size");
  }
  if ((p.K * p.J - p.C.transpose()).norm() > 1e-10) {
    throw std::invalid_argument("AgentParams: K J must equal C^T");
  }
  Eigen::JacobiSVD<Matrix> svd_j(p.J), svd_k(p.K);
  const double cond_limit = 1e14;
  if (svd_j.singularValues().minCoeff() <= 0.0 ||
      svd_j.singularValues()(0) / svd_j.singularValues().minCoeff() > cond_limit) {
    throw std::invalid_argument("AgentParams: J must be invertible");
  }
  if (svd_k.singularValues().minCoeff() <= 0.0 ||
      svd_k.singularValues()(0) / svd_k.singularValues().minCoeff() > cond_limit) {
    throw std::invalid_argument("AgentParams: K must be invertible");
  }
  if (p.nu > 1e-12) {
    throw std::invalid_argument("AgentParams: nu must be nonpositive");
  }
  if (p.eta != 0.0 && !(mu > 0.0)) {
    throw std::invalid_argument("AgentParams: eta check requires mu > 0");
  }
  if (p.eta != 0.0 && p.eta * mu * p.alpha * p.gamma <= 1.0) {
    throw std::invalid_argument("AgentParams: eta must exceed 1 / (mu alpha gamma)");
  }
}

EtaInterval default_eta_search(double mu, double alpha, double gamma) {
  const double base = 1.0 / (mu * alpha * gamma);
  return {base * (1.0 + 1e-6), base * 1e3};
}

IfpIndexResult ifp_index_minimax(const AgentParams& p, const ObjectiveFunction& f,
                                 const EtaInterval& search, int grid_points) {
  if (grid_points < 100) {
    throw std::invalid_argument("ifp_index_minimax: need at least 100 grid points");
  }
  const double mu = f.mu, lip = f.lip;
  if (!(search.lo * mu * p.alpha * p.gamma > 1.0)) {
    throw std::invalid_argument("ifp_index_minimax: search interval enters the infeasible range");
  }

  if (f.dim > 1) {
    // Inner max over matrix-valued Hessians is not endpoint-reducible; use
    // the norm relaxation for the index and keep its minimizing eta.
    const double c_norm = operator_norm(p.C.transpose());
    auto phi = [&](double eta) {
      const double num = (eta * p.alpha * lip + 1.0 / p.gamma) * std::abs(p.beta) +
                         eta * p.gamma * c_norm;
      return num * num / (4.0 * (mu * eta * p.alpha - 1.0 / p.gamma));
    };
    auto [eta, val] = grid_golden_min(phi, search.lo, search.hi, grid_points);
    if (!std::isfinite(val)) throw std::runtime_error("ifp_index_minimax: non-finite value");
    return {-val, eta};
  }

  const double c = p.C(0, 0);
  auto phi = [&](double eta) {
    const double den = 4.0 * (mu * eta * p.alpha - 1.0 / p.gamma);
    auto num_at = [&](double h) {
      const double g = eta * (p.alpha * p.beta * h - p.gamma * c) - p.beta / p.gamma;
      return g * g;
    };
    double num = std::max(num_at(mu), num_at(lip));
    if (p.alpha * p.beta != 0.0) {
      const double h0 = (p.gamma * c + p.beta / (p.gamma * eta)) / (p.alpha * p.beta);
      if (h0 > mu && h0 < lip) num = std::max(num, num_at(h0));
    }
    return num / den;
  };
  auto [eta, val] = grid_golden_min(phi, search.lo, search.hi, grid_points);
  if (!std::isfinite(val)) throw std::runtime_error("ifp_index_minimax: non-finite value");
  return {-val, eta};
}

IfpIndexResult ifp_index_minimax(const AgentParams& p, const ObjectiveFunction& f) {
  return ifp_index_minimax(p, f, default_eta_search(f.mu, p.alpha, p.gamma), 2000);
}

double ifp_index_relaxed(const AgentParams& p, double mu, double lip, const EtaInterval& search,
                         int grid_points) {
  if (grid_points < 100) {
    throw std::invalid_argument("ifp_index_relaxed: need at least 100 grid points");
  }
  if (!(search.lo * mu * p.alpha * p.gamma > 1.0)) {
    throw std::invalid_argument("ifp_index_relaxed: search interval enters the infeasible range");
  }
  const double c_norm = operator_norm(p.C.transpose());
  auto phi = [&](double eta) {
    const double num =
        (eta * p.alpha * lip + 1.0 / p.gamma) * std::abs(p.beta) + eta * p.gamma * c_norm;
    return num * num / (4.0 * (mu * eta * p.alpha - 1.0 / p.gamma));
  };
  auto [eta, val] = grid_golden_min(phi, search.lo, search.hi, grid_points);
  (void)eta;
  if (!std::isfinite(val)) throw std::runtime_error("ifp_index_relaxed: non-finite value");
  return -val;
}

double ifp_index_relaxed(const AgentParams& p, double mu, double lip) {
  return ifp_index_relaxed(p, mu, lip, default_eta_search(mu, p.alpha, p.gamma), 2000);
}

StorageEvaluation storage_value(const AgentParams& p, const ObjectiveFunction& f, const Vector& x,
                                const Vector& lam, const Vector& x_star, const Vector& lam_star) {
  const Vector dx = x - x_star;
  const Vector dl = lam - lam_star;
  const Vector grad = f.gradient(x);
  const Vector grad_star = f.gradient(x_star);
  const Vector z = p.alpha * (grad - grad_star) + p.K * dl;
  const double value = 0.5 * p.eta * z.squaredNorm() - dx.dot(p.K * dl) / p.gamma +
                       (p.alpha / p.gamma) * (f.value(x_star) - f.value(x)) +
                       (p.alpha / p.gamma) * grad_star.dot(dx);
  return {value, z};
}

}  // namespace ifpopt
