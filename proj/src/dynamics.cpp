#include "ifpopt/dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ifpopt {

AgentNetwork::AgentNetwork(std::vector<AgentParams> agents,
                           std::vector<ObjectiveFunction> objectives)
    : agents_(std::move(agents)), objectives_(std::move(objectives)) {
  if (agents_.empty() || agents_.size() != objectives_.size()) {
    throw std::invalid_argument("AgentNetwork: need one objective per agent");
  }
  const int m = objectives_.front().dim;
  const auto& a0 = agents_.front();
  for (size_t i = 0; i < agents_.size(); ++i) {
    const auto& p = agents_[i];
    if (objectives_[i].dim != m || p.J.rows() != m) {
      throw std::invalid_argument("AgentNetwork: inconsistent dimensions");
    }
    if (p.alpha != a0.alpha || p.beta != a0.beta || p.gamma != a0.gamma ||
        (p.C - a0.C).cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument("AgentNetwork: alpha, beta, gamma, C must be shared");
    }
    validate_agent_params(p, objectives_[i].mu);
    j_inv_.push_back(p.J.inverse());
    k_inv_.push_back(p.K.inverse());
  }
}

Vector AgentNetwork::nus() const {
  Vector out(agent_count());
  for (int i = 0; i < agent_count(); ++i) out(i) = agents_[i].nu;
  return out;
}

Vector AgentNetwork::sum_k_lambda(const Vector& lam) const {
  Vector s = Vector::Zero(dim());
  for (int i = 0; i < agent_count(); ++i) s += agents_[i].K * block(lam, i);
  return s;
}

OptimalPoint centralized_optimum(const AgentNetwork& net, const Vector& x0) {
  const int m = net.dim();
  Vector x = x0;
  auto residual = [&](const Vector& p) {
    Vector g = Vector::Zero(m);
    for (int i = 0; i < net.agent_count(); ++i) g += net.objective(i).gradient(p);
    return g;
  };
  Vector g = residual(x);
  constexpr int kMaxIters = 100;
  bool converged = false;
  for (int it = 0; it < kMaxIters; ++it) {
    if (g.norm() <= 1e-12) {
      converged = true;
      break;
    }
    Matrix h = Matrix::Zero(m, m);
    for (int i = 0; i < net.agent_count(); ++i) h += net.objective(i).hessian(x);
    const Vector step = h.ldlt().solve(g);
    double scale = 1.0;
    for (int bt = 0; bt < 40; ++bt) {
      const Vector x_new = x - scale * step;
      const Vector g_new = residual(x_new);
      if (g_new.norm() < g.norm() || g_new.norm() <= 1e-12) {
        x = x_new;
        g = g_new;
        break;
      }
      scale *= 0.5;
    }
  }
  if (!converged && residual(x).norm() > 1e-12) {
    throw std::runtime_error("centralized_optimum: Newton did not reach residual 1e-12");
  }
  OptimalPoint opt;
  opt.x_star = x;
  opt.lam_star.resize(net.state_size());
  for (int i = 0; i < net.agent_count(); ++i) {
    opt.lam_star.segment(i * m, m) =
        -net.k_inverse(i) * (net.agent(i).alpha * net.objective(i).gradient(x));
  }
  return opt;
}

namespace {

// u_i = sigma_i sum_j a_ij (C x_j - C x_i), stacked.
Vector coupling_pre(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                    const Vector& x) {
  const int n = net.agent_count(), m = net.dim();
  const Matrix& c = net.agent(0).C;
  Matrix y(m, n);
  for (int i = 0; i < n; ++i) y.col(i) = c * x.segment(i * m, m);
  Vector u = Vector::Zero(n * m);
  for (int i = 0; i < n; ++i) {
    Vector acc = Vector::Zero(m);
    for (int j = 0; j < n; ++j) {
      const double a = g.weight(i, j);
      if (a > 0.0) acc += a * (y.col(j) - y.col(i));
    }
    u.segment(i * m, m) = sigmas(i) * acc;
  }
  return u;
}

void check_sizes(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                 const NetworkState& state) {
  if (g.size() != net.agent_count() || sigmas.size() != net.agent_count() ||
      state.x.size() != net.state_size() || state.lam.size() != net.state_size()) {
    throw std::invalid_argument("rhs: dimension mismatch");
  }
}

}  // namespace

RhsResult alg1_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                   const NetworkState& state) {
  check_sizes(net, g, sigmas, state);
  const int n = net.agent_count(), m = net.dim();
  RhsResult r;
  r.u = coupling_pre(net, g, sigmas, state.x);
  r.x_dot.resize(n * m);
  r.lam_dot.resize(n * m);
  for (int i = 0; i < n; ++i) {
    const auto& p = net.agent(i);
    const auto u_i = r.u.segment(i * m, m);
    r.x_dot.segment(i * m, m) = -p.alpha * net.objective(i).gradient(state.x.segment(i * m, m)) -
                                p.K * state.lam.segment(i * m, m) + p.beta * u_i;
    r.lam_dot.segment(i * m, m) = -p.gamma * (p.J * u_i);
  }
  return r;
}

Matrix alg2_loop_matrix(const AgentNetwork& net, const Digraph& g, const Vector& sigmas) {
  const int n = net.agent_count(), m = net.dim();
  const Matrix l = laplacian(g);
  Matrix mm = Matrix::Identity(n * m, n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (l(i, j) == 0.0) continue;
      mm.block(i * m, j * m, m, m) -=
          sigmas(i) * l(i, j) * net.agent(j).nu * (net.agent(i).J * net.j_inverse(j));
    }
  }
  return mm;
}

RhsResult alg2_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                   const NetworkState& state) {
  check_sizes(net, g, sigmas, state);
  const int n = net.agent_count(), m = net.dim();
  const Vector u_pre = coupling_pre(net, g, sigmas, state.x);

  // gamma J S L C x = -gamma J u_pre, blockwise.
  Vector b(n * m);
  for (int i = 0; i < n; ++i) {
    b.segment(i * m, m) = -net.agent(i).gamma * (net.agent(i).J * u_pre.segment(i * m, m));
  }
  const Matrix mm = alg2_loop_matrix(net, g, sigmas);
  Eigen::FullPivLU<Matrix> lu(mm);
  if (!lu.isInvertible()) {
    throw std::runtime_error("alg2_rhs: singular algebraic-loop matrix I - J S L nu J^{-1}");
  }
  RhsResult r;
  r.lam_dot = lu.solve(b);
  r.u.resize(n * m);
  r.x_dot.resize(n * m);
  for (int i = 0; i < n; ++i) {
    const auto& p = net.agent(i);
    const Vector u_i = -(net.j_inverse(i) * r.lam_dot.segment(i * m, m)) / p.gamma;
    r.u.segment(i * m, m) = u_i;
    r.x_dot.segment(i * m, m) = -p.alpha * net.objective(i).gradient(state.x.segment(i * m, m)) -
                                p.K * state.lam.segment(i * m, m) + p.beta * u_i;
  }
  return r;
}

RhsResult evaluate_rhs(const AgentNetwork& net, const Digraph& g, const Vector& sigmas,
                       const NetworkState& state, Algorithm alg) {
  return alg == Algorithm::alg1 ? alg1_rhs(net, g, sigmas, state)
                                : alg2_rhs(net, g, sigmas, state);
}

NonsingularityReport check_nonsingular(const Digraph& g, double sigma, const Vector& nus,
                                       const std::vector<Matrix>& j_blocks) {
  NonsingularityReport rep;
  const int n = g.size();
  const int m = j_blocks.empty() ? 1 : static_cast<int>(j_blocks.front().rows());
  const Matrix l = laplacian(g);

  Matrix lnu = Matrix::Zero(n * m, n * m);  // L nu in stacked coordinates
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (l(i, j) != 0.0) {
        lnu.block(i * m, j * m, m, m) = l(i, j) * nus(j) * Matrix::Identity(m, m);
      }
    }
  }
  Eigen::EigenSolver<Matrix> es(-lnu);
  rep.min_real_part = es.eigenvalues().real().minCoeff();

  Matrix q = Matrix::Zero(n * m, n * m);  // -sigma J L nu J^{-1}
  for (int i = 0; i < n; ++i) {
    const Matrix& ji = j_blocks.empty() ? Matrix::Identity(m, m) : j_blocks[i];
    for (int j = 0; j < n; ++j) {
      if (l(i, j) == 0.0) continue;
      const Matrix jj_inv =
          j_blocks.empty() ? Matrix::Identity(m, m) : Matrix(j_blocks[j].inverse());
      q.block(i * m, j * m, m, m) = -sigma * l(i, j) * nus(j) * (ji * jj_inv);
    }
  }
  Eigen::EigenSolver<Matrix> esq(q);
  double closest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < esq.eigenvalues().size(); ++k) {
    closest = std::min(closest, std::abs(esq.eigenvalues()(k) + std::complex<double>(1.0, 0.0)));
  }
  const Matrix mm = Matrix::Identity(n * m, n * m) + q;
  Eigen::JacobiSVD<Matrix> svd(mm);
  const double smin = svd.singularValues().minCoeff();
  rep.condition = smin > 0.0 ? svd.singularValues()(0) / smin
                             : std::numeric_limits<double>::infinity();
  rep.nonsingular = closest > 1e-12 * std::max(1.0, q.norm()) && smin > 0.0;
  return rep;
}

Matrix expand_blocks(const Matrix& l, int m) {
  Matrix out = Matrix::Zero(l.rows() * m, l.cols() * m);
  for (int i = 0; i < l.rows(); ++i) {
    for (int j = 0; j < l.cols(); ++j) {
      if (l(i, j) != 0.0) {
        out.block(i * m, j * m, m, m) = l(i, j) * Matrix::Identity(m, m);
      }
    }
  }
  return out;
}

Matrix linearized_system_matrix(const std::vector<ObjectiveFunction>& fs, const Digraph& g,
                                double sigma) {
  if (fs.empty() || static_cast<int>(fs.size()) != g.size()) {
    throw std::invalid_argument("linearized_system_matrix: one objective per node required");
  }
  const int m = fs.front().dim;
  const int nm = static_cast<int>(fs.size()) * m;
  Matrix f_blocks = Matrix::Zero(nm, nm);
  for (size_t i = 0; i < fs.size(); ++i) {
    if (!fs[i].quadratic) {
      throw std::invalid_argument("linearized_system_matrix: objectives must be quadratic");
    }
    f_blocks.block(i * m, i * m, m, m) = fs[i].hessian(Vector::Zero(m));
  }
  const Matrix lm = expand_blocks(laplacian(g), m);
  Matrix a = Matrix::Zero(2 * nm, 2 * nm);
  a.topLeftCorner(nm, nm) = -f_blocks - sigma * lm;
  a.topRightCorner(nm, nm) = -Matrix::Identity(nm, nm);
  a.bottomLeftCorner(nm, nm) = sigma * lm;
  return a;
}

double stability_abscissa(const Matrix& a, double zero_tol) {
  Eigen::EigenSolver<Matrix> es(a);
  const auto& ev = es.eigenvalues();
  double max_mag = 0.0;
  for (int k = 0; k < ev.size(); ++k) max_mag = std::max(max_mag, std::abs(ev(k)));
  if (max_mag == 0.0) return 0.0;
  double abscissa = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k)) > zero_tol * max_mag) abscissa = std::max(abscissa, ev(k).real());
  }
  return abscissa;
}

}  // namespace ifpopt
