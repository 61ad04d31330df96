#include "ifpopt/objective.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace ifpopt {

namespace {

ObjectiveFunction make_scalar(std::string name, std::function<double(double)> v,
                              std::function<double(double)> g, std::function<double(double)> h,
                              double mu, double lip, bool quadratic = false) {
  ObjectiveFunction f;
  f.dim = 1;
  f.name = std::move(name);
  f.value = [v](const Vector& x) { return v(x(0)); };
  f.gradient = [g](const Vector& x) { return Vector::Constant(1, g(x(0))); };
  f.hessian = [h](const Vector& x) { return Matrix::Constant(1, 1, h(x(0))); };
  f.mu = mu;
  f.lip = lip;
  f.quadratic = quadratic;
  return f;
}

double logistic(double s) {
  if (s >= 0.0) {
    return 1.0 / (1.0 + std::exp(-s));
  }
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// ln(e^{-0.3x} + e^{0.5x}) evaluated without overflow for large |x|.
double log_sum_exp_part(double x) {
  if (x >= 0.0) {
    return 0.5 * x + std::log1p(std::exp(-0.8 * x));
  }
  return -0.3 * x + std::log1p(std::exp(0.8 * x));
}

}  // namespace

ObjectiveFunction make_quadratic(const Matrix& q, const Vector& c) {
  const int m = static_cast<int>(q.rows());
  if (q.cols() != m || c.size() != m) {
    throw std::invalid_argument("make_quadratic: dimension mismatch");
  }
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("make_quadratic: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  const double mu = es.eigenvalues().minCoeff();
  const double lip = es.eigenvalues().maxCoeff();
  if (mu <= 0.0) {
    throw std::invalid_argument("make_quadratic: Q must be positive definite");
  }
  ObjectiveFunction f;
  f.dim = m;
  f.name = "quadratic";
  f.value = [q, c](const Vector& x) { return 0.5 * (x - c).dot(q * (x - c)); };
  f.gradient = [q, c](const Vector& x) -> Vector { return q * (x - c); };
  f.hessian = [q](const Vector&) { return q; };
  f.mu = mu;
  f.lip = lip;
  f.quadratic = true;
  return f;
}

ObjectiveFunction make_quadratic(double h, double c) {
  return make_quadratic(Matrix::Constant(1, 1, h), Vector::Constant(1, c));
}

ObjectiveFunction make_example1(int index) {
  switch (index) {
    case 1:
      return make_scalar(
          "example1.1", [](double x) { return 0.4 * x * x - x; },
          [](double x) { return 0.8 * x - 1.0; }, [](double) { return 0.8; }, 0.8, 0.8, true);
    case 2:
      return make_scalar(
          "example1.2", [](double x) { return log_sum_exp_part(x) + 0.6 * x * x; },
          [](double x) { return -0.3 + 0.8 * logistic(0.8 * x) + 1.2 * x; },
          [](double x) {
            const double p = logistic(0.8 * x);
            return 0.64 * p * (1.0 - p) + 1.2;
          },
          1.20, 1.36);
    case 3:
      return make_scalar(
          "example1.3", [](double x) { return x * x + std::cos(x); },
          [](double x) { return 2.0 * x - std::sin(x); },
          [](double x) { return 2.0 - std::cos(x); }, 1.0, 3.0);
    case 4:
      return make_scalar(
          "example1.4",
          [](double x) { return x * x / std::sqrt(x * x + 1.0) + 0.9 * x * x; },
          [](double x) {
            const double r = x * x + 1.0;
            return (x * x * x + 2.0 * x) / (r * std::sqrt(r)) + 1.8 * x;
          },
          [](double x) {
            const double r = x * x + 1.0;
            return (2.0 - x * x) / (r * r * std::sqrt(r)) + 1.8;
          },
          1.76, 3.8);
    default:
      throw std::invalid_argument("make_example1: index must be 1..4");
  }
}

ObjectiveFunction make_example2(int index) {
  if (index < 1 || index > 4) {
    throw std::invalid_argument("make_example2: index must be 1..4");
  }
  const double h = 0.05 * (index + 1);
  ObjectiveFunction f = make_quadratic(h, static_cast<double>(index));
  f.name = "example2." + std::to_string(index);
  return f;
}

ConvexityEstimate estimate_convexity_constants(const ObjectiveFunction& f, const Vector& lo,
                                               const Vector& hi, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("estimate_convexity_constants: need at least 2 samples");
  }
  if (lo.size() != f.dim || hi.size() != f.dim || ((hi - lo).array() <= 0.0).any()) {
    throw std::invalid_argument("estimate_convexity_constants: invalid box");
  }
  double mu_hat = std::numeric_limits<double>::infinity();
  double lip_hat = -std::numeric_limits<double>::infinity();
  auto account = [&](const Vector& x) {
    const Matrix h = f.hessian(x);
    if (f.dim == 1) {
      mu_hat = std::min(mu_hat, h(0, 0));
      lip_hat = std::max(lip_hat, h(0, 0));
      return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    mu_hat = std::min(mu_hat, es.eigenvalues().minCoeff());
    lip_hat = std::max(lip_hat, es.eigenvalues().maxCoeff());
  };
  if (f.dim == 1) {
    for (int k = 0; k < samples; ++k) {
      const double t = static_cast<double>(k) / (samples - 1);
      account(Vector::Constant(1, lo(0) + t * (hi(0) - lo(0))));
    }
  } else {
    std::mt19937_64 gen(0x5eed);
    for (int k = 0; k < samples; ++k) {
      Vector x(f.dim);
      for (int d = 0; d < f.dim; ++d) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        x(d) = lo(d) + u * (hi(d) - lo(d));
      }
      account(x);
    }
  }
  return {mu_hat, lip_hat};
}

}  // namespace ifpopt
