#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

#include "ifpopt/graph.hpp"

namespace ifpopt {

/// Twice continuously differentiable strongly convex local objective with
/// exact gradient/Hessian oracles. The strong-convexity constant `mu` and
/// gradient Lipschitz constant `lip` are carried as data so gain formulas can
/// read them without re-estimation.
struct ObjectiveFunction {
  int dim = 1;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  double mu = 0.0;
  double lip = 0.0;
  bool quadratic = false;
  std::string name;
};

/// f(x) = 0.5 (x - c)^T Q (x - c) with Q symmetric positive definite.
ObjectiveFunction make_quadratic(const Matrix& q, const Vector& c);

/// Scalar convenience: f(x) = 0.5 h (x - c)^2.
ObjectiveFunction make_quadratic(double h, double c);

/// Four-agent scalar catalog, index 1..4:
///   f1 = 0.4 x^2 - x
///   f2 = ln(exp(-0.3 x) + exp(0.5 x)) + 0.6 x^2
///   f3 = x^2 + cos(x)
///   f4 = x^2 / sqrt(x^2 + 1) + 0.9 x^2
ObjectiveFunction make_example1(int index);

/// Quadratic catalog f_i = 0.025 (i+1) (x - i)^2, index 1..4.
ObjectiveFunction make_example2(int index);

struct ConvexityEstimate {
  double mu_hat;
  double lip_hat;
};

/// Extremes of the Hessian spectrum over a sampled box, used to cross-check
/// the declared (mu, lip) pair.
ConvexityEstimate estimate_convexity_constants(const ObjectiveFunction& f, const Vector& lo,
                                               const Vector& hi, int samples);

}  // namespace ifpopt
