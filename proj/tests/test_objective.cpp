#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ifpopt/objective.hpp"

using namespace ifpopt;

namespace {

std::vector<ObjectiveFunction> catalog() {
  std::vector<ObjectiveFunction> fs;
  for (int i = 1; i <= 4; ++i) fs.push_back(make_example1(i));
  for (int i = 1; i <= 4; ++i) fs.push_back(make_example2(i));
  Matrix q(2, 2);
  q << 3.0, 0.5, 0.5, 1.0;
  Vector c(2);
  c << -1.0, 2.0;
  fs.push_back(make_quadratic(q, c));
  return fs;
}

Vector random_point(std::mt19937_64& gen, int dim, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = normal(gen);
  return x;
}

}  // namespace

TEST_CASE("gradient matches central differences of the value") {
  std::mt19937_64 gen(31);
  const double h = 1e-5;
  for (const auto& f : catalog()) {
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_point(gen, f.dim, 3.0);
      const Vector g = f.gradient(x);
      for (int d = 0; d < f.dim; ++d) {
        Vector xp = x, xm = x;
        xp(d) += h;
        xm(d) -= h;
        const double fd = (f.value(xp) - f.value(xm)) / (2.0 * h);
        CHECK(std::abs(fd - g(d)) <= 1e-5 * std::max(1.0, std::abs(g(d))));
      }
    }
  }
}

TEST_CASE("hessian matches central differences of the gradient") {
  std::mt19937_64 gen(37);
  const double h = 1e-5;
  for (const auto& f : catalog()) {
    for (int k = 0; k < 25; ++k) {
      const Vector x = random_point(gen, f.dim, 3.0);
      const Matrix hess = f.hessian(x);
      for (int d = 0; d < f.dim; ++d) {
        Vector xp = x, xm = x;
        xp(d) += h;
        xm(d) -= h;
        const Vector col = (f.gradient(xp) - f.gradient(xm)) / (2.0 * h);
        for (int r = 0; r < f.dim; ++r) {
          CHECK(std::abs(col(r) - hess(r, d)) <= 1e-4 * std::max(1.0, std::abs(hess(r, d))));
        }
      }
    }
  }
}

TEST_CASE("gradients are strongly monotone with the declared modulus") {
  std::mt19937_64 gen(41);
  for (const auto& f : catalog()) {
    for (int k = 0; k < 200; ++k) {
      const Vector x = random_point(gen, f.dim, 4.0);
      const Vector y = random_point(gen, f.dim, 4.0);
      if ((x - y).norm() < 1e-12) continue;
      const double lhs = (f.gradient(x) - f.gradient(y)).dot(x - y);
      CHECK(lhs >= (f.mu - 1e-9) * (x - y).squaredNorm());
    }
  }
}

TEST_CASE("first catalog set carries the published constants") {
  const double expected[4][2] = {{0.8, 0.8}, {1.20, 1.36}, {1.0, 3.0}, {1.76, 3.8}};
  for (int i = 1; i <= 4; ++i) {
    const auto f = make_example1(i);
    CHECK(f.mu == expected[i - 1][0]);
    CHECK(f.lip == expected[i - 1][1]);
  }
  CHECK(make_example1(1).quadratic);
  CHECK_FALSE(make_example1(3).quadratic);
  CHECK_THROWS_AS(make_example1(0), std::invalid_argument);
  CHECK_THROWS_AS(make_example1(5), std::invalid_argument);

  // d^2/dx^2 (x^2 + cos x) = 2 - cos x -> 1 at the origin.
  CHECK(make_example1(3).hessian(Vector::Zero(1))(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("second catalog set: curvatures, minimizers, aggregate optimum") {
  CHECK(make_example2(1).hessian(Vector::Constant(1, 0.7))(0, 0) == doctest::Approx(0.1));
  const auto f4 = make_example2(4);
  CHECK(f4.gradient(Vector::Constant(1, 4.0))(0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(make_example2(0), std::invalid_argument);

  const Vector at = Vector::Constant(1, 20.0 / 7.0);
  double sum = 0.0;
  for (int i = 1; i <= 4; ++i) sum += make_example2(i).gradient(at)(0);
  CHECK(std::abs(sum) <= 1e-12);
}

TEST_CASE("quadratic constructor validates its data") {
  Matrix bad(2, 2);
  bad << 1.0, 0.2, 0.0, 1.0;
  CHECK_THROWS_AS(make_quadratic(bad, Vector::Zero(2)), std::invalid_argument);
  Matrix indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(make_quadratic(indefinite, Vector::Zero(2)), std::invalid_argument);
  const auto f = make_quadratic(2.5, 1.0);
  CHECK(f.mu == 2.5);
  CHECK(f.lip == 2.5);
  CHECK(f.value(Vector::Constant(1, 3.0)) == doctest::Approx(0.5 * 2.5 * 4.0));
}

TEST_CASE("convexity estimation brackets the declared constants") {
  const Vector lo10 = Vector::Constant(1, -10.0), hi10 = Vector::Constant(1, 10.0);
  const Vector lo20 = Vector::Constant(1, -20.0), hi20 = Vector::Constant(1, 20.0);

  const auto e4 = estimate_convexity_constants(make_example1(4), lo10, hi10, 10000);
  CHECK(std::abs(e4.mu_hat - 1.76) <= 1e-2);
  CHECK(std::abs(e4.lip_hat - 3.8) <= 1e-2);

  const auto e2 = estimate_convexity_constants(make_example1(2), lo20, hi20, 10000);
  CHECK(std::abs(e2.mu_hat - 1.20) <= 1e-2);
  CHECK(std::abs(e2.lip_hat - 1.36) <= 1e-2);

  const auto eq = estimate_convexity_constants(make_quadratic(1.7, 0.0), lo10, hi10, 100);
  CHECK(eq.mu_hat == 1.7);
  CHECK(eq.lip_hat == 1.7);

  // Every catalog entry stays within its declared envelope.
  for (const auto& f : catalog()) {
    const Vector lo = Vector::Constant(f.dim, -15.0), hi = Vector::Constant(f.dim, 15.0);
    const auto est = estimate_convexity_constants(f, lo, hi, 2000);
    CHECK(est.mu_hat >= f.mu - 1e-6);
    CHECK(est.lip_hat <= f.lip + 1e-6);
  }

  CHECK_THROWS_AS(estimate_convexity_constants(make_example1(1), lo10, hi10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_convexity_constants(make_example1(1), hi10, lo10, 100),
                  std::invalid_argument);
}

TEST_CASE("log-sum-exp part stays finite far from the origin") {
  const auto f = make_example1(2);
  for (double x : {-500.0, -50.0, 50.0, 500.0}) {
    const Vector v = Vector::Constant(1, x);
    CHECK(std::isfinite(f.value(v)));
    CHECK(std::isfinite(f.gradient(v)(0)));
    CHECK(std::isfinite(f.hessian(v)(0, 0)));
  }
}
