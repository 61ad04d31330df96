#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ifpopt/passivity.hpp"

using namespace ifpopt;

namespace {

// Independent estimator: dense log grid over eta crossed with a dense x grid,
// evaluating the Hessian pointwise. No endpoint reduction, no refinement.
double brute_force_index(const AgentParams& p, const ObjectiveFunction& f, double x_box,
                         int eta_points = 60000, int x_points = 4001) {
  const double lo = (1.0 + 1e-9) / (f.mu * p.alpha * p.gamma);
  const double hi = 1e3 / (f.mu * p.alpha * p.gamma);
  const double c = p.C(0, 0);
  std::vector<double> hessians;
  hessians.reserve(x_points);
  for (int k = 0; k < x_points; ++k) {
    const double x = -x_box + 2.0 * x_box * k / (x_points - 1);
    hessians.push_back(f.hessian(Vector::Constant(1, x))(0, 0));
  }
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < eta_points; ++k) {
    const double eta = lo * std::pow(hi / lo, static_cast<double>(k) / (eta_points - 1));
    const double den = 4.0 * (f.mu * eta * p.alpha - 1.0 / p.gamma);
    double worst = 0.0;
    for (double h : hessians) {
      const double g = eta * (p.alpha * p.beta * h - p.gamma * c) - p.beta / p.gamma;
      worst = std::max(worst, g * g);
    }
    best = std::min(best, worst / den);
  }
  return -best;
}

AgentParams unit_params() { return AgentParams::scalar(1.0, 1.0, 1.0, 1.0, 1.0); }

}  // namespace

TEST_CASE("quadratic catalog indices match the analytic stationary points") {
  // Stationary-point values of (eta (h-1) - 1)^2 / (4 (h eta - 1)) for the
  // curvatures 0.1, 0.15, 0.2, 0.25.
  const double expected_nu[4] = {-90.0, -340.0 / 9.0, -20.0, -12.0};
  const double expected_eta[4] = {190.0 / 9.0, 1.85 / 0.1275, 11.25, 28.0 / 3.0};
  const double published[4] = {-89.96, -37.77, -20.00, -12.00};
  for (int i = 1; i <= 4; ++i) {
    const auto f = make_example2(i);
    const auto res = ifp_index_minimax(unit_params(), f);
    CHECK(res.nu == doctest::Approx(expected_nu[i - 1]).epsilon(1e-6));
    CHECK(res.eta == doctest::Approx(expected_eta[i - 1]).epsilon(1e-4));
    CHECK(std::abs(res.nu - published[i - 1]) <= 0.05);
    CHECK(res.nu <= 0.0);
  }
}

TEST_CASE("ring catalog agent 1 has the analytic index") {
  // min over eta of (0.2 eta + 1)^2 / (4 (0.8 eta - 1)) is 0.3125 at eta 7.5.
  AgentParams p = AgentParams::scalar(1.0, 1.0, 1.0, 1.0, 1.0);
  const auto res = ifp_index_minimax(p, make_example1(1));
  CHECK(res.nu == doctest::Approx(-0.3125).epsilon(1e-9));
  CHECK(res.eta == doctest::Approx(7.5).epsilon(1e-6));
}

TEST_CASE("ring catalog agents 2-4: frozen endpoint-analysis values") {
  // Agent 2: branch switch of max((0.2 eta - 1)^2, (0.36 eta - 1)^2) at
  // eta = 25/7, giving -1/161. Agent 3: -2 at eta = 3/2. Agent 4: value at
  // eta = 60/77.
  const double expected[3] = {-1.0 / 161.0, -2.0, -0.9400864};
  const double expected_eta[3] = {25.0 / 7.0, 1.5, 60.0 / 77.0};
  for (int i = 2; i <= 4; ++i) {
    const auto res = ifp_index_minimax(unit_params(), make_example1(i));
    CHECK(res.nu == doctest::Approx(expected[i - 2]).epsilon(1e-4));
    CHECK(res.eta == doctest::Approx(expected_eta[i - 2]).epsilon(1e-3));
  }
}

TEST_CASE("minimax agrees with the dense-grid estimator on the whole catalog") {
  for (int i = 1; i <= 4; ++i) {
    const auto f1 = make_example1(i);
    const auto impl = ifp_index_minimax(unit_params(), f1);
    const double oracle = brute_force_index(unit_params(), f1, 30.0);
    CHECK(impl.nu == doctest::Approx(oracle).epsilon(2e-3));

    const auto f2 = make_example2(i);
    const auto impl2 = ifp_index_minimax(unit_params(), f2);
    const double oracle2 = brute_force_index(unit_params(), f2, 30.0);
    CHECK(impl2.nu == doctest::Approx(oracle2).epsilon(2e-3));
  }
}

TEST_CASE("index computation rejects bad inputs") {
  const auto f = make_example1(1);
  CHECK_THROWS_AS(ifp_index_minimax(unit_params(), f, {0.5, 100.0}, 2000),
                  std::invalid_argument);  // enters eta <= 1/(mu a g)
  CHECK_THROWS_AS(ifp_index_minimax(unit_params(), f, default_eta_search(0.8, 1, 1), 50),
                  std::invalid_argument);  // too few grid points
}

TEST_CASE("norm relaxation is never tighter than the minimax") {
  std::mt19937_64 gen(53);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 50; ++trial) {
    AgentParams p = AgentParams::scalar(uniform(0.2, 3.0), uniform(-2.0, 2.0), uniform(0.2, 3.0),
                                        uniform(0.3, 2.0), uniform(0.3, 2.0));
    const auto f = trial % 2 == 0 ? make_example1(1 + trial % 4) : make_example2(1 + trial % 4);
    const auto mm = ifp_index_minimax(p, f);
    const double rel = ifp_index_relaxed(p, f.mu, f.lip);
    CHECK(mm.nu >= rel - 1e-12);
    CHECK(rel <= 0.0);
  }
  for (int i = 1; i <= 4; ++i) {
    const auto f = make_example1(i);
    CHECK(ifp_index_minimax(unit_params(), f).nu >=
          ifp_index_relaxed(unit_params(), f.mu, f.lip) - 1e-12);
  }
}

TEST_CASE("relaxation reduces to -1/mu^2 when beta vanishes") {
  // With beta = 0, C = I, alpha = gamma = 1 the bound is
  // -min_eta eta^2 / (4 (mu eta - 1)), minimized at eta = 2/mu with value
  // 1/mu^2 (numeric minimization agrees).
  for (double mu : {0.5, 1.0, 2.0}) {
    AgentParams p = AgentParams::scalar(1.0, 0.0, 1.0, 1.0, 1.0);
    double oracle = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200000; ++k) {
      const double eta = (1.0 + 1e-9) / mu * std::pow(1e3, k / 199999.0);
      oracle = std::min(oracle, eta * eta / (4.0 * (mu * eta - 1.0)));
    }
    CHECK(oracle == doctest::Approx(1.0 / (mu * mu)).epsilon(1e-6));
    CHECK(ifp_index_relaxed(p, mu, mu) == doctest::Approx(-1.0 / (mu * mu)).epsilon(1e-9));
  }
}

TEST_CASE("relaxed value for the slowest quadratic agent") {
  // Analytic stationary point of (1.25 eta + 1)^2 / (4 (0.25 eta - 1)):
  // eta = 8.8, value 30.
  const auto f = make_example2(4);
  const double rel = ifp_index_relaxed(unit_params(), f.mu, f.lip);
  CHECK(rel == doctest::Approx(-30.0).epsilon(1e-9));
  CHECK(rel <= ifp_index_minimax(unit_params(), f).nu);
}

TEST_CASE("relaxed index vanishes as the convexity modulus grows") {
  AgentParams p = unit_params();
  const double rel = ifp_index_relaxed(p, 1e5, 1e5);
  CHECK(rel < 0.0);
  CHECK(rel > -1e-3);
}

TEST_CASE("grid refinement does not move the minimax index") {
  for (int i = 1; i <= 4; ++i) {
    const auto f = make_example1(i);
    const auto coarse = ifp_index_minimax(unit_params(), f,
                                          default_eta_search(f.mu, 1.0, 1.0), 1000);
    const auto fine = ifp_index_minimax(unit_params(), f,
                                        default_eta_search(f.mu, 1.0, 1.0), 10000);
    CHECK(std::abs(coarse.nu - fine.nu) <= 1e-6);
  }
}

TEST_CASE("storage value vanishes exactly at the optimal pair") {
  AgentParams p = AgentParams::scalar(1.0, 1.0, 1.0, 0.5, 2.0);
  p.eta = 10.0;
  const auto f = make_example1(2);
  const Vector x_star = Vector::Constant(1, 0.37);
  const Vector lam_star = Vector::Constant(1, -0.52);
  const auto ev = storage_value(p, f, x_star, lam_star, x_star, lam_star);
  CHECK(ev.value == 0.0);
  CHECK(ev.z.norm() == 0.0);
}

TEST_CASE("storage value matches the closed form for a centered quadratic") {
  const double h = 0.8, alpha = 1.3, gamma = 0.7, k = 2.0, eta = 6.0;
  AgentParams p = AgentParams::scalar(alpha, 0.4, gamma, 1.0 / k, k);
  p.eta = eta;
  REQUIRE(eta > 1.0 / (h * alpha * gamma));
  const auto f = make_quadratic(h, 0.0);
  const Vector zero = Vector::Zero(1);
  for (double x : {-2.0, -0.5, 0.0, 0.9, 3.0}) {
    for (double lam : {-1.0, 0.0, 0.4, 2.0}) {
      const auto ev = storage_value(p, f, Vector::Constant(1, x), Vector::Constant(1, lam),
                                    zero, zero);
      // The reference gradient vanishes at the centered minimizer, so only
      // the quadratic-in-z, cross and value terms survive.
      const double z = alpha * h * x + k * lam;
      const double direct =
          0.5 * eta * z * z - x * k * lam / gamma - (alpha / gamma) * 0.5 * h * x * x;
      CHECK(ev.value == doctest::Approx(direct).epsilon(1e-12));
      CHECK(ev.value >= 0.0);
    }
  }
}

TEST_CASE("storage stays nonnegative over random states for every catalog agent") {
  std::mt19937_64 gen(59);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int i = 1; i <= 4; ++i) {
    for (const auto& f : {make_example1(i), make_example2(i)}) {
      AgentParams p = unit_params();
      const auto idx = ifp_index_minimax(p, f);
      p.eta = idx.eta;
      p.nu = idx.nu;
      const Vector x_star = Vector::Constant(1, 0.3);
      const Vector lam_star = Vector::Constant(1, -f.gradient(x_star)(0));
      for (int k = 0; k < 10000; ++k) {
        const auto ev = storage_value(p, f, Vector::Constant(1, normal(gen)),
                                      Vector::Constant(1, normal(gen)), x_star, lam_star);
        CHECK(ev.value >= -1e-12);
      }
    }
  }
}

TEST_CASE("parameter validation catches every broken constraint") {
  const double mu = 0.8;
  AgentParams ok = AgentParams::scalar(1.0, 1.0, 1.0, 0.5, 2.0);
  ok.eta = 2.0;
  CHECK_NOTHROW(validate_agent_params(ok, mu));

  AgentParams wrong_c = ok;
  wrong_c.C = Matrix::Constant(1, 1, 1.5);
  CHECK_THROWS_AS(validate_agent_params(wrong_c, mu), std::invalid_argument);

  AgentParams singular = ok;
  singular.J = Matrix::Zero(1, 1);
  CHECK_THROWS_AS(validate_agent_params(singular, mu), std::invalid_argument);

  AgentParams bad_alpha = ok;
  bad_alpha.alpha = 0.0;
  CHECK_THROWS_AS(validate_agent_params(bad_alpha, mu), std::invalid_argument);

  AgentParams eta_low = ok;
  eta_low.eta = 1.0 / (mu * 1.0 * 1.0);  // not strictly above the bound
  CHECK_THROWS_AS(validate_agent_params(eta_low, mu), std::invalid_argument);

  AgentParams positive_nu = ok;
  positive_nu.nu = 0.5;
  CHECK_THROWS_AS(validate_agent_params(positive_nu, mu), std::invalid_argument);
}
