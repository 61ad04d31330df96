#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ifpopt/graph.hpp"

using namespace ifpopt;

namespace {

// Reachability closure by repeated squaring of the boolean adjacency; the
// independent oracle for component checks.
std::vector<std::vector<int>> scc_by_closure(const Matrix& adj) {
  const int n = static_cast<int>(adj.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (adj(i, j) > 0.0) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> members;
    for (int j = 0; j < n; ++j) {
      if (comp[j] < 0 && reach[i][j] && reach[j][i]) {
        comp[j] = static_cast<int>(out.size());
        members.push_back(j);
      }
    }
    out.push_back(members);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Digraph random_balanced(std::mt19937_64& gen, int n) {
  // Sum of random directed cycles; each cycle contributes equally to the in-
  // and out-degree of every node it visits, so the result is balanced.
  Matrix a = Matrix::Zero(n, n);
  std::vector<int> perm(n);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), gen);
    const int len = 2 + static_cast<int>(gen() % (n - 1));
    const double w = 0.25 + static_cast<double>(gen() % 100) / 50.0;
    for (int i = 0; i < len; ++i) {
      const int from = perm[i], to = perm[(i + 1) % len];
      if (from != to) a(to, from) += w;
    }
  }
  return Digraph(a);
}

const Matrix kRingLaplacian = [] {
  Matrix l(4, 4);
  l << 1, -1, 0, 0,  //
      0, 1, -1, 0,   //
      0, 0, 1, -1,   //
      -1, 0, 0, 1;
  return l;
}();

}  // namespace

TEST_CASE("laplacian of the directed unit ring") {
  const Digraph g = Digraph::ring(4);
  CHECK((laplacian(g) - kRingLaplacian).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian of the empty graph is zero") {
  CHECK(laplacian(Digraph::empty(5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian of the complete bidirectional triangle") {
  const Digraph g = Digraph::from_bidirectional_pairs(3, {{0, 1}, {0, 2}, {1, 2}});
  const Matrix expected =
      2.0 * Matrix::Identity(3, 3) - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3));
  CHECK((laplacian(g) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian rows sum to zero") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 7);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = i == j ? 0.0 : static_cast<double>(gen() % 8) / 3.0;
      }
    }
    const Vector row_sums = laplacian(Digraph(a)).rowwise().sum();
    CHECK(row_sums.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("digraph construction rejects bad weights") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  CHECK_THROWS_AS(Digraph{a}, std::invalid_argument);
  a.setZero();
  a(0, 1) = -1.0;
  CHECK_THROWS_AS(Digraph{a}, std::invalid_argument);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Digraph{a}, std::invalid_argument);
}

TEST_CASE("weight balance") {
  CHECK(is_weight_balanced(Digraph::ring(4)));

  Matrix one_edge = Matrix::Zero(2, 2);
  one_edge(1, 0) = 1.0;
  CHECK_FALSE(is_weight_balanced(Digraph(one_edge)));

  const Digraph pairs = Digraph::from_bidirectional_pairs(4, {{0, 1}, {2, 3}});
  CHECK(is_weight_balanced(pairs));

  CHECK_THROWS_AS(is_weight_balanced(Digraph::ring(3), 0.0), std::invalid_argument);
}

TEST_CASE("weight balance agrees with the column-sum characterization") {
  std::mt19937_64 gen(17);
  int balanced_seen = 0, unbalanced_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 5);
    Digraph g = (trial % 2 == 0 && n >= 3) ? random_balanced(gen, n) : [&] {
      Matrix a = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j && gen() % 3 == 0) a(i, j) = static_cast<double>(1 + gen() % 5);
        }
      }
      return Digraph(a);
    }();
    const bool via_sums =
        (Vector::Ones(n).transpose() * laplacian(g)).cwiseAbs().maxCoeff() <= 1e-9;
    CHECK(is_weight_balanced(g) == via_sums);
    (via_sums ? balanced_seen : unbalanced_seen)++;
  }
  CHECK(balanced_seen > 10);
  CHECK(unbalanced_seen > 10);
}

TEST_CASE("symmetric Laplacian part is positive semidefinite on balanced graphs") {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 5);
    const Digraph g = random_balanced(gen, n);
    REQUIRE(is_weight_balanced(g, 1e-9));
    const Matrix s = laplacian(g) + laplacian(g).transpose();
    for (int k = 0; k < 100; ++k) {
      Vector eta(n);
      for (int i = 0; i < n; ++i) eta(i) = normal(gen);
      CHECK(eta.dot(s * eta) >= -1e-12 * eta.squaredNorm());
    }
  }
}

TEST_CASE("strongly connected components: named cases") {
  CHECK(strongly_connected_components(Digraph::ring(4)) ==
        std::vector<std::vector<int>>{{0, 1, 2, 3}});

  const Digraph pairs = Digraph::from_bidirectional_pairs(4, {{0, 1}, {2, 3}});
  CHECK(strongly_connected_components(pairs) == std::vector<std::vector<int>>{{0, 1}, {2, 3}});

  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;  // cycle {0,1}, node 2 isolated
  CHECK(strongly_connected_components(Digraph(a)) ==
        std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("strongly connected components match the closure oracle on all small graphs") {
  for (int n = 1; n <= 5; ++n) {
    const int bits = n * (n - 1);
    const std::uint64_t total = 1ULL << bits;
    for (std::uint64_t code = 0; code < total; ++code) {
      Matrix a = Matrix::Zero(n, n);
      int bit = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          if ((code >> bit) & 1ULL) a(i, j) = 1.0;
          ++bit;
        }
      }
      const Digraph g(a);
      REQUIRE(strongly_connected_components(g) == scc_by_closure(a));
    }
  }
}

TEST_CASE("switching schedule validation and lookup") {
  std::vector<ScheduleSegment> segs;
  segs.push_back({0.0, Digraph::ring(3)});
  segs.push_back({0.5, Digraph::empty(3)});
  const SwitchingSchedule s(segs);
  CHECK(s.segment_index_at(0.0) == 0);
  CHECK(s.segment_index_at(0.499) == 0);
  CHECK(s.segment_index_at(0.5) == 1);  // right-continuous
  CHECK(s.segment_index_at(10.0) == 1);
  CHECK(s.next_boundary_after(0.0) == 0.5);
  CHECK(s.next_boundary_after(0.5) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(s.segment_index_at(-1.0), std::invalid_argument);

  segs[1].start = 0.0;
  CHECK_THROWS_AS(SwitchingSchedule{segs}, std::invalid_argument);
  segs[0].start = 0.1;
  CHECK_THROWS_AS(SwitchingSchedule(std::vector<ScheduleSegment>{segs[0]}),
                  std::invalid_argument);
  std::vector<ScheduleSegment> mixed;
  mixed.push_back({0.0, Digraph::ring(3)});
  mixed.push_back({1.0, Digraph::ring(4)});
  CHECK_THROWS_AS(SwitchingSchedule{mixed}, std::invalid_argument);
}

TEST_CASE("periodic schedule wraps") {
  std::vector<ScheduleSegment> segs;
  segs.push_back({0.0, Digraph::ring(3)});
  segs.push_back({0.25, Digraph::empty(3)});
  const SwitchingSchedule s(segs, 0.5);
  CHECK(s.segment_index_at(0.6) == 0);
  CHECK(s.segment_index_at(0.8) == 1);
  CHECK(s.next_boundary_after(0.3) == doctest::Approx(0.5));
  CHECK(s.next_boundary_after(0.5) == doctest::Approx(0.75));
  const auto bounds = s.boundaries_up_to(1.0);
  REQUIRE(bounds.size() == 5);
  CHECK(bounds[3] == doctest::Approx(0.75));
}

TEST_CASE("union graph takes edgewise maxima") {
  const Digraph a = Digraph::ring(3, 2.0);
  const Digraph b = Digraph::from_bidirectional_pairs(3, {{0, 1}});
  const Digraph u = union_graph({&a, &b});
  CHECK(u.weight(0, 1) == 2.0);
  CHECK(u.weight(1, 0) == 1.0);
  CHECK(u.weight(1, 2) == 2.0);
}

TEST_CASE("joint strong connectivity over windows") {
  // Constant strongly connected ring: true for any window.
  CHECK(is_ujsc(SwitchingSchedule::fixed(Digraph::ring(4)), 0.7, 10.0));

  // The three disconnected pair modes, cycled every 0.1 s: the union of the
  // three is complete, so any window covering all modes passes.
  const Digraph m1 = Digraph::from_bidirectional_pairs(4, {{0, 1}, {2, 3}});
  const Digraph m2 = Digraph::from_bidirectional_pairs(4, {{0, 3}, {1, 2}});
  const Digraph m3 = Digraph::from_bidirectional_pairs(4, {{0, 2}, {1, 3}});
  std::vector<ScheduleSegment> segs;
  for (int k = 0; k < 30; ++k) {
    segs.push_back({0.1 * k, k % 3 == 0 ? m1 : (k % 3 == 1 ? m2 : m3)});
  }
  const SwitchingSchedule cycling(segs);
  CHECK(is_ujsc(cycling, 0.3, 3.0));
  CHECK_FALSE(is_ujsc(cycling, 0.05, 3.0));  // a window inside one dwell sees a single mode

  // A schedule that never feeds node 0.
  Matrix no_in = Matrix::Zero(3, 3);
  no_in(1, 2) = no_in(2, 1) = 1.0;
  no_in(1, 0) = 1.0;
  CHECK_FALSE(is_ujsc(SwitchingSchedule::fixed(Digraph(no_in)), 1.0, 5.0));

  CHECK_THROWS_AS(is_ujsc(cycling, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(is_ujsc(cycling, 1.0, 0.5), std::invalid_argument);
}
