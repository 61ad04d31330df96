#include "ifpopt/builtins.hpp"

namespace ifpopt {

namespace {

Matrix ring4() {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = a(1, 2) = a(2, 3) = a(3, 0) = 1.0;
  return a;
}

Matrix two_cycles(int p0, int p1, int q0, int q1) {
  Matrix a = Matrix::Zero(4, 4);
  a(p0, p1) = a(p1, p0) = 1.0;
  a(q0, q1) = a(q1, q0) = 1.0;
  return a;
}

ExperimentConfig example1_base() {
  ExperimentConfig cfg;
  for (int i = 1; i <= 4; ++i) cfg.objectives.push_back({"example1", i, {}, {}});
  cfg.alpha = cfg.beta = cfg.gamma = 1.0;
  cfg.c_matrix = Matrix::Identity(1, 1);
  for (int i = 1; i <= 4; ++i) {
    cfg.j_blocks.push_back(Matrix::Constant(1, 1, 1.0 / i));
    cfg.k_blocks.push_back(Matrix::Constant(1, 1, static_cast<double>(i)));
  }
  Vector pinned(4);
  pinned << -0.31, -0.49, -1.0, -0.68;
  cfg.nu_pinned = pinned;
  cfg.algorithm = Algorithm::alg1;
  cfg.sim.dt = 1e-3;
  cfg.sim.t_end = 100.0;
  cfg.sim.record_every = 10;
  cfg.sim.monitor = true;
  cfg.init.x_uniform = true;
  cfg.init.x_low = 0.0;
  cfg.init.x_high = 1.0;
  cfg.init.x_seed = 1;
  return cfg;
}

ExperimentConfig example1_case1() {
  ExperimentConfig cfg = example1_base();
  cfg.name = "example1-case1";
  cfg.description = "Four agents on a fixed directed unit ring, shared gain 0.35 + 0.1 cos(t)";
  cfg.graph_adjacency = ring4();
  cfg.gains.kind = "shared";
  cfg.gains.shared = {0.35, 0.1, 1.0, GainProfile::Wave::cos};
  cfg.reproduces =
      "fixed-ring experiment; published consensus value 0.1601, computed optimum 0.129878";
  return cfg;
}

ExperimentConfig example1_case2() {
  ExperimentConfig cfg = example1_base();
  cfg.name = "example1-case2";
  cfg.description =
      "Random switching among three disconnected pair modes every 0.1 s, "
      "per-component sinusoidal gains";
  ScheduleSpec sched;
  sched.modes = {two_cycles(0, 1, 2, 3), two_cycles(0, 3, 1, 2), two_cycles(0, 2, 1, 3)};
  sched.dwell = 0.1;
  sched.sequence_kind = "random";
  sched.seed = 7;
  sched.count = 1000;
  cfg.schedule = sched;
  cfg.gains.kind = "per_subgraph";
  cfg.gains.profiles = {{0.3, 0.1, 1.0, GainProfile::Wave::sin},
                        {0.35, 0.1, 1.0, GainProfile::Wave::cos}};
  cfg.ujsc_window = 4.0;
  cfg.reproduces =
      "switching-pairs experiment; published consensus value 0.1601, computed optimum 0.129878";
  return cfg;
}

ExperimentConfig example2_base() {
  ExperimentConfig cfg;
  for (int i = 1; i <= 4; ++i) cfg.objectives.push_back({"example2", i, {}, {}});
  cfg.alpha = cfg.beta = cfg.gamma = 1.0;
  cfg.c_matrix = Matrix::Identity(1, 1);
  cfg.graph_adjacency = ring4();
  cfg.sim.dt = 1e-3;
  cfg.sim.t_end = 200.0;
  cfg.sim.record_every = 10;
  cfg.sim.monitor = true;
  cfg.init.x_uniform = true;
  cfg.init.x_low = 2.0;
  cfg.init.x_high = 3.0;
  cfg.init.x_seed = 2;
  return cfg;
}

ExperimentConfig example2(const std::string& name, Algorithm alg, double sigma) {
  ExperimentConfig cfg = example2_base();
  cfg.name = name;
  cfg.algorithm = alg;
  cfg.gains.kind = "constant";
  cfg.gains.shared = GainProfile::constant(sigma);
  cfg.reproduces = "quadratic four-agent ring; optimum 20/7 = 2.857142857142857";
  return cfg;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"example1-case1",          "example1-case2",          "example2-alg1-sigma0.005",
          "example2-alg2-sigma0.005", "example2-alg1-sigma0.1", "example2-alg2-sigma0.1",
          "example1",                "example2"};
}

ExperimentConfig builtin_config(const std::string& name) {
  if (name == "example1-case1" || name == "example1") return example1_case1();
  if (name == "example1-case2") return example1_case2();
  if (name == "example2-alg1-sigma0.005" || name == "example2") {
    return example2("example2-alg1-sigma0.005", Algorithm::alg1, 0.005);
  }
  if (name == "example2-alg2-sigma0.005") {
    return example2("example2-alg2-sigma0.005", Algorithm::alg2, 0.005);
  }
  if (name == "example2-alg1-sigma0.1") {
    ExperimentConfig cfg = example2("example2-alg1-sigma0.1", Algorithm::alg1, 0.1);
    cfg.description = "Gain above the degree threshold; the linearized flow is unstable";
    cfg.allow_inadmissible_gain = true;
    // The unstable mode grows at ~5.1e-4 1/s, so reaching the divergence
    // threshold takes ~4.3e4 s; a coarser step keeps the run short.
    cfg.sim.dt = 1e-2;
    cfg.sim.t_end = 50000.0;
    cfg.sim.record_every = 1000;
    cfg.sim.monitor = false;
    cfg.reproduces = "instability window of the diffusive-coupling flow at sigma = 0.1";
    return cfg;
  }
  if (name == "example2-alg2-sigma0.1") {
    ExperimentConfig cfg = example2("example2-alg2-sigma0.1", Algorithm::alg2, 0.1);
    cfg.reproduces = "derivative feedback converges at a gain where diffusive coupling diverges";
    return cfg;
  }
  throw ValidationError("unknown builtin '" + name + "'");
}

std::string builtin_description(const std::string& name) {
  const ExperimentConfig cfg = builtin_config(name);
  return cfg.description.empty() ? cfg.reproduces : cfg.description;
}

}  // namespace ifpopt
