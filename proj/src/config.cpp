#include "ifpopt/config.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace ifpopt {

using nlohmann::json;

namespace {

double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("config: " + path + ": " + what);
}

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "." + key, "unknown field");
  }
}

double get_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Matrix parse_matrix(const json& j, const std::string& path) {
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) fail(path, "expected a matrix (array of rows)");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(path, "expected nonempty rows");
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(path, "ragged matrix");
    for (size_t c = 0; c < cols; ++c) {
      m(r, c) = get_num(j[r][c], path);
    }
  }
  return m;
}

Vector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = get_num(j[i], path);
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

GainProfile parse_profile(const json& j, const std::string& path) {
  expect_keys(j, path, {"offset", "amplitude", "wave", "omega"});
  GainProfile p;
  p.offset = get_num(j.at("offset"), path + ".offset");
  if (j.contains("amplitude")) p.amplitude = get_num(j["amplitude"], path + ".amplitude");
  if (j.contains("omega")) p.omega = get_num(j["omega"], path + ".omega");
  if (j.contains("wave")) {
    const std::string w = j["wave"].get<std::string>();
    if (w == "sin") {
      p.wave = GainProfile::Wave::sin;
    } else if (w == "cos") {
      p.wave = GainProfile::Wave::cos;
    } else if (w == "none") {
      p.wave = GainProfile::Wave::none;
    } else {
      fail(path + ".wave", "expected sin, cos or none");
    }
  }
  return p;
}

json profile_to_json(const GainProfile& p) {
  json j;
  j["offset"] = p.offset;
  j["amplitude"] = p.amplitude;
  j["omega"] = p.omega;
  j["wave"] = p.wave == GainProfile::Wave::sin   ? "sin"
              : p.wave == GainProfile::Wave::cos ? "cos"
                                                 : "none";
  return j;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  expect_keys(j, "$",
              {"name", "description", "objectives", "agents", "graph", "schedule", "gains",
               "algorithm", "sim", "init", "validation", "reproduces"});
  ExperimentConfig cfg;
  cfg.name = j.value("name", "unnamed");
  cfg.description = j.value("description", "");
  cfg.reproduces = j.value("reproduces", "");

  if (!j.contains("objectives") || !j["objectives"].is_array() || j["objectives"].empty()) {
    fail("$.objectives", "expected a nonempty array");
  }
  for (size_t i = 0; i < j["objectives"].size(); ++i) {
    const auto& o = j["objectives"][i];
    const std::string path = "$.objectives[" + std::to_string(i) + "]";
    expect_keys(o, path, {"catalog", "index", "q", "c"});
    ObjectiveSpec spec;
    spec.catalog = o.value("catalog", "");
    if (spec.catalog == "example1" || spec.catalog == "example2") {
      if (!o.contains("index")) fail(path, "catalog entry needs an index");
      spec.index = o["index"].get<int>();
    } else if (spec.catalog == "quadratic") {
      spec.q = parse_matrix(o.at("q"), path + ".q");
      spec.c = parse_vector(o.at("c"), path + ".c");
    } else {
      fail(path + ".catalog", "expected example1, example2 or quadratic");
    }
    cfg.objectives.push_back(std::move(spec));
  }

  if (j.contains("agents")) {
    const auto& a = j["agents"];
    expect_keys(a, "$.agents", {"alpha", "beta", "gamma", "C", "J", "K", "nu_pinned"});
    cfg.alpha = a.contains("alpha") ? get_num(a["alpha"], "$.agents.alpha") : 1.0;
    cfg.beta = a.contains("beta") ? get_num(a["beta"], "$.agents.beta") : 1.0;
    cfg.gamma = a.contains("gamma") ? get_num(a["gamma"], "$.agents.gamma") : 1.0;
    if (a.contains("C")) cfg.c_matrix = parse_matrix(a["C"], "$.agents.C");
    auto parse_blocks = [&](const char* key, std::vector<Matrix>& out) {
      if (!a.contains(key)) return;
      const auto& arr = a[key];
      if (!arr.is_array()) fail(std::string("$.agents.") + key, "expected one entry per agent");
      for (size_t i = 0; i < arr.size(); ++i) {
        out.push_back(parse_matrix(arr[i], std::string("$.agents.") + key));
      }
    };
    parse_blocks("J", cfg.j_blocks);
    parse_blocks("K", cfg.k_blocks);
    if (a.contains("nu_pinned")) {
      cfg.nu_pinned = parse_vector(a["nu_pinned"], "$.agents.nu_pinned");
    }
  }

  if (j.contains("graph") == j.contains("schedule")) {
    fail("$", "exactly one of graph or schedule is required");
  }
  if (j.contains("graph")) {
    expect_keys(j["graph"], "$.graph", {"adjacency"});
    cfg.graph_adjacency = parse_matrix(j["graph"].at("adjacency"), "$.graph.adjacency");
  } else {
    const auto& s = j["schedule"];
    expect_keys(s, "$.schedule", {"modes", "dwell", "sequence"});
    ScheduleSpec spec;
    if (!s.contains("modes") || !s["modes"].is_array() || s["modes"].empty()) {
      fail("$.schedule.modes", "expected a nonempty array of adjacency matrices");
    }
    for (size_t k = 0; k < s["modes"].size(); ++k) {
      spec.modes.push_back(parse_matrix(s["modes"][k], "$.schedule.modes"));
    }
    spec.dwell = get_num(s.at("dwell"), "$.schedule.dwell");
    if (spec.dwell <= 0.0) fail("$.schedule.dwell", "must be positive");
    const auto& seq = s.at("sequence");
    expect_keys(seq, "$.schedule.sequence", {"kind", "seed", "count", "pattern", "indices"});
    spec.sequence_kind = seq.value("kind", "");
    if (spec.sequence_kind == "random") {
      spec.seed = seq.value("seed", std::uint64_t{0});
      spec.count = seq.value("count", 0);
      if (spec.count < 1) fail("$.schedule.sequence.count", "must be at least 1");
    } else if (spec.sequence_kind == "cycle") {
      for (const auto& e : seq.at("pattern")) spec.sequence.push_back(e.get<int>());
      if (spec.sequence.empty()) fail("$.schedule.sequence.pattern", "must be nonempty");
    } else if (spec.sequence_kind == "explicit") {
      for (const auto& e : seq.at("indices")) spec.sequence.push_back(e.get<int>());
      if (spec.sequence.empty()) fail("$.schedule.sequence.indices", "must be nonempty");
    } else {
      fail("$.schedule.sequence.kind", "expected random, cycle or explicit");
    }
    cfg.schedule = std::move(spec);
  }

  {
    if (!j.contains("gains")) fail("$.gains", "required");
    const auto& g = j["gains"];
    expect_keys(g, "$.gains", {"kind", "sigma", "profile", "profiles"});
    cfg.gains.kind = g.value("kind", "");
    if (cfg.gains.kind == "constant") {
      cfg.gains.shared = GainProfile::constant(get_num(g.at("sigma"), "$.gains.sigma"));
    } else if (cfg.gains.kind == "shared") {
      cfg.gains.shared = parse_profile(g.at("profile"), "$.gains.profile");
    } else if (cfg.gains.kind == "per_subgraph") {
      if (!g.contains("profiles") || !g["profiles"].is_array() || g["profiles"].empty()) {
        fail("$.gains.profiles", "expected a nonempty array");
      }
      for (size_t k = 0; k < g["profiles"].size(); ++k) {
        cfg.gains.profiles.push_back(
            parse_profile(g["profiles"][k], "$.gains.profiles[" + std::to_string(k) + "]"));
      }
    } else {
      fail("$.gains.kind", "expected constant, shared or per_subgraph");
    }
  }

  {
    const std::string alg = j.value("algorithm", "alg1");
    if (alg == "alg1") {
      cfg.algorithm = Algorithm::alg1;
    } else if (alg == "alg2") {
      cfg.algorithm = Algorithm::alg2;
    } else {
      fail("$.algorithm", "expected alg1 or alg2");
    }
  }

  if (!j.contains("sim")) fail("$.sim", "required");
  {
    const auto& s = j["sim"];
    expect_keys(s, "$.sim", {"dt", "t_end", "record_every", "monitor", "divergence_norm"});
    cfg.sim.dt = get_num(s.at("dt"), "$.sim.dt");
    cfg.sim.t_end = get_num(s.at("t_end"), "$.sim.t_end");
    cfg.sim.record_every = s.value("record_every", 10);
    cfg.sim.monitor = s.value("monitor", true);
    if (s.contains("divergence_norm")) {
      cfg.sim.divergence_norm = get_num(s["divergence_norm"], "$.sim.divergence_norm");
    }
    cfg.sim.algorithm = cfg.algorithm;
  }

  if (j.contains("init")) {
    const auto& s = j["init"];
    expect_keys(s, "$.init", {"x", "lambda"});
    if (s.contains("x")) {
      const auto& x = s["x"];
      expect_keys(x, "$.init.x", {"uniform", "values"});
      if (x.contains("uniform")) {
        const auto& u = x["uniform"];
        expect_keys(u, "$.init.x.uniform", {"low", "high", "seed"});
        cfg.init.x_uniform = true;
        cfg.init.x_low = get_num(u.at("low"), "$.init.x.uniform.low");
        cfg.init.x_high = get_num(u.at("high"), "$.init.x.uniform.high");
        cfg.init.x_seed = u.value("seed", std::uint64_t{0});
      } else if (x.contains("values")) {
        cfg.init.x_values = parse_vector(x["values"], "$.init.x.values");
      } else {
        fail("$.init.x", "expected uniform or values");
      }
    }
    if (s.contains("lambda")) {
      expect_keys(s["lambda"], "$.init.lambda", {"values"});
      cfg.init.lambda_values = parse_vector(s["lambda"].at("values"), "$.init.lambda.values");
    }
  }

  if (j.contains("validation")) {
    const auto& v = j["validation"];
    expect_keys(v, "$.validation", {"balance_tol", "ujsc_window", "allow_inadmissible_gain"});
    if (v.contains("balance_tol")) {
      cfg.balance_tol = get_num(v["balance_tol"], "$.validation.balance_tol");
    }
    if (v.contains("ujsc_window")) {
      cfg.ujsc_window = get_num(v["ujsc_window"], "$.validation.ujsc_window");
    }
    cfg.allow_inadmissible_gain = v.value("allow_inadmissible_gain", false);
  }
  return cfg;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (!cfg.description.empty()) j["description"] = cfg.description;
  if (!cfg.reproduces.empty()) j["reproduces"] = cfg.reproduces;
  json objs = json::array();
  for (const auto& o : cfg.objectives) {
    json e;
    e["catalog"] = o.catalog;
    if (o.catalog == "quadratic") {
      e["q"] = matrix_to_json(o.q);
      e["c"] = vector_to_json(o.c);
    } else {
      e["index"] = o.index;
    }
    objs.push_back(e);
  }
  j["objectives"] = objs;
  json agents;
  agents["alpha"] = cfg.alpha;
  agents["beta"] = cfg.beta;
  agents["gamma"] = cfg.gamma;
  agents["C"] = matrix_to_json(cfg.c_matrix);
  if (!cfg.j_blocks.empty()) {
    json arr = json::array();
    for (const auto& m : cfg.j_blocks) arr.push_back(matrix_to_json(m));
    agents["J"] = arr;
  }
  if (!cfg.k_blocks.empty()) {
    json arr = json::array();
    for (const auto& m : cfg.k_blocks) arr.push_back(matrix_to_json(m));
    agents["K"] = arr;
  }
  if (cfg.nu_pinned) agents["nu_pinned"] = vector_to_json(*cfg.nu_pinned);
  j["agents"] = agents;
  if (cfg.graph_adjacency) {
    j["graph"]["adjacency"] = matrix_to_json(*cfg.graph_adjacency);
  } else if (cfg.schedule) {
    json s;
    json modes = json::array();
    for (const auto& m : cfg.schedule->modes) modes.push_back(matrix_to_json(m));
    s["modes"] = modes;
    s["dwell"] = cfg.schedule->dwell;
    json seq;
    seq["kind"] = cfg.schedule->sequence_kind;
    if (cfg.schedule->sequence_kind == "random") {
      seq["seed"] = cfg.schedule->seed;
      seq["count"] = cfg.schedule->count;
    } else if (cfg.schedule->sequence_kind == "cycle") {
      seq["pattern"] = cfg.schedule->sequence;
    } else {
      seq["indices"] = cfg.schedule->sequence;
    }
    s["sequence"] = seq;
    j["schedule"] = s;
  }
  json g;
  g["kind"] = cfg.gains.kind;
  if (cfg.gains.kind == "constant") {
    g["sigma"] = cfg.gains.shared.offset;
  } else if (cfg.gains.kind == "shared") {
    g["profile"] = profile_to_json(cfg.gains.shared);
  } else {
    json arr = json::array();
    for (const auto& p : cfg.gains.profiles) arr.push_back(profile_to_json(p));
    g["profiles"] = arr;
  }
  j["gains"] = g;
  j["algorithm"] = cfg.algorithm == Algorithm::alg1 ? "alg1" : "alg2";
  j["sim"] = {{"dt", cfg.sim.dt},
              {"t_end", cfg.sim.t_end},
              {"record_every", cfg.sim.record_every},
              {"monitor", cfg.sim.monitor},
              {"divergence_norm", cfg.sim.divergence_norm}};
  json init;
  if (cfg.init.x_uniform) {
    init["x"]["uniform"] = {{"low", cfg.init.x_low},
                            {"high", cfg.init.x_high},
                            {"seed", cfg.init.x_seed}};
  } else if (cfg.init.x_values.size() > 0) {
    init["x"]["values"] = vector_to_json(cfg.init.x_values);
  }
  if (cfg.init.lambda_values.size() > 0) {
    init["lambda"]["values"] = vector_to_json(cfg.init.lambda_values);
  }
  if (!init.is_null()) j["init"] = init;
  j["validation"] = {{"balance_tol", cfg.balance_tol},
                     {"ujsc_window", cfg.ujsc_window},
                     {"allow_inadmissible_gain", cfg.allow_inadmissible_gain}};
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = config_to_json_text(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<ObjectiveFunction> build_objectives(const ExperimentConfig& cfg) {
  std::vector<ObjectiveFunction> fs;
  for (const auto& spec : cfg.objectives) {
    if (spec.catalog == "example1") {
      fs.push_back(make_example1(spec.index));
    } else if (spec.catalog == "example2") {
      fs.push_back(make_example2(spec.index));
    } else {
      fs.push_back(make_quadratic(spec.q, spec.c));
    }
  }
  return fs;
}

SwitchingSchedule build_schedule(const ExperimentConfig& cfg) {
  if (cfg.graph_adjacency) {
    return SwitchingSchedule::fixed(Digraph(*cfg.graph_adjacency));
  }
  const auto& spec = *cfg.schedule;
  std::vector<Digraph> modes;
  for (const auto& m : spec.modes) modes.emplace_back(m);

  std::vector<int> seq;
  std::optional<double> period;
  if (spec.sequence_kind == "random") {
    std::mt19937_64 gen(spec.seed);
    for (int k = 0; k < spec.count; ++k) {
      seq.push_back(static_cast<int>(gen() % modes.size()));
    }
  } else if (spec.sequence_kind == "cycle") {
    seq = spec.sequence;
    period = spec.dwell * static_cast<double>(seq.size());
  } else {
    seq = spec.sequence;
  }
  std::vector<ScheduleSegment> segments;
  for (size_t k = 0; k < seq.size(); ++k) {
    const int mode = seq[k];
    if (mode < 0 || mode >= static_cast<int>(modes.size())) {
      throw ValidationError("config: schedule sequence references an unknown mode");
    }
    segments.push_back({spec.dwell * static_cast<double>(k), modes[mode]});
  }
  return SwitchingSchedule(std::move(segments), period);
}

}  // namespace

ResolvedExperiment resolve(const ExperimentConfig& cfg) {
  auto objectives = build_objectives(cfg);
  const int n = static_cast<int>(objectives.size());
  const int m = objectives.front().dim;
  for (const auto& f : objectives) {
    if (f.dim != m) throw ValidationError("config: objectives disagree on dimension");
  }

  Matrix c = cfg.c_matrix;
  if (c.rows() == 1 && m > 1) c = Matrix::Identity(m, m) * c(0, 0);
  if (c.rows() != m) throw ValidationError("config: C has the wrong dimension");

  if (!cfg.j_blocks.empty() && static_cast<int>(cfg.j_blocks.size()) != n) {
    throw ValidationError("config: J needs one block per agent");
  }
  if (!cfg.k_blocks.empty() && static_cast<int>(cfg.k_blocks.size()) != n) {
    throw ValidationError("config: K needs one block per agent");
  }
  if (cfg.nu_pinned && cfg.nu_pinned->size() != n) {
    throw ValidationError("config: nu_pinned needs one value per agent");
  }

  auto block_of = [&](const std::vector<Matrix>& blocks, int i) -> Matrix {
    if (blocks.empty()) return Matrix::Identity(m, m);
    Matrix b = blocks[i];
    if (b.rows() == 1 && m > 1) return Matrix::Identity(m, m) * b(0, 0);
    if (b.rows() != m || b.cols() != m) {
      throw ValidationError("config: J/K block has the wrong dimension");
    }
    return b;
  };

  std::vector<AgentParams> agents;
  Vector nu_computed(n), eta(n), nu_relaxed(n), nu_dynamics(n);
  for (int i = 0; i < n; ++i) {
    AgentParams p;
    p.alpha = cfg.alpha;
    p.beta = cfg.beta;
    p.gamma = cfg.gamma;
    p.J = block_of(cfg.j_blocks, i);
    p.K = block_of(cfg.k_blocks, i);
    p.C = c;
    if (!(cfg.alpha > 0.0) || !(cfg.gamma > 0.0)) {
      throw ValidationError("config: alpha and gamma must be positive");
    }
    try {
      validate_agent_params(p, objectives[i].mu);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("config: agent ") + std::to_string(i) + ": " + e.what());
    }
    const auto idx = ifp_index_minimax(p, objectives[i]);
    nu_computed(i) = idx.nu;
    const double eta_floor = (1.0 + 1e-6) / (objectives[i].mu * p.alpha * p.gamma);
    eta(i) = std::max(idx.eta, eta_floor);
    nu_relaxed(i) = ifp_index_relaxed(p, objectives[i].mu, objectives[i].lip);
    if (cfg.nu_pinned) {
      if ((*cfg.nu_pinned)(i) > 0.0) {
        throw ValidationError("config: pinned nu values must be nonpositive");
      }
      nu_dynamics(i) = (*cfg.nu_pinned)(i);
    } else {
      nu_dynamics(i) = nu_computed(i);
    }
    p.nu = nu_dynamics(i);
    p.eta = eta(i);
    agents.push_back(std::move(p));
  }

  SwitchingSchedule schedule = build_schedule(cfg);
  if (schedule.agent_count() != n) {
    throw ValidationError("config: graph node count differs from the agent count");
  }
  for (int k = 0; k < schedule.segment_count(); ++k) {
    const Digraph& g = schedule.segments()[k].graph;
    if (g.adjacency().cwiseAbs().maxCoeff() == 0.0) {
      throw ValidationError("config: segment " + std::to_string(k) +
                            " has no edges; an edgeless interval is rejected");
    }
    if (!is_weight_balanced(g, cfg.balance_tol)) {
      throw ValidationError("config: segment " + std::to_string(k) +
                            " graph is not weight-balanced");
    }
  }

  // Joint connectivity over windows of the realized schedule.
  double window = cfg.ujsc_window;
  if (window <= 0.0) {
    if (schedule.segment_count() == 1) {
      window = 1.0;
    } else {
      double min_gap = std::numeric_limits<double>::infinity();
      for (int k = 1; k < schedule.segment_count(); ++k) {
        min_gap = std::min(min_gap,
                           schedule.segments()[k].start - schedule.segments()[k - 1].start);
      }
      window = 40.0 * min_gap;
    }
  }
  double horizon = cfg.sim.t_end;
  if (schedule.period()) horizon = *schedule.period() + window;
  horizon = std::max(horizon, window);
  const bool ujsc = is_ujsc(schedule, window, horizon);

  // Gain schedule and its admissibility against the degree threshold.
  GainSchedule gains = GainSchedule::shared(cfg.gains.shared, n);
  if (cfg.gains.kind == "per_subgraph") {
    try {
      gains = assign_subgraph_gains(schedule, nu_dynamics, cfg.gains.profiles);
    } catch (const std::invalid_argument& e) {
      if (!cfg.allow_inadmissible_gain) throw ValidationError(e.what());
      // Keep the literal profiles, assigned per component without the bound.
      std::vector<std::vector<GainProfile>> table(schedule.segment_count(),
                                                  std::vector<GainProfile>(n));
      for (int k = 0; k < schedule.segment_count(); ++k) {
        const auto comps = strongly_connected_components(schedule.segments()[k].graph);
        for (size_t ci = 0; ci < comps.size(); ++ci) {
          for (int agent : comps[ci]) {
            table[k][agent] = cfg.gains.profiles[ci % cfg.gains.profiles.size()];
          }
        }
      }
      gains = GainSchedule::per_agent_table(std::move(table));
    }
  }
  if (gains.is_shared() && cfg.gains.shared.min_value() <= 0.0) {
    throw ValidationError("config: coupling gain must stay positive");
  }
  const GainAdmissibility adm = check_gain_admissibility(schedule, nu_dynamics, gains);

  NetworkState init;
  if (cfg.init.x_values.size() > 0) {
    if (cfg.init.x_values.size() != n * m) {
      throw ValidationError("config: init.x.values has the wrong length");
    }
    init.x = cfg.init.x_values;
  } else if (cfg.init.x_uniform) {
    std::mt19937_64 gen(cfg.init.x_seed);
    init.x.resize(n * m);
    for (int i = 0; i < n * m; ++i) {
      init.x(i) = cfg.init.x_low + (cfg.init.x_high - cfg.init.x_low) * unit_draw(gen);
    }
  } else {
    init.x = Vector::Zero(n * m);
  }
  if (cfg.init.lambda_values.size() > 0) {
    if (cfg.init.lambda_values.size() != n * m) {
      throw ValidationError("config: init.lambda.values has the wrong length");
    }
    init.lam = cfg.init.lambda_values;
  } else {
    init.lam = Vector::Zero(n * m);
  }
  init.t = 0.0;

  AgentNetwork network(std::move(agents), std::move(objectives));
  if (network.sum_k_lambda(init.lam).norm() > 1e-10) {
    throw ValidationError(
        "config: initial multiplier condition sum_i K_i lam_i(0) = 0 violated");
  }

  OptimalPoint optimum = centralized_optimum(network, Vector::Zero(m));
  ThresholdReport thresholds = threshold_report(schedule, nu_dynamics);

  return ResolvedExperiment{cfg,
                            std::move(network),
                            std::move(schedule),
                            std::move(gains),
                            std::move(optimum),
                            std::move(init),
                            std::move(nu_computed),
                            std::move(eta),
                            std::move(nu_relaxed),
                            std::move(nu_dynamics),
                            std::move(thresholds),
                            ujsc,
                            window,
                            adm.admissible,
                            adm.detail};
}

namespace {

json analysis_json(const ResolvedExperiment& exp) {
  json j;
  j["name"] = exp.config.name;
  j["config_hash"] = config_hash(exp.config);
  j["algorithm"] = exp.config.algorithm == Algorithm::alg1 ? "alg1" : "alg2";
  j["nu"] = {{"computed", vector_to_json(exp.nu_computed)},
             {"relaxed", vector_to_json(exp.nu_relaxed)},
             {"dynamics", vector_to_json(exp.nu_dynamics)},
             {"eta", vector_to_json(exp.eta)}};
  j["nu"]["pinned"] =
      exp.config.nu_pinned ? vector_to_json(*exp.config.nu_pinned) : json(nullptr);
  json per_seg = json::array();
  for (const auto& st : exp.thresholds.per_segment) {
    per_seg.push_back({{"segment", st.segment},
                       {"sigma_eig", st.sigma_eig},
                       {"sigma_deg", st.sigma_deg}});
  }
  j["thresholds"] = {{"per_segment", per_seg},
                     {"sigma_eig_min", exp.thresholds.sigma_eig_min},
                     {"sigma_deg_min", exp.thresholds.sigma_deg_min}};
  j["ujsc"] = {{"holds", exp.ujsc}, {"window", exp.ujsc_window}};
  j["balanced"] = true;  // enforced during resolve
  j["gain"] = {{"admissible", exp.gain_admissible}, {"detail", exp.gain_detail}};
  json sccs = json::array();
  for (int k = 0; k < exp.schedule.segment_count(); ++k) {
    sccs.push_back(strongly_connected_components(exp.schedule.segments()[k].graph));
  }
  j["scc"] = {{"per_segment", sccs}};
  j["optimum"] = {{"x_star", vector_to_json(exp.optimum.x_star)}};
  json seeds;
  seeds["schedule"] = exp.config.schedule && exp.config.schedule->sequence_kind == "random"
                          ? json(exp.config.schedule->seed)
                          : json(nullptr);
  seeds["init"] = exp.config.init.x_uniform ? json(exp.config.init.x_seed) : json(nullptr);
  j["seeds"] = seeds;
  return j;
}

}  // namespace

std::string analyze_experiment(const ResolvedExperiment& exp) {
  return analysis_json(exp).dump(2);
}

RunArtifacts run_experiment(const ResolvedExperiment& exp, const std::string& out_dir) {
  if (!exp.ujsc) {
    throw ValidationError(
        "run: the schedule is not jointly strongly connected over the checked windows");
  }
  if (exp.config.algorithm == Algorithm::alg1 && !exp.gain_admissible &&
      !exp.config.allow_inadmissible_gain) {
    throw ValidationError("run: " + exp.gain_detail +
                          " (pass allow_inadmissible_gain to simulate anyway)");
  }

  RunArtifacts art;
  art.trajectory = integrate(exp.config.sim, exp.network, exp.schedule, exp.gains, exp.optimum,
                             exp.init, &exp.nu_computed);
  art.exit_code = art.trajectory.diverged ? 2 : 0;

  const auto& traj = art.trajectory;
  const auto& final_metrics = traj.metrics.back();
  const LyapunovReport lyap = monitor_lyapunov(traj, exp.config.sim);

  double invariant_max = 0.0;
  for (const auto& ms : traj.metrics) {
    invariant_max = std::max(invariant_max, ms.multiplier_invariant);
  }
  const Vector& xf = traj.xs.back();
  const double consensus_value = xf.mean();

  json j = analysis_json(exp);
  j["dt"] = exp.config.sim.dt;
  j["t_end"] = exp.config.sim.t_end;
  j["steps"] = traj.steps;
  j["diverged"] = traj.diverged;
  j["divergence_time"] = traj.diverged ? json(traj.divergence_time) : json(nullptr);
  j["final_gap"] = final_metrics.optimality_gap;
  j["consensus_value"] = consensus_value;
  j["final"] = {{"t", final_metrics.t},
                {"consensus_error", final_metrics.consensus_error},
                {"optimality_gap", final_metrics.optimality_gap},
                {"lyapunov", final_metrics.lyapunov},
                {"multiplier_invariant_max", invariant_max}};
  j["lyapunov"] = {{"violations", lyap.violations}, {"max_increment", lyap.max_increment}};
  j["passivity"] = {{"violations", traj.passivity.violations},
                    {"max_excess", traj.passivity.max_excess},
                    {"checked_steps", traj.passivity.checked_steps}};
  art.summary_json = j.dump(2);

  json manifest;
  manifest["name"] = exp.config.name;
  manifest["config_hash"] = config_hash(exp.config);
  manifest["seeds"] = j["seeds"];
  manifest["reproduces"] = exp.config.reproduces;
  manifest["artifacts"] = {{"trajectory", "trajectory.csv"}, {"summary", "summary.json"}};
  art.manifest_json = manifest.dump(2);

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "trajectory.csv");
    write_trajectory_csv(csv, traj);
    std::ofstream summary(fs::path(out_dir) / "summary.json");
    summary << art.summary_json << '\n';
    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << art.manifest_json << '\n';
  }
  return art;
}

std::string schema_json() {
  json j;
  j["config"] = {
      {"name", "string"},
      {"description", "string (optional)"},
      {"objectives",
       "array; {catalog:example1|example2, index:1..4} or {catalog:quadratic, q:[[..]], c:[..]}"},
      {"agents",
       {{"alpha", "number > 0"},
        {"beta", "number"},
        {"gamma", "number > 0"},
        {"C", "m x m matrix or scalar (optional, default identity)"},
        {"J", "array of per-agent scalars or m x m matrices (optional, default identity)"},
        {"K", "array of per-agent scalars or m x m matrices (optional, default identity)"},
        {"nu_pinned", "array of nonpositive numbers, one per agent (optional)"}}},
      {"graph", {{"adjacency", "n x n nonnegative matrix, zero diagonal"}}},
      {"schedule",
       {{"modes", "array of adjacency matrices"},
        {"dwell", "seconds per slot"},
        {"sequence",
         "{kind:random, seed, count} | {kind:cycle, pattern:[..]} | {kind:explicit, indices:[..]}"}}},
      {"gains",
       "{kind:constant, sigma} | {kind:shared, profile} | {kind:per_subgraph, profiles:[..]}; "
       "profile = {offset, amplitude, wave:sin|cos|none, omega}"},
      {"algorithm", "alg1 (diffusive coupling) | alg2 (derivative feedback)"},
      {"sim",
       {{"dt", "step, seconds"},
        {"t_end", "seconds"},
        {"record_every", "steps per record"},
        {"monitor", "bool: storage metric + supply-rate checks"},
        {"divergence_norm", "truncation threshold"}}},
      {"init",
       {{"x", "{uniform:{low,high,seed}} | {values:[..]}"},
        {"lambda", "{values:[..]} (optional, default zeros; must satisfy sum K_i lam_i = 0)"}}},
      {"validation",
       {{"balance_tol", "weight-balance tolerance (default 1e-9)"},
        {"ujsc_window", "joint-connectivity window, seconds (default: 40 dwell)"},
        {"allow_inadmissible_gain", "bool: simulate past the degree threshold"}}},
      {"reproduces", "string carried into the manifest (optional)"}};
  j["summary_keys"] = {
      "name",          "config_hash",     "algorithm", "nu.computed", "nu.relaxed",
      "nu.pinned",     "nu.dynamics",     "nu.eta",    "thresholds",  "ujsc",
      "balanced",      "gain",            "scc",       "optimum",     "seeds",
      "dt",            "t_end",           "steps",     "diverged",    "divergence_time",
      "final_gap",     "consensus_value", "final",     "lyapunov",    "passivity"};
  j["csv_header"] =
      "t,x_1..x_Nm,lam_1..lam_Nm,consensus_error,optimality_gap,lyapunov,multiplier_invariant";
  j["exit_codes"] = {{"0", "completed"}, {"1", "validation error"}, {"2", "divergence flag"}};
  return j.dump(2);
}

}  // namespace ifpopt
