#include "ifpopt/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ifpopt {

namespace {

struct MonitorScratch {
  Vector v;       // per-agent storage values at the current step start
  Vector supply;  // per-agent supply rates y'u - nu u'u at the step start
  bool primed = false;
};

Vector storage_per_agent(const AgentNetwork& net, const OptimalPoint& opt, const Vector& x,
                         const Vector& lam) {
  const int m = net.dim();
  Vector v(net.agent_count());
  for (int i = 0; i < net.agent_count(); ++i) {
    v(i) = storage_value(net.agent(i), net.objective(i), x.segment(i * m, m),
                         lam.segment(i * m, m), opt.x_star, opt.lam_star.segment(i * m, m))
               .value;
  }
  return v;
}

Vector supply_per_agent(const AgentNetwork& net, const OptimalPoint& opt, const Vector& x,
                        const Vector& u, const Vector& nus) {
  const int m = net.dim();
  const Matrix& c = net.agent(0).C;
  Vector s(net.agent_count());
  for (int i = 0; i < net.agent_count(); ++i) {
    const Vector y = c * (x.segment(i * m, m) - opt.x_star);
    const auto u_i = u.segment(i * m, m);
    s(i) = y.dot(u_i) - nus(i) * u_i.squaredNorm();
  }
  return s;
}

MetricSample metrics_at(const AgentNetwork& net, const OptimalPoint& opt, const Vector& sum0,
                        double t, const Vector& x, const Vector& lam, bool with_storage) {
  const int m = net.dim();
  MetricSample ms;
  ms.t = t;
  for (int i = 0; i < net.agent_count(); ++i) {
    const auto xi = x.segment(i * m, m);
    ms.optimality_gap = std::max(ms.optimality_gap, (xi - opt.x_star).norm());
    for (int j = i + 1; j < net.agent_count(); ++j) {
      ms.consensus_error = std::max(ms.consensus_error, (xi - x.segment(j * m, m)).norm());
    }
  }
  ms.multiplier_invariant = (net.sum_k_lambda(lam) - sum0).norm();
  if (with_storage) {
    ms.lyapunov = storage_per_agent(net, opt, x, lam).sum();
  }
  return ms;
}

}  // namespace

Trajectory integrate(const SimConfig& cfg, const AgentNetwork& net,
                     const SwitchingSchedule& schedule, const GainSchedule& gains,
                     const OptimalPoint& opt, const NetworkState& init,
                     const Vector* certified_nus) {
  if (cfg.dt <= 0.0 || cfg.t_end <= init.t || cfg.record_every < 1) {
    throw std::invalid_argument("integrate: invalid simulation configuration");
  }
  if (schedule.agent_count() != net.agent_count() ||
      gains.agent_count() != net.agent_count()) {
    throw std::invalid_argument("integrate: schedule/gain size mismatch");
  }
  if (net.sum_k_lambda(init.lam).norm() > 1e-10) {
    throw std::invalid_argument(
        "integrate: initial multiplier condition sum_i K_i lam_i(0) = 0 violated");
  }

  const Vector nus_monitor = certified_nus ? *certified_nus : net.nus();
  const Vector sum0 = net.sum_k_lambda(init.lam);
  const double tol_per_step = 1e-6 * cfg.dt;

  Trajectory traj;
  Vector x = init.x, lam = init.lam;
  double t = init.t;

  auto record = [&](double at) {
    traj.times.push_back(at);
    traj.record_steps.push_back(traj.steps);
    traj.xs.push_back(x);
    traj.lams.push_back(lam);
    traj.metrics.push_back(metrics_at(net, opt, sum0, at, x, lam, cfg.monitor));
  };
  record(t);

  MonitorScratch mon;
  Vector k1x, k1l, k2x, k2l, k3x, k3l, k4x, k4l;

  while (t < cfg.t_end - 1e-12) {
    const int seg = schedule.segment_index_at(t);
    const Digraph& g = schedule.segments()[seg].graph;
    const double boundary = schedule.next_boundary_after(t);
    double h = std::min(cfg.dt, cfg.t_end - t);
    bool lands_on_boundary = false;
    if (boundary - t <= h + 1e-12) {
      h = boundary - t;
      lands_on_boundary = true;
    }

    auto rhs_at = [&](double tau, const Vector& xs_, const Vector& ls_) {
      NetworkState s{xs_, ls_, tau};
      return evaluate_rhs(net, g, gains.sigmas(seg, tau), s, cfg.algorithm);
    };

    RhsResult r1 = rhs_at(t, x, lam);
    if (cfg.monitor && !mon.primed) {
      mon.v = storage_per_agent(net, opt, x, lam);
      mon.supply = supply_per_agent(net, opt, x, r1.u, nus_monitor);
      mon.primed = true;
    }
    RhsResult r2 = rhs_at(t + 0.5 * h, x + 0.5 * h * r1.x_dot, lam + 0.5 * h * r1.lam_dot);
    RhsResult r3 = rhs_at(t + 0.5 * h, x + 0.5 * h * r2.x_dot, lam + 0.5 * h * r2.lam_dot);
    RhsResult r4 = rhs_at(t + h, x + h * r3.x_dot, lam + h * r3.lam_dot);

    x += (h / 6.0) * (r1.x_dot + 2.0 * r2.x_dot + 2.0 * r3.x_dot + r4.x_dot);
    lam += (h / 6.0) * (r1.lam_dot + 2.0 * r2.lam_dot + 2.0 * r3.lam_dot + r4.lam_dot);
    t = lands_on_boundary ? boundary : ((t + h >= cfg.t_end - 1e-12) ? cfg.t_end : t + h);
    ++traj.steps;

    const double norm = std::sqrt(x.squaredNorm() + lam.squaredNorm());
    if (!std::isfinite(norm) || norm > cfg.divergence_norm) {
      traj.diverged = true;
      traj.divergence_time = t;
      record(t);
      return traj;
    }

    if (cfg.monitor) {
      // Supply at the step end, evaluated with this step's segment so the
      // trapezoid stays inside the smooth piece.
      const RhsResult r_end = rhs_at(t, x, lam);
      const Vector v_end = storage_per_agent(net, opt, x, lam);
      const Vector s_end = supply_per_agent(net, opt, x, r_end.u, nus_monitor);
      ++traj.passivity.checked_steps;
      for (int i = 0; i < net.agent_count(); ++i) {
        const double excess = (v_end(i) - mon.v(i)) - 0.5 * h * (mon.supply(i) + s_end(i));
        traj.passivity.max_excess = std::max(traj.passivity.max_excess, excess);
        if (excess > tol_per_step) ++traj.passivity.violations;
      }
      mon.v = v_end;
      if (lands_on_boundary) {
        mon.primed = false;  // next step re-evaluates the supply on the new segment
      } else {
        mon.supply = s_end;
      }
    }

    if (traj.steps % cfg.record_every == 0 || t >= cfg.t_end - 1e-12) {
      record(t);
    }
  }
  return traj;
}

LyapunovReport monitor_lyapunov(const Trajectory& traj, const SimConfig& cfg) {
  LyapunovReport rep;
  for (size_t k = 1; k < traj.metrics.size(); ++k) {
    const double inc = traj.metrics[k].lyapunov - traj.metrics[k - 1].lyapunov;
    rep.max_increment = std::max(rep.max_increment, inc);
    const double steps = static_cast<double>(traj.record_steps[k] - traj.record_steps[k - 1]);
    if (inc > 1e-6 * cfg.dt * std::max(1.0, steps)) ++rep.violations;
  }
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.xs.empty()) return;
  const int nm = static_cast<int>(traj.xs.front().size());
  os << "t";
  for (int i = 1; i <= nm; ++i) os << ",x_" << i;
  for (int i = 1; i <= nm; ++i) os << ",lam_" << i;
  os << ",consensus_error,optimality_gap,lyapunov,multiplier_invariant\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << ',' << buf;
  };
  for (size_t k = 0; k < traj.xs.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.times[k]);
    os << buf;
    for (int i = 0; i < nm; ++i) put(traj.xs[k](i));
    for (int i = 0; i < nm; ++i) put(traj.lams[k](i));
    const auto& ms = traj.metrics[k];
    put(ms.consensus_error);
    put(ms.optimality_gap);
    put(ms.lyapunov);
    put(ms.multiplier_invariant);
    os << '\n';
  }
}

}  // namespace ifpopt
