#include "neseek/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace neseek {

std::vector<AgentModel> agent_models(const ScenarioConfig& cfg) {
  std::vector<AgentModel> out;
  out.reserve(cfg.agents.size());
  for (const auto& a : cfg.agents) out.push_back({a.plant, a.gains, a.exosystem});
  return out;
}

Network build_network(const ScenarioConfig& cfg) {
  return Network(agent_models(cfg), cfg.game, cfg.graph, cfg.mode, cfg.delta, cfg.observer_enabled);
}

Vector initial_state(const ScenarioConfig& cfg, const Network& net) {
  Vector s = net.initial_state();
  const auto& layout = net.layout();
  for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
    const auto& init = cfg.agents[i].initial;
    if (init.x) {
      if (init.x->size() != layout.plant_order(i)) {
        throw DimensionError(fmt::format("agent {}: initial x has {} entries, plant order is {}", i + 1, init.x->size(), layout.plant_order(i)));
      }
      s.segment(layout.x(i), layout.plant_order(i)) = *init.x;
    }
    if (init.gamma) s[layout.gamma(i)] = *init.gamma;
    if (init.z) {
      if (init.z->size() != layout.exo_order(i)) {
        throw DimensionError(fmt::format("agent {}: initial z has {} entries, exosystem order is {}", i + 1, init.z->size(), layout.exo_order(i)));
      }
      s.segment(layout.z(i), layout.exo_order(i)) = *init.z;
    }
    if (layout.mode() == Mode::kImperfect) {
      if (init.eta) s[layout.eta(i)] = *init.eta;
      if (init.omega) s[layout.omega(i)] = *init.omega;
    }
  }
  return s;
}

std::vector<ConditionReport> verify_conditions(const ScenarioConfig& cfg) {
  std::vector<ConditionReport> out;
  for (const auto& a : cfg.agents) out.push_back(verify_agent_conditions(a.plant, a.gains, a.exosystem));
  return out;
}

void check_step_size(const Network& net, const IntegratorSettings& settings) {
  const double h = settings.step;
  if (!(h > 0.0)) throw PreconditionError(fmt::format("step must be positive, got {}", h));
  if (!(settings.horizon >= h)) throw PreconditionError(fmt::format("horizon {} shorter than step {}", settings.horizon, h));
  if (settings.record_every == 0) throw PreconditionError("record_every must be at least 1");
  constexpr double kRel = 1.0 + 1e-9;
  if (net.mode() == Mode::kImperfect && h > net.delta() / 20.0 * kRel) {
    throw PreconditionError(fmt::format("step {} exceeds delta/20 = {} for the consensus estimator", h, net.delta() / 20.0));
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    double radius = 0.0;
    for (const auto& l : eigenvalues(net.agents()[i].exo.s)) radius = std::max(radius, std::abs(l));
    if (h * radius > 2.0 * std::numbers::pi / 20.0 * kRel) {
      throw PreconditionError(fmt::format("agent {}: step {} resolves the {:.6g} Hz disturbance with fewer than 20 steps per period",
                                          i + 1, h, radius / (2.0 * std::numbers::pi)));
    }
  }
}

namespace {

void record(const Network& net, const Vector& y_star, double t, const Vector& state, Trajectory& traj) {
  const Vector y = net.output(state);
  double rho_sq = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) rho_sq += net.observation_error(state, i).squaredNorm();
  double eta_err = 0.0;
  if (net.mode() == Mode::kImperfect) {
    const double sigma = y.sum();
    for (std::size_t i = 0; i < net.size(); ++i) {
      eta_err = std::max(eta_err, std::abs(state[net.layout().eta(i)] - sigma));
    }
  }
  traj.times.push_back(t);
  traj.states.push_back(state);
  traj.outputs.push_back(y);
  traj.rho_norm.push_back(std::sqrt(rho_sq));
  traj.eta_err.push_back(eta_err);
  traj.ne_dist.push_back((y - y_star).cwiseAbs().maxCoeff());
  traj.grad_norm.push_back(net.game().pseudo_gradient(y).cwiseAbs().maxCoeff());
}

}  // namespace

Trajectory integrate(const Network& net, const Vector& initial, const IntegratorSettings& settings) {
  check_step_size(net, settings);
  if (initial.size() != net.layout().size()) {
    throw DimensionError(fmt::format("initial state has {} entries, layout expects {}", initial.size(), net.layout().size()));
  }

  Trajectory traj;
  traj.mode = net.mode();
  traj.nash = nash_equilibrium(net.game());

  const double h = settings.step;
  // Whole steps of size h; a shorter final step lands exactly on the horizon.
  auto steps = static_cast<long long>(std::floor(settings.horizon / h + 1e-9));
  const double remainder = settings.horizon - static_cast<double>(steps) * h;
  const bool partial = remainder > 1e-12 * settings.horizon;
  if (partial) ++steps;

  Vector x = initial;
  Vector k1, k2, k3, k4, tmp(x.size());
  record(net, traj.nash, 0.0, x, traj);
  for (long long n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const double dt = (partial && n + 1 == steps) ? remainder : h;
    net.derivative(x, t, k1);
    tmp = x + 0.5 * dt * k1;
    net.derivative(tmp, t + 0.5 * dt, k2);
    tmp = x + 0.5 * dt * k2;
    net.derivative(tmp, t + 0.5 * dt, k3);
    tmp = x + dt * k3;
    net.derivative(tmp, t + dt, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = (n + 1 == steps) ? settings.horizon : static_cast<double>(n + 1) * h;
    if (!x.allFinite()) {
      throw DivergenceError(t_next, fmt::format("state became non-finite at t = {:.6g}", t_next));
    }
    if ((n + 1) % static_cast<long long>(settings.record_every) == 0 || n + 1 == steps) {
      record(net, traj.nash, t_next, x, traj);
    }
  }
  return traj;
}

Trajectory integrate(const ScenarioConfig& cfg, bool enforce_conditions) {
  if (enforce_conditions) {
    auto reports = verify_conditions(cfg);
    std::vector<std::string> failed;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      for (const auto& c : reports[i].checks) {
        if (!c.passed) failed.push_back(fmt::format("agent {}: {}", i + 1, c.name));
      }
    }
    if (!failed.empty()) {
      throw ConditionFailure(fmt::format("convergence conditions not met ({})", fmt::join(failed, ", ")), std::move(reports));
    }
  }
  const Network net = build_network(cfg);
  return integrate(net, initial_state(cfg, net), {cfg.step, cfg.horizon, cfg.record_every});
}

std::optional<double> settling_time(const Trajectory& traj, double tol) {
  if (traj.ne_dist.empty() || traj.ne_dist.back() > tol) return std::nullopt;
  std::size_t k = traj.ne_dist.size() - 1;
  while (k > 0 && traj.ne_dist[k - 1] <= tol) --k;
  return traj.times[k];
}

void write_csv(const Trajectory& traj, const Network& net, std::ostream& out) {
  const std::size_t n = net.size();
  const bool imperfect = traj.mode == Mode::kImperfect;
  out << "time";
  for (std::size_t i = 0; i < n; ++i) out << ",y_" << i + 1;
  if (imperfect) {
    for (std::size_t i = 0; i < n; ++i) out << ",eta_" << i + 1;
  }
  out << ",rho_norm,eta_err,ne_dist,grad_norm\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    fmt::print(out, "{:.9g}", traj.times[k]);
    for (std::size_t i = 0; i < n; ++i) fmt::print(out, ",{:.9g}", traj.outputs[k][static_cast<Eigen::Index>(i)]);
    if (imperfect) {
      for (std::size_t i = 0; i < n; ++i) fmt::print(out, ",{:.9g}", traj.states[k][net.layout().eta(i)]);
    }
    fmt::print(out, ",{:.9g},{:.9g},{:.9g},{:.9g}\n", traj.rho_norm[k], traj.eta_err[k], traj.ne_dist[k], traj.grad_norm[k]);
  }
}

StorageBalance storage_balance(const Network& net, const Trajectory& traj, const std::vector<Matrix>& storage,
                               const Vector& equilibrium) {
  if (storage.size() != net.size()) throw DimensionError("storage_balance: one storage matrix per agent required");
  if (traj.size() < 2) return {};
  const auto& layout = net.layout();

  auto energy = [&](const Vector& state) {
    double v = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
      const auto m = layout.plant_order(i) + 1;  // x and gamma are contiguous
      const Vector chi = state.segment(layout.x(i), m) - equilibrium.segment(layout.x(i), m);
      v += 0.5 * chi.dot(storage[i] * chi);
    }
    return v;
  };
  std::vector<double> supply(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector& y = traj.outputs[k];
    supply[k] = -net.game().pseudo_gradient(y).dot(y - traj.nash);
  }

  double integral = 0.0;
  std::size_t k = 0;
  for (; k + 2 < traj.size(); k += 2) {
    const double h0 = traj.times[k + 1] - traj.times[k];
    const double h1 = traj.times[k + 2] - traj.times[k + 1];
    if (std::abs(h0 - h1) > 1e-9 * (h0 + h1)) {
      integral += 0.5 * h0 * (supply[k] + supply[k + 1]) + 0.5 * h1 * (supply[k + 1] + supply[k + 2]);
    } else {
      integral += (h0 + h1) / 6.0 * (supply[k] + 4.0 * supply[k + 1] + supply[k + 2]);
    }
  }
  for (; k + 1 < traj.size(); ++k) integral += 0.5 * (traj.times[k + 1] - traj.times[k]) * (supply[k] + supply[k + 1]);

  return {integral, energy(traj.states.back()) - energy(traj.states.front())};
}

}  // namespace neseek
