#include "neseek/demos.hpp"

#include <array>
#include <numbers>

namespace neseek {

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix row(std::initializer_list<double> v) { return vec(v).transpose(); }

}  // namespace

ScenarioConfig example1_scenario() {
  ScenarioConfig cfg;
  cfg.name = "example1";

  const std::vector<double> weights{1.0, 0.5, 0.8, 0.7, 1.1, 0.6};
  const std::vector<double> targets{6, 10, 7, 8, 6, 12};
  cfg.tracking = TrackingGame{weights, targets, 50.0, 0.5};
  cfg.game = GameModel::from_tracking(weights, targets, 50.0, 0.5);

  for (std::size_t i = 0; i < weights.size(); ++i) {
    AgentConfig a;
    a.plant_preset = "double_integrator";
    a.plant = double_integrator();
    a.gains.k = row({1.0, 10.0});
    a.gains.kp = 12.0;
    a.gains.ki = 2.0;
    a.gains.ko = vec({12.0, 15.0});
    a.sinusoid = SinusoidDisturbance{1.0, 1.0, 0.0};
    a.exosystem = sinusoid_exosystem(1.0, 1.0, 0.0);
    cfg.agents.push_back(std::move(a));
  }

  cfg.graph = cycle_graph(6);
  cfg.mode = Mode::kPerfect;
  cfg.delta = 0.1;
  cfg.step = 1e-3;
  cfg.horizon = 30.0;
  cfg.record_every = 10;
  cfg.assumptions = {
      {"plant", "A = [[0, 1], [0, 0]], B = [0, 1]', C = [1, 0] for every agent (given)"},
      {"game", "tracking form a = [1.0, 0.5, 0.8, 0.7, 1.1, 0.6], b = [6, 10, 7, 8, 6, 12], c0 = 50, C = 0.5 (given)"},
      {"gains", "K = [1, 10], kp = 12, ki = 2 for every agent (given)"},
      {"observer_gain", "the listed observer gain [12, 15, 12, 15, 12, 15] is read as ko_i = [12, 15] for every agent"},
      {"delta", "0.1 for imperfect information (given)"},
      {"disturbance", "d_i = sin(2 pi t): frequency 1 Hz, amplitude 1, phase 0 (not given, chosen)"},
      {"graph", "6-cycle 1-2-3-4-5-6-1 (drawn topology not recoverable, chosen)"},
      {"initial_state", "x(0) = 0, gamma(0) = z(0) = eta(0) = omega(0) = 0 (not given, chosen)"},
      {"integrator", "RK4, h = 1e-3, T = 30 s, one sample every 10 steps"},
  };
  return cfg;
}

ScenarioConfig example2_scenario() {
  ScenarioConfig cfg;
  cfg.name = "example2";

  struct Row {
    double tm, te, km, ke, d, h, r, alpha, beta, xi, p0, xe0, w0;
  };
  // Columns: Tm, Te, Km, Ke, D, H, R, alpha, beta, xi, P(0), Xe(0), w(0).
  const std::array<Row, 6> table{{
      {0.35, 0.10, 1.0, 1.0, 5.0, 4.0, 0.05, 5, 12, 1.0, 30, 6, 4.3},
      {0.30, 0.12, 1.1, 1.1, 4.0, 3.5, 0.04, 8, 10, 0.5, 25, 5, 3.5},
      {0.28, 0.08, 0.9, 0.9, 3.0, 2.8, 0.03, 6, 11, 0.8, 20, 4, 3.0},
      {0.40, 0.11, 1.2, 1.2, 4.5, 4.2, 0.06, 9, 11, 0.7, 35, 7, 4.8},
      {0.43, 0.90, 0.8, 0.8, 3.5, 3.0, 0.04, 7, 13, 1.1, 28, 5, 4.0},
      {0.35, 0.10, 1.0, 1.0, 5.0, 4.0, 0.05, 8, 14, 0.6, 37, 8, 5.0},
  }};
  const std::array<double, 6> kappa{1.0, 1.2, 0.8, 1.1, 0.9, 1.0};
  const std::array<double, 6> ko{4, 4, 4, 4, 4, 8};
  const double w0 = 100.0 * std::numbers::pi;

  std::vector<AggregativeCost> costs;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Row& t = table[i];
    AgentConfig a;
    a.plant_preset = "turbine_generator";
    a.turbine = TurbineParameters{t.tm, t.te, t.km, t.ke, t.d, t.h, t.r, w0};
    a.plant = turbine_generator(*a.turbine);
    a.gains.k = row({kappa[i], 0.0, 0.0});
    a.gains.kp = 1.0;
    a.gains.ki = 1.0;
    a.gains.ko = vec({ko[i], ko[i]});
    a.sinusoid = SinusoidDisturbance{500.0, 1.0, 0.0};
    a.exosystem = sinusoid_exosystem(500.0, 1.0, 0.0);
    a.initial.x = vec({t.p0, t.xe0, t.w0});
    cfg.agents.push_back(std::move(a));
    costs.push_back({t.xi, t.beta, t.alpha});
  }
  cfg.game = GameModel(50.0, 0.5, std::move(costs));

  cfg.graph = cycle_graph(6);
  cfg.mode = Mode::kImperfect;
  cfg.delta = 0.1;
  cfg.step = 1e-4;
  cfg.horizon = 20.0;
  cfg.record_every = 100;
  cfg.assumptions = {
      {"generator_G1", "Tm 0.35, Te 0.10, Km 1.0, Ke 1.0, D 5.0, H 4.0, R 0.05, alpha 5, beta 12, xi 1.0, P(0) 30, Xe(0) 6, w(0) 4.3"},
      {"generator_G2", "Tm 0.30, Te 0.12, Km 1.1, Ke 1.1, D 4.0, H 3.5, R 0.04, alpha 8, beta 10, xi 0.5, P(0) 25, Xe(0) 5, w(0) 3.5"},
      {"generator_G3", "Tm 0.28, Te 0.08, Km 0.9, Ke 0.9, D 3.0, H 2.8, R 0.03, alpha 6, beta 11, xi 0.8, P(0) 20, Xe(0) 4, w(0) 3.0"},
      {"generator_G4", "Tm 0.40, Te 0.11, Km 1.2, Ke 1.2, D 4.5, H 4.2, R 0.06, alpha 9, beta 11, xi 0.7, P(0) 35, Xe(0) 7, w(0) 4.8"},
      {"generator_G5", "Tm 0.43, Te 0.90, Km 0.8, Ke 0.8, D 3.5, H 3.0, R 0.04, alpha 7, beta 13, xi 1.1, P(0) 28, Xe(0) 5, w(0) 4.0"},
      {"generator_G6", "Tm 0.35, Te 0.10, Km 1.0, Ke 1.0, D 5.0, H 4.0, R 0.05, alpha 8, beta 14, xi 0.6, P(0) 37, Xe(0) 8, w(0) 5.0"},
      {"price", "p0 = 50, a = 0.5 (not given; mirrors the double-integrator example)"},
      {"w0", "synchronous speed 100 pi rad/s (50 Hz grid; not given)"},
      {"feedback_gain", "the listed K = [1, 1.2, 0.8, 1.1, 0.9, 1] is read as K_i = [kappa_i, 0, 0]; "
                        "the speed state is not controllable, so pole placement is not possible"},
      {"gains", "kp = ki = 1 for every agent, delta = 0.1 (given)"},
      {"observer_gain", "ko_i = [4, 4] for agents 1-5 and [8, 8] for agent 6 (given as columns of a 6 x 2 array)"},
      {"disturbance", "d_i = m_i sin(2 pi 500 t) with m_i = 1 and phase 0 (frequency given, amplitude chosen)"},
      {"graph", "6-cycle 1-2-3-4-5-6-1 (drawn topology not recoverable, chosen)"},
      {"initial_state", "x(0) = (P(0), Xe(0), w(0)) from the generator rows; gamma, z, eta, omega start at 0"},
      {"integrator", "RK4, h = 1e-4 (20 steps per disturbance period), T = 20 s, one sample every 100 steps"},
  };
  return cfg;
}

std::optional<ScenarioConfig> bundled_scenario(const std::string& name) {
  if (name == "example1") return example1_scenario();
  if (name == "example2") return example2_scenario();
  return std::nullopt;
}

std::vector<std::string> bundled_scenario_names() { return {"example1", "example2"}; }

}  // namespace neseek
