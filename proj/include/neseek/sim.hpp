#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "neseek/errors.hpp"
#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/plant.hpp"
#include "neseek/rules.hpp"

namespace neseek {

struct SinusoidDisturbance {
  double frequency_hz = 1.0;
  double amplitude = 1.0;
  double phase = 0.0;

  bool operator==(const SinusoidDisturbance&) const = default;
};

// Optional overrides of the zero initial condition (nu always starts at the exosystem's nu0).
struct InitialOverrides {
  std::optional<Vector> x;
  std::optional<double> gamma;
  std::optional<Vector> z;
  std::optional<double> eta;
  std::optional<double> omega;

  bool operator==(const InitialOverrides&) const = default;
};

struct AgentConfig {
  // Where the plant came from, so a written config keeps presets readable:
  // "" (explicit matrices), "double_integrator" or "turbine_generator".
  std::string plant_preset;
  std::optional<TurbineParameters> turbine;
  AgentPlant plant;
  Gains gains;
  // Set when the exosystem was generated from a sinusoid description.
  std::optional<SinusoidDisturbance> sinusoid;
  Exosystem exosystem;
  InitialOverrides initial;

  bool operator==(const AgentConfig&) const = default;
};

// Cost parameters in tracking form, kept only so configs written in that form round-trip.
struct TrackingGame {
  std::vector<double> weights;
  std::vector<double> targets;
  double price_intercept = 0.0;
  double price_slope = 0.0;

  bool operator==(const TrackingGame&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::vector<AgentConfig> agents;
  GameModel game;
  std::optional<TrackingGame> tracking;
  Graph graph;
  Mode mode = Mode::kPerfect;
  double delta = 0.1;
  bool observer_enabled = true;
  double horizon = 30.0;
  double step = 1e-3;
  std::size_t record_every = 1;
  // Free-form notes on every value that is a modelling choice rather than given data.
  std::map<std::string, std::string> assumptions;

  bool operator==(const ScenarioConfig&) const = default;
};

struct IntegratorSettings {
  double step = 1e-3;
  double horizon = 30.0;
  std::size_t record_every = 1;
};

// Time-indexed record of a run. All metrics are measured against the oracle equilibrium.
struct Trajectory {
  Mode mode = Mode::kPerfect;
  Vector nash;                 // oracle equilibrium y*
  std::vector<double> times;   // strictly increasing, times.front() == 0
  std::vector<Vector> states;  // full network state
  std::vector<Vector> outputs; // y
  std::vector<double> rho_norm;   // ||col(rho_i)||_2
  std::vector<double> eta_err;    // max_i |eta_i - sum_j y_j| (0 in perfect mode)
  std::vector<double> ne_dist;    // ||y - y*||_inf
  std::vector<double> grad_norm;  // ||phi(y)||_inf

  std::size_t size() const { return times.size(); }
};

// Thrown when a scenario fails the convergence conditions and no override was given.
class ConditionFailure : public Error {
 public:
  ConditionFailure(const std::string& what, std::vector<ConditionReport> reports)
      : Error(what), reports_(std::move(reports)) {}
  const std::vector<ConditionReport>& reports() const { return reports_; }

 private:
  std::vector<ConditionReport> reports_;
};

std::vector<AgentModel> agent_models(const ScenarioConfig& cfg);
Network build_network(const ScenarioConfig& cfg);
// Network::initial_state() with the per-agent overrides applied.
Vector initial_state(const ScenarioConfig& cfg, const Network& net);
std::vector<ConditionReport> verify_conditions(const ScenarioConfig& cfg);

// Step-size preconditions: h > 0, horizon >= h, h <= delta / 20 in imperfect mode, and at least
// 20 steps per period of the fastest exosystem mode. Throws PreconditionError.
void check_step_size(const Network& net, const IntegratorSettings& settings);

// Classical fixed-step RK4 over [0, horizon]. Samples every record_every steps, plus the final
// time. Throws DivergenceError at the first non-finite state.
Trajectory integrate(const Network& net, const Vector& initial, const IntegratorSettings& settings);

// Builds the network from cfg and integrates it. With enforce_conditions, throws
// ConditionFailure unless every agent passes verify_agent_conditions.
Trajectory integrate(const ScenarioConfig& cfg, bool enforce_conditions = true);

// First recorded time after which ne_dist stays <= tol through the end of the trajectory.
std::optional<double> settling_time(const Trajectory& traj, double tol);

// Columns: time, y_1..y_N, eta_1..eta_N (imperfect mode only), rho_norm, eta_err, ne_dist,
// grad_norm; 9 significant digits.
void write_csv(const Trajectory& traj, const Network& net, std::ostream& out);

// Energy balance of the perfect-information loop around its equilibrium:
//   supply  = integral of e^T (y - y*) dt
//   storage = V(T) - V(0),  V = 1/2 sum_i chi~_i^T P_i chi~_i.
struct StorageBalance {
  double supply = 0.0;
  double storage_change = 0.0;
  double slack() const { return supply - storage_change; }
};

// Integrates the supply rate over the recorded samples (composite Simpson, trapezoid on a
// trailing odd interval); record every step for accuracy. equilibrium is a state from
// Network::equilibrium_state.
StorageBalance storage_balance(const Network& net, const Trajectory& traj, const std::vector<Matrix>& storage,
                               const Vector& equilibrium);

}  // namespace neseek
