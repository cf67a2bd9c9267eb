#pragma once

#include <string>
#include <vector>

#include "neseek/linalg.hpp"

namespace neseek {

// Single-input single-output agent: x' = a x + b (u + d), y = c x.
struct AgentPlant {
  Matrix a;  // n x n
  Matrix b;  // n x 1
  Matrix c;  // 1 x n

  Eigen::Index order() const { return a.rows(); }
  bool operator==(const AgentPlant& o) const { return a == o.a && b == o.b && c == o.c; }
};

// Disturbance generator nu' = s nu, d = u nu.
struct Exosystem {
  Matrix s;    // q x q
  Matrix u;    // 1 x q
  Vector nu0;  // q

  Eigen::Index order() const { return s.rows(); }
  bool operator==(const Exosystem& o) const { return s == o.s && u == o.u && nu0 == o.nu0; }
};

// Controller parameters of one agent.
struct Gains {
  Matrix k;         // 1 x n state feedback
  double kp = 1.0;  // proportional gain on the gradient signal
  double ki = 1.0;  // gain on the gradient integral
  Vector ko;        // q observer gain

  bool operator==(const Gains& o) const { return k == o.k && kp == o.kp && ki == o.ki && ko == o.ko; }
};

// Plant plus gradient integrator in closed loop with the state feedback:
//   chi' = calA chi + calB e + calD rho,  y = calC chi,  chi = [x; gamma].
struct AugmentedAgent {
  Matrix cal_a;  // [[h, b ki], [0, 0]]
  Matrix cal_b;  // [b kp; 1]
  Matrix cal_c;  // [c, 0]
  Matrix cal_d;  // [b u; 0]
  Matrix h;      // a - b k
};

// Turbine-governor-generator model parameters. States are (output power, valve opening,
// relative speed); the input enters through the governor.
struct TurbineParameters {
  double tm = 0.0;  // turbine time constant [s]
  double te = 0.0;  // governor time constant [s]
  double km = 0.0;  // turbine gain
  double ke = 0.0;  // governor gain
  double d = 0.0;   // damping constant [p.u.]
  double h = 0.0;   // inertia constant [s]
  double r = 0.0;   // regulation constant [p.u.]
  double w0 = 0.0;  // synchronous speed [rad/s]

  bool operator==(const TurbineParameters&) const = default;
};

AgentPlant double_integrator();
AgentPlant turbine_generator(const TurbineParameters& p);

// s = [[0, w], [-w, 0]] with w = 2 pi freq_hz, u = [1, 0],
// nu0 = amplitude [sin(phase), cos(phase)], so d(t) = amplitude sin(w t + phase).
// Throws std::invalid_argument for freq_hz <= 0 or amplitude < 0.
Exosystem sinusoid_exosystem(double freq_hz, double amplitude, double phase);

// Throws DimensionError unless plant, gains and exosystem shapes agree.
void check_dimensions(const AgentPlant& plant, const Gains& gains, const Exosystem& exo);

AugmentedAgent augment(const AgentPlant& plant, const Gains& gains, const Exosystem& exo);

// s - ko b^T b u: the dynamics of the disturbance observation error.
Matrix observer_error_matrix(const AgentPlant& plant, const Gains& gains, const Exosystem& exo);

// G(s) = calC (s I - calA)^{-1} calB. Throws SingularMatrixError at a pole.
Complex transfer_function(const AugmentedAgent& agent, Complex s);

struct PositiveRealOptions {
  double omega_min = 1e-3;
  double omega_max = 1e4;
  int points = 1000;
  double pole_tolerance = 1e-9;
  double real_part_tolerance = 1e-7;
};

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
  // nullptr when no check with that name exists.
  const ConditionCheck* find(const std::string& name) const;
};

// Check names.
inline constexpr const char* kPlantControllable = "plant_controllable";
inline constexpr const char* kPlantObservable = "plant_observable";
inline constexpr const char* kExosystemSpectrum = "exosystem";
inline constexpr const char* kFeedbackHurwitz = "feedback_hurwitz";
inline constexpr const char* kCondition1 = "condition1_minimal";
inline constexpr const char* kCondition2 = "condition2_observer";
inline constexpr const char* kCondition3 = "condition3_positive_real";

// Model assumptions (plant minimality, exosystem spectrum, stabilizing feedback) followed by
// the three convergence conditions for the perfect-information rule:
//   1. kp, ki > 0, (calA, calB) controllable and (calA, calC) observable;
//   2. s - ko b^T b u Hurwitz;
//   3. G(s) positive real: poles with Re <= pole_tolerance and Re G(iw) >= -real_part_tolerance
//      on a log-spaced grid plus the w -> 0 limit.
// Never throws for well-shaped input; failures are carried in the report.
ConditionReport verify_agent_conditions(const AgentPlant& plant, const Gains& gains, const Exosystem& exo,
                                const PositiveRealOptions& options = {});

// Result of searching for a storage matrix P = P^T with P calB = calC^T and
// P calA + calA^T P <= 0.
struct StorageMatrix {
  Matrix p;
  bool feasible = false;
  double dissipation_eigenvalue = 0.0;  // lambda_max(P calA + calA^T P) at the returned P
  double equality_residual = 0.0;       // ||P calB - calC^T||_inf
  double min_eigenvalue = 0.0;          // lambda_min(P)
  std::string detail;
};

// The equality constraint is solved in the least-squares sense and the remaining freedom
// (its null space) is used to minimise lambda_max(P calA + calA^T P). The inequality is then
// verified on the eigenvalues of the result.
StorageMatrix passivity_storage_matrix(const AugmentedAgent& agent);

}  // namespace neseek
