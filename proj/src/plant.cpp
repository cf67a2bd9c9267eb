#include "neseek/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "neseek/errors.hpp"

namespace neseek {

AgentPlant double_integrator() {
  AgentPlant p;
  p.a = Matrix{{0.0, 1.0}, {0.0, 0.0}};
  p.b = Matrix{{0.0}, {1.0}};
  p.c = Matrix{{1.0, 0.0}};
  return p;
}

AgentPlant turbine_generator(const TurbineParameters& t) {
  if (t.tm <= 0.0 || t.te <= 0.0 || t.h <= 0.0 || t.r <= 0.0 || t.w0 <= 0.0) {
    throw std::invalid_argument("turbine_generator: time constants, inertia, regulation and speed must be positive");
  }
  AgentPlant p;
  p.a = Matrix{{-1.0 / t.tm, t.km / t.tm, 0.0},
               {0.0, -1.0 / t.te, -t.ke / (t.te * t.r * t.w0)},
               {0.0, 0.0, -t.d / (2.0 * t.h)}};
  p.b = Matrix{{0.0}, {1.0 / t.te}, {0.0}};
  p.c = Matrix{{1.0, 0.0, 0.0}};
  return p;
}

Exosystem sinusoid_exosystem(double freq_hz, double amplitude, double phase) {
  if (!(freq_hz > 0.0)) throw std::invalid_argument(fmt::format("disturbance frequency must be positive, got {}", freq_hz));
  if (!(amplitude >= 0.0)) throw std::invalid_argument(fmt::format("disturbance amplitude must be nonnegative, got {}", amplitude));
  const double w = 2.0 * std::numbers::pi * freq_hz;
  Exosystem e;
  e.s = Matrix{{0.0, w}, {-w, 0.0}};
  e.u = Matrix{{1.0, 0.0}};
  e.nu0 = Vector{{amplitude * std::sin(phase), amplitude * std::cos(phase)}};
  return e;
}

void check_dimensions(const AgentPlant& plant, const Gains& gains, const Exosystem& exo) {
  const auto n = plant.a.rows();
  const auto q = exo.s.rows();
  auto fail = [](const std::string& what) { throw DimensionError(what); };
  if (n == 0 || plant.a.cols() != n) fail(fmt::format("state matrix must be square and nonempty, got {}x{}", n, plant.a.cols()));
  if (plant.b.rows() != n || plant.b.cols() != 1) fail(fmt::format("input matrix must be {}x1, got {}x{}", n, plant.b.rows(), plant.b.cols()));
  if (plant.c.rows() != 1 || plant.c.cols() != n) fail(fmt::format("output matrix must be 1x{}, got {}x{}", n, plant.c.rows(), plant.c.cols()));
  if (gains.k.rows() != 1 || gains.k.cols() != n) fail(fmt::format("feedback gain must be 1x{}, got {}x{}", n, gains.k.rows(), gains.k.cols()));
  if (q == 0 || exo.s.cols() != q) fail(fmt::format("exosystem matrix must be square and nonempty, got {}x{}", q, exo.s.cols()));
  if (exo.u.rows() != 1 || exo.u.cols() != q) fail(fmt::format("exosystem output must be 1x{}, got {}x{}", q, exo.u.rows(), exo.u.cols()));
  if (exo.nu0.size() != q) fail(fmt::format("exosystem initial state must have length {}, got {}", q, exo.nu0.size()));
  if (gains.ko.size() != q) fail(fmt::format("observer gain must have length {}, got {}", q, gains.ko.size()));
}

AugmentedAgent augment(const AgentPlant& plant, const Gains& gains, const Exosystem& exo) {
  check_dimensions(plant, gains, exo);
  const auto n = plant.order();
  const auto q = exo.order();
  AugmentedAgent g;
  g.h = plant.a - plant.b * gains.k;
  g.cal_a = Matrix::Zero(n + 1, n + 1);
  g.cal_a.topLeftCorner(n, n) = g.h;
  g.cal_a.topRightCorner(n, 1) = plant.b * gains.ki;
  g.cal_b = Matrix::Zero(n + 1, 1);
  g.cal_b.topRows(n) = plant.b * gains.kp;
  g.cal_b(n, 0) = 1.0;
  g.cal_c = Matrix::Zero(1, n + 1);
  g.cal_c.leftCols(n) = plant.c;
  g.cal_d = Matrix::Zero(n + 1, q);
  g.cal_d.topRows(n) = plant.b * exo.u;
  return g;
}

Matrix observer_error_matrix(const AgentPlant& plant, const Gains& gains, const Exosystem& exo) {
  check_dimensions(plant, gains, exo);
  const double btb = (plant.b.transpose() * plant.b)(0, 0);
  return exo.s - gains.ko * btb * exo.u;
}

Complex transfer_function(const AugmentedAgent& agent, Complex s) {
  const auto m = agent.cal_a.rows();
  const Eigen::MatrixXcd pencil = s * Eigen::MatrixXcd::Identity(m, m) - agent.cal_a.cast<Complex>();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil);
  const double scale = std::max(1.0, pencil.cwiseAbs().maxCoeff());
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < kPivotTolerance * scale) {
    throw SingularMatrixError("transfer_function: evaluated at a pole");
  }
  const Eigen::VectorXcd x = lu.solve(agent.cal_b.cast<Complex>());
  return (agent.cal_c.cast<Complex>() * x)(0, 0);
}

bool ConditionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

const ConditionCheck* ConditionReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

ConditionCheck check_exosystem(const Exosystem& exo) {
  const auto ev = eigenvalues(exo.s);
  const double tol = 1e-9 * std::max(1.0, exo.s.norm());
  double worst_real = 0.0;
  for (const auto& l : ev) worst_real = std::max(worst_real, std::abs(l.real()));
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    for (std::size_t j = i + 1; j < ev.size(); ++j) closest = std::min(closest, std::abs(ev[i] - ev[j]));
  }
  const bool on_axis = worst_real <= tol;
  const bool distinct = closest > tol;
  const bool obs = observable(exo.s, exo.u);
  std::string detail = fmt::format("max |Re| = {:.3e}, min eigenvalue gap = {:.3e}, (s,u) {}", worst_real,
                                   ev.size() > 1 ? closest : 0.0, obs ? "observable" : "NOT observable");
  return {kExosystemSpectrum, on_axis && distinct && obs, detail};
}

ConditionCheck check_positive_real(const AugmentedAgent& g, const PositiveRealOptions& opt) {
  const double abscissa = spectral_abscissa(g.cal_a);
  if (abscissa > opt.pole_tolerance) {
    return {kCondition3, false, fmt::format("pole with Re = {:.6g} in the right half-plane", abscissa)};
  }

  double worst = std::numeric_limits<double>::infinity();
  double worst_omega = 0.0;
  auto probe = [&](double omega) {
    double re = 0.0;
    try {
      re = transfer_function(g, Complex(0.0, omega)).real();
    } catch (const SingularMatrixError&) {
      return;  // pole on the imaginary axis; the pole test above covers it
    }
    if (re < worst) {
      worst = re;
      worst_omega = omega;
    }
  };

  // omega -> 0 limit: exact G(0) when calA is invertible, otherwise a point well below the grid.
  if (numerical_rank(g.cal_a) == g.cal_a.rows()) {
    probe(0.0);
  } else {
    probe(opt.omega_min * 1e-3);
  }
  const double log_lo = std::log10(opt.omega_min);
  const double log_hi = std::log10(opt.omega_max);
  for (int k = 0; k < opt.points; ++k) {
    const double frac = opt.points > 1 ? static_cast<double>(k) / (opt.points - 1) : 0.0;
    probe(std::pow(10.0, log_lo + frac * (log_hi - log_lo)));
  }

  const bool ok = worst >= -opt.real_part_tolerance;
  std::string detail = fmt::format("max pole Re = {:.3e}, min Re G(iw) = {:.6g} at w = {:.4g}", abscissa, worst, worst_omega);
  const double cb = (g.cal_c * g.cal_b)(0, 0);
  if (!ok && std::abs(cb) <= 1e-12) detail += "; calC calB = 0 (relative degree >= 2)";
  return {kCondition3, ok, detail};
}

}  // namespace

ConditionReport verify_agent_conditions(const AgentPlant& plant, const Gains& gains, const Exosystem& exo,
                                const PositiveRealOptions& options) {
  check_dimensions(plant, gains, exo);
  ConditionReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const bool ctrb = controllable(plant.a, plant.b);
  add(kPlantControllable, ctrb, ctrb ? "(a,b) controllable" : "(a,b) NOT controllable");
  const bool obsv = observable(plant.a, plant.c);
  add(kPlantObservable, obsv, obsv ? "(a,c) observable" : "(a,c) NOT observable");
  report.checks.push_back(check_exosystem(exo));

  const AugmentedAgent g = augment(plant, gains, exo);
  const double h_abscissa = spectral_abscissa(g.h);
  add(kFeedbackHurwitz, h_abscissa < -kHurwitzMargin, fmt::format("max Re eig(a - b k) = {:.6g}", h_abscissa));

  const bool gains_positive = gains.kp > 0.0 && gains.ki > 0.0;
  const bool aug_ctrb = controllable(g.cal_a, g.cal_b);
  const bool aug_obsv = observable(g.cal_a, g.cal_c);
  add(kCondition1, gains_positive && aug_ctrb && aug_obsv,
      fmt::format("kp = {}, ki = {}, (calA,calB) {}, (calA,calC) {}", gains.kp, gains.ki,
                  aug_ctrb ? "controllable" : "NOT controllable", aug_obsv ? "observable" : "NOT observable"));

  const double obs_abscissa = spectral_abscissa(observer_error_matrix(plant, gains, exo));
  add(kCondition2, obs_abscissa < -kHurwitzMargin, fmt::format("max Re eig(s - ko b'b u) = {:.6g}", obs_abscissa));

  report.checks.push_back(check_positive_real(g, options));
  return report;
}

}  // namespace neseek
