#include "neseek/rules.hpp"

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "neseek/errors.hpp"
#include "oracles.hpp"

namespace neseek {
namespace {

const std::vector<double> kWeights{1.0, 0.5, 0.8, 0.7, 1.1, 0.6};
const std::vector<double> kTargets{6, 10, 7, 8, 6, 12};

AgentModel double_integrator_agent(double amplitude = 1.0) {
  AgentModel a;
  a.plant = double_integrator();
  a.gains.k = Matrix{{1.0, 10.0}};
  a.gains.kp = 12.0;
  a.gains.ki = 2.0;
  a.gains.ko = Vector{{12.0, 15.0}};
  a.exo = sinusoid_exosystem(1.0, amplitude, 0.0);
  return a;
}

Network example1_network(Mode mode, double amplitude = 1.0, double slope = 0.5) {
  return Network(std::vector<AgentModel>(6, double_integrator_agent(amplitude)),
                 GameModel::from_tracking(kWeights, kTargets, 50.0, slope), cycle_graph(6), mode, 0.1);
}

TEST(Network, ValidatesConstruction) {
  const auto agents = std::vector<AgentModel>(6, double_integrator_agent());
  const auto game = GameModel::from_tracking(kWeights, kTargets, 50.0, 0.5);
  EXPECT_THROW(Network(std::vector<AgentModel>(5, double_integrator_agent()), game, cycle_graph(6), Mode::kPerfect, 0.1), PreconditionError);
  EXPECT_THROW(Network(agents, game, cycle_graph(5), Mode::kPerfect, 0.1), PreconditionError);
  EXPECT_THROW(Network(agents, game, cycle_graph(6), Mode::kImperfect, 0.0), PreconditionError);
  const Graph split(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  EXPECT_THROW(Network(agents, game, split, Mode::kImperfect, 0.1), PreconditionError);
  EXPECT_NO_THROW(Network(agents, game, split, Mode::kPerfect, 0.1));
  EXPECT_THROW(parse_mode("partial"), std::invalid_argument);
  EXPECT_EQ(parse_mode(to_string(Mode::kImperfect)), Mode::kImperfect);
}

TEST(StateLayout, Offsets) {
  const Network net = example1_network(Mode::kImperfect);
  const auto& l = net.layout();
  EXPECT_EQ(l.size(), 6 * 7 + 12);
  EXPECT_EQ(l.x(1), 7);
  EXPECT_EQ(l.gamma(1), 9);
  EXPECT_EQ(l.z(1), 10);
  EXPECT_EQ(l.nu(1), 12);
  EXPECT_EQ(l.eta(0), 42);
  EXPECT_EQ(l.omega(5), 53);
  EXPECT_EQ(example1_network(Mode::kPerfect).layout().size(), 42);
}

TEST(Output, Examples) {
  const Network net = example1_network(Mode::kPerfect);
  Vector s = net.initial_state();
  EXPECT_EQ(net.output(s), Vector::Zero(6));
  s.segment(net.layout().x(2), 2) << 3.0, 7.0;
  EXPECT_EQ(net.output(s)[2], 3.0);

  TurbineParameters t{0.35, 0.10, 1.0, 1.0, 5.0, 4.0, 0.05, 314.0};
  AgentModel a;
  a.plant = turbine_generator(t);
  a.gains.k = Matrix{{1.0, 0.0, 0.0}};
  a.gains.ko = Vector{{4.0, 4.0}};
  a.exo = sinusoid_exosystem(500.0, 1.0, 0.0);
  const Network turbine({a}, GameModel(50.0, 0.5, {{1.0, 12.0, 5.0}}), Graph(1, {}), Mode::kPerfect, 0.1);
  Vector ts = turbine.initial_state();
  ts.segment(0, 3) << 30.0, 6.0, 4.3;
  EXPECT_EQ(turbine.output(ts)[0], 30.0);
}

TEST(DerivPerfect, VanishesAtConstructedEquilibrium) {
  const Network net = example1_network(Mode::kPerfect);
  const Vector y_star = nash_equilibrium(net.game());
  const Vector eq = net.equilibrium_state(y_star);
  EXPECT_LE((net.output(eq) - y_star).cwiseAbs().maxCoeff(), 1e-12);
  const Vector f = net.derivative(eq, 0.0);
  EXPECT_LE(f.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DerivPerfect, DoesNotVanishAwayFromEquilibrium) {
  // The converse direction: a rest point of the plant subsystem that is not the NE leaves
  // the gradient integrators moving.
  const Network net = example1_network(Mode::kPerfect);
  Vector y = nash_equilibrium(net.game());
  y[0] += 0.5;
  const Vector f = net.derivative(net.equilibrium_state(y), 0.0);
  double gamma_rate = 0.0;
  for (std::size_t i = 0; i < 6; ++i) gamma_rate = std::max(gamma_rate, std::abs(f[net.layout().gamma(i)]));
  EXPECT_GT(gamma_rate, 0.1);
}

TEST(DerivPerfect, ZeroDisturbanceKeepsObserverAtRest) {
  const Network net = example1_network(Mode::kPerfect, 0.0);
  const Vector s = net.initial_state();
  const Vector f = net.derivative(s, 0.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& l = net.layout();
    EXPECT_EQ(net.disturbance_estimate(s, i), 0.0);
    EXPECT_EQ(net.observation_error(s, i), Vector::Zero(2));
    EXPECT_EQ(f.segment(l.nu(i), 2), Vector::Zero(2));
    // z alone moves with the gradient signal; the estimate z + ko b' x does not.
    const Vector estimate_rate = f.segment(l.z(i), 2) + net.agents()[i].gains.ko * (net.agents()[i].plant.b.transpose() * f.segment(l.x(i), 2));
    EXPECT_LE(estimate_rate.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DerivPerfect, ObservationErrorFollowsErrorDynamics) {
  // d/dt [nu - z - ko b' x] through the realizable observer equals (s - ko b'b u) rho.
  std::mt19937 rng(12);
  for (Mode mode : {Mode::kPerfect, Mode::kImperfect}) {
    const Network net = example1_network(mode, 2.0);
    const Matrix err = observer_error_matrix(double_integrator(), double_integrator_agent().gains, sinusoid_exosystem(1.0, 2.0, 0.0));
    for (int trial = 0; trial < 50; ++trial) {
      const Vector s = oracle::random_vector(rng, net.layout().size(), -10, 10);
      const Vector f = net.derivative(s, 0.0);
      for (std::size_t i = 0; i < 6; ++i) {
        const auto& l = net.layout();
        const Vector rho_dot = f.segment(l.nu(i), 2) - f.segment(l.z(i), 2) - net.agents()[i].gains.ko * (net.agents()[i].plant.b.transpose() * f.segment(l.x(i), 2));
        const Vector expected = err * net.observation_error(s, i);
        EXPECT_LE((rho_dot - expected).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + expected.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST(DerivPerfect, DisabledObserverPassesDisturbanceThrough) {
  const auto agents = std::vector<AgentModel>(6, double_integrator_agent());
  const Network on(agents, GameModel::from_tracking(kWeights, kTargets, 50.0, 0.5), cycle_graph(6), Mode::kPerfect, 0.1, true);
  const Network off(agents, GameModel::from_tracking(kWeights, kTargets, 50.0, 0.5), cycle_graph(6), Mode::kPerfect, 0.1, false);
  Vector s = on.initial_state();
  s.segment(on.layout().z(0), 2) << 0.3, -0.2;
  EXPECT_NE(on.disturbance_estimate(s, 0), 0.0);
  EXPECT_EQ(off.disturbance_estimate(s, 0), 0.0);
  const Vector f_off = off.derivative(s, 0.0);
  // x2' = -x1 - 10 x2 + kp e + ki gamma + d with x = 0, gamma = 0.
  const double e = -off.game().gradient(0, off.output(s));
  EXPECT_NEAR(f_off[off.layout().x(0) + 1], 12.0 * e + off.disturbance(s, 0), 1e-12);
}

TEST(DerivImperfect, QuasiSteadyEstimatorIsStationary) {
  const Network net = example1_network(Mode::kImperfect);
  std::mt19937 rng(13);
  const Vector y = oracle::random_vector(rng, 6, 0, 20);
  Vector s = net.equilibrium_state(y);
  const auto& l = net.layout();
  const Vector eta = s.segment(l.eta(0), 6);
  const Vector omega = s.segment(l.omega(0), 6);
  EXPECT_LE((eta - Vector::Constant(6, y.sum())).cwiseAbs().maxCoeff(), 1e-12);
  // L omega = N y - sigma 1 is consistent because both sides sum to zero.
  const Vector residual = net.laplacian_matrix() * omega - (6.0 * y - Vector::Constant(6, y.sum()));
  EXPECT_LE(residual.cwiseAbs().maxCoeff(), 1e-10);
  const Vector f = net.derivative(s, 0.0);
  EXPECT_LE(f.segment(l.eta(0), 6).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(f.segment(l.omega(0), 6).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DerivImperfect, VanishesAtNashEquilibrium) {
  const Network net = example1_network(Mode::kImperfect);
  const Vector f = net.derivative(net.equilibrium_state(nash_equilibrium(net.game())), 0.0);
  EXPECT_LE(f.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DerivImperfect, DecoupledGameMatchesPerfect) {
  const Network perfect = example1_network(Mode::kPerfect, 1.0, 0.0);
  const Network imperfect = example1_network(Mode::kImperfect, 1.0, 0.0);
  std::mt19937 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector s = oracle::random_vector(rng, imperfect.layout().size(), -5, 5);
    const Vector fp = perfect.derivative(s.head(perfect.layout().size()), 0.0);
    const Vector fi = imperfect.derivative(s, 0.0);
    EXPECT_LE((fp - fi.head(perfect.layout().size())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DerivImperfect, OmegaSumIsConserved) {
  const Network net = example1_network(Mode::kImperfect);
  std::mt19937 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector s = oracle::random_vector(rng, net.layout().size(), -50, 50);
    EXPECT_NEAR(net.derivative(s, 0.0).segment(net.layout().omega(0), 6).sum(), 0.0, 1e-10);
  }
}

TEST(DerivDispatch, ModeMismatchThrows) {
  const Network perfect = example1_network(Mode::kPerfect);
  const Network imperfect = example1_network(Mode::kImperfect);
  EXPECT_THROW(deriv_imperfect(perfect, perfect.initial_state(), 0.0), PreconditionError);
  EXPECT_THROW(deriv_perfect(imperfect, imperfect.initial_state(), 0.0), PreconditionError);
  EXPECT_EQ(deriv_perfect(perfect, perfect.initial_state(), 0.0), perfect.derivative(perfect.initial_state(), 0.0));
  EXPECT_THROW(perfect.derivative(Vector::Zero(3), 0.0), DimensionError);
}

}  // namespace
}  // namespace neseek
