#include "neseek/plant.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "neseek/errors.hpp"
#include "oracles.hpp"

namespace neseek {
namespace {

Gains example1_gains() {
  Gains g;
  g.k = Matrix{{1.0, 10.0}};
  g.kp = 12.0;
  g.ki = 2.0;
  g.ko = Vector{{12.0, 15.0}};
  return g;
}

// First-order lag whose augmented agent is positive real: calA = [[-1, 1], [0, 0]],
// calB = [2, 1]', calC = [1, 0] and G(s) = (2 s + 1) / (s (s + 1)).
AgentPlant lag_plant() { return {Matrix{{-1.0}}, Matrix{{1.0}}, Matrix{{1.0}}}; }

Gains lag_gains() {
  Gains g;
  g.k = Matrix{{0.0}};
  g.kp = 2.0;
  g.ki = 1.0;
  g.ko = Vector{{3.0, 4.0}};
  return g;
}

TEST(Plant, DoubleIntegratorMatrices) {
  const AgentPlant p = double_integrator();
  EXPECT_EQ(p.a, (Matrix{{0, 1}, {0, 0}}));
  EXPECT_EQ(p.b, (Matrix{{0}, {1}}));
  EXPECT_EQ(p.c, (Matrix{{1, 0}}));
}

TEST(Plant, TurbineMatrices) {
  const TurbineParameters t{0.35, 0.10, 1.0, 1.0, 5.0, 4.0, 0.05, 100.0 * std::numbers::pi};
  const AgentPlant p = turbine_generator(t);
  EXPECT_DOUBLE_EQ(p.a(0, 0), -1.0 / 0.35);
  EXPECT_DOUBLE_EQ(p.a(0, 1), 1.0 / 0.35);
  EXPECT_DOUBLE_EQ(p.a(1, 1), -10.0);
  EXPECT_DOUBLE_EQ(p.a(1, 2), -1.0 / (0.10 * 0.05 * 100.0 * std::numbers::pi));
  EXPECT_DOUBLE_EQ(p.a(2, 2), -5.0 / 8.0);
  EXPECT_EQ(p.a(2, 0), 0.0);
  EXPECT_EQ(p.a(2, 1), 0.0);
  EXPECT_DOUBLE_EQ(p.b(1, 0), 10.0);
  EXPECT_EQ(p.c, (Matrix{{1, 0, 0}}));
  // The speed state is driven by nothing, so the pair is not controllable.
  EXPECT_FALSE(controllable(p.a, p.b));
  EXPECT_THROW(turbine_generator(TurbineParameters{}), std::invalid_argument);
}

TEST(Exosystem, SinusoidSpectrumAndSignal) {
  const Exosystem e = sinusoid_exosystem(500.0, 2.5, 0.0);
  const auto ev = eigenvalues(e.s);
  const double w = 1000.0 * std::numbers::pi;
  EXPECT_NEAR(ev[0].real(), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(ev[0].imag()), w, 1e-9 * w);
  EXPECT_NEAR(std::abs(ev[1].imag()), w, 1e-9 * w);
  // d(t) = u exp(s t) nu0 has the closed form 2.5 sin(w t).
  for (double t : {0.0, 1.3e-4, 7.7e-4, 1.9e-3}) {
    const Matrix flow = oracle::expm(e.s * t);
    EXPECT_NEAR((e.u * flow * e.nu0)(0, 0), 2.5 * std::sin(w * t), 1e-9);
  }
  const Exosystem zero = sinusoid_exosystem(1.0, 0.0, 0.3);
  EXPECT_EQ(zero.nu0, Vector::Zero(2));
  EXPECT_THROW(sinusoid_exosystem(0.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(sinusoid_exosystem(1.0, -1.0, 0.0), std::invalid_argument);
}

TEST(Augment, ExampleOneBlocks) {
  const auto g = augment(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  EXPECT_EQ(g.cal_a, (Matrix{{0, 1, 0}, {-1, -10, 2}, {0, 0, 0}}));
  EXPECT_EQ(g.cal_b, (Matrix{{0}, {12}, {1}}));
  EXPECT_EQ(g.cal_c, (Matrix{{1, 0, 0}}));
  EXPECT_EQ(g.h, (Matrix{{0, 1}, {-1, -10}}));

  // lambda (lambda^2 + 10 lambda + 1)
  const auto ev = eigenvalues(g.cal_a);
  const auto [r0, r1] = oracle::quadratic_roots(10.0, 1.0);
  EXPECT_NEAR(ev[0].real(), r0.real(), 1e-12);
  EXPECT_NEAR(ev[1].real(), r1.real(), 1e-12);
  EXPECT_NEAR(std::abs(ev[2]), 0.0, 1e-12);
}

TEST(Augment, DisturbanceInputForExplicitAmplitude) {
  const double m = 3.0;
  Exosystem e = sinusoid_exosystem(1.0, 1.0, 0.0);
  e.u = Matrix{{m, 0.0}};
  const auto g = augment(double_integrator(), example1_gains(), e);
  EXPECT_EQ(g.cal_d, (Matrix{{0, 0}, {m, 0}, {0, 0}}));
}

TEST(Augment, DimensionMismatchThrows) {
  Gains g = example1_gains();
  g.ko = Vector::Ones(3);
  EXPECT_THROW(augment(double_integrator(), g, sinusoid_exosystem(1.0, 1.0, 0.0)), DimensionError);
  g = example1_gains();
  g.k = Matrix::Ones(1, 3);
  EXPECT_THROW(augment(double_integrator(), g, sinusoid_exosystem(1.0, 1.0, 0.0)), DimensionError);
}

TEST(Augment, RandomBlockIdentities) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    AgentPlant p{oracle::random_matrix(rng, n, n), oracle::random_matrix(rng, n, 1), oracle::random_matrix(rng, 1, n)};
    Gains g;
    g.k = oracle::random_matrix(rng, 1, n);
    g.kp = 1.0 + trial;
    g.ki = 0.5 * trial;
    g.ko = oracle::random_vector(rng, 2);
    Exosystem e = sinusoid_exosystem(2.0, 1.0, 0.0);
    e.u = oracle::random_matrix(rng, 1, 2);
    const auto a = augment(p, g, e);
    EXPECT_EQ(a.h, Matrix(p.a - p.b * g.k));
    EXPECT_EQ(a.cal_a.topLeftCorner(n, n), a.h);
    EXPECT_EQ(a.cal_a.topRightCorner(n, 1), Matrix(p.b * g.ki));
    EXPECT_EQ(a.cal_a.bottomRows(1), Matrix::Zero(1, n + 1));
    EXPECT_EQ(a.cal_b.topRows(n), Matrix(p.b * g.kp));
    EXPECT_EQ(a.cal_b(n, 0), 1.0);
    EXPECT_EQ(a.cal_c.leftCols(n), p.c);
    EXPECT_EQ(a.cal_c(0, n), 0.0);
    EXPECT_EQ(a.cal_d.topRows(n), Matrix(p.b * e.u));
    EXPECT_EQ(a.cal_d.bottomRows(1), Matrix::Zero(1, 2));
  }
}

TEST(TransferFunction, ExampleOneClosedForm) {
  // G(s) = (kp s + ki) / (s (s^2 + 10 s + 1)) for the double integrator with K = [1, 10].
  const auto g = augment(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  for (double w : {1e-3, 0.1, 1.0, 7.0, 100.0}) {
    const Complex s(0.0, w);
    const Complex expected = (12.0 * s + 2.0) / (s * (s * s + 10.0 * s + 1.0));
    const Complex got = transfer_function(g, s);
    EXPECT_NEAR(got.real(), expected.real(), 1e-9 * std::abs(expected));
    EXPECT_NEAR(got.imag(), expected.imag(), 1e-9 * std::abs(expected));
  }
  // Re G(iw) -> kp - 10 ki = -8 as w -> 0: the augmented double integrator is not positive real.
  EXPECT_NEAR(transfer_function(g, Complex(0.0, 1e-6)).real(), -8.0, 1e-6);
  EXPECT_THROW(transfer_function(g, Complex(0.0, 0.0)), SingularMatrixError);
}

TEST(VerifyConditions, ExampleOneStructuralConditionsPass) {
  const auto report = verify_agent_conditions(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  for (const char* name : {kPlantControllable, kPlantObservable, kExosystemSpectrum, kFeedbackHurwitz, kCondition1, kCondition2}) {
    ASSERT_NE(report.find(name), nullptr) << name;
    EXPECT_TRUE(report.find(name)->passed) << name << ": " << report.find(name)->detail;
  }
  ASSERT_NE(report.find(kCondition3), nullptr);
}

TEST(VerifyConditions, ExampleOnePositiveRealSweepSeesNegativeRealPart) {
  // The sweep reports exactly what the closed form above predicts.
  const auto report = verify_agent_conditions(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  const auto* c3 = report.find(kCondition3);
  ASSERT_NE(c3, nullptr);
  EXPECT_FALSE(c3->passed);
  EXPECT_NE(c3->detail.find("relative degree"), std::string::npos);
}

TEST(VerifyConditions, UnstableFeedbackFails) {
  Gains g = example1_gains();
  g.k = Matrix{{-1.0, 10.0}};  // a - b k = [[0, 1], [1, -10]] has a positive eigenvalue
  const auto report = verify_agent_conditions(double_integrator(), g, sinusoid_exosystem(1.0, 1.0, 0.0));
  EXPECT_FALSE(report.all_passed());
  EXPECT_FALSE(report.find(kFeedbackHurwitz)->passed);
  EXPECT_FALSE(report.find(kCondition3)->passed);
  EXPECT_NE(report.find(kCondition3)->detail.find("right half-plane"), std::string::npos);
}

TEST(VerifyConditions, ZeroObserverGainFailsConditionTwo) {
  Gains g = example1_gains();
  g.ko = Vector::Zero(2);
  const auto report = verify_agent_conditions(double_integrator(), g, sinusoid_exosystem(1.0, 1.0, 0.0));
  EXPECT_FALSE(report.find(kCondition2)->passed);
  EXPECT_TRUE(report.find(kCondition1)->passed);
}

TEST(VerifyConditions, NonPositiveGainFailsConditionOne) {
  Gains g = example1_gains();
  g.ki = 0.0;
  EXPECT_FALSE(verify_agent_conditions(double_integrator(), g, sinusoid_exosystem(1.0, 1.0, 0.0)).find(kCondition1)->passed);
}

TEST(VerifyConditions, PositiveRealLagPassesAll) {
  const auto report = verify_agent_conditions(lag_plant(), lag_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(VerifyConditions, SimpleZeroEigenvalueWhenConditionsPass) {
  const auto g = augment(lag_plant(), lag_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  int zeros = 0;
  for (const auto& l : eigenvalues(g.cal_a)) {
    if (std::abs(l) <= 1e-9) {
      ++zeros;
    } else {
      EXPECT_LE(l.real(), -1e-6);
    }
  }
  EXPECT_EQ(zeros, 1);
}

TEST(VerifyConditions, PositiveRealSweepInvariantUnderSimilarity) {
  std::mt19937 rng(9);
  const Exosystem e = sinusoid_exosystem(1.0, 1.0, 0.0);
  for (const auto& [plant, gains] : {std::pair{lag_plant(), lag_gains()}, std::pair{double_integrator(), example1_gains()}}) {
    const auto n = plant.order();
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix t = oracle::random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
      const Matrix ti = t.inverse();
      AgentPlant moved{t * plant.a * ti, t * plant.b, plant.c * ti};
      Gains g2 = gains;
      g2.k = gains.k * ti;
      const auto a1 = augment(plant, gains, e);
      const auto a2 = augment(moved, g2, e);
      for (double w : {1e-3, 0.5, 3.0, 1e3}) {
        const Complex g_1 = transfer_function(a1, Complex(0.0, w));
        const Complex g_2 = transfer_function(a2, Complex(0.0, w));
        EXPECT_NEAR(std::abs(g_1 - g_2), 0.0, 1e-8 * (1.0 + std::abs(g_1)));
      }
      EXPECT_EQ(verify_agent_conditions(plant, gains, e).find(kCondition3)->passed, verify_agent_conditions(moved, g2, e).find(kCondition3)->passed);
    }
  }
}

TEST(ObserverError, MatrixAndSpectrum) {
  const Matrix m = observer_error_matrix(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  const double w = 2.0 * std::numbers::pi;
  EXPECT_EQ(m, (Matrix{{-12.0, w}, {-w - 15.0, 0.0}}));
  EXPECT_TRUE(is_hurwitz(m));
}

TEST(StorageMatrix, PositiveRealLagHasUniqueStorage) {
  const auto g = augment(lag_plant(), lag_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  const StorageMatrix s = passivity_storage_matrix(g);
  EXPECT_TRUE(s.feasible) << s.detail;
  // P calB = calC' and the skew-free part of P calA + calA' P <= 0 pin P down to [[1, -1], [-1, 2]].
  EXPECT_NEAR(s.p(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(s.p(0, 1), -1.0, 1e-6);
  EXPECT_NEAR(s.p(1, 1), 2.0, 1e-6);
  EXPECT_LE(s.equality_residual, 1e-9);
  EXPECT_GT(s.min_eigenvalue, 0.0);
}

TEST(StorageMatrix, ExampleOneIsInfeasible) {
  const auto g = augment(double_integrator(), example1_gains(), sinusoid_exosystem(1.0, 1.0, 0.0));
  const StorageMatrix s = passivity_storage_matrix(g);
  EXPECT_FALSE(s.feasible);
  EXPECT_LE(s.equality_residual, 1e-9);
  EXPECT_GT(s.dissipation_eigenvalue, 0.1);
}

}  // namespace
}  // namespace neseek
