#include "neseek/game.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "neseek/errors.hpp"

namespace neseek {

GameModel::GameModel(double price_intercept, double price_slope, std::vector<AggregativeCost> costs)
    : p0_(price_intercept), a_(price_slope), costs_(std::move(costs)) {
  if (costs_.empty()) throw std::invalid_argument("game needs at least one player");
  if (!(a_ >= 0.0)) throw std::invalid_argument(fmt::format("price slope must be nonnegative, got {}", a_));
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (!(costs_[i].xi > 0.0)) {
      throw std::invalid_argument(fmt::format("player {}: quadratic coefficient must be positive, got {}", i + 1, costs_[i].xi));
    }
  }
}

GameModel GameModel::from_tracking(const std::vector<double>& weights, const std::vector<double>& targets,
                                   double price_intercept, double price_slope) {
  if (weights.size() != targets.size()) {
    throw std::invalid_argument(fmt::format("{} weights but {} targets", weights.size(), targets.size()));
  }
  std::vector<AggregativeCost> costs;
  costs.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    const double b = targets[i];
    costs.push_back({w, -2.0 * w * b, w * b * b});
  }
  return GameModel(price_intercept, price_slope, std::move(costs));
}

void GameModel::check_index(std::size_t i) const {
  if (i >= costs_.size()) throw std::out_of_range(fmt::format("player index {} out of range [0, {})", i, costs_.size()));
}

void GameModel::check_profile(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != costs_.size()) {
    throw DimensionError(fmt::format("strategy profile has {} entries for {} players", y.size(), costs_.size()));
  }
}

double GameModel::cost(std::size_t i, const Vector& y) const {
  check_index(i);
  check_profile(y);
  const auto& c = costs_[i];
  const double yi = y[static_cast<Eigen::Index>(i)];
  return c.xi * yi * yi + c.beta * yi + c.alpha - (p0_ - a_ * y.sum()) * yi;
}

double GameModel::gradient(std::size_t i, const Vector& y) const {
  check_profile(y);
  return partial_map(i, y[static_cast<Eigen::Index>(i)], y.sum());
}

double GameModel::partial_map(std::size_t i, double y_i, double eta_i) const {
  check_index(i);
  const auto& c = costs_[i];
  return 2.0 * c.xi * y_i + c.beta - p0_ + a_ * eta_i + a_ * y_i;
}

Vector GameModel::pseudo_gradient(const Vector& y) const {
  check_profile(y);
  const double sigma = y.sum();
  Vector out(y.size());
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out[k] = partial_map(i, y[k], sigma);
  }
  return out;
}

Matrix GameModel::pseudo_gradient_matrix() const {
  const auto n = static_cast<Eigen::Index>(costs_.size());
  Matrix m = Matrix::Constant(n, n, a_);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) += 2.0 * costs_[static_cast<std::size_t>(i)].xi + a_;
  return m;
}

Vector GameModel::pseudo_gradient_offset() const {
  Vector out(static_cast<Eigen::Index>(costs_.size()));
  for (std::size_t i = 0; i < costs_.size(); ++i) out[static_cast<Eigen::Index>(i)] = costs_[i].beta - p0_;
  return out;
}

MonotonicityCertificate monotonicity_certificate(const GameModel& game) {
  const Matrix m = game.pseudo_gradient_matrix();
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), game.price_slope()};
}

Vector nash_equilibrium(const GameModel& game) {
  const auto cert = monotonicity_certificate(game);
  if (!cert.passes()) {
    throw PreconditionError(fmt::format("pseudo-gradient is not strongly monotone (mu = {:.6g})", cert.mu));
  }
  return solve(game.pseudo_gradient_matrix(), -game.pseudo_gradient_offset());
}

}  // namespace neseek
