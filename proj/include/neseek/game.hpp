#pragma once

#include <cstddef>
#include <vector>

#include "neseek/linalg.hpp"

namespace neseek {

// Player cost J_i(y_i, sigma) = xi y_i^2 + beta y_i + alpha - (p0 - a sigma) y_i, where
// sigma is the sum of all strategies and (p0, a) is a price curve shared by every player.
struct AggregativeCost {
  double xi = 1.0;
  double beta = 0.0;
  double alpha = 0.0;

  bool operator==(const AggregativeCost&) const = default;
};

// Quadratic aggregative game with scalar strategies. Player indices are 0-based.
class GameModel {
 public:
  GameModel() = default;
  // Throws std::invalid_argument if costs is empty, any xi <= 0, or price_slope < 0.
  GameModel(double price_intercept, double price_slope, std::vector<AggregativeCost> costs);

  // Tracking form J_i = w_i (y_i - target_i)^2 - (c0 - slope sigma) y_i, mapped onto the
  // canonical form with xi = w, beta = -2 w target, alpha = w target^2.
  static GameModel from_tracking(const std::vector<double>& weights, const std::vector<double>& targets,
                                 double price_intercept, double price_slope);

  std::size_t size() const { return costs_.size(); }
  double price_intercept() const { return p0_; }
  double price_slope() const { return a_; }
  const std::vector<AggregativeCost>& costs() const { return costs_; }

  double cost(std::size_t i, const Vector& y) const;
  // d J_i / d y_i = 2 xi y_i + beta - p0 + a sigma + a y_i
  double gradient(std::size_t i, const Vector& y) const;
  // Same expression with sigma replaced by the local estimate eta_i.
  double partial_map(std::size_t i, double y_i, double eta_i) const;
  Vector pseudo_gradient(const Vector& y) const;

  // phi(y) = M y + (beta - p0 1) with M = diag(2 xi + a) + a 1 1^T.
  Matrix pseudo_gradient_matrix() const;
  Vector pseudo_gradient_offset() const;

  bool operator==(const GameModel&) const = default;

 private:
  void check_index(std::size_t i) const;
  void check_profile(const Vector& y) const;

  double p0_ = 0.0;
  double a_ = 0.0;
  std::vector<AggregativeCost> costs_;
};

struct MonotonicityCertificate {
  double mu = 0.0;     // lambda_min of the symmetric part of M
  double theta = 0.0;  // Lipschitz constant of F in eta (equal to the price slope)
  bool passes() const { return mu > 0.0; }
};

MonotonicityCertificate monotonicity_certificate(const GameModel& game);

// Unique Nash equilibrium: solves M y = p0 1 - beta. Throws PreconditionError when the
// game is not strongly monotone.
Vector nash_equilibrium(const GameModel& game);

}  // namespace neseek
