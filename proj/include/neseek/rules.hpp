#pragma once

#include <string>
#include <vector>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/linalg.hpp"
#include "neseek/plant.hpp"

namespace neseek {

enum class Mode { kPerfect, kImperfect };

std::string to_string(Mode mode);
// "perfect" or "imperfect"; throws std::invalid_argument otherwise.
Mode parse_mode(const std::string& text);

struct AgentModel {
  AgentPlant plant;
  Gains gains;
  Exosystem exo;
};

// Offsets of each agent's variables inside the flat network state vector. Per agent the
// order is x (n), gamma (1), z (q), nu (q); in imperfect mode the N aggregate estimates eta
// and the N consensus auxiliaries omega follow all agent blocks.
class StateLayout {
 public:
  StateLayout() = default;
  StateLayout(const std::vector<AgentModel>& agents, Mode mode);

  Mode mode() const { return mode_; }
  std::size_t agents() const { return blocks_.size(); }
  Eigen::Index size() const { return size_; }

  Eigen::Index x(std::size_t i) const { return blocks_[i].x; }
  Eigen::Index gamma(std::size_t i) const { return blocks_[i].x + blocks_[i].n; }
  Eigen::Index z(std::size_t i) const { return gamma(i) + 1; }
  Eigen::Index nu(std::size_t i) const { return z(i) + blocks_[i].q; }
  Eigen::Index plant_order(std::size_t i) const { return blocks_[i].n; }
  Eigen::Index exo_order(std::size_t i) const { return blocks_[i].q; }
  // Valid in imperfect mode only.
  Eigen::Index eta(std::size_t i) const { return eta_ + static_cast<Eigen::Index>(i); }
  Eigen::Index omega(std::size_t i) const { return eta_ + static_cast<Eigen::Index>(blocks_.size() + i); }

 private:
  struct Block {
    Eigen::Index x = 0, n = 0, q = 0;
  };
  Mode mode_ = Mode::kPerfect;
  std::vector<Block> blocks_;
  Eigen::Index eta_ = 0;
  Eigen::Index size_ = 0;
};

// The closed-loop network: agents, their game, the communication graph and the strategy
// rule. Immutable once built; derivative evaluation is a pure function of (state, t).
class Network {
 public:
  // Throws DimensionError on inconsistent agent shapes and PreconditionError when the agent,
  // player and node counts differ, or in imperfect mode when delta <= 0 or the graph is
  // disconnected.
  Network(std::vector<AgentModel> agents, GameModel game, Graph graph, Mode mode, double delta,
          bool observer_enabled = true);

  const StateLayout& layout() const { return layout_; }
  const std::vector<AgentModel>& agents() const { return agents_; }
  const GameModel& game() const { return game_; }
  const Graph& graph() const { return graph_; }
  const Matrix& laplacian_matrix() const { return laplacian_; }
  Mode mode() const { return layout_.mode(); }
  double delta() const { return delta_; }
  bool observer_enabled() const { return observer_enabled_; }
  std::size_t size() const { return agents_.size(); }

  // x, gamma, z, eta, omega zero; nu at each exosystem's initial state.
  Vector initial_state() const;

  // y_i = c_i x_i
  Vector output(const Vector& state) const;

  // Disturbance d_i = u_i nu_i and its estimate u_i (z_i + ko_i b_i^T x_i) (zero when the
  // observer is disabled).
  double disturbance(const Vector& state, std::size_t i) const;
  double disturbance_estimate(const Vector& state, std::size_t i) const;

  // rho_i = nu_i - (z_i + ko_i b_i^T x_i)
  Vector observation_error(const Vector& state, std::size_t i) const;

  // Dispatches on mode(). out is resized as needed.
  void derivative(const Vector& state, double t, Vector& out) const;
  Vector derivative(const Vector& state, double t) const;

  // Rest point whose output is y_star: h x + b ki gamma = 0 and c x = y_star per agent,
  // nu = 0 and z = -ko b^T x (so rho = 0); in imperfect mode eta = sum(y_star) 1 and omega is
  // the minimum-norm solution of L omega = N y_star - sum(y_star) 1.
  Vector equilibrium_state(const Vector& y_star) const;

 private:
  struct Cache {
    Matrix h;              // a - b k
    Vector b;              // n
    Eigen::RowVectorXd c;  // n
    Matrix s;              // q x q
    Eigen::RowVectorXd u;  // q
    Matrix ko_bt;          // q x n, ko b^T
    Matrix observer_x;     // q x n, s ko b^T - ko b^T a + ko b^T b k
    Vector ko_btb;         // q, ko b^T b
    double kp = 0.0;
    double ki = 0.0;
  };

  void agent_derivative(std::size_t i, const Vector& state, double gradient_signal, Vector& out) const;
  void perfect_into(const Vector& state, Vector& out) const;
  void imperfect_into(const Vector& state, Vector& out) const;

  std::vector<AgentModel> agents_;
  GameModel game_;
  Graph graph_;
  Matrix laplacian_;
  double delta_;
  bool observer_enabled_;
  StateLayout layout_;
  std::vector<Cache> cache_;
};

// Perfect information: e_i = -dJ_i/dy_i evaluated with the exact aggregate.
// Throws PreconditionError unless net.mode() is perfect.
Vector deriv_perfect(const Network& net, const Vector& state, double t);

// Imperfect information: e_i = -F_i(y_i, eta_i) with the consensus estimator
//   delta eta' = -eta - L eta - L omega + N y,  delta omega' = L eta.
// Throws PreconditionError unless net.mode() is imperfect.
Vector deriv_imperfect(const Network& net, const Vector& state, double t);

}  // namespace neseek
