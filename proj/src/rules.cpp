#include "neseek/rules.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "neseek/errors.hpp"

namespace neseek {

std::string to_string(Mode mode) { return mode == Mode::kPerfect ? "perfect" : "imperfect"; }

Mode parse_mode(const std::string& text) {
  if (text == "perfect") return Mode::kPerfect;
  if (text == "imperfect") return Mode::kImperfect;
  throw std::invalid_argument(fmt::format("unknown mode '{}' (expected perfect or imperfect)", text));
}

StateLayout::StateLayout(const std::vector<AgentModel>& agents, Mode mode) : mode_(mode) {
  Eigen::Index offset = 0;
  for (const auto& a : agents) {
    Block b;
    b.x = offset;
    b.n = a.plant.order();
    b.q = a.exo.order();
    blocks_.push_back(b);
    offset += b.n + 1 + 2 * b.q;
  }
  eta_ = offset;
  if (mode == Mode::kImperfect) offset += 2 * static_cast<Eigen::Index>(agents.size());
  size_ = offset;
}

Network::Network(std::vector<AgentModel> agents, GameModel game, Graph graph, Mode mode, double delta,
                 bool observer_enabled)
    : agents_(std::move(agents)),
      game_(std::move(game)),
      graph_(std::move(graph)),
      delta_(delta),
      observer_enabled_(observer_enabled) {
  const auto n = agents_.size();
  if (n == 0) throw PreconditionError("network needs at least one agent");
  if (game_.size() != n) throw PreconditionError(fmt::format("{} agents but {} players", n, game_.size()));
  if (graph_.size() != n) throw PreconditionError(fmt::format("{} agents but {} graph nodes", n, graph_.size()));
  if (mode == Mode::kImperfect) {
    if (!(delta_ > 0.0)) throw PreconditionError(fmt::format("imperfect mode needs delta > 0, got {}", delta_));
    if (!is_connected(graph_)) throw PreconditionError("imperfect mode needs a connected graph");
  }
  laplacian_ = laplacian(graph_);
  layout_ = StateLayout(agents_, mode);

  cache_.reserve(n);
  for (const auto& a : agents_) {
    check_dimensions(a.plant, a.gains, a.exo);
    Cache c;
    c.h = a.plant.a - a.plant.b * a.gains.k;
    c.b = a.plant.b.col(0);
    c.c = a.plant.c.row(0);
    c.s = a.exo.s;
    c.u = a.exo.u.row(0);
    c.ko_bt = a.gains.ko * a.plant.b.transpose();
    const double btb = c.b.squaredNorm();
    c.ko_btb = a.gains.ko * btb;
    c.observer_x = a.exo.s * c.ko_bt - c.ko_bt * a.plant.a + c.ko_btb * a.gains.k;
    c.kp = a.gains.kp;
    c.ki = a.gains.ki;
    cache_.push_back(std::move(c));
  }
}

Vector Network::initial_state() const {
  Vector s = Vector::Zero(layout_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    s.segment(layout_.nu(i), layout_.exo_order(i)) = agents_[i].exo.nu0;
  }
  return s;
}

Vector Network::output(const Vector& state) const {
  Vector y(static_cast<Eigen::Index>(agents_.size()));
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = cache_[i].c.dot(state.segment(layout_.x(i), layout_.plant_order(i)));
  }
  return y;
}

double Network::disturbance(const Vector& state, std::size_t i) const {
  return cache_[i].u.dot(state.segment(layout_.nu(i), layout_.exo_order(i)));
}

double Network::disturbance_estimate(const Vector& state, std::size_t i) const {
  if (!observer_enabled_) return 0.0;
  const auto& c = cache_[i];
  const auto x = state.segment(layout_.x(i), layout_.plant_order(i));
  const auto z = state.segment(layout_.z(i), layout_.exo_order(i));
  return c.u.dot(z + c.ko_bt * x);
}

Vector Network::observation_error(const Vector& state, std::size_t i) const {
  const auto& c = cache_[i];
  const auto x = state.segment(layout_.x(i), layout_.plant_order(i));
  const auto z = state.segment(layout_.z(i), layout_.exo_order(i));
  const auto nu = state.segment(layout_.nu(i), layout_.exo_order(i));
  return nu - z - c.ko_bt * x;
}

void Network::agent_derivative(std::size_t i, const Vector& state, double e, Vector& out) const {
  const auto& c = cache_[i];
  const auto n = layout_.plant_order(i);
  const auto q = layout_.exo_order(i);
  const auto x = state.segment(layout_.x(i), n);
  const double gamma = state[layout_.gamma(i)];
  const auto z = state.segment(layout_.z(i), q);
  const auto nu = state.segment(layout_.nu(i), q);

  const double v = c.kp * e + c.ki * gamma;
  const double d = c.u.dot(nu);
  const double d_hat = observer_enabled_ ? c.u.dot(z + c.ko_bt * x) : 0.0;

  out.segment(layout_.x(i), n).noalias() = c.h * x + c.b * (v - d_hat + d);
  out[layout_.gamma(i)] = e;
  out.segment(layout_.z(i), q).noalias() = c.s * z + c.observer_x * x - c.ko_btb * v;
  out.segment(layout_.nu(i), q).noalias() = c.s * nu;
}

void Network::perfect_into(const Vector& state, Vector& out) const {
  out.resize(layout_.size());
  const Vector y = output(state);
  const double sigma = y.sum();
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const double e = -game_.partial_map(i, y[static_cast<Eigen::Index>(i)], sigma);
    agent_derivative(i, state, e, out);
  }
}

void Network::imperfect_into(const Vector& state, Vector& out) const {
  out.resize(layout_.size());
  const auto n = static_cast<Eigen::Index>(agents_.size());
  const Vector y = output(state);
  const auto eta = state.segment(layout_.eta(0), n);
  const auto omega = state.segment(layout_.omega(0), n);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double e = -game_.partial_map(i, y[k], eta[k]);
    agent_derivative(i, state, e, out);
  }
  const double scale = 1.0 / delta_;
  const Vector l_eta = laplacian_ * eta;
  out.segment(layout_.eta(0), n) = scale * (-eta - l_eta - laplacian_ * omega + static_cast<double>(n) * y);
  out.segment(layout_.omega(0), n) = scale * l_eta;
}

void Network::derivative(const Vector& state, double /*t*/, Vector& out) const {
  if (state.size() != layout_.size()) {
    throw DimensionError(fmt::format("state has {} entries, layout expects {}", state.size(), layout_.size()));
  }
  if (mode() == Mode::kPerfect) {
    perfect_into(state, out);
  } else {
    imperfect_into(state, out);
  }
}

Vector Network::derivative(const Vector& state, double t) const {
  Vector out;
  derivative(state, t, out);
  return out;
}

Vector Network::equilibrium_state(const Vector& y_star) const {
  if (static_cast<std::size_t>(y_star.size()) != agents_.size()) {
    throw DimensionError(fmt::format("equilibrium output has {} entries for {} agents", y_star.size(), agents_.size()));
  }
  Vector s = Vector::Zero(layout_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& c = cache_[i];
    const auto n = layout_.plant_order(i);
    Matrix lhs = Matrix::Zero(n + 1, n + 1);
    lhs.topLeftCorner(n, n) = c.h;
    lhs.topRightCorner(n, 1) = c.b * c.ki;
    lhs.bottomLeftCorner(1, n) = c.c;
    Vector rhs = Vector::Zero(n + 1);
    rhs[n] = y_star[static_cast<Eigen::Index>(i)];
    const Vector chi = solve(lhs, rhs);
    s.segment(layout_.x(i), n) = chi.head(n);
    s[layout_.gamma(i)] = chi[n];
    s.segment(layout_.z(i), layout_.exo_order(i)) = -c.ko_bt * chi.head(n);
  }
  if (mode() == Mode::kImperfect) {
    const auto n = static_cast<Eigen::Index>(agents_.size());
    const double sigma = y_star.sum();
    s.segment(layout_.eta(0), n).setConstant(sigma);
    const Vector rhs = static_cast<double>(n) * y_star - Vector::Constant(n, sigma);
    s.segment(layout_.omega(0), n) = laplacian_.completeOrthogonalDecomposition().solve(rhs);
  }
  return s;
}

Vector deriv_perfect(const Network& net, const Vector& state, double t) {
  if (net.mode() != Mode::kPerfect) throw PreconditionError("deriv_perfect called on an imperfect-information network");
  return net.derivative(state, t);
}

Vector deriv_imperfect(const Network& net, const Vector& state, double t) {
  if (net.mode() != Mode::kImperfect) throw PreconditionError("deriv_imperfect called on a perfect-information network");
  return net.derivative(state, t);
}

}  // namespace neseek
