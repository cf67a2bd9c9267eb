#include "neseek/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include <fmt/format.h>

#include "neseek/errors.hpp"

namespace neseek {

Graph::Graph(std::size_t nodes, const std::vector<Edge>& edges) : nodes_(nodes), adjacency_(nodes) {
  for (auto [u, v] : edges) {
    if (u >= nodes || v >= nodes) {
      throw std::invalid_argument(fmt::format("edge ({}, {}) references a node outside [0, {})", u, v, nodes));
    }
    if (u == v) throw std::invalid_argument(fmt::format("self-loop at node {}", u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

Graph cycle_graph(std::size_t n) {
  std::vector<Graph::Edge> edges;
  if (n == 2) edges.emplace_back(0, 1);
  if (n > 2) {
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  }
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

Matrix laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix l = Matrix::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    const auto i = static_cast<Eigen::Index>(u);
    const auto j = static_cast<Eigen::Index>(v);
    l(i, j) -= 1.0;
    l(j, i) -= 1.0;
    l(i, i) += 1.0;
    l(j, j) += 1.0;
  }
  return l;
}

bool is_connected(const Graph& g) {
  if (g.size() <= 1) return true;
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == g.size();
}

Matrix boundary_layer_matrix(const Graph& g) {
  if (!is_connected(g)) throw PreconditionError("boundary_layer_matrix: graph is not connected");
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix l = laplacian(g);
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = -Matrix::Identity(n, n) - l;
  m.topRightCorner(n, n) = -l;
  m.bottomLeftCorner(n, n) = l;
  return m;
}

Matrix orthonormal_completion(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  if (size == 0) return Matrix(0, 0);
  std::vector<Vector> basis;
  basis.push_back(Vector::Constant(size, 1.0 / std::sqrt(static_cast<double>(n))));
  for (Eigen::Index k = 0; k < size && static_cast<Eigen::Index>(basis.size()) < size; ++k) {
    Vector v = Vector::Unit(size, k);
    // modified Gram-Schmidt, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    const double norm = v.norm();
    if (norm > 1e-8) basis.push_back(v / norm);
  }
  Matrix r(size, size - 1);
  for (Eigen::Index k = 1; k < size; ++k) r.col(k - 1) = basis[static_cast<std::size_t>(k)];
  return r;
}

Matrix reduced_boundary_layer_matrix(const Graph& g) {
  if (!is_connected(g)) throw PreconditionError("reduced_boundary_layer_matrix: graph is not connected");
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix l = laplacian(g);
  const Matrix r = orthonormal_completion(g.size());
  Matrix m = Matrix::Zero(2 * n - 1, 2 * n - 1);
  m.topLeftCorner(n, n) = -Matrix::Identity(n, n) - l;
  m.topRightCorner(n, n - 1) = -l * r;
  m.bottomLeftCorner(n - 1, n) = r.transpose() * l;
  return m;
}

}  // namespace neseek
