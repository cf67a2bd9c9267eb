#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "neseek/linalg.hpp"

namespace neseek {

// Undirected, unweighted communication topology. Nodes are 0-based internally; scenario
// files use 1-based node labels and convert on load.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph() = default;
  // Throws std::invalid_argument on self-loops or out-of-range nodes. Duplicate and reversed
  // edges collapse to a single undirected edge; edges are stored with first < second.
  Graph(std::size_t nodes, const std::vector<Edge>& edges);

  std::size_t size() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }

  bool operator==(const Graph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::size_t nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);

// L = D - A with unit weights.
Matrix laplacian(const Graph& g);

// Breadth-first search from node 0. The empty graph and a single node count as connected.
bool is_connected(const Graph& g);

// Fast dynamics of the consensus estimator, [[-I-L, -L], [L, 0]] (2n x 2n).
// Throws PreconditionError if g is disconnected.
Matrix boundary_layer_matrix(const Graph& g);

// n x (n-1) matrix whose columns complete r = 1/sqrt(n) to an orthonormal basis
// (Gram-Schmidt against the standard basis).
Matrix orthonormal_completion(std::size_t n);

// The boundary-layer matrix with the kernel direction of L removed from the omega block:
// [[-I-L, -L R], [R^T L, 0]] with R = orthonormal_completion(n). Hurwitz for every
// connected graph.
Matrix reduced_boundary_layer_matrix(const Graph& g);

}  // namespace neseek
