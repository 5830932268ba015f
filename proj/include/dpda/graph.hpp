#pragma once

#include "dpda/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>

namespace dpda {

using Edge = std::pair<int, int>;

// Undirected simple graph; every edge is stored as (i, j) with i < j.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph ring(int n);
  static Graph star(int n);

  int nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return int(edges_.size()); }
  int degree(int i) const { return int(adj_[i].size()); }
  int max_degree() const;
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  bool connected() const;

  Mat laplacian() const;
  // Oriented incidence matrix, row e = (i, j) has +1 at i and -1 at j.
  Mat incidence() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Block i of the result is sum_{j in N_i} (x_i - x_j).
Blocks laplacian_apply(const Graph& g, const Blocks& x);
// Edge block (i, j) of the result is x_i - x_j.
Blocks incidence_apply(const Graph& g, const Blocks& x);
Blocks incidence_adjoint(const Graph& g, const Blocks& lambda);

// Second-smallest Laplacian eigenvalue; 0 for disconnected graphs.
double algebraic_connectivity(const Graph& g);

struct GraphSearchResult {
  Graph graph;
  double lambda2 = 0.0;
  bool target_met = false;
  int attempts = 0;
};

// Random spanning tree followed by greedy random edge edits while
// |lambda2 - target| decreases. Reports the best graph found either way.
GraphSearchResult search_graph(int n, double target, double tolerance, std::uint64_t seed, int max_attempts = 10000);

// Same search, but throws GraphSearchError when the target is missed.
Graph generate_graph(int n, double target, double tolerance, std::uint64_t seed);

class GraphSearchError : public std::runtime_error {
 public:
  explicit GraphSearchError(GraphSearchResult best);
  const GraphSearchResult& best() const { return best_; }

 private:
  GraphSearchResult best_;
};

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

}  // namespace dpda
