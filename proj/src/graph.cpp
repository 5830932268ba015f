#include "dpda/graph.hpp"

#include "dpda/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace dpda {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), adj_(n) {
  require(n >= 1, "graph needs at least one node");
  std::set<Edge> seen;
  for (auto [i, j] : edges) {
    require(i >= 0 && j >= 0 && i < n && j < n, "graph edge endpoint out of range");
    require(i != j, "graph self-loop");
    if (i > j) std::swap(i, j);
    require(seen.insert({i, j}).second, "duplicate graph edge");
  }
  edges_.assign(seen.begin(), seen.end());
  for (auto [i, j] : edges_) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Graph Graph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph Graph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph Graph::ring(int n) {
  if (n <= 2) return path(n);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph Graph::star(int n) {
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, e);
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, int(a.size()));
  return d;
}

bool Graph::connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj_[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n_;
}

Mat Graph::laplacian() const {
  Mat L = Mat::Zero(n_, n_);
  for (auto [i, j] : edges_) {
    L(i, i) += 1;
    L(j, j) += 1;
    L(i, j) -= 1;
    L(j, i) -= 1;
  }
  return L;
}

Mat Graph::incidence() const {
  Mat H = Mat::Zero(num_edges(), n_);
  for (int e = 0; e < num_edges(); ++e) {
    H(e, edges_[e].first) = 1;
    H(e, edges_[e].second) = -1;
  }
  return H;
}

namespace {

int common_dim(const Blocks& x) {
  const int d = x.empty() ? 0 : int(x[0].size());
  for (const auto& b : x) require(b.size() == d, "blocks must share one dimension");
  return d;
}

}  // namespace

Blocks laplacian_apply(const Graph& g, const Blocks& x) {
  require(int(x.size()) == g.nodes(), "laplacian: block count mismatch");
  const int d = common_dim(x);
  Blocks out(x.size(), Vec::Zero(d));
  for (auto [i, j] : g.edges()) {
    const Vec diff = x[i] - x[j];
    out[i] += diff;
    out[j] -= diff;
  }
  return out;
}

Blocks incidence_apply(const Graph& g, const Blocks& x) {
  require(int(x.size()) == g.nodes(), "incidence: block count mismatch");
  common_dim(x);
  Blocks out;
  out.reserve(g.num_edges());
  for (auto [i, j] : g.edges()) out.push_back(x[i] - x[j]);
  return out;
}

Blocks incidence_adjoint(const Graph& g, const Blocks& lambda) {
  require(int(lambda.size()) == g.num_edges(), "incidence adjoint: edge count mismatch");
  const int d = lambda.empty() ? 0 : int(lambda[0].size());
  common_dim(lambda);
  Blocks out(g.nodes(), Vec::Zero(d));
  for (int e = 0; e < g.num_edges(); ++e) {
    out[g.edges()[e].first] += lambda[e];
    out[g.edges()[e].second] -= lambda[e];
  }
  return out;
}

double algebraic_connectivity(const Graph& g) {
  if (g.nodes() < 2 || !g.connected()) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(g.laplacian(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

GraphSearchError::GraphSearchError(GraphSearchResult best)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "graph search missed target; best lambda2 = " << std::setprecision(10) << best.lambda2;
        return os.str();
      }()),
      best_(std::move(best)) {}

GraphSearchResult search_graph(int n, double target, double tolerance, std::uint64_t seed, int max_attempts) {
  require(n >= 2, "graph search needs n >= 2");
  require(target > 0.0 && target <= n, "target connectivity must lie in (0, n]");
  require(tolerance >= 0.0, "tolerance must be nonnegative");
  auto rng = make_stream(seed, "graph");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<Edge> edges;
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    int a = order[k], b = order[pick(rng)];
    edges.insert({std::min(a, b), std::max(a, b)});
  }

  auto score = [&](const std::set<Edge>& e) {
    Graph g(n, {e.begin(), e.end()});
    return algebraic_connectivity(g);
  };
  double lam = score(edges);
  const double band = tolerance * target + 1e-9;  // eigensolve accuracy
  int attempts = 0;
  std::uniform_int_distribution<int> node(0, n - 1);
  std::uniform_int_distribution<int> move(0, 2);
  while (std::abs(lam - target) > band && attempts < max_attempts) {
    ++attempts;
    std::set<Edge> cand = edges;
    const int kind = move(rng);
    if (kind != 1) {  // add (0) or swap (2)
      const int a = node(rng), b = node(rng);
      if (a == b) continue;
      if (!cand.insert({std::min(a, b), std::max(a, b)}).second) continue;
    }
    if (kind != 0) {  // remove (1) or swap (2)
      if (cand.empty()) continue;
      std::uniform_int_distribution<size_t> pick(0, cand.size() - 1);
      auto it = cand.begin();
      std::advance(it, pick(rng));
      cand.erase(it);
    }
    const double l = score(cand);
    if (l > 0.0 && std::abs(l - target) < std::abs(lam - target)) {
      edges = std::move(cand);
      lam = l;
    }
  }
  GraphSearchResult res;
  res.graph = Graph(n, {edges.begin(), edges.end()});
  res.lambda2 = lam;
  res.target_met = std::abs(lam - target) <= band;
  res.attempts = attempts;
  return res;
}

Graph generate_graph(int n, double target, double tolerance, std::uint64_t seed) {
  auto res = search_graph(n, target, tolerance, seed);
  if (!res.target_met) throw GraphSearchError(std::move(res));
  return res.graph;
}

void write_graph(std::ostream& os, const Graph& g) {
  os << "nodes " << g.nodes() << "\n";
  for (auto [i, j] : g.edges()) os << i << " " << j << "\n";
}

Graph read_graph(std::istream& is) {
  std::string word;
  int n = 0;
  if (!(is >> word >> n) || word != "nodes") throw std::invalid_argument("graph file must start with 'nodes N'");
  std::vector<Edge> edges;
  int i, j;
  while (is >> i >> j) edges.emplace_back(i, j);
  if (!is.eof()) throw std::invalid_argument("graph file: malformed edge line");
  return Graph(n, edges);
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_graph(os, g);
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read graph file " + path);
  return read_graph(is);
}

}  // namespace dpda
