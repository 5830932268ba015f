#include <doctest.h>

#include "dpda/mixing.hpp"
#include "dpda/rng.hpp"
#include "fixtures.hpp"

#include <sstream>

using namespace dpda;
using namespace dpda::testing;

namespace {

Blocks random_blocks(std::mt19937_64& rng, int N, int n) {
  std::normal_distribution<double> nd;
  Blocks x(N, Vec(n));
  for (auto& b : x)
    for (int i = 0; i < n; ++i) b(i) = nd(rng);
  return x;
}

// Dense incidence matrix built straight from the edge list.
Mat dense_incidence(int N, const std::vector<Edge>& edges) {
  Mat H = Mat::Zero(int(edges.size()), N);
  for (size_t e = 0; e < edges.size(); ++e) {
    H(e, edges[e].first) = 1.0;
    H(e, edges[e].second) = -1.0;
  }
  return H;
}

Mat dense_metropolis(int N, const std::vector<Edge>& active) {
  std::vector<int> deg(N, 0);
  for (auto [i, j] : active) ++deg[i], ++deg[j];
  Mat V = Mat::Zero(N, N);
  for (auto [i, j] : active) V(i, j) = V(j, i) = 1.0 / (1 + std::max(deg[i], deg[j]));
  for (int i = 0; i < N; ++i) V(i, i) = 1.0 - V.row(i).sum();
  return V;
}

}  // namespace

TEST_CASE("graph construction") {
  Graph g(3, {{1, 0}, {1, 2}});
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.degree(1) == 2);
  CHECK(g.connected());
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_FALSE(Graph(3, {{0, 1}}).connected());
  CHECK(Graph::complete(5).num_edges() == 10);
  CHECK(Graph::ring(5).num_edges() == 5);
  CHECK(Graph::star(4).max_degree() == 3);
}

TEST_CASE("laplacian examples") {
  auto r = laplacian_apply(Graph::path(3), scalars({1, 2, 3}));
  CHECK(r[0](0) == -1);
  CHECK(r[1](0) == 0);
  CHECK(r[2](0) == 1);
  auto k = laplacian_apply(Graph::complete(3), scalars({1, 0, 0}));
  CHECK(k[0](0) == 2);
  CHECK(k[1](0) == -1);
  CHECK(k[2](0) == -1);
  Blocks same(4, Vec::Constant(2, 3.7));
  for (const auto& b : laplacian_apply(Graph::ring(4), same)) CHECK(b.norm() == 0.0);
  CHECK_THROWS_AS(laplacian_apply(Graph::path(3), scalars({1, 2})), std::invalid_argument);
}

TEST_CASE("incidence examples") {
  auto m = incidence_apply(Graph::path(2), scalars({3, 1}));
  REQUIRE(m.size() == 1);
  CHECK(m[0](0) == 2);
  auto t = incidence_adjoint(Graph::path(3), scalars({1, 1}));
  CHECK(t[0](0) == 1);
  CHECK(t[1](0) == 0);
  CHECK(t[2](0) == -1);
}

TEST_CASE("incidence operators against dense matrices") {
  auto rng = make_stream(1, "incidence");
  for (int s = 0; s < 50; ++s) {
    int N = 2 + s % 5;
    Graph g = random_connected(rng, N);
    Mat H = dense_incidence(N, g.edges());
    CHECK((g.incidence() - H).norm() == 0.0);
    CHECK((g.laplacian() - H.transpose() * H).norm() == 0.0);
    Blocks x = random_blocks(rng, N, 3);
    Blocks lam = random_blocks(rng, g.num_edges(), 3);
    Mat X(N, 3), Lm(g.num_edges(), 3);
    for (int i = 0; i < N; ++i) X.row(i) = x[i].transpose();
    for (int e = 0; e < g.num_edges(); ++e) Lm.row(e) = lam[e].transpose();
    Mat MX = H * X, MtL = H.transpose() * Lm, LX = H.transpose() * H * X;
    auto mx = incidence_apply(g, x);
    auto mtl = incidence_adjoint(g, lam);
    auto lx = laplacian_apply(g, x);
    auto mtmx = incidence_adjoint(g, mx);
    double ip1 = 0, ip2 = 0, quad = 0, lap = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
      CHECK((mx[e].transpose() - MX.row(e)).norm() < 1e-12);
      ip1 += mx[e].dot(lam[e]);
      quad += mx[e].squaredNorm();
    }
    for (int i = 0; i < N; ++i) {
      CHECK((mtl[i].transpose() - MtL.row(i)).norm() < 1e-12);
      CHECK((lx[i].transpose() - LX.row(i)).norm() < 1e-12);
      CHECK((lx[i] - mtmx[i]).norm() < 1e-12);
      ip2 += x[i].dot(mtl[i]);
      lap += x[i].dot(lx[i]);
    }
    CHECK(ip1 == doctest::Approx(ip2).epsilon(1e-12));
    CHECK(quad == doctest::Approx(lap).epsilon(1e-12));
  }
}

TEST_CASE("algebraic connectivity") {
  CHECK(algebraic_connectivity(Graph::complete(3)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(algebraic_connectivity(Graph::path(2)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(algebraic_connectivity(Graph::star(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(algebraic_connectivity(Graph(3, {{0, 1}})) == 0.0);
  // path P_n: 2(1 - cos(pi/n))
  for (int n = 3; n <= 12; ++n)
    CHECK(algebraic_connectivity(Graph::path(n)) == doctest::Approx(2 * (1 - std::cos(M_PI / n))).epsilon(1e-10));
}

TEST_CASE("graph search") {
  Graph g = generate_graph(10, 1.0, 0.1, 7);
  CHECK(g.connected());
  double l2 = algebraic_connectivity(g);
  CHECK(l2 >= 0.9);
  CHECK(l2 <= 1.1);
  Graph g2 = generate_graph(2, 2.0, 0.0, 5);
  CHECK(g2.num_edges() == 1);
  // determinism
  CHECK(generate_graph(10, 1.0, 0.1, 7).edges() == g.edges());

  // The path graph has the smallest lambda2 of any connected graph on 10
  // nodes, 0.0979, so 0.05 +- 20% cannot be reached.
  auto res = search_graph(10, 0.05, 0.2, 1);
  CHECK_FALSE(res.target_met);
  CHECK(res.lambda2 >= algebraic_connectivity(Graph::path(10)) - 1e-12);
  CHECK(res.lambda2 < 0.15);
  CHECK_THROWS_AS(generate_graph(10, 0.05, 0.2, 1), GraphSearchError);
}

TEST_CASE("graph text round trip") {
  Graph g = generate_graph(8, 1.0, 0.3, 3);
  std::stringstream ss;
  write_graph(ss, g);
  CHECK(ss.str().rfind("nodes 8\n", 0) == 0);
  Graph h = read_graph(ss);
  CHECK(h.nodes() == 8);
  CHECK(h.edges() == g.edges());
  std::stringstream bad("nodes 3\n0 5\n");
  CHECK_THROWS(read_graph(bad));
}

TEST_CASE("metropolis examples") {
  Graph k2 = Graph::complete(2);
  CHECK((metropolis_matrix(k2, {1}).dense() - Mat::Constant(2, 2, 0.5)).norm() < 1e-15);
  Graph p3 = Graph::path(3);
  CHECK((metropolis_matrix(p3, {0, 0}).dense() - Mat::Identity(3, 3)).norm() == 0.0);
  Mat expect(3, 3);
  expect << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3, 2.0 / 3;
  CHECK((metropolis_matrix(p3, {1, 1}).dense() - expect).norm() < 1e-15);
}

TEST_CASE("metropolis matrices on random active sets") {
  auto rng = make_stream(2, "metropolis");
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < 100; ++s) {
    int N = 2 + s % 7;
    Graph g = random_connected(rng, N);
    std::vector<char> mask(g.num_edges());
    std::vector<Edge> act;
    for (int e = 0; e < g.num_edges(); ++e)
      if ((mask[e] = coin(rng))) act.push_back(g.edges()[e]);
    Mat V = metropolis_matrix(g, mask).dense();
    CHECK((V - dense_metropolis(N, act)).norm() < 1e-15);
    CHECK((V - V.transpose()).norm() == 0.0);
    CHECK((V.rowwise().sum() - Vec::Ones(N)).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (V(i, j) != 0.0) CHECK(V(i, j) >= 1.0 / N - 1e-15);
  }
}

TEST_CASE("mixing process invariants") {
  Graph g = Graph::ring(6);
  MixingProcess proc(g, ActivationPolicy::bernoulli(0.3, 4), 9);
  CHECK(proc.window() == 4);
  CHECK(proc.zeta() == doctest::Approx(1.0 / 6));
  std::vector<Mat> Vs;
  for (int t = 0; t < 40; ++t) Vs.push_back(proc.next().dense());
  CHECK(proc.step() == 40);
  for (const Mat& V : Vs) {
    CHECK((V.rowwise().sum() - Vec::Ones(6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((V.colwise().sum().transpose() - Vec::Ones(6)).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        if (i != j && (j - i + 6) % 6 != 1 && (i - j + 6) % 6 != 1) CHECK(V(i, j) == 0.0);
        if (V(i, j) != 0.0) CHECK(V(i, j) >= 1.0 / 6 - 1e-15);
      }
  }
  // any window of T rounds activates the whole base graph
  for (size_t s = 0; s + 4 <= Vs.size(); ++s) {
    std::vector<Edge> seen;
    for (size_t t = s; t < s + 4; ++t)
      for (const auto& e : g.edges())
        if (Vs[t](e.first, e.second) > 0) seen.push_back(e);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    CHECK(Graph(6, seen).connected());
  }
  MixingProcess again(g, ActivationPolicy::bernoulli(0.3, 4), 9);
  for (int t = 0; t < 40; ++t) CHECK(again.next().dense() == Vs[t]);
}

TEST_CASE("mixing constants") {
  auto a = mixing_constants(0.5, 1, 3);
  CHECK(a.t_bar == 2);
  CHECK(a.alpha == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  CHECK(a.Gamma == doctest::Approx(40.0 / 3).epsilon(1e-14));
  auto b = mixing_constants(0.5, 1, 2);
  CHECK(b.t_bar == 1);
  CHECK(b.alpha == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.Gamma == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(b.log_alpha == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(mixing_constants(0.99, 1, 2).alpha < mixing_constants(0.9, 1, 2).alpha);
  CHECK(mixing_constants(0.99, 1, 2).alpha == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(mixing_constants(0.0, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(mixing_constants(1.0, 1, 3), std::invalid_argument);
  auto tiny = mixing_constants(0.1, 4, 8);
  CHECK(tiny.log_alpha < 0.0);
  CHECK(std::isfinite(tiny.Gamma));
}

TEST_CASE("geometric mixing bound on sampled processes") {
  auto rng = make_stream(3, "lemma");
  std::uniform_real_distribution<double> up(0.1, 0.9);
  for (int s = 0; s < 20; ++s) {
    int N = 2 + s % 7;
    int T = 1 + s % 4;
    Graph g = random_connected(rng, N);
    MixingProcess proc(g, ActivationPolicy::bernoulli(up(rng), T), 100 + s);
    auto mc = process_constants(proc);
    CHECK(mc.Gamma == mixing_constants(1.0 / N, T, N).Gamma);
    CHECK(mixing_bound_violations(proc) == 0);
  }
}

TEST_CASE("multi-consensus examples") {
  MixingProcess k2(Graph::complete(2), ActivationPolicy::always_full(), 1);
  auto r = multi_consensus(k2, scalars({4, 0}), 1, 10.0);
  CHECK(r[0](0) == doctest::Approx(2.0));
  CHECK(r[1](0) == doctest::Approx(2.0));
  CHECK(k2.step() == 1);

  MixingProcess ring(Graph::ring(5), ActivationPolicy::bernoulli(0.5, 2), 4);
  Blocks same(5, Vec::Constant(2, 0.3));
  auto s = multi_consensus(ring, same, 7, 1.0);
  for (const auto& b : s) CHECK((b - same[0]).norm() < 1e-15);
  CHECK(ring.step() == 7);

  MixingProcess p3(Graph::path(3), ActivationPolicy::always_full(), 1);
  auto t = multi_consensus(p3, scalars({1, 0, 0}), 50, 10.0);
  Mat V = dense_metropolis(3, Graph::path(3).edges());
  Mat P = Mat::Identity(3, 3);
  for (int k = 0; k < 50; ++k) P = V * P;
  Vec oracle = P.col(0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(t[i](0) - 1.0 / 3) < 1e-8);
    CHECK(t[i](0) == doctest::Approx(oracle(i)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(multi_consensus(p3, scalars({1, 0, 0}), 0, 10.0), std::invalid_argument);

  auto e = exact_consensus(scalars({30, 0, 0}), 4.0);
  for (const auto& b : e) CHECK(b(0) == doctest::Approx(4.0));
}

TEST_CASE("multi-consensus error bound") {
  auto rng = make_stream(4, "rk");
  for (int s = 0; s < 30; ++s) {
    int N = 3 + s % 5;
    Graph g = random_connected(rng, N);
    MixingProcess proc(g, ActivationPolicy::bernoulli(0.5, 2), s);
    auto mc = process_constants(proc);
    Blocks x = random_blocks(rng, N, 3);
    int q = 1 + s;
    auto approx = multi_consensus(proc, x, q, 1.5);
    auto exact = exact_consensus(x, 1.5);
    double bound = std::sqrt(N) * mc.Gamma * std::exp(q * mc.log_alpha) * blocks_norm(x);
    for (int i = 0; i < N; ++i) CHECK((approx[i] - exact[i]).norm() <= bound);
  }
}

TEST_CASE("communication schedule") {
  CHECK(consensus_schedule(1, 2) == 1);
  CHECK(consensus_schedule(4, 2) == 2);
  CHECK(consensus_schedule(5, 2) == 3);
  CHECK(consensus_schedule(8, 3) == 2);
  CHECK(consensus_schedule(9, 3) == 3);
  CHECK(consensus_schedule(100, 1) == 100);
  // direct summation oracle
  for (double p : {1.0, 2.0, 3.0, 1.5}) {
    for (long K : {1L, 10L, 100L, 1000L}) {
      long sum = 0;
      for (long k = 1; k <= K; ++k) {
        long q = 1;
        while (std::pow(double(q), p) < double(k) - 1e-9) ++q;
        sum += q;
      }
      CHECK(total_communications(K, p) == sum);
    }
  }
  CHECK(total_communications(100, 1) == 5050);
  CHECK(total_communications(100, 2) == 715);
}
