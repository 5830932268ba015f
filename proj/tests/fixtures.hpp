#pragma once

// Reference solvers and random instances shared by the unit tests and the
// acceptance binary.

#include "dpda/experiments.hpp"
#include "support.hpp"

#include <type_traits>
#include <variant>

namespace dpda::testing {

// Membership of the polar cone without calling the library.
inline bool in_polar(const Cone& c, const Vec& w, double tol) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ZeroCone>) return true;
        else if constexpr (std::is_same_v<K, FreeCone>) return w.norm() <= tol;
        else if constexpr (std::is_same_v<K, NonnegativeOrthant>) return k.dim == 0 || w.maxCoeff() <= tol;
        else if constexpr (std::is_same_v<K, SecondOrderCone>)
          return w.tail(w.size() - 1).norm() <= -w(0) + tol;
        else {
          int off = 0;
          for (const auto& part : k.parts) {
            if (!in_polar(part, w.segment(off, part.dim()), tol)) return false;
            off += part.dim();
          }
          return true;
        }
      },
      c.variant());
}

inline std::vector<Cone> cone_catalog() {
  return {Cone::zero(3),
          Cone::free(3),
          Cone::nonneg(4),
          Cone::soc(3),
          Cone::soc(6),
          Cone::product({Cone::nonneg(2), Cone::soc(3), Cone::zero(1), Cone::free(2)})};
}

// Moreau split, idempotence and both distances for one vector.
inline bool moreau_holds(const Cone& c, const Vec& v) {
  Vec p = c.project(v), q = c.project_polar(v);
  double nv = v.norm();
  return (p + q - v).norm() <= 1e-12 * (1 + nv) && std::abs(p.dot(q)) <= 1e-10 * (1 + nv * nv) &&
         c.contains(p, 1e-12) && in_polar(c, q, 1e-10 * (1 + nv)) && (c.project(p) - p).norm() <= 1e-12 * (1 + nv) &&
         std::abs(c.distance(v) - q.norm()) <= 1e-10 * (1 + nv) && c.polar_distance(v) >= 0.0 &&
         std::abs(c.polar_distance(v) - p.norm()) <= 1e-10 * (1 + nv);
}

inline Graph random_connected(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u;
  for (;;) {
    std::vector<Edge> e;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        if (u(rng) < 0.4) e.emplace_back(i, j);
    Graph g(N, e);
    if (g.connected()) return g;
  }
}

// Entries of products of up to `span` consecutive mixing matrices, starting at
// each of `starts` offsets, that leave the band 1/N +- Gamma alpha^d or lose
// double stochasticity.
inline int mixing_bound_violations(MixingProcess& proc, int starts = 20, int span = 100) {
  const int N = proc.graph().nodes();
  const auto mc = process_constants(proc);
  std::vector<Mat> Vs;
  for (int t = 0; t < starts + span; ++t) Vs.push_back(proc.next().dense());
  int viol = 0;
  for (int start = 0; start < starts; ++start) {
    Mat W = Mat::Identity(N, N);
    for (int d = 1; d <= span; ++d) {
      W = Vs[start + d - 1] * W;
      double bound = mc.Gamma * std::exp(d * mc.log_alpha);
      if ((W.array() - 1.0 / N).abs().maxCoeff() > bound) ++viol;
      if ((W.rowwise().sum() - Vec::Ones(N)).cwiseAbs().maxCoeff() > 1e-10) ++viol;
      if ((W.colwise().sum().transpose() - Vec::Ones(N)).cwiseAbs().maxCoeff() > 1e-10) ++viol;
    }
  }
  return viol;
}

// One scalar agent with f = (L/2) x^2 and A = [sigma].
inline AgentProblem scalar_agent(double L, double sigma) {
  return AgentProblem(1, 0, ProxFunction::zero(), SmoothFunction::quadratic(Mat::Constant(1, 1, L), Vec::Zero(1)),
                      Mat::Constant(1, 1, sigma), Vec::Zero(1), Cone::nonneg(1));
}

// Node 0 of a star with the given degree carries the agent under test.
inline std::vector<AgentProblem> star_problems(int degree, double L, double sigma) {
  std::vector<AgentProblem> out{scalar_agent(L, sigma)};
  for (int i = 0; i < degree; ++i) out.push_back(scalar_agent(0.0, 1.0));
  return out;
}

inline ResourceProblem scalar_resource(double L, double sigma) {
  std::vector<ResourceAgent> a;
  a.emplace_back(ProxFunction::zero(), SmoothFunction::quadratic(Mat::Constant(1, 1, L), Vec::Zero(1)),
                 Mat::Constant(1, 1, sigma), Vec::Zero(1));
  return ResourceProblem(std::move(a), Cone::nonneg(1));
}

// min 1/2 z'Hz + h'z s.t. Gz >= g by enumerating active sets.
struct DenseQP {
  Mat H;
  Vec h;
  Mat G;
  Vec g;
};

struct BruteResult {
  Vec z;
  double value = std::numeric_limits<double>::infinity();
};

inline BruteResult brute_force_kkt(const DenseQP& qp) {
  const int n = int(qp.H.rows()), m = int(qp.G.rows());
  BruteResult best;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> act;
    for (int r = 0; r < m; ++r)
      if (mask & (1u << r)) act.push_back(r);
    const int a = int(act.size());
    if (a > n) continue;
    Mat K = Mat::Zero(n + a, n + a);
    Vec rhs(n + a);
    K.topLeftCorner(n, n) = qp.H;
    rhs.head(n) = -qp.h;
    for (int k = 0; k < a; ++k) {
      K.block(0, n + k, n, 1) = -qp.G.row(act[k]).transpose();
      K.block(n + k, 0, 1, n) = qp.G.row(act[k]);
      rhs(n + k) = qp.g(act[k]);
    }
    Eigen::FullPivLU<Mat> lu(K);
    if (lu.rank() < n + a) continue;
    Vec sol = lu.solve(rhs);
    Vec z = sol.head(n);
    if (((qp.G * z - qp.g).array() < -1e-10).any()) continue;
    if ((sol.tail(a).array() < -1e-10).any()) continue;
    double v = 0.5 * z.dot(qp.H * z) + qp.h.dot(z);
    if (v < best.value) best = {z, v};
  }
  return best;
}

struct RandomConsensus {
  std::vector<AgentProblem> problems;
  DenseQP dense;
};

// Three agents, x_i = (s, l_i) with s in R^2 shared and l_i in R, two
// orthant rows each.
inline RandomConsensus random_consensus(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 3, ns = 2, nl = 1, m = 2, n = ns + nl, Z = ns + N * nl;
  RandomConsensus out;
  out.dense = {Mat::Zero(Z, Z), Vec::Zero(Z), Mat::Zero(N * m, Z), Vec::Zero(N * m)};
  for (int i = 0; i < N; ++i) {
    Mat F = Mat::NullaryExpr(n, n, [&] { return u(rng); });
    Mat Q = F.transpose() * F + 0.2 * Mat::Identity(n, n);
    Vec c = randn(rng, n, 2.0);
    Mat A = Mat::NullaryExpr(m, n, [&] { return u(rng); });
    Vec x_feas = randn(rng, n, 0.5);
    x_feas.head(ns).setConstant(0.1);
    Vec b = A * x_feas - Vec::Constant(m, 0.3);
    out.problems.emplace_back(ns, nl, ProxFunction::zero(), SmoothFunction::quadratic(Q, c), A, b, Cone::nonneg(m));
    Mat P = Mat::Zero(n, Z);
    P.leftCols(ns).setIdentity();
    P.block(ns, ns + i * nl, nl, nl).setIdentity();
    out.dense.H += P.transpose() * Q * P;
    out.dense.h += P.transpose() * c;
    out.dense.G.middleRows(i * m, m) = A * P;
    out.dense.g.segment(i * m, m) = b;
  }
  return out;
}

struct RandomResourceQP {
  ResourceProblem problem;
  DenseQP dense;
};

inline RandomResourceQP random_resource(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 3, n = 2, m = 3, Z = N * n;
  RandomResourceQP out;
  out.dense = {Mat::Zero(Z, Z), Vec::Zero(Z), Mat::Zero(m, Z), Vec::Zero(m)};
  std::vector<ResourceAgent> agents;
  for (int i = 0; i < N; ++i) {
    Mat F = Mat::NullaryExpr(n, n, [&] { return u(rng); });
    Mat Q = F.transpose() * F + 0.2 * Mat::Identity(n, n);
    Vec c = randn(rng, n, 2.0);
    Mat R = Mat::NullaryExpr(m, n, [&] { return u(rng); });
    Vec r = R * randn(rng, n, 0.5) - Vec::Constant(m, 0.2);
    out.dense.H.block(i * n, i * n, n, n) = Q;
    out.dense.h.segment(i * n, n) = c;
    out.dense.G.middleCols(i * n, n) = R;
    out.dense.g += r;
    agents.emplace_back(ProxFunction::zero(), SmoothFunction::quadratic(Q, c), R, r);
  }
  out.problem = ResourceProblem(std::move(agents), Cone::nonneg(m));
  return out;
}

struct SlaterInstance {
  ResourceProblem problem;
  Blocks slater;
  double q0 = 0.0;  // closed-form sum of unconstrained minima
};

inline SlaterInstance random_orthant_qp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int N = 3, n = 2, m = 2;
  SlaterInstance out;
  std::vector<ResourceAgent> agents;
  Vec g(m);
  for (int j = 0; j < m; ++j) g(j) = 0.2 + 2 * u(rng);
  for (int i = 0; i < N; ++i) {
    Mat G = Mat::NullaryExpr(n, n, [&] { return u(rng) - 0.5; });
    Mat Q = G.transpose() * G + 0.5 * Mat::Identity(n, n);
    Vec c = randn(rng, n, 2.0);
    Mat R = Mat::NullaryExpr(m, n, [&] { return 2 * u(rng) - 1; });
    Vec xb = randn(rng, n);
    Vec r = R * xb - g / N;
    out.q0 += -0.5 * c.dot(Q.ldlt().solve(c));
    out.slater.push_back(xb);
    agents.emplace_back(ProxFunction::zero(), SmoothFunction::quadratic(Q, c), R, r);
  }
  out.problem = ResourceProblem(std::move(agents), Cone::nonneg(m));
  return out;
}

}  // namespace dpda::testing
