#include "dpda/oracle.hpp"

#include <cmath>

namespace dpda {

namespace {

// min_u F(u) + g(u) + max_y <T u, y> - h(y)
struct PdaProblem {
  int n = 0;
  int m = 0;
  double L = 0.0;
  std::function<Vec(const Vec&)> grad;
  std::function<Vec(const Vec&, double)> prox_g;
  std::function<Vec(const Vec&, double)> prox_h;
  std::function<Vec(const Vec&)> T;
  std::function<Vec(const Vec&)> Tt;
};

struct PdaResult {
  Vec u, y;
  Vec sub_g;  // element of the subdifferential of g at u
  long iterations = 0;
  double residual = kNaN;
  bool converged = false;
  bool diverged = false;
};

double operator_norm(const PdaProblem& P) {
  if (P.m == 0 || P.n == 0) return 0.0;
  Mat D(P.m, P.n);
  for (int j = 0; j < P.n; ++j) D.col(j) = P.T(Vec::Unit(P.n, j));
  const Mat G = P.n <= P.m ? Mat(D.transpose() * D) : Mat(D * D.transpose());
  const double lmax = Eigen::SelfAdjointEigenSolver<Mat>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

PdaResult run_pda(const PdaProblem& P, Vec u, Vec y, const OracleOptions& opt) {
  const double nT = operator_norm(P) * 1.0001 + 1e-12;
  const double omega = opt.primal_weight;
  const double tau = 1.0 / (P.L + omega * nT);
  const double sigma = 0.99 * omega / nT;
  PdaResult r;
  Vec gu = P.grad(u);
  for (long it = 1; it <= opt.max_iter; ++it) {
    const Vec step = gu + (P.m ? P.Tt(y) : Vec::Zero(P.n));
    Vec un = P.prox_g(u - tau * step, tau);
    Vec yn = P.m ? P.prox_h(y + sigma * P.T(2.0 * un - u), sigma) : y;
    const Vec gun = P.grad(un);
    const bool check = it % opt.check_every == 0 || it == opt.max_iter;
    if (check) {
      const Vec du = u - un;
      const Vec dy = y - yn;
      Vec rp = du / tau - (gu - gun);
      Vec rd = Vec::Zero(P.m);
      if (P.m) {
        rp -= P.Tt(dy);
        rd = dy / sigma - P.T(du);
      }
      r.residual = std::sqrt(rp.squaredNorm() + rd.squaredNorm());
      r.sub_g = du / tau - step;
      if (opt.progress) opt.progress(it, r.residual);
      if (!un.allFinite() || !yn.allFinite() || yn.norm() > 1e15) {
        r.diverged = true;
        r.iterations = it;
        r.u = u;
        r.y = y;
        return r;
      }
    }
    u = std::move(un);
    y = std::move(yn);
    gu = gun;
    if (check && r.residual <= opt.tol) {
      r.converged = true;
      r.iterations = it;
      break;
    }
    r.iterations = it;
  }
  r.u = std::move(u);
  r.y = std::move(y);
  return r;
}

Vec conjugate_prox(const ProxFunction& f, const Vec& v, double sigma) {
  // Moreau: prox_{sigma f*}(v) = v - sigma prox_{f/sigma}(v/sigma)
  return v - sigma * f.prox(v / sigma, 1.0 / sigma);
}

enum class DualKind { Conic, Shared, Whole };

struct DualBlock {
  DualKind kind;
  int agent;
  int offset;
  int dim;
  ProxFunction fn = ProxFunction::zero();
};

}  // namespace

CentralSolution solve_consensus(const std::vector<AgentProblem>& problems, const OracleOptions& opt) {
  const int N = int(problems.size());
  const int n_s = common_shared_dim(problems);
  std::vector<int> off(N);
  int n = n_s;
  for (int i = 0; i < N; ++i) {
    off[i] = n;
    n += problems[i].n_l;
  }
  auto gather = [&](const Vec& u, int i) {
    Vec x(problems[i].dim());
    x.head(n_s) = u.head(n_s);
    x.tail(problems[i].n_l) = u.segment(off[i], problems[i].n_l);
    return x;
  };
  auto scatter_add = [&](Vec& u, int i, const Vec& x) {
    u.head(n_s) += x.head(n_s);
    u.segment(off[i], problems[i].n_l) += x.tail(problems[i].n_l);
  };

  // Split every rho_i into shared and local parts; whatever cannot be handled
  // by the primal prox is dualized.
  std::vector<std::optional<std::pair<ProxFunction, ProxFunction>>> parts(N);
  std::vector<int> shared_owners;
  for (int i = 0; i < N; ++i) {
    parts[i] = problems[i].rho.split(n_s, problems[i].dim());
    if (parts[i] && !parts[i]->first.is_zero()) shared_owners.push_back(i);
  }
  bool any_whole = false;
  for (int i = 0; i < N; ++i) any_whole = any_whole || !parts[i];
  const int primal_shared = (shared_owners.size() == 1 && !any_whole) ? shared_owners[0] : -1;

  std::vector<DualBlock> blocks;
  int m = 0;
  for (int i = 0; i < N; ++i) {
    if (problems[i].b.size()) {
      blocks.push_back({DualKind::Conic, i, m, int(problems[i].b.size())});
      m += int(problems[i].b.size());
    }
    if (!parts[i]) {
      blocks.push_back({DualKind::Whole, i, m, problems[i].dim(), problems[i].rho});
      m += problems[i].dim();
    } else if (!parts[i]->first.is_zero() && i != primal_shared) {
      blocks.push_back({DualKind::Shared, i, m, n_s, parts[i]->first});
      m += n_s;
    }
  }

  PdaProblem P;
  P.n = n;
  P.m = m;
  for (const auto& p : problems) P.L += p.L();
  P.grad = [&](const Vec& u) {
    Vec g = Vec::Zero(n);
    for (int i = 0; i < N; ++i) scatter_add(g, i, problems[i].f.gradient(gather(u, i)));
    return g;
  };
  P.prox_g = [&](const Vec& v, double tau) {
    Vec out = v;
    if (primal_shared >= 0) out.head(n_s) = parts[primal_shared]->first.prox(v.head(n_s), tau);
    for (int i = 0; i < N; ++i)
      if (parts[i] && problems[i].n_l)
        out.segment(off[i], problems[i].n_l) = parts[i]->second.prox(v.segment(off[i], problems[i].n_l), tau);
    return out;
  };
  P.T = [&](const Vec& u) {
    Vec out(m);
    for (const auto& b : blocks) {
      switch (b.kind) {
        case DualKind::Conic: out.segment(b.offset, b.dim) = problems[b.agent].A * gather(u, b.agent); break;
        case DualKind::Shared: out.segment(b.offset, b.dim) = u.head(n_s); break;
        case DualKind::Whole: out.segment(b.offset, b.dim) = gather(u, b.agent); break;
      }
    }
    return out;
  };
  P.Tt = [&](const Vec& y) {
    Vec out = Vec::Zero(n);
    for (const auto& b : blocks) {
      switch (b.kind) {
        case DualKind::Conic:
          scatter_add(out, b.agent, problems[b.agent].A.transpose() * y.segment(b.offset, b.dim));
          break;
        case DualKind::Shared: out.head(n_s) += y.segment(b.offset, b.dim); break;
        case DualKind::Whole: scatter_add(out, b.agent, y.segment(b.offset, b.dim)); break;
      }
    }
    return out;
  };
  P.prox_h = [&](const Vec& v, double sigma) {
    Vec out(m);
    for (const auto& b : blocks) {
      const Vec seg = v.segment(b.offset, b.dim);
      if (b.kind == DualKind::Conic) {
        const auto& A = problems[b.agent];
        out.segment(b.offset, b.dim) = A.cone.project_polar(seg - sigma * A.b);
      } else {
        out.segment(b.offset, b.dim) = conjugate_prox(b.fn, seg, sigma);
      }
    }
    return out;
  };

  const PdaResult r = run_pda(P, Vec::Zero(n), Vec::Zero(m), opt);

  CentralSolution sol;
  sol.converged = r.converged;
  sol.dual_diverged = r.diverged;
  sol.iterations = r.iterations;
  sol.kkt_residual = r.residual;
  std::vector<Vec> sub(N);
  for (int i = 0; i < N; ++i) {
    sol.x.push_back(gather(r.u, i));
    sol.theta.push_back(Vec::Zero(problems[i].b.size()));
    sub[i] = Vec::Zero(problems[i].dim());
    if (r.sub_g.size()) sub[i].tail(problems[i].n_l) = r.sub_g.segment(off[i], problems[i].n_l);
  }
  if (primal_shared >= 0 && r.sub_g.size()) sub[primal_shared].head(n_s) += r.sub_g.head(n_s);
  for (const auto& b : blocks) {
    const Vec seg = r.y.segment(b.offset, b.dim);
    switch (b.kind) {
      case DualKind::Conic: sol.theta[b.agent] = seg; break;
      case DualKind::Shared: sub[b.agent].head(n_s) += seg; break;
      case DualKind::Whole: sub[b.agent] += seg; break;
    }
  }
  sol.phi = total_phi(problems, sol.x);
  sol.max_infeasibility = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto& A = problems[i];
    Vec g = sub[i] + A.f.gradient(sol.x[i]);
    if (A.b.size()) g += A.A.transpose() * sol.theta[i];
    sol.stationarity.push_back(g.head(n_s));
    sol.max_infeasibility = std::max(sol.max_infeasibility, A.infeasibility(sol.x[i]));
  }
  return sol;
}

CentralSolution solve_resource(const ResourceProblem& problem, const OracleOptions& opt) {
  const int N = problem.size();
  const int m = problem.m();
  std::vector<int> off(N);
  int n = 0;
  for (int i = 0; i < N; ++i) {
    off[i] = n;
    n += problem.agents[i].dim();
  }
  Vec rsum = Vec::Zero(m);
  for (const auto& a : problem.agents) rsum += a.r;

  PdaProblem P;
  P.n = n;
  P.m = m;
  for (const auto& a : problem.agents) P.L = std::max(P.L, a.L());
  P.grad = [&](const Vec& u) {
    Vec g(n);
    for (int i = 0; i < N; ++i)
      g.segment(off[i], problem.agents[i].dim()) = problem.agents[i].f.gradient(u.segment(off[i], problem.agents[i].dim()));
    return g;
  };
  P.prox_g = [&](const Vec& v, double tau) {
    Vec out(n);
    for (int i = 0; i < N; ++i)
      out.segment(off[i], problem.agents[i].dim()) = problem.agents[i].rho.prox(v.segment(off[i], problem.agents[i].dim()), tau);
    return out;
  };
  P.T = [&](const Vec& u) {
    Vec out = Vec::Zero(m);
    for (int i = 0; i < N; ++i) out += problem.agents[i].R * u.segment(off[i], problem.agents[i].dim());
    return out;
  };
  P.Tt = [&](const Vec& y) {
    Vec out(n);
    for (int i = 0; i < N; ++i) out.segment(off[i], problem.agents[i].dim()) = problem.agents[i].R.transpose() * y;
    return out;
  };
  P.prox_h = [&](const Vec& v, double sigma) { return problem.cone.project_polar(v - sigma * rsum); };

  const PdaResult r = run_pda(P, Vec::Zero(n), Vec::Zero(m), opt);

  CentralSolution sol;
  sol.converged = r.converged;
  sol.dual_diverged = r.diverged;
  sol.iterations = r.iterations;
  sol.kkt_residual = r.residual;
  for (int i = 0; i < N; ++i) sol.x.push_back(r.u.segment(off[i], problem.agents[i].dim()));
  sol.y = r.y;
  sol.phi = problem.phi(sol.x);
  const Vec g = problem.constraint_image(sol.x);
  sol.max_infeasibility = problem.cone.distance(g);
  for (int i = 0; i < N; ++i)
    sol.w.push_back(problem.agents[i].R * sol.x[i] - problem.agents[i].r - g / double(N));
  return sol;
}

Blocks static_lambda(const CentralSolution& sol, const Graph& g) {
  const int N = g.nodes();
  require(int(sol.stationarity.size()) == N, "static lambda: agent count mismatch");
  const int n_s = int(sol.stationarity[0].size());
  Mat G(N, n_s);
  for (int i = 0; i < N; ++i) G.row(i) = -sol.stationarity[i].transpose();
  // phi = pinv(Omega) (-G); lambda_e = phi_i - phi_j
  Eigen::SelfAdjointEigenSolver<Mat> es(g.laplacian());
  const Vec ev = es.eigenvalues();
  const double cut = 1e-10 * std::max(1.0, ev.maxCoeff());
  Vec inv = ev.unaryExpr([cut](double l) { return l > cut ? 1.0 / l : 0.0; });
  const Mat phi = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * G;
  Blocks lam;
  for (auto [i, j] : g.edges()) lam.push_back((phi.row(i) - phi.row(j)).transpose());
  return lam;
}

Blocks dynamic_lambda(const CentralSolution& sol) {
  Blocks lam;
  for (const auto& s : sol.stationarity) lam.push_back(-s);
  return lam;
}

ConsensusSaddle static_saddle(const CentralSolution& sol, const Graph& g) {
  return {sol.x, sol.theta, static_lambda(sol, g)};
}

ConsensusSaddle dynamic_saddle(const CentralSolution& sol) { return {sol.x, sol.theta, dynamic_lambda(sol)}; }

ResourceSaddle resource_saddle(const CentralSolution& sol) { return {sol.x, sol.y, sol.w}; }

UnconstrainedMin unconstrained_minimum(const ProxFunction& rho, const SmoothFunction& f, const Vec& x0, double tol,
                                       long max_iter) {
  require(x0.size() == f.dim(), "unconstrained minimum: dimension mismatch");
  const double L = f.lipschitz();
  const double t = L > 0.0 ? 1.0 / L : 1.0;
  UnconstrainedMin res;
  Vec x = rho.prox(x0, t), z = x;
  double a = 1.0;
  for (long it = 1; it <= max_iter; ++it) {
    const Vec xn = rho.prox(z - t * f.gradient(z), t);
    const double an = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a * a));
    Vec zn = xn + ((a - 1.0) / an) * (xn - x);
    // restart when momentum points uphill
    if ((z - xn).dot(xn - x) > 0.0) {
      zn = xn;
      a = 1.0;
    } else {
      a = an;
    }
    const double step = (xn - x).norm();
    x = xn;
    z = zn;
    res.iterations = it;
    if (step <= tol * (1.0 + x.norm())) break;
  }
  res.x = x;
  res.value = rho.value(x) + f.value(x);
  return res;
}

}  // namespace dpda
