#include "dpda/problem.hpp"

namespace dpda {

AgentProblem::AgentProblem(int n_s_, int n_l_, ProxFunction rho_, SmoothFunction f_, Mat A_, Vec b_, Cone cone_)
    : n_s(n_s_), n_l(n_l_), rho(std::move(rho_)), f(std::move(f_)), A(std::move(A_)), b(std::move(b_)),
      cone(std::move(cone_)) {
  require(n_s >= 0 && n_l >= 0 && n_s + n_l > 0, "agent dimensions must be nonnegative and not both zero");
  require(f.dim() == dim(), "smooth term dimension mismatch");
  require(rho.dim() < 0 || rho.dim() == dim(), "prox term dimension mismatch");
  if (A.size() == 0 && A.cols() != dim()) A.resize(b.size(), dim());
  require(A.cols() == dim(), "constraint matrix column count mismatch");
  require(A.rows() == b.size(), "constraint rhs size mismatch");
  require(cone.dim() == b.size(), "cone dimension mismatch");
  sigma_max = spectral_norm(A);
}

double AgentProblem::infeasibility(const Vec& x) const {
  if (b.size() == 0) return 0.0;
  return cone.distance(A * x - b);
}

ResourceAgent::ResourceAgent(ProxFunction rho_, SmoothFunction f_, Mat R_, Vec r_)
    : rho(std::move(rho_)), f(std::move(f_)), R(std::move(R_)), r(std::move(r_)) {
  require(R.rows() == r.size(), "resource rhs size mismatch");
  require(f.dim() == dim(), "smooth term dimension mismatch");
  require(rho.dim() < 0 || rho.dim() == dim(), "prox term dimension mismatch");
  sigma_max = spectral_norm(R);
}

ResourceProblem::ResourceProblem(std::vector<ResourceAgent> agents_, Cone cone_)
    : agents(std::move(agents_)), cone(std::move(cone_)) {
  require(!agents.empty(), "resource problem needs at least one agent");
  for (const auto& a : agents) require(a.R.rows() == cone.dim(), "all agents must share the cone dimension");
}

Vec ResourceProblem::constraint_image(const Blocks& xi) const {
  require(int(xi.size()) == size(), "resource: block count mismatch");
  Vec g = Vec::Zero(m());
  for (int i = 0; i < size(); ++i) g += agents[i].R * xi[i] - agents[i].r;
  return g;
}

double ResourceProblem::phi(const Blocks& xi) const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += agents[i].phi(xi[i]);
  return s;
}

int common_shared_dim(const std::vector<AgentProblem>& problems) {
  require(!problems.empty(), "need at least one agent");
  const int n_s = problems[0].n_s;
  for (const auto& p : problems) require(p.n_s == n_s, "agents disagree on the shared dimension");
  return n_s;
}

double total_phi(const std::vector<AgentProblem>& problems, const Blocks& x) {
  double s = 0.0;
  for (size_t i = 0; i < problems.size(); ++i) s += problems[i].phi(x[i]);
  return s;
}

Blocks zero_start(const std::vector<AgentProblem>& problems) {
  Blocks x;
  for (const auto& p : problems) x.push_back(Vec::Zero(p.dim()));
  return x;
}

Blocks zero_start(const ResourceProblem& problem) {
  Blocks x;
  for (const auto& a : problem.agents) x.push_back(Vec::Zero(a.dim()));
  return x;
}

Blocks shared_part(const Blocks& x, int n_s) {
  Blocks out;
  out.reserve(x.size());
  for (const auto& b : x) out.push_back(b.head(n_s));
  return out;
}

}  // namespace dpda
