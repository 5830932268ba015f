#pragma once

#include "dpda/cone.hpp"
#include "dpda/graph.hpp"
#include "dpda/prox.hpp"
#include "dpda/smooth.hpp"

namespace dpda {

// Agent i of min sum_i rho_i(x_i) + f_i(x_i) s.t. A_i x_i - b_i in K_i, with
// the first n_s coordinates of x_i shared across agents.
struct AgentProblem {
  int n_s = 0;
  int n_l = 0;
  ProxFunction rho = ProxFunction::zero();
  SmoothFunction f = SmoothFunction::zero(0);
  Mat A;
  Vec b;
  Cone cone = Cone::nonneg(0);
  double sigma_max = 0.0;

  AgentProblem() = default;
  AgentProblem(int n_s, int n_l, ProxFunction rho, SmoothFunction f, Mat A, Vec b, Cone cone);

  int dim() const { return n_s + n_l; }
  double L() const { return f.lipschitz(); }
  double phi(const Vec& x) const { return rho.value(x) + f.value(x); }
  double infeasibility(const Vec& x) const;
};

// Agent i of min sum_i rho_i(xi_i) + f_i(xi_i) s.t. sum_i (R_i xi_i - r_i) in K.
struct ResourceAgent {
  ProxFunction rho = ProxFunction::zero();
  SmoothFunction f = SmoothFunction::zero(0);
  Mat R;
  Vec r;
  double sigma_max = 0.0;

  ResourceAgent() = default;
  ResourceAgent(ProxFunction rho, SmoothFunction f, Mat R, Vec r);

  int dim() const { return int(R.cols()); }
  double L() const { return f.lipschitz(); }
  double phi(const Vec& x) const { return rho.value(x) + f.value(x); }
};

struct ResourceProblem {
  std::vector<ResourceAgent> agents;
  Cone cone = Cone::nonneg(0);

  ResourceProblem() = default;
  ResourceProblem(std::vector<ResourceAgent> agents, Cone cone);

  int m() const { return cone.dim(); }
  int size() const { return int(agents.size()); }
  // sum_i (R_i xi_i - r_i)
  Vec constraint_image(const Blocks& xi) const;
  double phi(const Blocks& xi) const;
};

struct StepSizes {
  double gamma = 1.0;
  std::vector<double> tau;
  std::vector<double> kappa;
};

int common_shared_dim(const std::vector<AgentProblem>& problems);
double total_phi(const std::vector<AgentProblem>& problems, const Blocks& x);
Blocks zero_start(const std::vector<AgentProblem>& problems);
Blocks zero_start(const ResourceProblem& problem);
Blocks shared_part(const Blocks& x, int n_s);

}  // namespace dpda
