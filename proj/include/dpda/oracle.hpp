#pragma once

#include "dpda/metrics.hpp"

#include <functional>

namespace dpda {

struct OracleOptions {
  double tol = 1e-9;  // on the KKT residual
  long max_iter = 5'000'000;
  int check_every = 50;
  double primal_weight = 1.0;  // ratio between dual and primal step scales
  std::function<void(long iter, double residual)> progress;
};

struct CentralSolution {
  bool converged = false;
  bool dual_diverged = false;
  long iterations = 0;
  double kkt_residual = kNaN;
  double phi = kNaN;
  double max_infeasibility = kNaN;
  Blocks x;      // x_i* per agent, or xi_i* in resource mode
  Blocks theta;  // conic multipliers per agent
  // Shared-block stationarity of agent i: subgradient of Phi_i plus A_i^T theta_i.
  Blocks stationarity;
  Vec y;     // resource mode: multiplier of the coupling constraint
  Blocks w;  // resource mode: consensus multipliers
};

// Single-node PDA on the centralized problem with one shared variable.
CentralSolution solve_consensus(const std::vector<AgentProblem>& problems, const OracleOptions& opt = {});
// Single-node PDA on min sum Phi_i(xi_i) s.t. sum_i (R_i xi_i - r_i) in K.
CentralSolution solve_resource(const ResourceProblem& problem, const OracleOptions& opt = {});

// Consensus multipliers: per edge (least-squares fit onto range(M^T)) for
// the static form, per node for the dynamic form.
Blocks static_lambda(const CentralSolution& sol, const Graph& g);
Blocks dynamic_lambda(const CentralSolution& sol);

ConsensusSaddle static_saddle(const CentralSolution& sol, const Graph& g);
ConsensusSaddle dynamic_saddle(const CentralSolution& sol);
ResourceSaddle resource_saddle(const CentralSolution& sol);

struct UnconstrainedMin {
  Vec x;
  double value = kNaN;
  long iterations = 0;
};

// Accelerated proximal gradient on rho + f without constraints.
UnconstrainedMin unconstrained_minimum(const ProxFunction& rho, const SmoothFunction& f, const Vec& x0,
                                       double tol = 1e-13, long max_iter = 2'000'000);

}  // namespace dpda
