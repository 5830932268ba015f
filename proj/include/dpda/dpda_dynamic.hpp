#pragma once

#include "dpda/metrics.hpp"

#include <functional>

namespace dpda {

// tau_i = 1/(c_i + L_i + gamma), kappa_i = c_i / sigma_max(A_i)^2.
StepSizes select_stepsizes_dynamic(const std::vector<AgentProblem>& problems, double gamma,
                                   const std::vector<double>& c = {1.0});
double check_stepsizes_dynamic(const std::vector<AgentProblem>& problems, const StepSizes& steps);

// Largest shared-block radius over all agents' prox domains; throws when
// some agent's domain is unbounded on the shared block.
double shared_domain_radius(const std::vector<AgentProblem>& problems);

struct DynamicConfig {
  double p = 2.0;
  double B = 0.0;
  StepSizes steps;
  // Track e^k and check the a priori mu/e bounds (needs global averages).
  bool diagnostic_shadow = false;
  // Replace R^k by the exact consensus projection (reference runs).
  bool exact_projection = false;
};

void validate_dynamic(const std::vector<AgentProblem>& problems, const DynamicConfig& cfg);

struct DynamicState {
  Blocks x;
  Blocks theta;
  Blocks mu;  // shared block only
  Blocks xbar;
  long k = 0;
  long comms = 0;
  int last_q = 0;
  double last_e_norm = kNaN;
  double max_mu_ratio = 0.0;
  double max_e_ratio = 0.0;
  long bound_violations = 0;
};

DynamicState init_dynamic(const std::vector<AgentProblem>& problems, const Blocks& x0);

void dpda_d_step(DynamicState& st, const std::vector<AgentProblem>& problems, MixingProcess& process,
                 const DynamicConfig& cfg);

RunReport dpda_d_run(const std::vector<AgentProblem>& problems, MixingProcess& process, const DynamicConfig& cfg,
                     const Blocks& x0, long K, const LogOptions& log = {},
                     const std::function<void(const DynamicState&)>& on_step = {});

}  // namespace dpda
