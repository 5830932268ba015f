#pragma once

#include "dpda/metrics.hpp"

#include <functional>

namespace dpda {

// tau_i = 1/(L_i + a_i), kappa_i = 1/(gamma + sigma_max(R_i)^2 / a_i);
// kappa_i = 1/(gamma + 1e-6) when R_i vanishes.
StepSizes select_stepsizes_resource(const ResourceProblem& problem, double gamma,
                                    const std::vector<double>& margins = {1.0});
// min_i (1/tau_i - L_i)(1/kappa_i - gamma) - sigma_i^2; throws if negative
// or if 1/tau_i <= L_i or 1/kappa_i <= gamma.
double check_stepsizes_resource(const ResourceProblem& problem, const StepSizes& steps);

struct ResourceConfig {
  double p = 2.0;
  double B_d = 0.0;
  StepSizes steps;
  bool exact_projection = false;
};

struct ResourceState {
  Blocks xi;
  Blocks y;
  Blocks v;
  Blocks xibar;
  Blocks ybar;
  long k = 0;
  long comms = 0;
};

ResourceState init_resource(const ResourceProblem& problem, const Blocks& xi0);

void dpda_r_step(ResourceState& st, const ResourceProblem& problem, MixingProcess& process, const ResourceConfig& cfg);

RunReport dpda_r_run(const ResourceProblem& problem, MixingProcess& process, const ResourceConfig& cfg,
                     const Blocks& xi0, long K, const LogOptions& log = {},
                     const std::function<void(const ResourceState&)>& on_step = {});

}  // namespace dpda
