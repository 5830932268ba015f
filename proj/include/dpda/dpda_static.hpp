#pragma once

#include "dpda/metrics.hpp"

#include <functional>

namespace dpda {

// tau_i = 1/(c_i + L_i + 2 gamma d_i), kappa_i = c_i / sigma_max(A_i)^2
// (kappa_i = c_i when A_i vanishes). c holds one value or one per agent.
StepSizes select_stepsizes_static(const std::vector<AgentProblem>& problems, const Graph& g, double gamma,
                                  const std::vector<double>& c = {1.0});

// min_i (1/tau_i - L_i - 2 gamma d_i)/kappa_i - sigma_i^2; throws if negative.
double check_stepsizes_static(const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps);

struct StaticState {
  Blocks x;
  Blocks s;  // x^k + sum_{l<k} x^l, shared block only
  Blocks theta;
  Blocks xbar;
  long k = 0;
  long comms = 0;
};

StaticState init_static(const std::vector<AgentProblem>& problems, const Blocks& x0);

void dpda_s_step(StaticState& st, const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps);

RunReport dpda_s_run(const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps,
                     const Blocks& x0, long K, const LogOptions& log = {},
                     const std::function<void(const StaticState&)>& on_step = {});

}  // namespace dpda
