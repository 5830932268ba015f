#include "dpda/dpda_resource.hpp"

#include <cmath>

namespace dpda {

StepSizes select_stepsizes_resource(const ResourceProblem& problem, double gamma, const std::vector<double>& margins) {
  require(gamma > 0.0, "gamma must be positive");
  StepSizes st;
  st.gamma = gamma;
  for (int i = 0; i < problem.size(); ++i) {
    require(margins.size() == 1 || size_t(i) < margins.size(), "margins must hold one value or one per agent");
    const double a = margins.size() == 1 ? margins[0] : margins[i];
    require(a > 0.0, "margin must be positive");
    const double sig = problem.agents[i].sigma_max;
    const double tau = 1.0 / (problem.agents[i].L() + a);
    double kappa = sig > 0.0 ? 1.0 / (gamma + sig * sig / a) : 1.0 / (gamma + 1e-6);
    while ((1.0 / tau - problem.agents[i].L()) * (1.0 / kappa - gamma) < sig * sig)
      kappa = std::nextafter(kappa, 0.0);
    st.tau.push_back(tau);
    st.kappa.push_back(kappa);
  }
  return st;
}

double check_stepsizes_resource(const ResourceProblem& problem, const StepSizes& steps) {
  require(int(steps.tau.size()) == problem.size() && int(steps.kappa.size()) == problem.size(),
          "step sizes per agent");
  require(steps.gamma > 0.0, "gamma must be positive");
  double slack = INFINITY;
  for (int i = 0; i < problem.size(); ++i) {
    const double u = 1.0 / steps.tau[i] - problem.agents[i].L();
    const double w = 1.0 / steps.kappa[i] - steps.gamma;
    require(u > 0.0, "resource step sizes need 1/tau_i > L_i");
    require(w > 0.0, "resource step sizes need 1/kappa_i > gamma");
    const double sig2 = problem.agents[i].sigma_max * problem.agents[i].sigma_max;
    const double s = u * w - sig2;
    require(s >= -1e-12 * (1.0 + sig2), "step sizes violate the resource condition");
    slack = std::min(slack, s);
  }
  return slack;
}

ResourceState init_resource(const ResourceProblem& problem, const Blocks& xi0) {
  require(int(xi0.size()) == problem.size(), "xi0: agent count mismatch");
  ResourceState st;
  st.xi = xi0;
  for (int i = 0; i < problem.size(); ++i) {
    require(xi0[i].size() == problem.agents[i].dim(), "xi0: block dimension mismatch");
    st.y.push_back(Vec::Zero(problem.m()));
    st.v.push_back(Vec::Zero(problem.m()));
    st.xibar.push_back(Vec::Zero(problem.agents[i].dim()));
    st.ybar.push_back(Vec::Zero(problem.m()));
  }
  return st;
}

void dpda_r_step(ResourceState& st, const ResourceProblem& problem, MixingProcess& process, const ResourceConfig& cfg) {
  const int N = problem.size();
  const double gamma = cfg.steps.gamma;
  const long k = st.k + 1;
  Blocks xn(N), z(N);
  for (int i = 0; i < N; ++i) {
    const auto& A = problem.agents[i];
    Vec grad = A.f.gradient(st.xi[i]);
    grad.noalias() += A.R.transpose() * st.y[i];
    xn[i] = A.rho.prox(st.xi[i] - cfg.steps.tau[i] * grad, cfg.steps.tau[i]);
    if (!xn[i].allFinite()) throw DivergedError(i, k);
    z[i] = st.v[i] / gamma + st.y[i];
  }
  const int q = consensus_schedule(k, cfg.p);
  const Blocks R = cfg.exact_projection ? exact_consensus(z, cfg.B_d) : multi_consensus(process, z, q, cfg.B_d);
  for (int i = 0; i < N; ++i) {
    const auto& A = problem.agents[i];
    const Vec vn = st.v[i] + gamma * st.y[i] - gamma * R[i];
    const Vec arg = st.y[i] + cfg.steps.kappa[i] * (A.R * (2.0 * xn[i] - st.xi[i]) - A.r - (2.0 * vn - st.v[i]));
    st.y[i] = problem.cone.project_polar(arg);
    if (!st.y[i].allFinite()) throw DivergedError(i, k);
    st.v[i] = vn;
    st.xi[i] = std::move(xn[i]);
  }
  st.k = k;
  st.comms += q;
  const double w = 1.0 / double(k);
  for (int i = 0; i < N; ++i) {
    st.xibar[i] += w * (st.xi[i] - st.xibar[i]);
    st.ybar[i] += w * (st.y[i] - st.ybar[i]);
  }
}

RunReport dpda_r_run(const ResourceProblem& problem, MixingProcess& process, const ResourceConfig& cfg,
                     const Blocks& xi0, long K, const LogOptions& log,
                     const std::function<void(const ResourceState&)>& on_step) {
  require(K >= 1, "K must be >= 1");
  require(problem.size() == process.graph().nodes(), "one agent per node required");
  require(cfg.p >= 1.0, "p must be >= 1");
  require(cfg.B_d > 0.0, "B_d must be positive");
  check_stepsizes_resource(problem, cfg.steps);
  ResourceState st = init_resource(problem, xi0);
  const auto checkpoints = log.checkpoints.empty() ? log_checkpoints(K) : log.checkpoints;
  RunReport rep;
  rep.solver = "resource";
  size_t next = 0;
  while (st.k < K) {
    dpda_r_step(st, problem, process, cfg);
    if (on_step) on_step(st);
    while (next < checkpoints.size() && checkpoints[next] < st.k) ++next;
    if (next < checkpoints.size() && checkpoints[next] == st.k) {
      auto m = resource_metrics(st.k, st.comms, problem, process.graph(), st.xibar, st.ybar, log.phi_star);
      if (log.certificate) apply_certificate(m, *log.certificate);
      rep.rows.push_back(std::move(m));
    }
  }
  rep.K = K;
  rep.comms = st.comms;
  rep.xbar = st.xibar;
  rep.ybar = st.ybar;
  rep.x_last = st.xi;
  return rep;
}

}  // namespace dpda
