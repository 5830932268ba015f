#include "dpda/dpda_static.hpp"

#include <cmath>

namespace dpda {

namespace {

double per_agent(const std::vector<double>& c, size_t i) {
  require(c.size() == 1 || i < c.size(), "c_i must hold one value or one per agent");
  return c.size() == 1 ? c[0] : c[i];
}

void check_finite(const Vec& v, int agent, long step) {
  if (!v.allFinite()) throw DivergedError(agent, step);
}

}  // namespace

StepSizes select_stepsizes_static(const std::vector<AgentProblem>& problems, const Graph& g, double gamma,
                                  const std::vector<double>& c) {
  require(gamma > 0.0, "gamma must be positive");
  require(int(problems.size()) == g.nodes(), "one problem per node required");
  StepSizes st;
  st.gamma = gamma;
  for (size_t i = 0; i < problems.size(); ++i) {
    const double ci = per_agent(c, i);
    require(ci > 0.0, "c_i must be positive");
    const double sig = problems[i].sigma_max;
    const double tau = 1.0 / (ci + problems[i].L() + 2.0 * gamma * g.degree(int(i)));
    double kappa = sig > 0.0 ? ci / (sig * sig) : ci;
    // shave rounding so the condition holds in floating point
    while ((1.0 / tau - problems[i].L() - 2.0 * gamma * g.degree(int(i))) / kappa < sig * sig)
      kappa = std::nextafter(kappa, 0.0);
    st.tau.push_back(tau);
    st.kappa.push_back(kappa);
  }
  return st;
}

double check_stepsizes_static(const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps) {
  require(steps.tau.size() == problems.size() && steps.kappa.size() == problems.size(), "step sizes per agent");
  require(steps.gamma > 0.0, "gamma must be positive");
  double slack = INFINITY;
  for (size_t i = 0; i < problems.size(); ++i) {
    require(steps.tau[i] > 0.0 && steps.kappa[i] > 0.0, "step sizes must be positive");
    const double lhs = (1.0 / steps.tau[i] - problems[i].L() - 2.0 * steps.gamma * g.degree(int(i))) / steps.kappa[i];
    const double sig2 = problems[i].sigma_max * problems[i].sigma_max;
    const double s = lhs - sig2;
    // equality-constructed sizes may miss by rounding only
    require(s >= -1e-12 * (1.0 + sig2), "step sizes violate the static condition");
    slack = std::min(slack, s);
  }
  return slack;
}

StaticState init_static(const std::vector<AgentProblem>& problems, const Blocks& x0) {
  require(x0.size() == problems.size(), "x0: agent count mismatch");
  const int n_s = common_shared_dim(problems);
  StaticState st;
  st.x = x0;
  for (size_t i = 0; i < problems.size(); ++i) {
    require(x0[i].size() == problems[i].dim(), "x0: block dimension mismatch");
    st.s.push_back(x0[i].head(n_s));
    st.theta.push_back(Vec::Zero(problems[i].b.size()));
    st.xbar.push_back(Vec::Zero(problems[i].dim()));
  }
  return st;
}

void dpda_s_step(StaticState& st, const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps) {
  const int N = int(problems.size());
  const int n_s = common_shared_dim(problems);
  const long k = st.k;
  // one exchange of s with the neighbors
  const Blocks lap = laplacian_apply(g, st.s);
  ++st.comms;
  for (int i = 0; i < N; ++i) {
    const auto& P = problems[i];
    Vec grad = P.f.gradient(st.x[i]);
    if (P.b.size()) grad.noalias() += P.A.transpose() * st.theta[i];
    grad.head(n_s) += steps.gamma * lap[i];
    Vec xn = P.rho.prox(st.x[i] - steps.tau[i] * grad, steps.tau[i]);
    check_finite(xn, i, k + 1);
    const Vec ext = 2.0 * xn - st.x[i];
    st.s[i] += ext.head(n_s);
    if (P.b.size()) {
      st.theta[i] = P.cone.project_polar(st.theta[i] + steps.kappa[i] * (P.A * ext - P.b));
      check_finite(st.theta[i], i, k + 1);
    }
    st.x[i] = std::move(xn);
  }
  ++st.k;
  const double w = 1.0 / double(st.k);
  for (int i = 0; i < N; ++i) st.xbar[i] += w * (st.x[i] - st.xbar[i]);
}

RunReport dpda_s_run(const std::vector<AgentProblem>& problems, const Graph& g, const StepSizes& steps,
                     const Blocks& x0, long K, const LogOptions& log,
                     const std::function<void(const StaticState&)>& on_step) {
  require(K >= 1, "K must be >= 1");
  require(int(problems.size()) == g.nodes(), "one problem per node required");
  check_stepsizes_static(problems, g, steps);
  StaticState st = init_static(problems, x0);
  const auto checkpoints = log.checkpoints.empty() ? log_checkpoints(K) : log.checkpoints;
  RunReport rep;
  rep.solver = "static";
  size_t next = 0;
  while (st.k < K) {
    dpda_s_step(st, problems, g, steps);
    if (on_step) on_step(st);
    while (next < checkpoints.size() && checkpoints[next] < st.k) ++next;
    if (next < checkpoints.size() && checkpoints[next] == st.k) {
      auto m = consensus_metrics(st.k, st.comms, problems, g, st.xbar, log.phi_star);
      if (log.certificate) apply_certificate(m, *log.certificate);
      rep.rows.push_back(std::move(m));
    }
  }
  rep.K = K;
  rep.comms = st.comms;
  rep.xbar = st.xbar;
  rep.x_last = st.x;
  return rep;
}

}  // namespace dpda
