#include "dpda/dpda_dynamic.hpp"

#include <cmath>

namespace dpda {

StepSizes select_stepsizes_dynamic(const std::vector<AgentProblem>& problems, double gamma,
                                   const std::vector<double>& c) {
  require(gamma > 0.0, "gamma must be positive");
  StepSizes st;
  st.gamma = gamma;
  for (size_t i = 0; i < problems.size(); ++i) {
    require(c.size() == 1 || i < c.size(), "c_i must hold one value or one per agent");
    const double ci = c.size() == 1 ? c[0] : c[i];
    require(ci > 0.0, "c_i must be positive");
    const double sig = problems[i].sigma_max;
    const double tau = 1.0 / (ci + problems[i].L() + gamma);
    double kappa = sig > 0.0 ? ci / (sig * sig) : ci;
    while ((1.0 / tau - problems[i].L() - gamma) / kappa < sig * sig) kappa = std::nextafter(kappa, 0.0);
    st.tau.push_back(tau);
    st.kappa.push_back(kappa);
  }
  return st;
}

double check_stepsizes_dynamic(const std::vector<AgentProblem>& problems, const StepSizes& steps) {
  require(steps.tau.size() == problems.size() && steps.kappa.size() == problems.size(), "step sizes per agent");
  require(steps.gamma > 0.0, "gamma must be positive");
  double slack = INFINITY;
  for (size_t i = 0; i < problems.size(); ++i) {
    require(steps.tau[i] > 0.0 && steps.kappa[i] > 0.0, "step sizes must be positive");
    const double sig2 = problems[i].sigma_max * problems[i].sigma_max;
    const double s = (1.0 / steps.tau[i] - problems[i].L() - steps.gamma) / steps.kappa[i] - sig2;
    require(s >= -1e-12 * (1.0 + sig2), "step sizes violate the dynamic condition");
    slack = std::min(slack, s);
  }
  return slack;
}

double shared_domain_radius(const std::vector<AgentProblem>& problems) {
  const int n_s = common_shared_dim(problems);
  double r = 0.0;
  for (const auto& p : problems) {
    const auto ri = p.rho.domain_radius(0, n_s);
    require(ri.has_value(), "every agent needs a bounded prox domain on the shared block");
    r = std::max(r, *ri);
  }
  return r;
}

void validate_dynamic(const std::vector<AgentProblem>& problems, const DynamicConfig& cfg) {
  require(cfg.p >= 1.0, "p must be >= 1");
  require(cfg.B > 0.0, "B must be positive");
  require(shared_domain_radius(problems) <= cfg.B * (1.0 + 1e-12), "B is smaller than an agent's domain radius");
  check_stepsizes_dynamic(problems, cfg.steps);
}

DynamicState init_dynamic(const std::vector<AgentProblem>& problems, const Blocks& x0) {
  require(x0.size() == problems.size(), "x0: agent count mismatch");
  const int n_s = common_shared_dim(problems);
  DynamicState st;
  st.x = x0;
  for (size_t i = 0; i < problems.size(); ++i) {
    require(x0[i].size() == problems[i].dim(), "x0: block dimension mismatch");
    st.theta.push_back(Vec::Zero(problems[i].b.size()));
    st.mu.push_back(Vec::Zero(n_s));
    st.xbar.push_back(Vec::Zero(problems[i].dim()));
  }
  return st;
}

void dpda_d_step(DynamicState& st, const std::vector<AgentProblem>& problems, MixingProcess& process,
                 const DynamicConfig& cfg) {
  const int N = int(problems.size());
  const int n_s = common_shared_dim(problems);
  const double gamma = cfg.steps.gamma;
  const long k = st.k + 1;  // iteration index, q_k rounds
  Blocks xn(N), z(N);
  for (int i = 0; i < N; ++i) {
    const auto& P = problems[i];
    Vec grad = P.f.gradient(st.x[i]);
    if (P.b.size()) grad.noalias() += P.A.transpose() * st.theta[i];
    grad.head(n_s) += st.mu[i];
    xn[i] = P.rho.prox(st.x[i] - cfg.steps.tau[i] * grad, cfg.steps.tau[i]);
    if (!xn[i].allFinite()) throw DivergedError(i, k);
    z[i] = st.mu[i] / gamma + 2.0 * xn[i].head(n_s) - st.x[i].head(n_s);
  }
  const int q = consensus_schedule(k, cfg.p);
  const Blocks R = cfg.exact_projection ? exact_consensus(z, cfg.B) : multi_consensus(process, z, q, cfg.B);
  if (cfg.diagnostic_shadow) {
    const Blocks exact = cfg.exact_projection ? R : exact_consensus(z, cfg.B);
    double e2 = 0.0;
    for (int i = 0; i < N; ++i) e2 += (exact[i] - R[i]).squaredNorm();
    st.last_e_norm = std::sqrt(e2);
  }
  for (int i = 0; i < N; ++i) {
    const auto& P = problems[i];
    const Vec ext = 2.0 * xn[i] - st.x[i];
    st.mu[i] += gamma * ext.head(n_s) - gamma * R[i];
    if (P.b.size()) {
      st.theta[i] = P.cone.project_polar(st.theta[i] + cfg.steps.kappa[i] * (P.A * ext - P.b));
      if (!st.theta[i].allFinite()) throw DivergedError(i, k);
    }
    st.x[i] = std::move(xn[i]);
  }
  st.k = k;
  st.comms += q;
  st.last_q = q;
  const double w = 1.0 / double(k);
  for (int i = 0; i < N; ++i) st.xbar[i] += w * (st.x[i] - st.xbar[i]);

  if (cfg.diagnostic_shadow) {
    const double sqN = std::sqrt(double(N));
    const double mu_bound = 4.0 * gamma * sqN * cfg.B * double(k);
    const double mu_ratio = blocks_norm(st.mu) / mu_bound;
    st.max_mu_ratio = std::max(st.max_mu_ratio, mu_ratio);
    if (mu_ratio > 1.0 + 1e-12) ++st.bound_violations;
    if (N > 1) {
      const auto mc = process_constants(process);
      // e^{k} here is produced in iteration k-1 -> k, bounded with its own q
      const double e_bound = 4.0 * N * sqN * cfg.B * mc.Gamma * std::exp(q * mc.log_alpha) * double(k);
      const double e_ratio = st.last_e_norm / e_bound;
      st.max_e_ratio = std::max(st.max_e_ratio, e_ratio);
      if (e_ratio > 1.0 + 1e-12) ++st.bound_violations;
    }
  }
}

RunReport dpda_d_run(const std::vector<AgentProblem>& problems, MixingProcess& process, const DynamicConfig& cfg,
                     const Blocks& x0, long K, const LogOptions& log,
                     const std::function<void(const DynamicState&)>& on_step) {
  require(K >= 1, "K must be >= 1");
  require(int(problems.size()) == process.graph().nodes(), "one problem per node required");
  validate_dynamic(problems, cfg);
  DynamicState st = init_dynamic(problems, x0);
  const auto checkpoints = log.checkpoints.empty() ? log_checkpoints(K) : log.checkpoints;
  RunReport rep;
  rep.solver = "dynamic";
  size_t next = 0;
  while (st.k < K) {
    dpda_d_step(st, problems, process, cfg);
    if (on_step) on_step(st);
    while (next < checkpoints.size() && checkpoints[next] < st.k) ++next;
    if (next < checkpoints.size() && checkpoints[next] == st.k) {
      auto m = consensus_metrics(st.k, st.comms, problems, process.graph(), st.xbar, log.phi_star);
      m.e_norm = st.last_e_norm;
      if (log.certificate) apply_certificate(m, *log.certificate);
      rep.rows.push_back(std::move(m));
    }
  }
  rep.K = K;
  rep.comms = st.comms;
  rep.xbar = st.xbar;
  rep.x_last = st.x;
  rep.max_mu_ratio = st.max_mu_ratio;
  rep.max_e_ratio = st.max_e_ratio;
  rep.bound_violations = st.bound_violations;
  return rep;
}

}  // namespace dpda
