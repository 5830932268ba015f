#include "dpda/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dpda {

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Theta1: return "theta1";
    case CertificateKind::Theta2_3: return "theta2_3";
    case CertificateKind::Theta4_5: return "theta4_5";
  }
  return "unknown";
}

long double schedule_weighted_sum(long K, double p, double log_alpha, double a, double c) {
  require(p >= 1.0, "schedule exponent must be >= 1");
  auto s1 = [](long double n) { return n * (n + 1) / 2; };
  auto s2 = [](long double n) { return n * (n + 1) * (2 * n + 1) / 6; };
  long double total = 0.0L;
  long lo = 1;
  for (long q = 1; lo <= K; ++q) {
    const long double top = std::floor(std::pow(static_cast<long double>(q), static_cast<long double>(p)));
    const long hi = top >= static_cast<long double>(K) ? K : static_cast<long>(top);
    if (hi < lo) continue;
    const long double w = std::exp(static_cast<long double>(q) * log_alpha);
    if (w == 0.0L) break;
    const long double sum2 = s2(hi) - s2(lo - 1);
    const long double sum1 = s1(hi) - s1(lo - 1);
    total += w * (a * sum2 + c * sum1);
    lo = hi + 1;
  }
  return total;
}

double Certificate::tail(long K) const {
  if (prefactor == 0.0) return 0.0;
  return static_cast<double>(prefactor * schedule_weighted_sum(K, p, log_alpha, a, c));
}

double Certificate::bound(long K) const {
  require(K >= 1, "certificate bound needs K >= 1");
  return (constant + tail(K)) / double(K);
}

double Certificate::weighted_infeasibility(const IterationMetrics& m) const {
  switch (kind) {
    case CertificateKind::Theta1:
    case CertificateKind::Theta2_3: {
      require(conic_weights.size() == m.infeas.size(), "certificate: agent count mismatch");
      double s = consensus_weight * (kind == CertificateKind::Theta1 ? m.m_norm : m.d_ctilde);
      for (size_t i = 0; i < m.infeas.size(); ++i) s += conic_weights[i] * m.infeas[i];
      return s;
    }
    case CertificateKind::Theta4_5: return consensus_weight * m.infeas_sum;
  }
  return kNaN;
}

Certificate theta1(const ConsensusSaddle& s, const StepSizes& steps, const Blocks& x0, const Graph& g) {
  const int N = g.nodes();
  require(int(s.x.size()) == N && int(x0.size()) == N && int(s.theta.size()) == N, "theta1: agent count mismatch");
  require(int(s.lambda.size()) == g.num_edges(), "theta1: lambda must hold one block per edge");
  const int n_s = s.lambda.empty() ? 0 : int(s.lambda[0].size());
  const double lam = blocks_norm(s.lambda);
  const double mx0 = blocks_norm(incidence_apply(g, shared_part(x0, n_s)));
  Certificate c;
  c.kind = CertificateKind::Theta1;
  c.constant = 2.0 / steps.gamma * lam * lam - 0.5 * steps.gamma * mx0 * mx0;
  for (int i = 0; i < N; ++i) {
    c.constant += (s.x[i] - x0[i]).squaredNorm() / (2.0 * steps.tau[i]) + 4.0 / steps.kappa[i] * s.theta[i].squaredNorm();
    c.conic_weights.push_back(s.theta[i].norm());
  }
  c.consensus_weight = lam;
  return c;
}

Certificate theta_dynamic(const ConsensusSaddle& s, const StepSizes& steps, const Blocks& x0, double B, double p,
                          const MixingConstants& mc) {
  const int N = int(s.x.size());
  require(int(x0.size()) == N && int(s.theta.size()) == N && int(s.lambda.size()) == N,
          "theta_dynamic: agent count mismatch");
  require(B > 0.0, "theta_dynamic: B must be positive");
  const double lam = blocks_norm(s.lambda);
  double dx = 0.0;
  for (int i = 0; i < N; ++i) dx += (x0[i] - s.x[i]).squaredNorm();
  Certificate c;
  c.kind = CertificateKind::Theta2_3;
  c.constant = 2.0 * lam * (lam / steps.gamma + std::sqrt(dx));
  for (int i = 0; i < N; ++i) {
    c.constant += (s.x[i] - x0[i]).squaredNorm() / steps.tau[i] + 4.0 / steps.kappa[i] * s.theta[i].squaredNorm();
    c.conic_weights.push_back(s.theta[i].norm());
  }
  c.prefactor = 8.0 * N * N * B * B * mc.Gamma;
  c.a = 2.0 * steps.gamma;
  c.c = steps.gamma + lam / (std::sqrt(double(N)) * B);
  c.p = p;
  c.log_alpha = mc.log_alpha;
  c.consensus_weight = lam;
  return c;
}

Certificate theta_resource(const ResourceSaddle& s, const StepSizes& steps, const Blocks& xi0, double B_d, double p,
                           const MixingConstants& mc) {
  const int N = int(s.xi.size());
  require(int(xi0.size()) == N && int(s.w.size()) == N, "theta_resource: agent count mismatch");
  require(B_d > 0.0, "theta_resource: B_d must be positive");
  const double wn = blocks_norm(s.w);
  const double yn = std::sqrt(double(N)) * s.y.norm();
  Certificate c;
  c.kind = CertificateKind::Theta4_5;
  c.constant = wn * (wn / (2.0 * steps.gamma) + 2.0 * yn);
  for (int i = 0; i < N; ++i)
    c.constant += (s.xi[i] - xi0[i]).squaredNorm() / steps.tau[i] + 4.0 / steps.kappa[i] * s.y.squaredNorm();
  c.prefactor = 2.0 * N * N * B_d * B_d * mc.Gamma;
  c.a = 2.0 * steps.gamma;
  c.c = 2.0 * steps.gamma + wn / (std::sqrt(double(N)) * B_d);
  c.p = p;
  c.log_alpha = mc.log_alpha;
  c.consensus_weight = yn;
  return c;
}

std::optional<long> plateau_threshold(const Certificate& c, double rel, int max_log2) {
  std::optional<long> first;
  double prev = c.tail(1);
  for (int j = 0; j < max_log2; ++j) {
    const long K = 1L << j;
    const double next = c.tail(2 * K);
    const bool flat = next - prev <= rel * prev;
    if (flat && !first) first = K;
    if (!flat) first.reset();
    prev = next;
  }
  return first;
}

double consensus_violation(const Graph& g, const Blocks& shared) {
  double worst = 0.0;
  for (auto [i, j] : g.edges()) worst = std::max(worst, (shared[i] - shared[j]).norm());
  return worst;
}

double consensus_distance(const Blocks& shared) {
  if (shared.empty()) return 0.0;
  Vec mean = Vec::Zero(shared[0].size());
  for (const auto& b : shared) mean += b;
  mean /= double(shared.size());
  double s = 0.0;
  for (const auto& b : shared) s += (b - mean).squaredNorm();
  return std::sqrt(s);
}

IterationMetrics consensus_metrics(long k, long comms, const std::vector<AgentProblem>& problems, const Graph& g,
                                   const Blocks& xbar, std::optional<double> phi_star) {
  require(problems.size() == xbar.size(), "metrics: agent count mismatch");
  IterationMetrics m;
  m.k = k;
  m.comms = comms;
  m.objective = total_phi(problems, xbar);
  if (phi_star) m.subopt = std::abs(m.objective - *phi_star);
  for (size_t i = 0; i < problems.size(); ++i) {
    m.infeas.push_back(problems[i].infeasibility(xbar[i]));
    m.infeas_sum += m.infeas.back();
  }
  const Blocks sh = shared_part(xbar, common_shared_dim(problems));
  m.cons_viol = consensus_violation(g, sh);
  m.d_ctilde = consensus_distance(sh);
  m.m_norm = blocks_norm(incidence_apply(g, sh));
  return m;
}

IterationMetrics resource_metrics(long k, long comms, const ResourceProblem& problem, const Graph& g,
                                  const Blocks& xibar, const Blocks& ybar, std::optional<double> phi_star) {
  IterationMetrics m;
  m.k = k;
  m.comms = comms;
  m.objective = problem.phi(xibar);
  if (phi_star) m.subopt = std::abs(m.objective - *phi_star);
  m.infeas_sum = problem.cone.distance(problem.constraint_image(xibar));
  m.infeas = {m.infeas_sum};
  m.cons_viol = consensus_violation(g, ybar);
  m.d_ctilde = consensus_distance(ybar);
  m.m_norm = blocks_norm(incidence_apply(g, ybar));
  return m;
}

void apply_certificate(IterationMetrics& m, const Certificate& c) {
  m.bound = c.bound(m.k);
  m.weighted_infeas = c.weighted_infeasibility(m);
}

std::vector<long> log_checkpoints(long K, int per_decade) {
  require(K >= 1 && per_decade >= 1, "checkpoints: bad arguments");
  std::vector<long> out;
  const double step = std::pow(10.0, 1.0 / per_decade);
  for (double v = 1.0; v < double(K); v *= step) {
    const long k = std::lround(v);
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  if (out.empty() || out.back() != K) out.push_back(K);
  return out;
}

}  // namespace dpda
