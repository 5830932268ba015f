#pragma once

#include "dpda/mixing.hpp"
#include "dpda/problem.hpp"

#include <limits>
#include <optional>
#include <string>

namespace dpda {

struct IterationMetrics {
  long k = 0;
  long comms = 0;
  double objective = kNaN;
  double subopt = kNaN;
  double infeas_sum = 0.0;
  std::vector<double> infeas;
  double cons_viol = 0.0;  // max over base edges of the shared-block gap
  double d_ctilde = 0.0;   // distance to the consensus subspace
  double m_norm = 0.0;     // ||M xbar||
  double weighted_infeas = kNaN;
  double bound = kNaN;
  double e_norm = kNaN;  // latest inexact-consensus error (diagnostic runs)
};

struct RunReport {
  std::string solver;
  long K = 0;
  long comms = 0;
  std::vector<IterationMetrics> rows;
  Blocks xbar;  // ergodic primal average
  Blocks ybar;  // ergodic dual estimates (resource runs)
  Blocks x_last;
  // Diagnostic runs: worst ratio of measured norm to its a priori bound.
  double max_mu_ratio = 0.0;
  double max_e_ratio = 0.0;
  long bound_violations = 0;
};

// Saddle data for the consensus forms. lambda is per edge for the static
// certificate and per node for the dynamic one.
struct ConsensusSaddle {
  Blocks x;
  Blocks theta;
  Blocks lambda;
};

struct ResourceSaddle {
  Blocks xi;
  Vec y;
  Blocks w;
};

enum class CertificateKind { Theta1, Theta2_3, Theta4_5 };

std::string to_string(CertificateKind kind);

// bound(K) = (constant + prefactor * sum_{k<=K} alpha^{q_k} (a k^2 + c k)) / K
struct Certificate {
  CertificateKind kind = CertificateKind::Theta1;
  double constant = 0.0;
  double prefactor = 0.0;
  double a = 0.0;
  double c = 0.0;
  double p = 1.0;
  double log_alpha = 0.0;
  // Multiplier norms weighting the infeasibility terms.
  double consensus_weight = 0.0;
  std::vector<double> conic_weights;

  double tail(long K) const;
  double bound(long K) const;
  double weighted_infeasibility(const IterationMetrics& m) const;
};

// sum_{k=1}^K exp(q_k log_alpha) (a k^2 + c k), grouped by constant q_k.
long double schedule_weighted_sum(long K, double p, double log_alpha, double a, double c);

Certificate theta1(const ConsensusSaddle& s, const StepSizes& steps, const Blocks& x0, const Graph& g);
Certificate theta_dynamic(const ConsensusSaddle& s, const StepSizes& steps, const Blocks& x0, double B, double p,
                          const MixingConstants& mc);
Certificate theta_resource(const ResourceSaddle& s, const StepSizes& steps, const Blocks& xi0, double B_d, double p,
                           const MixingConstants& mc);

// First K = 2^j after which every doubling grows the tail by at most rel.
std::optional<long> plateau_threshold(const Certificate& c, double rel = 1e-6, int max_log2 = 62);

double consensus_violation(const Graph& g, const Blocks& shared);
double consensus_distance(const Blocks& shared);

IterationMetrics consensus_metrics(long k, long comms, const std::vector<AgentProblem>& problems, const Graph& g,
                                   const Blocks& xbar, std::optional<double> phi_star);
IterationMetrics resource_metrics(long k, long comms, const ResourceProblem& problem, const Graph& g,
                                  const Blocks& xibar, const Blocks& ybar, std::optional<double> phi_star);
void apply_certificate(IterationMetrics& m, const Certificate& c);

// Sorted log-spaced iteration indices in [1, K], always including K.
std::vector<long> log_checkpoints(long K, int per_decade = 10);

struct LogOptions {
  std::vector<long> checkpoints;  // empty: log_checkpoints(K)
  std::optional<double> phi_star;
  std::optional<Certificate> certificate;
};

}  // namespace dpda
