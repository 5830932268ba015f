#pragma once

#include "dpda/problem.hpp"

namespace dpda {

struct SlaterCertificate {
  Blocks xi_bar;
  Vec g;  // sum_i (R_i xi_bar_i - r_i)
  Cone cone = Cone::nonneg(0);
  double phi = kNaN;  // Phi(xi_bar)
  double q = kNaN;    // dual lower bound q(y_bar)
};

// min { w^T g : ||w||_1 = 1, w in K* }; +inf when K* = {0}. Throws when g is
// not interior.
double compute_r_tilde(const Vec& g, const Cone& cone);

// (Phi(xi_bar) - q) / r_tilde
double dual_radius(const SlaterCertificate& cert);

// q(0) = sum_i min_xi Phi_i(xi).
double dual_value_at_zero(const ResourceProblem& problem);

// Builds the certificate for a candidate Slater point; q defaults to q(0).
SlaterCertificate slater_certificate(const ResourceProblem& problem, const Blocks& xi_bar,
                                     std::optional<double> q = std::nullopt);

}  // namespace dpda
