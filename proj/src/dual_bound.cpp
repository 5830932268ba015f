#include "dpda/dual_bound.hpp"

#include "dpda/oracle.hpp"

#include <cmath>

namespace dpda {

namespace {

// Component value; -inf when the dual cone is unbounded in the l1 section.
double r_tilde_part(const Vec& g, const Cone& cone) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ZeroCone>) {
          return c.dim > 0 ? -INFINITY : INFINITY;
        } else if constexpr (std::is_same_v<T, FreeCone>) {
          return INFINITY;
        } else if constexpr (std::is_same_v<T, NonnegativeOrthant>) {
          return c.dim > 0 ? g.minCoeff() : INFINITY;
        } else if constexpr (std::is_same_v<T, SecondOrderCone>) {
          if (c.dim == 0) return INFINITY;
          const double t = g(0);
          if (c.dim == 1) return t;
          const Vec x = g.tail(c.dim - 1);
          const double nx = x.norm();
          if (t <= nx) return t - nx;
          const double a = (t - nx) * (t + nx);
          const double beta = t + x.lpNorm<1>();
          return a / (beta + std::sqrt(beta * beta + a * double(c.dim - 2)));
        } else {
          double r = INFINITY;
          int off = 0;
          for (const auto& p : c.parts) {
            r = std::min(r, r_tilde_part(g.segment(off, p.dim()), p));
            off += p.dim();
          }
          return r;
        }
      },
      cone.variant());
}

}  // namespace

double compute_r_tilde(const Vec& g, const Cone& cone) {
  require(g.size() == cone.dim(), "r_tilde: dimension mismatch");
  const double r = r_tilde_part(g, cone);
  require(r > 0.0, "not a Slater point: constraint image is not interior to the cone");
  return r;
}

double dual_radius(const SlaterCertificate& cert) {
  const double r = compute_r_tilde(cert.g, cert.cone);
  require(std::isfinite(cert.phi) && std::isfinite(cert.q), "dual radius needs finite Phi and q");
  require(cert.phi >= cert.q - 1e-12 * (1.0 + std::abs(cert.q)), "dual lower bound exceeds the primal value");
  return std::max(cert.phi - cert.q, 0.0) / r;
}

double dual_value_at_zero(const ResourceProblem& problem) {
  double q = 0.0;
  for (const auto& a : problem.agents) {
    const auto m = unconstrained_minimum(a.rho, a.f, Vec::Zero(a.dim()));
    require(std::isfinite(m.value), "q(0): an agent objective is unbounded or has an empty domain");
    q += m.value;
  }
  return q;
}

SlaterCertificate slater_certificate(const ResourceProblem& problem, const Blocks& xi_bar, std::optional<double> q) {
  require(int(xi_bar.size()) == problem.size(), "slater point: agent count mismatch");
  SlaterCertificate c;
  c.xi_bar = xi_bar;
  c.g = problem.constraint_image(xi_bar);
  c.cone = problem.cone;
  c.phi = problem.phi(xi_bar);
  require(std::isfinite(c.phi), "slater point lies outside dom Phi");
  compute_r_tilde(c.g, c.cone);
  c.q = q ? *q : dual_value_at_zero(problem);
  return c;
}

}  // namespace dpda
