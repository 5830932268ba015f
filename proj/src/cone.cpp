#include "dpda/cone.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dpda {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Vec project_soc(const Vec& v) {
  const double t = v(0);
  const double nx = v.tail(v.size() - 1).norm();
  if (nx <= t) return v;
  if (nx <= -t) return Vec::Zero(v.size());
  Vec out(v.size());
  const double a = 0.5 * (nx + t);
  out(0) = a;
  out.tail(v.size() - 1) = (a / nx) * v.tail(v.size() - 1);
  return out;
}

}  // namespace

Cone::Cone(Variant v) : v_(std::move(v)) {
  dim_ = std::visit(overloaded{[](const ProductCone& p) {
                                 int d = 0;
                                 for (const auto& c : p.parts) d += c.dim();
                                 return d;
                               },
                               [](const auto& c) { return c.dim; }},
                    v_);
}

Cone Cone::zero(int dim) {
  require(dim >= 0, "cone dimension must be nonnegative");
  return Cone(ZeroCone{dim});
}
Cone Cone::free(int dim) {
  require(dim >= 0, "cone dimension must be nonnegative");
  return Cone(FreeCone{dim});
}
Cone Cone::nonneg(int dim) {
  require(dim >= 0, "cone dimension must be nonnegative");
  return Cone(NonnegativeOrthant{dim});
}
Cone Cone::soc(int dim) {
  require(dim >= 1, "second-order cone needs dimension >= 1");
  return Cone(SecondOrderCone{dim});
}
Cone Cone::product(std::vector<Cone> parts) { return Cone(ProductCone{std::move(parts)}); }

Vec Cone::project(const Vec& v) const {
  require(v.size() == dim_, "cone projection: dimension mismatch");
  return std::visit(overloaded{[&](const ZeroCone&) -> Vec { return Vec::Zero(v.size()); },
                               [&](const FreeCone&) -> Vec { return v; },
                               [&](const NonnegativeOrthant&) -> Vec { return v.cwiseMax(0.0); },
                               [&](const SecondOrderCone&) -> Vec { return project_soc(v); },
                               [&](const ProductCone& p) -> Vec {
                                 Vec out(v.size());
                                 int off = 0;
                                 for (const auto& c : p.parts) {
                                   out.segment(off, c.dim()) = c.project(v.segment(off, c.dim()));
                                   off += c.dim();
                                 }
                                 return out;
                               }},
                    v_);
}

Vec Cone::project_polar(const Vec& v) const { return v - project(v); }

double Cone::distance(const Vec& v) const { return project_polar(v).norm(); }

double Cone::polar_distance(const Vec& v) const { return project(v).norm(); }

bool Cone::contains(const Vec& v, double tol) const { return distance(v) <= tol * (1.0 + v.norm()); }

double Cone::interior_margin(const Vec& v) const {
  require(v.size() == dim_, "cone margin: dimension mismatch");
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{[&](const ZeroCone& c) { return c.dim == 0 ? inf : -inf; },
                               [&](const FreeCone&) { return inf; },
                               [&](const NonnegativeOrthant& c) { return c.dim == 0 ? inf : v.minCoeff(); },
                               [&](const SecondOrderCone&) { return v(0) - v.tail(v.size() - 1).norm(); },
                               [&](const ProductCone& p) {
                                 double m = inf;
                                 int off = 0;
                                 for (const auto& c : p.parts) {
                                   m = std::min(m, c.interior_margin(v.segment(off, c.dim())));
                                   off += c.dim();
                                 }
                                 return m;
                               }},
                    v_);
}

std::string Cone::describe() const {
  return std::visit(overloaded{[](const ZeroCone& c) { return "zero(" + std::to_string(c.dim) + ")"; },
                               [](const FreeCone& c) { return "free(" + std::to_string(c.dim) + ")"; },
                               [](const NonnegativeOrthant& c) { return "nonneg(" + std::to_string(c.dim) + ")"; },
                               [](const SecondOrderCone& c) { return "soc(" + std::to_string(c.dim) + ")"; },
                               [](const ProductCone& p) {
                                 std::ostringstream os;
                                 os << "product(";
                                 for (size_t i = 0; i < p.parts.size(); ++i) {
                                   if (i) os << ",";
                                   os << p.parts[i].describe();
                                 }
                                 os << ")";
                                 return os.str();
                               }},
                    v_);
}

}  // namespace dpda
