#pragma once

#include "dpda/types.hpp"

#include <variant>

namespace dpda {

class Cone;

struct ZeroCone {
  int dim;
};
struct FreeCone {
  int dim;
};
struct NonnegativeOrthant {
  int dim;
};
// {(t, x) : ||x|| <= t}, radius first.
struct SecondOrderCone {
  int dim;
};
struct ProductCone {
  std::vector<Cone> parts;
};

class Cone {
 public:
  using Variant = std::variant<ZeroCone, FreeCone, NonnegativeOrthant, SecondOrderCone, ProductCone>;

  static Cone zero(int dim);
  static Cone free(int dim);
  static Cone nonneg(int dim);
  static Cone soc(int dim);
  static Cone product(std::vector<Cone> parts);

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }

  Vec project(const Vec& v) const;
  // Projection onto the polar cone, v - project(v).
  Vec project_polar(const Vec& v) const;
  double distance(const Vec& v) const;
  double polar_distance(const Vec& v) const;
  bool contains(const Vec& v, double tol = 1e-10) const;
  // Smallest slack of v inside the cone; positive iff v is interior.
  double interior_margin(const Vec& v) const;

  std::string describe() const;

 private:
  explicit Cone(Variant v);
  Variant v_;
  int dim_ = 0;
};

}  // namespace dpda
