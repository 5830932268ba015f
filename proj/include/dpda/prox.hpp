#pragma once

#include "dpda/types.hpp"

#include <optional>
#include <utility>
#include <variant>

namespace dpda {

class ProxFunction;

struct ZeroFn {};
struct L1Norm {
  double weight;
};
// c^T x + indicator(x >= 0), c >= 0.
struct WeightedLinearPlusNonneg {
  Vec cost;
};
struct IndicatorBall {
  Vec center;
  double radius;
};
struct IndicatorBox {
  Vec lower, upper;
};
struct ProxTerm;
struct SeparableSum {
  int dim;
  std::vector<ProxTerm> terms;
};

class ProxFunction {
 public:
  using Variant = std::variant<ZeroFn, L1Norm, WeightedLinearPlusNonneg, IndicatorBall, IndicatorBox, SeparableSum>;

  static ProxFunction zero();
  static ProxFunction l1(double weight);
  static ProxFunction linear_nonneg(Vec cost);
  static ProxFunction ball(Vec center, double radius);
  static ProxFunction box(Vec lower, Vec upper);
  // Terms act on [begin, begin + size) and must not overlap; uncovered
  // coordinates get the zero function.
  static ProxFunction separable(int dim, std::vector<ProxTerm> terms);

  const Variant& variant() const { return v_; }

  // Fixed dimension, or -1 when the function accepts any size.
  int dim() const;

  Vec prox(const Vec& v, double tau) const;
  // +inf outside the domain; indicator membership is checked with a
  // relative tolerance so ergodic averages of feasible points stay finite.
  double value(const Vec& x, double tol = 1e-9) const;

  // sup ||x[begin, end)|| over the domain, if bounded.
  std::optional<double> domain_radius(int begin, int end) const;

  // Splits into independent functions on [0, n) and [n, dim) when no term
  // straddles the boundary. Needs a known dimension.
  std::optional<std::pair<ProxFunction, ProxFunction>> split(int n, int total_dim) const;

  bool is_zero() const;

 private:
  explicit ProxFunction(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct ProxTerm {
  int begin;
  int size;
  ProxFunction fn;
};

}  // namespace dpda
