#include "dpda/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpda {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_terms(int dim, const std::vector<ProxTerm>& terms) {
  require(dim >= 0, "separable sum: negative dimension");
  std::vector<std::pair<int, int>> ranges;
  for (const auto& t : terms) {
    require(t.begin >= 0 && t.size >= 0 && t.begin + t.size <= dim, "separable sum: range out of bounds");
    const int d = t.fn.dim();
    require(d < 0 || d == t.size, "separable sum: term dimension does not match its range");
    ranges.emplace_back(t.begin, t.begin + t.size);
  }
  std::sort(ranges.begin(), ranges.end());
  for (size_t i = 1; i < ranges.size(); ++i)
    require(ranges[i].first >= ranges[i - 1].second, "separable sum: overlapping coordinate ranges");
}

}  // namespace

ProxFunction ProxFunction::zero() { return ProxFunction(ZeroFn{}); }

ProxFunction ProxFunction::l1(double weight) {
  require(weight >= 0.0, "l1 weight must be nonnegative");
  return ProxFunction(L1Norm{weight});
}

ProxFunction ProxFunction::linear_nonneg(Vec cost) {
  require(cost.size() == 0 || cost.minCoeff() >= 0.0, "linear cost must be nonnegative");
  return ProxFunction(WeightedLinearPlusNonneg{std::move(cost)});
}

ProxFunction ProxFunction::ball(Vec center, double radius) {
  require(radius >= 0.0, "ball radius must be nonnegative");
  return ProxFunction(IndicatorBall{std::move(center), radius});
}

ProxFunction ProxFunction::box(Vec lower, Vec upper) {
  require(lower.size() == upper.size(), "box bounds differ in size");
  require((lower.array() <= upper.array()).all(), "box lower bound exceeds upper bound");
  return ProxFunction(IndicatorBox{std::move(lower), std::move(upper)});
}

ProxFunction ProxFunction::separable(int dim, std::vector<ProxTerm> terms) {
  check_terms(dim, terms);
  return ProxFunction(SeparableSum{dim, std::move(terms)});
}

int ProxFunction::dim() const {
  return std::visit(overloaded{[](const ZeroFn&) { return -1; }, [](const L1Norm&) { return -1; },
                               [](const WeightedLinearPlusNonneg& f) { return int(f.cost.size()); },
                               [](const IndicatorBall& f) { return int(f.center.size()); },
                               [](const IndicatorBox& f) { return int(f.lower.size()); },
                               [](const SeparableSum& f) { return f.dim; }},
                    v_);
}

bool ProxFunction::is_zero() const {
  if (std::holds_alternative<ZeroFn>(v_)) return true;
  if (const auto* s = std::get_if<SeparableSum>(&v_))
    return std::all_of(s->terms.begin(), s->terms.end(), [](const ProxTerm& t) { return t.fn.is_zero(); });
  if (const auto* l = std::get_if<L1Norm>(&v_)) return l->weight == 0.0;
  return false;
}

Vec ProxFunction::prox(const Vec& v, double tau) const {
  require(tau > 0.0, "prox step must be positive");
  const int d = dim();
  require(d < 0 || d == v.size(), "prox: dimension mismatch");
  return std::visit(
      overloaded{[&](const ZeroFn&) -> Vec { return v; },
                 [&](const L1Norm& f) -> Vec {
                   const double s = tau * f.weight;
                   return v.unaryExpr([s](double a) { return std::copysign(std::max(std::abs(a) - s, 0.0), a); });
                 },
                 [&](const WeightedLinearPlusNonneg& f) -> Vec { return (v - tau * f.cost).cwiseMax(0.0); },
                 [&](const IndicatorBall& f) -> Vec {
                   const Vec r = v - f.center;
                   const double n = r.norm();
                   if (n <= f.radius) return v;
                   return f.center + (f.radius / n) * r;
                 },
                 [&](const IndicatorBox& f) -> Vec { return v.cwiseMax(f.lower).cwiseMin(f.upper); },
                 [&](const SeparableSum& f) -> Vec {
                   Vec out = v;
                   for (const auto& t : f.terms) out.segment(t.begin, t.size) = t.fn.prox(v.segment(t.begin, t.size), tau);
                   return out;
                 }},
      v_);
}

double ProxFunction::value(const Vec& x, double tol) const {
  const int d = dim();
  require(d < 0 || d == x.size(), "prox value: dimension mismatch");
  return std::visit(
      overloaded{[&](const ZeroFn&) { return 0.0; }, [&](const L1Norm& f) { return f.weight * x.lpNorm<1>(); },
                 [&](const WeightedLinearPlusNonneg& f) {
                   if (x.size() && x.minCoeff() < -tol) return kInf;
                   return f.cost.dot(x);
                 },
                 [&](const IndicatorBall& f) {
                   return (x - f.center).norm() <= f.radius * (1.0 + tol) + tol ? 0.0 : kInf;
                 },
                 [&](const IndicatorBox& f) {
                   for (Eigen::Index i = 0; i < x.size(); ++i) {
                     if (x(i) < f.lower(i) - tol * (1.0 + std::abs(f.lower(i)))) return kInf;
                     if (x(i) > f.upper(i) + tol * (1.0 + std::abs(f.upper(i)))) return kInf;
                   }
                   return 0.0;
                 },
                 [&](const SeparableSum& f) {
                   double s = 0.0;
                   for (const auto& t : f.terms) s += t.fn.value(x.segment(t.begin, t.size), tol);
                   return s;
                 }},
      v_);
}

std::optional<double> ProxFunction::domain_radius(int begin, int end) const {
  require(begin >= 0 && begin <= end, "domain radius: bad range");
  if (begin == end) return 0.0;
  using R = std::optional<double>;
  return std::visit(
      overloaded{[&](const ZeroFn&) -> R { return std::nullopt; },
                 [&](const L1Norm&) -> R { return std::nullopt; },
                 [&](const WeightedLinearPlusNonneg&) -> R { return std::nullopt; },
                 [&](const IndicatorBall& f) -> R {
                   require(end <= f.center.size(), "domain radius: range out of bounds");
                   return f.center.segment(begin, end - begin).norm() + f.radius;
                 },
                 [&](const IndicatorBox& f) -> R {
                   require(end <= f.lower.size(), "domain radius: range out of bounds");
                   double s = 0.0;
                   for (int i = begin; i < end; ++i) {
                     const double m = std::max(std::abs(f.lower(i)), std::abs(f.upper(i)));
                     if (!std::isfinite(m)) return std::nullopt;
                     s += m * m;
                   }
                   return std::sqrt(s);
                 },
                 [&](const SeparableSum& f) -> R {
                   require(end <= f.dim, "domain radius: range out of bounds");
                   double s = 0.0;
                   int covered = 0;
                   for (const auto& t : f.terms) {
                     const int lo = std::max(begin, t.begin);
                     const int hi = std::min(end, t.begin + t.size);
                     if (lo >= hi) continue;
                     const auto r = t.fn.domain_radius(lo - t.begin, hi - t.begin);
                     if (!r) return std::nullopt;
                     s += (*r) * (*r);
                     covered += hi - lo;
                   }
                   if (covered < end - begin) return std::nullopt;
                   return std::sqrt(s);
                 }},
      v_);
}

std::optional<std::pair<ProxFunction, ProxFunction>> ProxFunction::split(int n, int total_dim) const {
  require(n >= 0 && n <= total_dim, "split: bad boundary");
  const int d = dim();
  require(d < 0 || d == total_dim, "split: dimension mismatch");
  using P = std::pair<ProxFunction, ProxFunction>;
  using R = std::optional<P>;
  const int m = total_dim - n;
  return std::visit(
      overloaded{[&](const ZeroFn&) -> R { return P{zero(), zero()}; },
                 [&](const L1Norm& f) -> R { return P{l1(f.weight), l1(f.weight)}; },
                 [&](const WeightedLinearPlusNonneg& f) -> R {
                   return P{linear_nonneg(f.cost.head(n)), linear_nonneg(f.cost.tail(m))};
                 },
                 [&](const IndicatorBall&) -> R {
                   if (m == 0) return P{*this, zero()};
                   if (n == 0) return P{zero(), *this};
                   return std::nullopt;
                 },
                 [&](const IndicatorBox& f) -> R {
                   return P{box(f.lower.head(n), f.upper.head(n)), box(f.lower.tail(m), f.upper.tail(m))};
                 },
                 [&](const SeparableSum& f) -> R {
                   std::vector<ProxTerm> head, tail;
                   for (const auto& t : f.terms) {
                     if (t.begin + t.size <= n) {
                       head.push_back(t);
                     } else if (t.begin >= n) {
                       tail.push_back({t.begin - n, t.size, t.fn});
                     } else {
                       const auto parts = t.fn.split(n - t.begin, t.size);
                       if (!parts) return std::nullopt;
                       head.push_back({t.begin, n - t.begin, parts->first});
                       tail.push_back({0, t.begin + t.size - n, parts->second});
                     }
                   }
                   return P{separable(n, std::move(head)), separable(m, std::move(tail))};
                 }},
      v_);
}

}  // namespace dpda
