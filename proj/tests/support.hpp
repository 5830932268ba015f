#pragma once

#include "dpda/metrics.hpp"

#include <random>

namespace dpda::testing {

inline Vec randn(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

inline Blocks scalars(std::initializer_list<double> v) {
  Blocks out;
  for (double s : v) out.push_back(Vec::Constant(1, s));
  return out;
}

// 2^lo, ..., 2^hi
inline std::vector<long> pow2_checkpoints(int lo, int hi) {
  std::vector<long> out;
  for (int j = lo; j <= hi; ++j) out.push_back(1L << j);
  return out;
}

// |Phi - Phi*| + infeasibility + ||M xbar|| (consensus forms) or
// |Phi - Phi*| + d_K(sum R xi - r) (resource form).
inline double combined_error(const IterationMetrics& m, bool resource = false) {
  return m.subopt + m.infeas_sum + (resource ? 0.0 : m.m_norm);
}

// e(2K)/e(K) over consecutive rows; rows must be logged at powers of two.
inline std::vector<double> doubling_ratios(const RunReport& rep, bool resource = false) {
  std::vector<double> out;
  for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
    out.push_back(combined_error(rep.rows[i + 1], resource) / combined_error(rep.rows[i], resource));
  return out;
}

inline double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace dpda::testing
