#pragma once

#include "dpda/types.hpp"

#include <variant>

namespace dpda {

struct ZeroSmooth {
  int dim;
};
// 0.5 x^T Q x + c^T x + constant
struct Quadratic {
  Mat Q;
  Vec c;
  double constant;
};
// 0.5 ||A x - b||^2
struct LeastSquares {
  Mat A;
  Vec b;
};
// 0.5 ||x[begin, begin + size)||^2
struct HalfSquaredNormOfSubblock {
  int dim;
  int begin;
  int size;
};

class SmoothFunction {
 public:
  using Variant = std::variant<ZeroSmooth, Quadratic, LeastSquares, HalfSquaredNormOfSubblock>;

  static SmoothFunction zero(int dim);
  static SmoothFunction quadratic(Mat Q, Vec c, double constant = 0.0);
  static SmoothFunction least_squares(Mat A, Vec b);
  static SmoothFunction half_sq_norm(int dim, int begin, int size);

  const Variant& variant() const { return v_; }
  int dim() const { return dim_; }
  // Lipschitz constant of the gradient, fixed at construction.
  double lipschitz() const { return L_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

 private:
  explicit SmoothFunction(Variant v);
  Variant v_;
  int dim_ = 0;
  double L_ = 0.0;
};

// Largest singular value of a dense matrix (0 for empty matrices).
double spectral_norm(const Mat& A);

}  // namespace dpda
