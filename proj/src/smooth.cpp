#include "dpda/smooth.hpp"

namespace dpda {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double spectral_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

SmoothFunction::SmoothFunction(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{[&](const ZeroSmooth& f) {
                          dim_ = f.dim;
                          L_ = 0.0;
                        },
                        [&](const Quadratic& f) {
                          dim_ = int(f.c.size());
                          L_ = dim_ ? Eigen::SelfAdjointEigenSolver<Mat>(f.Q, Eigen::EigenvaluesOnly)
                                          .eigenvalues()
                                          .cwiseAbs()
                                          .maxCoeff()
                                    : 0.0;
                        },
                        [&](const LeastSquares& f) {
                          dim_ = int(f.A.cols());
                          const double s = spectral_norm(f.A);
                          L_ = s * s;
                        },
                        [&](const HalfSquaredNormOfSubblock& f) {
                          dim_ = f.dim;
                          L_ = f.size > 0 ? 1.0 : 0.0;
                        }},
             v_);
}

SmoothFunction SmoothFunction::zero(int dim) {
  require(dim >= 0, "smooth function dimension must be nonnegative");
  return SmoothFunction(ZeroSmooth{dim});
}

SmoothFunction SmoothFunction::quadratic(Mat Q, Vec c, double constant) {
  require(Q.rows() == Q.cols() && Q.rows() == c.size(), "quadratic: inconsistent sizes");
  require(Q.isApprox(Q.transpose(), 1e-12) || Q.size() == 0, "quadratic: Q must be symmetric");
  if (Q.size()) {
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(Q, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    require(lmin >= -1e-10 * (1.0 + Q.norm()), "quadratic: Q must be positive semidefinite");
  }
  return SmoothFunction(Quadratic{std::move(Q), std::move(c), constant});
}

SmoothFunction SmoothFunction::least_squares(Mat A, Vec b) {
  require(A.rows() == b.size(), "least squares: inconsistent sizes");
  return SmoothFunction(LeastSquares{std::move(A), std::move(b)});
}

SmoothFunction SmoothFunction::half_sq_norm(int dim, int begin, int size) {
  require(begin >= 0 && size >= 0 && begin + size <= dim, "half squared norm: range out of bounds");
  return SmoothFunction(HalfSquaredNormOfSubblock{dim, begin, size});
}

double SmoothFunction::value(const Vec& x) const {
  require(x.size() == dim_, "smooth value: dimension mismatch");
  return std::visit(overloaded{[&](const ZeroSmooth&) { return 0.0; },
                               [&](const Quadratic& f) { return 0.5 * x.dot(f.Q * x) + f.c.dot(x) + f.constant; },
                               [&](const LeastSquares& f) { return 0.5 * (f.A * x - f.b).squaredNorm(); },
                               [&](const HalfSquaredNormOfSubblock& f) {
                                 return 0.5 * x.segment(f.begin, f.size).squaredNorm();
                               }},
                    v_);
}

Vec SmoothFunction::gradient(const Vec& x) const {
  require(x.size() == dim_, "smooth gradient: dimension mismatch");
  return std::visit(overloaded{[&](const ZeroSmooth&) -> Vec { return Vec::Zero(x.size()); },
                               [&](const Quadratic& f) -> Vec { return f.Q * x + f.c; },
                               [&](const LeastSquares& f) -> Vec { return f.A.transpose() * (f.A * x - f.b); },
                               [&](const HalfSquaredNormOfSubblock& f) -> Vec {
                                 Vec g = Vec::Zero(x.size());
                                 g.segment(f.begin, f.size) = x.segment(f.begin, f.size);
                                 return g;
                               }},
                    v_);
}

}  // namespace dpda
