#pragma once

// Dense complex linear algebra and the tolerance policy shared by every
// other header in the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dfm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (dimension or length mismatch).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value-level precondition failed (not Hermitian, not a frame, too close
/// to the symbol, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A work budget (subdivision depth, truncation cap) was exhausted.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (files, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

struct TolerancePolicy {
  double rank_rtol = 1e-10;      // relative singular-value cutoff
  double eig_atol = 1e-9;        // "lambda equals m_n" and eigenvalue collisions
  double residual_atol = 1e-9;   // operator residuals (duality, reconstruction)

  void validate() const {
    if (!(rank_rtol > 0.0) || !(rank_rtol < 1.0)) {
      throw DomainError("tolerance: rank_rtol must lie in (0, 1)");
    }
    if (!(eig_atol > 0.0)) throw DomainError("tolerance: eig_atol must be positive");
    if (!(residual_atol > 0.0)) throw DomainError("tolerance: residual_atol must be positive");
  }
};

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": entries must be finite");
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": matrix must be square, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

/// Largest singular value. Zero for empty matrices.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

namespace detail {

inline double rank_threshold(const RealVector& sigma, const TolerancePolicy& tol, double scale) {
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  return tol.rank_rtol * std::max(smax, scale);
}

inline Index count_above(const RealVector& sigma, double threshold) {
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++r;
  }
  return r;
}

}  // namespace detail

/// Numerical rank: number of singular values above
/// rank_rtol * max(sigma_max, scale).
inline Index numerical_rank(const Matrix& m, const TolerancePolicy& tol = {}, double scale = 0.0) {
  if (m.size() == 0) return 0;
  const RealVector sigma = singular_values(m);
  return detail::count_above(sigma, detail::rank_threshold(sigma, tol, scale));
}

/// Orthonormal basis of the kernel of `m`, one column per null direction.
/// 0 x n input yields the n x n identity; a matrix without columns yields an
/// empty basis.
inline Matrix nullspace_basis(const Matrix& m, const TolerancePolicy& tol = {}, double scale = 0.0) {
  const Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const Index r = detail::count_above(sigma, detail::rank_threshold(sigma, tol, scale));
  return svd.matrixV().rightCols(n - r);
}

/// Orthonormal basis of the column space of `m`.
inline Matrix range_basis(const Matrix& m, const TolerancePolicy& tol = {}, double scale = 0.0) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& sigma = svd.singularValues();
  const Index r = detail::count_above(sigma, detail::rank_threshold(sigma, tol, scale));
  return svd.matrixU().leftCols(r);
}

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns match `values`
};

/// Eigendecomposition of a Hermitian matrix. The input must be Hermitian up
/// to residual_atol * max(1, ||M||_F).
inline HermitianEigen hermitian_eig(const Matrix& m, const TolerancePolicy& tol = {}) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  if (m.rows() == 0) return {RealVector(), Matrix(0, 0)};
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol.residual_atol * std::max(1.0, m.norm())) {
    throw DomainError("hermitian_eig: matrix is not Hermitian (||M - M^*||_F = " +
                      std::to_string(asym) + ")");
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw DomainError("hermitian_eig: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Lexicographic (real, imag) order used for every reported eigenvalue list.
inline bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Eigenvalues of a general square matrix, repeated by algebraic
/// multiplicity, sorted lexicographically by (real, imag).
inline std::vector<Complex> general_eig(const Matrix& m) {
  require_square(m, "general_eig");
  require_finite(m, "general_eig");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw DomainError("general_eig: solver did not converge");
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

/// R with R M R = I for Hermitian positive definite M.
inline Matrix psd_inv_sqrt(const Matrix& m, const TolerancePolicy& tol = {}) {
  const HermitianEigen e = hermitian_eig(m, tol);
  if (e.values.size() == 0) return Matrix(0, 0);
  if (!(e.values(0) > tol.eig_atol)) {
    throw DomainError("psd_inv_sqrt: matrix is not positive definite (smallest eigenvalue " +
                      std::to_string(e.values(0)) + ")");
  }
  const RealVector s = e.values.array().rsqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

/// Square root of a Hermitian positive semidefinite matrix. Eigenvalues in
/// [-eig_atol * max(1, lambda_max), 0) are treated as zero roundoff.
inline Matrix psd_sqrt(const Matrix& m, const TolerancePolicy& tol = {}) {
  const HermitianEigen e = hermitian_eig(m, tol);
  if (e.values.size() == 0) return Matrix(0, 0);
  const double floor = -tol.eig_atol * std::max(1.0, std::abs(e.values(e.values.size() - 1)));
  if (e.values(0) < floor) {
    throw DomainError("psd_sqrt: matrix has a negative eigenvalue " + std::to_string(e.values(0)));
  }
  const RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

/// Greedy bottleneck matching of two equal-size multisets: pairs are taken in
/// order of increasing distance. Returns the largest matched distance, or
/// +inf when the sizes differ.
inline double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  struct Pair {
    double dist;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const Pair& p : pairs) {
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = true;
    worst = std::max(worst, p.dist);
    if (++matched == n) break;
  }
  return worst;
}

/// Distance from z to the nearest element of `points` (+inf when empty).
inline double nearest_distance(Complex z, const std::vector<Complex>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& p : points) best = std::min(best, std::abs(z - p));
  return best;
}

}  // namespace dfm
