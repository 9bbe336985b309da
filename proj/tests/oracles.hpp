#pragma once

// Reference computations used only by the tests. None of these call into the
// library's own linear algebra.

#include <algorithm>
#include <complex>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include <dfm/numeric.hpp>

namespace oracle {

using dfm::Complex;
using dfm::Index;
using dfm::Matrix;
using dfm::Vector;

// D_phi C_psi by explicit sums over the frame vectors.
inline Matrix brute_duality(const Matrix& phi, const Matrix& psi) {
  const Index d = phi.rows();
  Matrix out = Matrix::Zero(d, d);
  for (Index n = 0; n < phi.cols(); ++n) {
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) out(r, c) += phi(r, n) * std::conj(psi(c, n));
    }
  }
  return out;
}

// sum_n m_n <f, psi_n> phi_n as a matrix, entry by entry.
inline Matrix brute_multiplier(const Vector& m, const Matrix& phi, const Matrix& psi) {
  const Index d = phi.rows();
  Matrix out = Matrix::Zero(d, d);
  for (Index n = 0; n < phi.cols(); ++n) {
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) out(r, c) += m(n) * phi(r, n) * std::conj(psi(c, n));
    }
  }
  return out;
}

// Characteristic polynomial coefficients c_0..c_d of det(zI - A), monic,
// highest degree first (Faddeev-LeVerrier).
inline std::vector<Complex> charpoly(const Matrix& a) {
  const Index n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  Matrix mk = Matrix::Zero(n, n);
  const Matrix id = Matrix::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(k - 1)] * id;
    c[static_cast<std::size_t>(k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  return c;
}

// Roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  auto p = [&](Complex z) {
    Complex v = c[0];
    for (std::size_t k = 1; k <= n; ++k) v = v * z + c[k];
    return v;
  };
  double r = 1.0;
  for (std::size_t k = 1; k <= n; ++k) r = std::max(r, 1.0 + std::abs(c[k]));
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(0.5 * r, 0.4 + 2.0 * 3.141592653589793 * k / n);
  for (int it = 0; it < 2000; ++it) {
    double move = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) den *= z[k] - z[j];
      }
      const Complex step = p(z[k]) / den;
      z[k] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-15 * r) break;
  }
  return z;
}

inline std::vector<Complex> eigenvalues(const Matrix& a) { return poly_roots(charpoly(a)); }

// Greedy matching distance between two multisets of the same size.
inline double match_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (const Complex& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& x, const Complex& y) { return std::abs(x - z) < std::abs(y - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

// int_0^1 sqrt(1 - x^2) cos(2 pi j x) dx = pi J_1(a) / (2 a), a = 2 pi j.
inline double sqrt_cos_coefficient(long j) {
  if (j == 0) return 3.141592653589793 / 4.0;
  const double a = 2.0 * 3.141592653589793 * static_cast<double>(j);
  return 3.141592653589793 * boost::math::cyl_bessel_j(1, a) / (2.0 * a);
}

// Imaginary parts -int_0^1 sqrt(1 - x^2) sin(2 pi j x) dx, computed with
// mpmath at 30 digits (j = 1, 2, 5, 10).
inline const std::vector<std::pair<long, double>>& sqrt_sin_table() {
  static const std::vector<std::pair<long, double>> t{
      {1, -0.10318111396098004455}, {2, -0.059570900828223029444},
      {5, -0.026769566030497651571}, {10, -0.014129444222764749712}};
  return t;
}

// sum_n d_n^2 / (m_n - lambda) for the excess-one Parseval example, mpmath
// nsum at 30 digits.
struct SecularSample {
  Complex lambda;
  Complex value;
};
inline const std::vector<SecularSample>& langley_table() {
  static const std::vector<SecularSample> t{
      {{0.0, 0.0}, {0.5, 0.0}},
      {{0.0, 0.5}, {0.32608390856356507702, 0.22577666645018778773}},
      {{-0.3, 0.0}, {0.34839852056956711064, 0.0}},
      {{0.6, 0.2}, {0.1859380259497750319, 0.63786508639051441146}}};
  return t;
}

// sum_n d_n^2 over all n, mpmath.
inline constexpr double kLangleyKernelNormSq = 0.365529289315002439625579620911;

}  // namespace oracle
