#pragma once

// Builders for the worked examples and a seeded random-instance generator.

#include <dfm/spectra.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dfm {

/// Where an expected fact comes from: stated by the source text, derived by
/// an independent computation, or trivial.
enum class Provenance { stated, derived, trivial };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::stated: return "stated";
    case Provenance::derived: return "derived";
    case Provenance::trivial: return "trivial";
  }
  return "derived";
}

struct FactOutcome {
  std::string name;
  Provenance provenance = Provenance::derived;
  bool holds = false;
  std::string detail;
};

struct ExpectedFact {
  std::string name;
  Provenance provenance = Provenance::derived;
  std::function<std::pair<bool, std::string>()> check;
};

struct ScenarioInstance {
  std::string name;
  std::map<std::string, double> params;
  FiniteFrame phi;
  FiniteFrame psi;
  Vector symbol;
  std::optional<StructuredModel> model;
  std::vector<ExpectedFact> facts;
  std::vector<std::string> notes;

  MultiplierInstance multiplier() const { return assemble(symbol, phi, psi); }
};

struct FactReport {
  std::vector<FactOutcome> outcomes;
  std::vector<FactOutcome> discrepancies;  // stated facts contradicted by computation
  bool passed = true;                      // every derived/trivial fact holds
};

/// Evaluates the expected facts. A failing stated fact is a discrepancy, not
/// a failure.
inline FactReport check_facts(const ScenarioInstance& inst) {
  FactReport rep;
  for (const ExpectedFact& f : inst.facts) {
    FactOutcome o{f.name, f.provenance, false, ""};
    try {
      auto [ok, detail] = f.check();
      o.holds = ok;
      o.detail = detail;
    } catch (const Error& e) {
      o.detail = std::string("error: ") + e.what();
    }
    if (!o.holds) {
      if (f.provenance == Provenance::stated) {
        rep.discrepancies.push_back(o);
      } else {
        rep.passed = false;
      }
    }
    rep.outcomes.push_back(std::move(o));
  }
  return rep;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Unitary DFT matrix, F(k, n) = exp(-2 pi i k n / s) / sqrt(s).
inline Matrix dft(Index s) {
  Matrix F(s, s);
  for (Index k = 0; k < s; ++k) {
    for (Index n = 0; n < s; ++n) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * n) % s) / static_cast<double>(s);
      F(k, n) = std::polar(1.0 / std::sqrt(static_cast<double>(s)), ang);
    }
  }
  return F;
}

inline std::pair<bool, std::string> close_sets(const std::vector<Complex>& got, const std::vector<Complex>& want,
                                               double tol) {
  const double dist = multiset_distance(got, want);
  return {dist <= tol, "max deviation " + fmt(dist)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interleaved orthonormal bases.

/// Symbol m_{2n-1} = 1/(n+1), m_{2n} = 2 - 1/(n+1) (1-based), as a generator.
inline Symbol interleaved_symbol(std::size_t nominal_length) {
  auto gen = [](std::size_t j) {
    if (j % 2 == 0) {
      const double n = static_cast<double>(j / 2 + 1);
      return Complex(1.0 / (n + 1.0), 0.0);
    }
    const double n = static_cast<double>((j + 1) / 2);
    return Complex(2.0 - 1.0 / (n + 1.0), 0.0);
  };
  LimitStructure st{{{2, 0, Complex(0.0, 0.0), Majorant::power(2.0, 1.0)},
                     {2, 1, Complex(2.0, 0.0), Majorant::power(2.0, 1.0)}}};
  return Symbol::from_generator(gen, st, nominal_length);
}

/// {e_1/sqrt2, f_1/sqrt2, e_2/sqrt2, ...} in C^s with f the columns of the
/// unitary DFT.
inline FiniteFrame interleaved_frame(std::size_t s) {
  const Index n = static_cast<Index>(s);
  const Matrix F = detail::dft(n);
  Matrix D(n, 2 * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < n; ++k) {
    D.col(2 * k) = r * Matrix::Identity(n, n).col(k);
    D.col(2 * k + 1) = r * F.col(k);
  }
  return FiniteFrame(D);
}

inline ScenarioInstance example_interleaved_onb(std::size_t size) {
  if (size < 2) throw DomainError("example_interleaved_onb: size must be at least 2");
  ScenarioInstance inst;
  inst.name = "example_interleaved_onb";
  inst.params["size"] = static_cast<double>(size);
  inst.phi = interleaved_frame(size);
  inst.psi = inst.phi;
  const Symbol sym = interleaved_symbol(2 * size);
  inst.symbol = sym.prefix(2 * size);
  StructuredFrame sf;
  sf.kind = StructuredFrame::Kind::closed_form;
  sf.name = "interleaved_onb";
  sf.section = [](std::size_t s) { return interleaved_frame(s); };
  inst.model = StructuredModel{"example_interleaved_onb", sf, sf, sym};
  inst.notes.push_back("second orthonormal basis: columns of the unitary DFT of size " + std::to_string(size));

  const FiniteFrame phi = inst.phi;
  const Vector m = inst.symbol;
  inst.facts.push_back({"M_{m'} is the identity", Provenance::stated, [phi, sym]() {
                          const Vector mp = compact_split(sym).constant_part.prefix(static_cast<std::size_t>(phi.size()));
                          const Matrix M = assemble(mp, phi, phi).matrix;
                          const double r = operator_norm(M - Matrix::Identity(M.rows(), M.cols()));
                          return std::make_pair(r <= 1e-12, "||M_{m'} - I|| = " + detail::fmt(r));
                        }});
  inst.facts.push_back({"Parseval frame", Provenance::stated, [phi]() {
                          const FrameBounds b = frame_bounds(phi);
                          const double dev = std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 1.0));
                          return std::make_pair(dev <= 1e-10, "bound deviation " + detail::fmt(dev));
                        }});
  inst.facts.push_back({"limit points {0, 2}", Provenance::stated, [sym]() {
                          const auto lp = limit_points(sym);
                          return detail::close_sets(lp, {Complex(0, 0), Complex(2, 0)}, 0.0);
                        }});
  if (size >= 200) {
    inst.facts.push_back({"at least 90% of eigenvalues within 0.1 of 1", Provenance::derived, [phi, m]() {
                            const auto ev = general_eig(assemble(m, phi, phi).matrix);
                            std::size_t near = 0;
                            for (const Complex& z : ev) near += std::abs(z - 1.0) <= 0.1 ? 1 : 0;
                            const double frac = static_cast<double>(near) / static_cast<double>(ev.size());
                            return std::make_pair(frac >= 0.9, "fraction " + detail::fmt(frac));
                          }});
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Multiplication by x^2 on L^2(0,1).

/// Fourier coefficient of x on (0,1): int_0^1 x exp(-2 pi i j x) dx.
inline Complex fourier_x(long j) {
  if (j == 0) return {0.5, 0.0};
  return {0.0, 1.0 / (2.0 * std::numbers::pi * static_cast<double>(j))};
}

/// Fourier coefficient of x^2 on (0,1).
inline Complex fourier_x2(long j) {
  if (j == 0) return {1.0 / 3.0, 0.0};
  const double pj = std::numbers::pi * static_cast<double>(j);
  return {1.0 / (2.0 * pj * pj), 1.0 / (2.0 * pj)};
}

/// Fourier coefficients of sqrt(1 - x^2) on (0,1) for j = 0..jmax, by
/// Gauss-Kronrod quadrature after x = sin(theta), on panels that resolve the
/// oscillation.
inline std::vector<Complex> fourier_sqrt_one_minus_x2(long jmax) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  std::vector<Complex> out(static_cast<std::size_t>(jmax + 1));
  const double h = 0.5 * std::numbers::pi;
  for (long j = 0; j <= jmax; ++j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(j);
    auto re = [a](double t) { const double c = std::cos(t); return c * c * std::cos(a * std::sin(t)); };
    auto im = [a](double t) { const double c = std::cos(t); return -c * c * std::sin(a * std::sin(t)); };
    const long panels = 4 + 2 * j;
    double r = 0.0, i = 0.0;
    for (long k = 0; k < panels; ++k) {
      const double lo = h * static_cast<double>(k) / static_cast<double>(panels);
      const double hi = h * static_cast<double>(k + 1) / static_cast<double>(panels);
      r += Rule::integrate(re, lo, hi, 0);
      i += Rule::integrate(im, lo, hi, 0);
    }
    out[static_cast<std::size_t>(j)] = {r, i};
  }
  return out;
}

/// Toeplitz matrix T(k, n) = c(k - n) on the band |k|, |n| <= size.
inline Matrix toeplitz_band(std::size_t size, const std::function<Complex(long)>& c) {
  const Index dim = 2 * static_cast<Index>(size) + 1;
  Matrix T(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    for (Index n = 0; n < dim; ++n) T(k, n) = c(static_cast<long>(k - n));
  }
  return T;
}

/// Frame for the band |n| <= size: in-band vectors P x e_n and
/// P sqrt(1-x^2) e_n, plus aggregated vectors standing for the out-of-band
/// ones, so that the family is exactly Parseval on the band and the
/// multiplier with m = (1, 0, 1, 0, ...) is P x^2 P.
inline FiniteFrame fourier_x2_frame(std::size_t size, const TolerancePolicy& tol = {}) {
  const long J = 2 * static_cast<long>(size);
  const std::vector<Complex> sh = fourier_sqrt_one_minus_x2(J);
  auto s_coef = [&sh](long j) { return j >= 0 ? sh[static_cast<std::size_t>(j)] : std::conj(sh[static_cast<std::size_t>(-j)]); };
  const Matrix Tx = toeplitz_band(size, fourier_x);
  const Matrix Tx2 = toeplitz_band(size, fourier_x2);
  const Matrix Ts = toeplitz_band(size, s_coef);
  const Index dim = Tx.rows();
  const Matrix I = Matrix::Identity(dim, dim);
  Matrix gx = Tx2 - Tx * Tx;
  Matrix gs = (I - Tx2) - Ts * Ts;
  gx = 0.5 * (gx + gx.adjoint()).eval();
  gs = 0.5 * (gs + gs.adjoint()).eval();
  const Matrix Ax = psd_sqrt(gx, tol);
  const Matrix As = psd_sqrt(gs, tol);
  Matrix D(dim, 4 * dim);
  for (Index k = 0; k < dim; ++k) {
    D.col(2 * k) = Tx.col(k);
    D.col(2 * k + 1) = Ts.col(k);
    D.col(2 * dim + 2 * k) = Ax.col(k);
    D.col(2 * dim + 2 * k + 1) = As.col(k);
  }
  return FiniteFrame(D);
}

inline Symbol alternating_symbol(std::size_t nominal_length) {
  LimitStructure st{{{2, 0, Complex(1.0, 0.0), Majorant::none()}, {2, 1, Complex(0.0, 0.0), Majorant::none()}}};
  return Symbol::from_generator([](std::size_t n) { return Complex(n % 2 == 0 ? 1.0 : 0.0, 0.0); }, st,
                                nominal_length);
}

inline ScenarioInstance example_fourier_x2(std::size_t size) {
  if (size < 4) throw DomainError("example_fourier_x2: need at least 4 modes");
  ScenarioInstance inst;
  inst.name = "example_fourier_x2";
  inst.params["size"] = static_cast<double>(size);
  inst.phi = fourier_x2_frame(size);
  inst.psi = inst.phi;
  const Symbol sym = alternating_symbol(static_cast<std::size_t>(inst.phi.size()));
  inst.symbol = sym.prefix(static_cast<std::size_t>(inst.phi.size()));
  StructuredFrame sf;
  sf.kind = StructuredFrame::Kind::closed_form;
  sf.name = "fourier_x2";
  sf.section = [](std::size_t s) { return fourier_x2_frame(s); };
  inst.model = StructuredModel{"example_fourier_x2", sf, sf, sym};
  inst.notes.push_back("band |n| <= " + std::to_string(size) +
                       "; out-of-band vectors aggregated into 2(2 size + 1) columns");

  const FiniteFrame phi = inst.phi;
  const Vector m = inst.symbol;
  inst.facts.push_back({"Parseval frame", Provenance::stated, [phi]() {
                          const FrameBounds b = frame_bounds(phi);
                          const double dev = std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 1.0));
                          return std::make_pair(dev <= 1e-10, "bound deviation " + detail::fmt(dev));
                        }});
  inst.facts.push_back({"multiplier is the compression of multiplication by x^2", Provenance::stated, [phi, m, size]() {
                          const Matrix M = assemble(m, phi, phi).matrix;
                          const double r = operator_norm(M - toeplitz_band(size, fourier_x2));
                          return std::make_pair(r <= 1e-10, "||M - P x^2 P|| = " + detail::fmt(r));
                        }});
  inst.facts.push_back({"eigenvalues real in [0, 1]", Provenance::derived, [phi, m]() {
                          const auto ev = general_eig(assemble(m, phi, phi).matrix);
                          double worst = 0.0;
                          for (const Complex& z : ev) {
                            worst = std::max({worst, std::abs(z.imag()), -z.real(), z.real() - 1.0});
                          }
                          return std::make_pair(worst <= 1e-9, "worst excursion " + detail::fmt(worst));
                        }});
  if (size >= 200) {
    inst.facts.push_back({"spectrum fills [0, 1] (max gap < 0.05)", Provenance::derived, [phi, m]() {
                            const HermitianEigen e = hermitian_eig(assemble(m, phi, phi).matrix);
                            double gap = std::max(e.values(0) - 0.0, 1.0 - e.values(e.values.size() - 1));
                            for (Index k = 1; k < e.values.size(); ++k) gap = std::max(gap, e.values(k) - e.values(k - 1));
                            return std::make_pair(gap < 0.05, "max gap " + detail::fmt(gap));
                          }});
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Diagonal pair (e_n / n, sqrt(1 - 1/n^2) e_n).

inline FiniteFrame diagonal_pair_frame(std::size_t s) {
  const Index n = static_cast<Index>(s);
  Matrix D = Matrix::Zero(n, 2 * n);
  for (Index k = 0; k < n; ++k) {
    const double inv = 1.0 / static_cast<double>(k + 1);
    D(k, 2 * k) = inv;
    D(k, 2 * k + 1) = std::sqrt(1.0 - inv * inv);
  }
  return FiniteFrame(D);
}

inline ScenarioInstance example_diagonal_pair(std::size_t size) {
  if (size < 1) throw DomainError("example_diagonal_pair: size must be positive");
  ScenarioInstance inst;
  inst.name = "example_diagonal_pair";
  inst.params["size"] = static_cast<double>(size);
  inst.phi = diagonal_pair_frame(size);
  inst.psi = inst.phi;
  const Symbol sym = alternating_symbol(2 * size);
  inst.symbol = sym.prefix(2 * size);
  StructuredFrame sf;
  sf.kind = StructuredFrame::Kind::closed_form;
  sf.name = "diagonal_pair";
  sf.section = [](std::size_t s) { return diagonal_pair_frame(s); };
  inst.model = StructuredModel{"example_diagonal_pair", sf, sf, sym};

  const FiniteFrame phi = inst.phi;
  const Vector m = inst.symbol;
  std::vector<Complex> inv_sq, inv;
  for (std::size_t n = 1; n <= size; ++n) {
    inv_sq.push_back(Complex(1.0 / static_cast<double>(n * n), 0.0));
    inv.push_back(Complex(1.0 / static_cast<double>(n), 0.0));
  }
  inst.facts.push_back({"Parseval frame", Provenance::derived, [phi]() {
                          const FrameBounds b = frame_bounds(phi);
                          const double dev = std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 1.0));
                          return std::make_pair(dev <= 1e-12, "bound deviation " + detail::fmt(dev));
                        }});
  inst.facts.push_back({"eigenvalues {1/n^2}", Provenance::derived, [phi, m, inv_sq]() {
                          return detail::close_sets(general_eig(assemble(m, phi, phi).matrix), inv_sq, 1e-12);
                        }});
  inst.facts.push_back({"point spectrum {1/n}", Provenance::stated, [phi, m, inv]() {
                          return detail::close_sets(general_eig(assemble(m, phi, phi).matrix), inv, 1e-9);
                        }});
  return inst;
}

// ---------------------------------------------------------------------------
// Duplicated orthonormal basis.

inline FiniteFrame duplicated_onb_frame(std::size_t s) {
  const Index n = static_cast<Index>(s);
  Matrix D = Matrix::Zero(n, 2 * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < n; ++k) {
    D(k, 2 * k) = r;
    D(k, 2 * k + 1) = r;
  }
  return FiniteFrame(D);
}

/// tau_n = (m_{2n-1} + m_{2n}) / 2.
inline std::vector<Complex> duplicated_averages(const Vector& m) {
  std::vector<Complex> tau;
  for (Index k = 0; k + 1 < m.size(); k += 2) tau.push_back(0.5 * (m(k) + m(k + 1)));
  std::sort(tau.begin(), tau.end(), lex_less);
  return tau;
}

inline ScenarioInstance example_duplicated_onb(std::size_t size, const Vector& m) {
  if (size < 1) throw DomainError("example_duplicated_onb: size must be positive");
  if (m.size() != static_cast<Index>(2 * size)) throw ShapeError("example_duplicated_onb: symbol must have length 2 size");
  ScenarioInstance inst;
  inst.name = "example_duplicated_onb";
  inst.params["size"] = static_cast<double>(size);
  inst.phi = duplicated_onb_frame(size);
  inst.psi = inst.phi;
  inst.symbol = m;
  StructuredFrame sf;
  sf.kind = StructuredFrame::Kind::closed_form;
  sf.name = "duplicated_onb";
  sf.section = [](std::size_t s) { return duplicated_onb_frame(s); };
  inst.model = StructuredModel{"example_duplicated_onb", sf, sf, Symbol::from_entries(m)};

  const FiniteFrame phi = inst.phi;
  const std::vector<Complex> tau = duplicated_averages(m);
  inst.facts.push_back({"spectrum contains tau", Provenance::stated, [phi, m, tau]() {
                          return detail::close_sets(general_eig(assemble(m, phi, phi).matrix), tau, 1e-12);
                        }});
  return inst;
}

// ---------------------------------------------------------------------------
// Excess-one Parseval frame with a zero-free secular function.

/// Index map p (1-based) -> j of the closed forms: p = 2 -> 1, odd p -> p,
/// even p >= 4 -> 3 - p.
inline long langley_j(std::size_t p) {
  if (p == 2) return 1;
  if (p % 2 == 1) return static_cast<long>(p);
  return 3 - static_cast<long>(p);
}

/// d^n (0-based n).
inline double langley_d(std::size_t n) {
  const std::size_t p = n + 1;
  if (p == 1) return 1.0 / std::sqrt(2.0 * (std::numbers::e + 1.0));
  const double j = static_cast<double>(langley_j(p));
  return 1.0 / std::sqrt(j * j * std::numbers::pi * std::numbers::pi + 1.0);
}

/// m_n (0-based n).
inline Complex langley_m(std::size_t n) {
  const std::size_t p = n + 1;
  if (p == 1) return {0.5, 0.0};
  const double j = static_cast<double>(langley_j(p));
  return 1.0 - 1.0 / Complex(1.0, j * std::numbers::pi);
}

/// Bound on sum_{n >= K} (d^n)^2, valid for K >= 4.
inline double langley_tail_sq(std::size_t K) {
  if (K < 4) return 1.0;
  return 1.0 / (std::numbers::pi * std::numbers::pi * (static_cast<double>(K) - 3.0));
}

inline Symbol langley_symbol(std::size_t nominal_length) {
  LimitStructure st{{{1, 0, Complex(1.0, 0.0), Majorant::power(1.25, 1.0)}}};
  return Symbol::from_generator(langley_m, st, nominal_length);
}

/// Parseval frame of K vectors in C^{K-1} whose synthesis kernel is spanned
/// by the first K entries of d, built from a Householder reflection.
inline FiniteFrame langley_frame(std::size_t K) {
  const Index n = static_cast<Index>(K);
  Eigen::VectorXd d(n);
  for (Index k = 0; k < n; ++k) d(k) = langley_d(static_cast<std::size_t>(k));
  d /= d.norm();
  Eigen::VectorXd v = d;
  v(0) -= 1.0;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  const double vv = v.squaredNorm();
  if (vv > 0.0) Q -= (2.0 / vv) * v * v.transpose();
  // Q is symmetric orthogonal with first column d; the remaining columns span
  // its orthogonal complement.
  return FiniteFrame(Q.rightCols(n - 1).transpose().cast<Complex>());
}

inline StructuredFrame langley_structured_frame() {
  StructuredFrame sf;
  sf.kind = StructuredFrame::Kind::riesz_with_excess;
  sf.name = "excess_one_langley";
  sf.excess = 1;
  sf.section = [](std::size_t K) { return langley_frame(K); };
  sf.kernel_entry = [](std::size_t, std::size_t n) { return Complex(langley_d(n), 0.0); };
  sf.kernel_tail_sq = langley_tail_sq;
  return sf;
}

inline ScenarioInstance example_excess_one_langley(std::size_t K) {
  if (K < 16) throw DomainError("example_excess_one_langley: truncation must be at least 16");
  ScenarioInstance inst;
  inst.name = "example_excess_one_langley";
  inst.params["truncation"] = static_cast<double>(K);
  const std::size_t section = std::min<std::size_t>(K, 512);
  inst.params["section"] = static_cast<double>(section);
  inst.phi = langley_frame(section);
  inst.psi = inst.phi;
  const Symbol sym = langley_symbol(K);
  inst.symbol = sym.prefix(section);
  const StructuredFrame sf = langley_structured_frame();
  inst.model = StructuredModel{"example_excess_one_langley", sf, sf, sym};
  if (section < K) inst.notes.push_back("dense section capped at 512 vectors; the secular path uses the full truncation");

  const FiniteFrame phi = inst.phi;
  const Vector m = inst.symbol;
  inst.facts.push_back({"limit points {1}", Provenance::stated, [sym]() {
                          return detail::close_sets(limit_points(sym), {Complex(1.0, 0.0)}, 0.0);
                        }});
  inst.facts.push_back({"sup |m_n| <= 1", Provenance::stated, [sym, K]() {
                          double s = 0.0;
                          for (std::size_t n = 0; n < K; ++n) s = std::max(s, std::abs(sym.at(n)));
                          return std::make_pair(s <= 1.0, "sup " + detail::fmt(s));
                        }});
  inst.facts.push_back({"||M|| <= 1 on the section", Provenance::stated, [phi, m]() {
                          const double nm = operator_norm(assemble(m, phi, phi).matrix);
                          return std::make_pair(nm <= 1.0 + 1e-12, "norm " + detail::fmt(nm));
                        }});
  inst.facts.push_back({"kernel majorant holds on the prefix", Provenance::derived, [K]() {
                          double tail = 0.0;
                          bool ok = true;
                          for (std::size_t n = K; n-- > 16;) {
                            tail += langley_d(n) * langley_d(n);
                            if (tail > langley_tail_sq(n)) ok = false;
                          }
                          return std::make_pair(ok, "partial tails below 1/(pi^2 (K - 3))");
                        }});
  inst.facts.push_back({"symbol majorant holds on the prefix", Provenance::derived, [sym, K]() {
                          const double v = structure_violation(sym, K);
                          return std::make_pair(v <= 0.0, "largest violation " + detail::fmt(v));
                        }});
  return inst;
}

// ---------------------------------------------------------------------------
// Random instances.

enum class SymbolProfile { generic, planted_zeros, planted_collisions, real_symbol, canonical_dual_pair };

inline const char* to_string(SymbolProfile p) {
  switch (p) {
    case SymbolProfile::generic: return "generic";
    case SymbolProfile::planted_zeros: return "planted_zeros";
    case SymbolProfile::planted_collisions: return "planted_collisions";
    case SymbolProfile::real_symbol: return "real_symbol";
    case SymbolProfile::canonical_dual_pair: return "canonical_dual_pair";
  }
  return "generic";
}

inline SymbolProfile parse_profile(const std::string& s) {
  for (SymbolProfile p : {SymbolProfile::generic, SymbolProfile::planted_zeros, SymbolProfile::planted_collisions,
                          SymbolProfile::real_symbol, SymbolProfile::canonical_dual_pair}) {
    if (s == to_string(p)) return p;
  }
  throw InputError("unknown symbol profile '" + s + "'");
}

/// mt19937_64 with explicit uniform and normal transforms, so draws do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  Complex cnormal() {
    const double a = normal();
    const double b = normal();
    return Complex(a, b) / std::sqrt(2.0);
  }
  Matrix gaussian(Index r, Index c) {
    Matrix g(r, c);
    for (Index j = 0; j < c; ++j) {
      for (Index i = 0; i < r; ++i) g(i, j) = cnormal();
    }
    return g;
  }

 private:
  std::mt19937_64 eng_;
  std::optional<double> spare_;
};

/// Frame with prescribed condition number: U diag(sigma) V^* with sigma
/// spread between 1 and 1/cond.
inline FiniteFrame random_frame(Rng& rng, Index d, Index N, double cond) {
  const Eigen::HouseholderQR<Matrix> qu(rng.gaussian(d, d));
  const Matrix U = qu.householderQ() * Matrix::Identity(d, d);
  const Eigen::HouseholderQR<Matrix> qv(rng.gaussian(N, d));
  const Matrix V = qv.householderQ() * Matrix::Identity(N, d);
  RealVector sigma(d);
  for (Index k = 0; k < d; ++k) {
    const double t = d == 1 ? 0.0 : (k == 0 ? 0.0 : (k == d - 1 ? 1.0 : rng.uniform()));
    sigma(k) = std::pow(cond, -t);
  }
  return FiniteFrame(U * sigma.cast<Complex>().asDiagonal() * V.adjoint());
}

/// A dual of phi: (D^+)^* + Z (I - D^+ D) for a random Z (Z = 0 gives the
/// canonical dual).
inline FiniteFrame random_dual(Rng& rng, const FiniteFrame& phi, double spread) {
  const FiniteFrame can = canonical_dual(phi);
  if (spread == 0.0 || phi.size() == phi.dim()) return can;
  const Matrix& D = phi.synthesis_matrix();
  const Matrix Dplus = can.synthesis_matrix().adjoint();  // N x d
  const Matrix P = Matrix::Identity(phi.size(), phi.size()) - Dplus * D;
  const Matrix Z = rng.gaussian(phi.dim(), phi.size()) * (spread / std::sqrt(static_cast<double>(phi.size())));
  return FiniteFrame(can.synthesis_matrix() + Z * P);
}

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

/// FNV-1a over the raw entries of both frames and the symbol.
inline std::string instance_hash(const FiniteFrame& phi, const FiniteFrame& psi, const Vector& m) {
  std::uint64_t h = 1469598103934665603ull;
  const Matrix& a = phi.synthesis_matrix();
  const Matrix& b = psi.synthesis_matrix();
  h = fnv1a(a.data(), sizeof(Complex) * static_cast<std::size_t>(a.size()), h);
  h = fnv1a(b.data(), sizeof(Complex) * static_cast<std::size_t>(b.size()), h);
  h = fnv1a(m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size()), h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline ScenarioInstance random_instance(std::uint64_t seed, Index d, Index N, SymbolProfile profile,
                                        double max_cond = 1e3) {
  if (d < 1 || N < d) throw DomainError("random_instance: need N >= d >= 1");
  Rng rng(seed);
  ScenarioInstance inst;
  inst.name = "random_instance";
  inst.params["seed"] = static_cast<double>(seed);
  inst.params["d"] = static_cast<double>(d);
  inst.params["N"] = static_cast<double>(N);
  const double cond = std::exp(rng.uniform(0.0, std::log(max_cond)));
  inst.params["cond"] = cond;
  inst.phi = random_frame(rng, d, N, cond);
  const bool canonical = profile == SymbolProfile::canonical_dual_pair;
  inst.psi = random_dual(rng, inst.phi, canonical ? 0.0 : rng.uniform(0.0, 1.0));

  Vector m(N);
  switch (profile) {
    case SymbolProfile::generic:
    case SymbolProfile::canonical_dual_pair:
      for (Index n = 0; n < N; ++n) m(n) = rng.cnormal();
      break;
    case SymbolProfile::real_symbol:
      for (Index n = 0; n < N; ++n) m(n) = Complex(rng.uniform(-2.0, 2.0), 0.0);
      break;
    case SymbolProfile::planted_zeros: {
      for (Index n = 0; n < N; ++n) m(n) = rng.cnormal();
      const std::size_t q = static_cast<std::size_t>(N - d);
      const std::size_t zeros = 1 + rng.index(std::min<std::size_t>(static_cast<std::size_t>(N), q + 2));
      std::vector<Index> idx(static_cast<std::size_t>(N));
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t k = 0; k < zeros; ++k) {
        std::swap(idx[k], idx[k + rng.index(idx.size() - k)]);
        m(idx[k]) = 0.0;
      }
      break;
    }
    case SymbolProfile::planted_collisions: {
      std::vector<Complex> pool(2 + rng.index(2));
      for (Complex& p : pool) p = rng.cnormal();
      if (rng.uniform() < 0.5) pool[0] = 0.0;
      for (Index n = 0; n < N; ++n) m(n) = pool[rng.index(pool.size())];
      break;
    }
  }
  inst.symbol = m;
  inst.params["profile"] = static_cast<double>(static_cast<int>(profile));
  inst.notes.push_back(std::string("profile ") + to_string(profile));
  inst.notes.push_back("hash " + instance_hash(inst.phi, inst.psi, inst.symbol));

  const FiniteFrame phi = inst.phi, psi = inst.psi;
  inst.facts.push_back({"dual pair", Provenance::derived, [phi, psi]() {
                          const DualityCheck c = is_dual_pair(phi, psi);
                          return std::make_pair(c.residual <= 1e-10, "residual " + detail::fmt(c.residual));
                        }});
  if (profile == SymbolProfile::planted_zeros) {
    inst.facts.push_back({"symbol has an exact zero", Provenance::trivial, [m]() {
                            bool z = false;
                            for (Index n = 0; n < m.size(); ++n) z = z || m(n) == Complex(0.0, 0.0);
                            return std::make_pair(z, "");
                          }});
  }
  return inst;
}

/// Scenario by stable CLI name.
inline ScenarioInstance build_scenario(const std::string& name, std::size_t size) {
  if (name == "example_interleaved_onb") return example_interleaved_onb(size);
  if (name == "example_fourier_x2") return example_fourier_x2(size);
  if (name == "example_diagonal_pair") return example_diagonal_pair(size);
  if (name == "example_excess_one_langley") return example_excess_one_langley(size);
  if (name == "example_duplicated_onb") {
    Vector m(static_cast<Index>(2 * size));
    for (Index k = 0; k < m.size(); ++k) m(k) = (k % 2 == 0) ? 1.0 : -1.0;
    return example_duplicated_onb(size, m);
  }
  throw InputError("unknown scenario '" + name + "'");
}

}  // namespace dfm
