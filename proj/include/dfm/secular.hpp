#pragma once

// The q x q matrix A_lambda = (<u_i, v_j>) with u_i^n = d_i^n / (m_n - lambda),
// its determinant with a certified error bound, and an argument-principle
// root search for det A_lambda = 0.

#include <dfm/multipliers.hpp>
#include <dfm/symbols.hpp>

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dfm {

/// Kernel sequences of the two frames together with the symbol.
struct SecularData {
  std::size_t q = 0;
  std::optional<std::size_t> length;  // N for finite data, empty for infinite sequences
  std::function<Complex(std::size_t, std::size_t)> d;  // (i, n) -> d_i^n
  std::function<Complex(std::size_t, std::size_t)> v;  // (j, n) -> v_j^n
  Symbol symbol;
  /// Bounds on max_i sum_{n >= K} |d_i^n|^2 and max_j sum_{n >= K} |v_j^n|^2.
  std::function<double(std::size_t)> d_tail_sq;
  std::function<double(std::size_t)> v_tail_sq;
  std::vector<Index> index_set;

  double cross_tail(std::size_t K) const {
    if (q == 0 || (length && K >= *length)) return 0.0;
    return std::sqrt(d_tail_sq(K) * v_tail_sq(K));
  }
};

/// Finite data: d_i from the kernel basis of phi, v_j from the kernel basis of
/// psi (any spanning set of N(D_psi) works).
inline SecularData secular_data(const MultiplierInstance& inst, const TolerancePolicy& tol = {}) {
  const KernelBasis kd = kernel_basis(inst.phi, tol);
  const KernelBasis kv = kernel_basis(inst.psi, tol);
  if (kd.sequences.cols() != kv.sequences.cols()) {
    throw DomainError("secular_data: frames have different excess (not a dual pair?)");
  }
  SecularData s;
  s.q = static_cast<std::size_t>(kd.sequences.cols());
  const std::size_t N = static_cast<std::size_t>(inst.phi.size());
  s.length = N;
  const Matrix dm = kd.sequences, vm = kv.sequences;
  s.d = [dm](std::size_t i, std::size_t n) { return dm(static_cast<Index>(n), static_cast<Index>(i)); };
  s.v = [vm](std::size_t j, std::size_t n) { return vm(static_cast<Index>(n), static_cast<Index>(j)); };
  s.symbol = Symbol::from_entries(inst.symbol);
  s.d_tail_sq = [](std::size_t) { return 0.0; };
  s.v_tail_sq = [](std::size_t) { return 0.0; };
  s.index_set = kd.index_set;
  return s;
}

/// A pair of infinite frames given by rules, together with their symbol.
struct StructuredModel {
  std::string name;
  StructuredFrame phi;
  StructuredFrame psi;
  Symbol symbol;

  std::optional<std::size_t> excess() const {
    if (!phi.excess || !psi.excess || *phi.excess != *psi.excess) return std::nullopt;
    return phi.excess;
  }
};

inline SecularData secular_data(const StructuredModel& model) {
  if (!model.excess()) throw DomainError("secular_data: model does not have a common finite excess");
  if (!model.symbol.structure()) throw DomainError("secular_data: symbol has no declared limit structure");
  SecularData s;
  s.q = *model.excess();
  s.d = model.phi.kernel_entry;
  s.v = model.psi.kernel_entry;
  s.symbol = model.symbol;
  s.d_tail_sq = model.phi.kernel_tail_sq;
  s.v_tail_sq = model.psi.kernel_tail_sq;
  for (std::size_t i = 0; i < s.q; ++i) s.index_set.push_back(static_cast<Index>(i));
  if (s.q > 0 && (!s.d || !s.v || !s.d_tail_sq || !s.v_tail_sq)) {
    throw DomainError("secular_data: kernel rules or tail bounds missing");
  }
  return s;
}

struct SecularKernels {
  Matrix u;                      // K x q prefix, column i is u_i
  double tail_norm_bound = 0.0;  // bound on ||u_i beyond K||_2
};

/// u_i^n = d_i^n / (m_n - lambda) for n < K.
inline SecularKernels secular_kernels(const SecularData& data, Complex lambda, std::size_t K,
                                      const TolerancePolicy& tol = {}) {
  if (data.length) K = std::min(K, *data.length);
  SecularKernels out{Matrix(static_cast<Index>(K), static_cast<Index>(data.q)), 0.0};
  for (std::size_t n = 0; n < K; ++n) {
    const Complex gap = data.symbol.at(n) - lambda;
    if (std::abs(gap) <= tol.eig_atol) {
      throw DomainError("secular_kernels: lambda within eig_atol of symbol entry " + std::to_string(n));
    }
    for (std::size_t i = 0; i < data.q; ++i) out.u(static_cast<Index>(n), static_cast<Index>(i)) = data.d(i, n) / gap;
  }
  if (!data.length || K < *data.length) {
    const double delta = certified_tail_distance(data.symbol, lambda, K);
    out.tail_norm_bound = delta > 0.0 ? std::sqrt(data.d_tail_sq(K)) / delta
                                      : std::numeric_limits<double>::infinity();
  }
  return out;
}

struct SecularOptions {
  std::size_t initial_truncation = 64;
  std::size_t max_truncation = std::size_t{1} << 20;
  double relative_target = 1e-2;  // stop once error < relative_target * |value|
};

/// One evaluation of A_lambda, det A_lambda and the pole-cleared value
/// G(lambda) = det A_lambda * prod_{c in cleared} (c - lambda).
struct SecularValue {
  Matrix matrix;
  Matrix entry_error;
  Complex det{1.0, 0.0};
  double det_error = 0.0;
  Complex value{1.0, 0.0};
  double value_error = 0.0;
  std::size_t truncation = 0;
  double tail_distance = 0.0;
  bool conclusive = false;  // value_error < relative_target * |value|
  Complex log_derivative{0.0, 0.0};  // G'/G from the truncated sums, when requested

  bool certified_nonzero() const { return std::abs(value) > value_error; }
};

namespace detail {

/// |det(A + E) - det(A)| <= prod_j (||a_j|| + ||e_j||) - prod_j ||a_j||, plus a
/// roundoff allowance for the LU determinant itself.
inline double det_error_bound(const Matrix& a, const Matrix& e) {
  const Index q = a.cols();
  double p0 = 1.0, p1 = 1.0;
  for (Index j = 0; j < q; ++j) {
    p0 *= a.col(j).norm();
    p1 *= a.col(j).norm() + e.col(j).norm();
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return (p1 - p0) + (4.0 * static_cast<double>(q * q * q) + 4.0) * eps * p1;
}

inline Complex small_det(const Matrix& a) {
  if (a.rows() == 0) return Complex(1.0, 0.0);
  if (a.rows() == 1) return a(0, 0);
  if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

}  // namespace detail

/// Evaluates the secular matrix from precomputed tables of m_n and
/// d_i^n conj(v_j^n). Tables are built once, up to the truncation cap.
class SecularEvaluator {
 public:
  explicit SecularEvaluator(SecularData data, const TolerancePolicy& tol = {}, SecularOptions opt = {})
      : data_(std::move(data)), tol_(tol), opt_(opt) {
    cap_ = data_.length ? *data_.length : opt_.max_truncation;
    if (!data_.length && !data_.symbol.structure()) {
      throw DomainError("secular evaluator: infinite data needs a declared limit structure (tail bound unavailable)");
    }
    const std::size_t q = data_.q;
    m_.resize(cap_);
    w_.resize(cap_ * q * q);
    for (std::size_t n = 0; n < cap_; ++n) {
      m_[n] = data_.symbol.at(n);
      for (std::size_t i = 0; i < q; ++i) {
        const Complex di = data_.d(i, n);
        for (std::size_t j = 0; j < q; ++j) w_[(n * q + i) * q + j] = di * std::conj(data_.v(j, n));
      }
    }
  }

  const SecularData& data() const { return data_; }
  const SecularOptions& options() const { return opt_; }
  const TolerancePolicy& tolerance() const { return tol_; }
  std::size_t cap() const { return cap_; }
  bool finite() const { return data_.length.has_value(); }
  Complex symbol_entry(std::size_t n) const { return m_[n]; }

  /// Fixed truncation K (clamped to the table size).
  SecularValue evaluate(Complex lambda, std::size_t K, const std::vector<Complex>& cleared = {},
                        bool derivative = false) const {
    Accumulator acc(data_.q, derivative);
    K = std::min(K, cap_);
    accumulate(acc, lambda, 0, K, cleared);
    return finish(acc, lambda, K, cleared);
  }

  /// Doubles K from the initial truncation until the error is below
  /// relative_target * |value| or the cap is reached (inconclusive).
  SecularValue evaluate_adaptive(Complex lambda, const std::vector<Complex>& cleared = {},
                                 std::optional<std::size_t> start = std::nullopt, bool derivative = false) const {
    Accumulator acc(data_.q, derivative);
    std::size_t K = finite() ? cap_ : std::min(cap_, start.value_or(opt_.initial_truncation));
    std::size_t done = 0;
    while (true) {
      accumulate(acc, lambda, done, K, cleared);
      done = K;
      SecularValue val = finish(acc, lambda, K, cleared);
      if (val.conclusive || K >= cap_) return val;
      K = std::min(cap_, 2 * K);
    }
  }

 private:
  struct Accumulator {
    Accumulator(std::size_t q, bool derivative)
        : sum(Matrix::Zero(static_cast<Index>(q), static_cast<Index>(q))),
          abs_sum(Eigen::MatrixXd::Zero(static_cast<Index>(q), static_cast<Index>(q))),
          dsum(Matrix::Zero(static_cast<Index>(q), static_cast<Index>(q))),
          with_derivative(derivative) {}
    Matrix sum;
    Eigen::MatrixXd abs_sum;
    Matrix dsum;  // d/dlambda of sum
    bool with_derivative;
  };

  static bool is_cleared(Complex z, const std::vector<Complex>& cleared) {
    for (const Complex& c : cleared) {
      if (c == z) return true;
    }
    return false;
  }

  void accumulate(Accumulator& acc, Complex lambda, std::size_t from, std::size_t to,
                  const std::vector<Complex>& cleared) const {
    const std::size_t q = data_.q;
    for (std::size_t n = from; n < to; ++n) {
      const Complex gap = m_[n] - lambda;
      const double agap = std::abs(gap);
      if (agap == 0.0 || (agap <= tol_.eig_atol && !is_cleared(m_[n], cleared))) {
        throw DomainError("secular matrix: lambda within eig_atol of symbol entry " + std::to_string(n));
      }
      const Complex r = 1.0 / gap;
      const double ar = 1.0 / agap;
      const Complex* w = &w_[n * q * q];
      for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
          const Complex t = w[i * q + j];
          acc.sum(static_cast<Index>(i), static_cast<Index>(j)) += t * r;
          acc.abs_sum(static_cast<Index>(i), static_cast<Index>(j)) += std::abs(t) * ar;
        }
      }
      if (acc.with_derivative) {
        const Complex r2 = r * r;
        for (std::size_t i = 0; i < q; ++i) {
          for (std::size_t j = 0; j < q; ++j) acc.dsum(static_cast<Index>(i), static_cast<Index>(j)) += w[i * q + j] * r2;
        }
      }
    }
  }

  SecularValue finish(const Accumulator& acc, Complex lambda, std::size_t K,
                      const std::vector<Complex>& cleared) const {
    const double eps = std::numeric_limits<double>::epsilon();
    SecularValue out;
    out.truncation = K;
    out.matrix = acc.sum;
    double tail = 0.0;
    if (!finite() || K < cap_) {
      if (!finite()) {
        out.tail_distance = certified_tail_distance(data_.symbol, lambda, K);
        tail = out.tail_distance > 0.0 ? data_.cross_tail(K) / out.tail_distance
                                       : std::numeric_limits<double>::infinity();
      } else {
        tail = std::numeric_limits<double>::infinity();
      }
    }
    out.entry_error = ((static_cast<double>(K) + 4.0) * eps * acc.abs_sum).cast<Complex>();
    out.entry_error.array() += tail;
    out.det = detail::small_det(out.matrix);
    out.det_error = data_.q == 0 ? 0.0 : detail::det_error_bound(out.matrix, out.entry_error);
    Complex p(1.0, 0.0);
    for (const Complex& c : cleared) p *= (c - lambda);
    out.value = out.det * p;
    out.value_error = out.det_error * std::abs(p) +
                      4.0 * eps * static_cast<double>(cleared.size() + 1) * std::abs(out.value);
    out.conclusive = std::isfinite(out.value_error) && out.value_error < opt_.relative_target * std::abs(out.value);
    if (acc.with_derivative) {
      Complex ld(0.0, 0.0);
      if (data_.q > 0) {
        if (out.det == Complex(0.0, 0.0)) {
          ld = std::numeric_limits<double>::infinity();
        } else {
          ld = Eigen::PartialPivLU<Matrix>(out.matrix).solve(acc.dsum).trace();
        }
      }
      for (const Complex& c : cleared) ld -= 1.0 / (c - lambda);
      out.log_derivative = ld;
    }
    return out;
  }

  SecularData data_;
  TolerancePolicy tol_;
  SecularOptions opt_;
  std::size_t cap_ = 0;
  std::vector<Complex> m_;
  std::vector<Complex> w_;
};

/// A_lambda with entrywise error bounds at fixed truncation.
inline SecularValue secular_matrix(const SecularData& data, Complex lambda, std::size_t K,
                                   const TolerancePolicy& tol = {}) {
  SecularOptions opt;
  opt.max_truncation = std::max<std::size_t>(K, 1);
  return SecularEvaluator(data, tol, opt).evaluate(lambda, K);
}

/// det A_lambda, adaptive in K.
inline SecularValue secular_determinant(const SecularData& data, Complex lambda, const TolerancePolicy& tol = {},
                                        const SecularOptions& opt = {}) {
  return SecularEvaluator(data, tol, opt).evaluate_adaptive(lambda);
}

/// Closed rectangle or disk in the complex plane.
struct Region {
  enum class Kind { rectangle, disk };
  Kind kind = Kind::rectangle;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;  // rectangle
  Complex center{0.0, 0.0};                 // disk
  double radius = 1.0;

  static Region rectangle(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0) || !(y1 > y0)) throw DomainError("region: empty rectangle");
    Region r;
    r.kind = Kind::rectangle;
    r.x0 = x0;
    r.x1 = x1;
    r.y0 = y0;
    r.y1 = y1;
    return r;
  }
  static Region disk(Complex c, double rad) {
    if (!(rad > 0.0)) throw DomainError("region: radius must be positive");
    Region r;
    r.kind = Kind::disk;
    r.center = c;
    r.radius = rad;
    return r;
  }

  bool contains(Complex z) const {
    if (kind == Kind::disk) return std::abs(z - center) <= radius;
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }

  /// Distance from z to the boundary curve.
  double boundary_distance(Complex z) const {
    if (kind == Kind::disk) return std::abs(std::abs(z - center) - radius);
    const double dx = std::max({x0 - z.real(), 0.0, z.real() - x1});
    const double dy = std::max({y0 - z.imag(), 0.0, z.imag() - y1});
    if (dx > 0.0 || dy > 0.0) return std::hypot(dx, dy);
    return std::min({z.real() - x0, x1 - z.real(), z.imag() - y0, y1 - z.imag()});
  }

  /// Distance from z to the closed region (0 inside).
  double distance(Complex z) const {
    if (contains(z)) return 0.0;
    return boundary_distance(z);
  }

  double scale() const {
    if (kind == Kind::disk) return std::max(1.0, std::abs(center) + radius);
    return std::max({1.0, std::abs(x0), std::abs(x1), std::abs(y0), std::abs(y1)});
  }
};

struct ContourCertificate {
  Region region;
  long winding_count = 0;
  double min_modulus_on_boundary = 0.0;  // min |G| over the boundary samples
  double evaluation_tail_bound = 0.0;    // max error bound over the boundary samples
  double worst_ratio = 0.0;              // max over samples of error / |G|
  std::size_t samples = 0;
  std::size_t max_truncation = 0;
  bool valid = false;                    // every sample had |G| > error
};

struct SecularRoot {
  Complex value;
  std::size_t multiplicity = 1;
  ContourCertificate certificate;
  bool at_symbol = false;
};

struct SecularRoots {
  std::vector<SecularRoot> roots;         // zeros of det A_lambda off the symbol
  std::vector<SecularRoot> symbol_zeros;  // zeros of the pole-cleared function at symbol entries
  std::vector<Complex> cleared;           // symbol entries inside the region
  ContourCertificate region_certificate;
  bool complete = false;                  // every certificate valid and all zeros isolated
  std::size_t evaluations = 0;
};

struct RootSearchOptions {
  std::size_t edge_samples = 16;    // initial samples per rectangle edge
  std::size_t circle_samples = 64;  // initial samples on a circle
  double max_arg_step = 0.39269908169872414;  // pi/8 between accepted neighbours
  std::size_t max_refine_depth = 24;
  std::size_t max_subdivision_depth = 120;
  std::size_t max_evaluations = 4000000;
  std::optional<std::size_t> start_truncation;
};

namespace detail {

class RootSearch {
 public:
  RootSearch(const SecularEvaluator& ev, const Region& region, const RootSearchOptions& opt)
      : ev_(ev), region_(region), opt_(opt), scale_(region.scale()) {}

  SecularRoots run();
  ContourCertificate boundary();

 private:
  struct Rect {
    double x0, x1, y0, y1;
    double size() const { return std::max(x1 - x0, y1 - y0); }
    Complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(Complex z, double pad = 0.0) const {
      return z.real() >= x0 - pad && z.real() <= x1 + pad && z.imag() >= y0 - pad && z.imag() <= y1 + pad;
    }
  };

  struct Scan {
    double arg = 0.0;
    ContourCertificate cert;
  };

  SecularValue eval(Complex z) {
    if (++evals_ > opt_.max_evaluations) throw BudgetError("secular_roots: evaluation budget exhausted");
    return ev_.evaluate_adaptive(z, cleared_, opt_.start_truncation, true);
  }

  void record(Scan& s, const SecularValue& v) {
    const double mod = std::abs(v.value);
    ContourCertificate& c = s.cert;
    if (c.samples == 0 || mod < c.min_modulus_on_boundary) c.min_modulus_on_boundary = mod;
    c.evaluation_tail_bound = std::max(c.evaluation_tail_bound, v.value_error);
    const double ratio = mod > 0.0 ? v.value_error / mod : std::numeric_limits<double>::infinity();
    c.worst_ratio = std::max(c.worst_ratio, ratio);
    c.max_truncation = std::max(c.max_truncation, v.truncation);
    ++c.samples;
    if (!(mod > v.value_error)) c.valid = false;
  }

  // Phase change along z(t) on [ta, tb], refined until neighbouring samples
  // differ in argument by less than max_arg_step.
  template <class Path>
  double refine(const Path& path, double ta, const SecularValue& fa, double tb, const SecularValue& fb,
                std::size_t depth, Scan& s) {
    const double d = std::arg(fb.value / fa.value);
    const bool trusted = fa.certified_nonzero() && fb.certified_nonzero();
    // Endpoint phases alone can alias a full turn; also bound the step by
    // the logarithmic derivative at both ends.
    const double h = std::abs(path(tb) - path(ta));
    const double slope = std::max(std::abs(fa.log_derivative), std::abs(fb.log_derivative));
    const bool smooth = std::abs(d) <= opt_.max_arg_step && h * slope <= 2.0 * opt_.max_arg_step;
    if (smooth || depth >= opt_.max_refine_depth || !trusted) return d;
    const double tm = 0.5 * (ta + tb);
    const SecularValue fm = eval(path(tm));
    record(s, fm);
    return refine(path, ta, fa, tm, fm, depth + 1, s) + refine(path, tm, fm, tb, fb, depth + 1, s);
  }

  template <class Path>
  void scan_path(const Path& path, std::size_t pieces, Scan& s) {
    SecularValue prev = eval(path(0.0));
    record(s, prev);
    const SecularValue first = prev;
    for (std::size_t k = 1; k <= pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      SecularValue cur = (k == pieces) ? first : eval(path(t));
      if (k != pieces) record(s, cur);
      s.arg += refine(path, static_cast<double>(k - 1) / static_cast<double>(pieces), prev, t, cur, 0, s);
      prev = std::move(cur);
    }
  }

  Scan scan_rect(const Rect& r) {
    Scan s;
    s.cert.valid = true;
    s.cert.region = Region::rectangle(r.x0, r.x1, r.y0, r.y1);
    const Complex a(r.x0, r.y0), b(r.x1, r.y0), c(r.x1, r.y1), d(r.x0, r.y1);
    auto path = [&](double t) {
      const double u = 4.0 * t;
      if (u < 1.0) return a + (b - a) * u;
      if (u < 2.0) return b + (c - b) * (u - 1.0);
      if (u < 3.0) return c + (d - c) * (u - 2.0);
      return d + (a - d) * std::min(1.0, u - 3.0);
    };
    scan_path(path, 4 * opt_.edge_samples, s);
    finish(s);
    return s;
  }

  Scan scan_circle(Complex c, double rad) {
    Scan s;
    s.cert.valid = true;
    s.cert.region = Region::disk(c, rad);
    auto path = [&](double t) { return c + rad * std::polar(1.0, 2.0 * std::numbers::pi * t); };
    scan_path(path, opt_.circle_samples, s);
    finish(s);
    return s;
  }

  static void finish(Scan& s) {
    const double w = s.arg / (2.0 * std::numbers::pi);
    s.cert.winding_count = std::lround(w);
    if (std::abs(w - static_cast<double>(s.cert.winding_count)) > 0.1) s.cert.valid = false;
  }

  // Newton's method on G with step mult * G / G', which keeps quadratic
  // convergence at a root of known multiplicity.
  bool newton(Complex start, long mult, const Rect& r, Complex& root) {
    Complex z = start;
    try {
      for (int it = 0; it < 80; ++it) {
        for (const Complex& c : cleared_) {
          if (std::abs(z - c) <= 1e-13 * scale_) {
            root = c;
            return r.contains(root);
          }
        }
        const SecularValue v = eval(z);
        if (v.value == Complex(0.0, 0.0)) break;
        const Complex ld = v.log_derivative;
        if (ld == Complex(0.0, 0.0) || !std::isfinite(std::abs(ld))) return false;
        const Complex step = static_cast<double>(std::max<long>(mult, 1)) / ld;
        z -= step;
        if (!std::isfinite(std::abs(z)) || !r.contains(z, 0.5 * r.size())) return false;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(scale_, std::abs(z))) break;
      }
    } catch (const DomainError&) {
      return false;
    }
    root = z;
    return r.contains(root);
  }

  // Smallest circle around z (radius growing by 10x) whose scan is valid and
  // winds `expected` times.
  std::optional<Scan> local_certificate(Complex z, long expected, const Rect& r) {
    const double limit = 0.5 * r.size();
    for (double rho = 1e-10 * scale_; rho <= limit; rho *= 10.0) {
      Scan s;
      try {
        s = scan_circle(z, rho);
      } catch (const DomainError&) {
        continue;
      }
      if (!s.cert.valid) continue;
      if (s.cert.winding_count == expected) return s;
      return std::nullopt;
    }
    return std::nullopt;
  }

  // Split position along [lo, hi] kept away from cleared points and known roots.
  double split_position(double lo, double hi, bool along_x, int attempt) const {
    static const double fractions[] = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7, 0.47, 0.53};
    const double width = hi - lo;
    for (int k = attempt; k < attempt + 11; ++k) {
      const double pos = lo + fractions[k % 11] * width;
      bool ok = true;
      for (const Complex& c : cleared_) {
        const double coord = along_x ? c.real() : c.imag();
        if (std::abs(coord - pos) < 1e-3 * width) ok = false;
      }
      if (ok) return pos;
    }
    return lo + fractions[attempt % 11] * width;
  }

  void add_root(Complex z, long mult, const ContourCertificate& cert) {
    SecularRoot root{z, static_cast<std::size_t>(mult), cert, false};
    for (const Complex& c : cleared_) {
      if (std::abs(z - c) <= std::max(ev_.tolerance().eig_atol, 1e-12 * scale_)) {
        root.at_symbol = true;
        root.value = c;
      }
    }
    (root.at_symbol ? out_.symbol_zeros : out_.roots).push_back(root);
  }

  void search(const Rect& top, long top_winding, const ContourCertificate& top_cert);
  void prepare();

  const SecularEvaluator& ev_;
  Region region_;
  RootSearchOptions opt_;
  double scale_;
  std::vector<Complex> cleared_;
  std::size_t evals_ = 0;
  SecularRoots out_;
  bool isolated_ = true;
};

inline void RootSearch::search(const Rect& top, long top_winding, const ContourCertificate& top_cert) {
  struct Item {
    Rect r;
    long w;
    ContourCertificate cert;
    std::size_t depth;
  };
  std::vector<Item> stack{{top, top_winding, top_cert, 0}};
  const double min_size = 1e-11 * scale_;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.w <= 0) continue;
    if (it.w == 1 || it.r.size() < 1e-6 * scale_) {
      Complex z;
      if (newton(it.r.center(), it.w, it.r, z)) {
        if (auto loc = local_certificate(z, it.w, it.r)) {
          add_root(z, it.w, loc->cert);
          continue;
        }
      }
    }
    if (it.r.size() < min_size || it.depth >= opt_.max_subdivision_depth) {
      if (it.depth >= opt_.max_subdivision_depth) isolated_ = false;
      add_root(it.r.center(), it.w, it.cert);
      continue;
    }
    const bool along_x = (it.r.x1 - it.r.x0) >= (it.r.y1 - it.r.y0);
    bool split = false;
    for (int attempt = 0; attempt < 6 && !split; ++attempt) {
      const double pos = along_x ? split_position(it.r.x0, it.r.x1, true, attempt)
                                 : split_position(it.r.y0, it.r.y1, false, attempt);
      Rect a = it.r, b = it.r;
      if (along_x) {
        a.x1 = pos;
        b.x0 = pos;
      } else {
        a.y1 = pos;
        b.y0 = pos;
      }
      Scan sa, sb;
      try {
        sa = scan_rect(a);
        sb = scan_rect(b);
      } catch (const DomainError&) {
        continue;
      }
      if (!sa.cert.valid || !sb.cert.valid) continue;
      if (sa.cert.winding_count + sb.cert.winding_count != it.w) continue;
      stack.push_back({b, sb.cert.winding_count, sb.cert, it.depth + 1});
      stack.push_back({a, sa.cert.winding_count, sa.cert, it.depth + 1});
      split = true;
    }
    if (!split) {
      // Cannot separate further at this precision: report a cluster.
      Complex z = it.r.center();
      Complex polished;
      if (newton(z, it.w, it.r, polished)) z = polished;
      add_root(z, it.w, it.cert);
      if (it.w > 1) isolated_ = false;
    }
  }
}

inline ContourCertificate RootSearch::boundary() {
  prepare();
  if (region_.kind == Region::Kind::disk) return scan_circle(region_.center, region_.radius).cert;
  return scan_rect({region_.x0, region_.x1, region_.y0, region_.y1}).cert;
}

inline void RootSearch::prepare() {
  // Symbol entries inside the region become poles of det A_lambda; clear them.
  const SecularData& data = ev_.data();
  std::size_t Kc = ev_.cap();
  if (!ev_.finite()) {
    for (const LimitClass& c : data.symbol.structure()->classes) {
      if (region_.distance(c.limit) <= ev_.tolerance().eig_atol) {
        throw DomainError("secular_roots: region touches the limit point (" + std::to_string(c.limit.real()) + ", " +
                          std::to_string(c.limit.imag()) + ")");
      }
    }
    Kc = 16;
    while (Kc < ev_.cap()) {
      bool clear = true;
      for (const LimitClass& c : data.symbol.structure()->classes) {
        if (region_.distance(c.limit) <= c.majorant.tail(Kc)) clear = false;
      }
      if (clear) break;
      Kc *= 2;
    }
    if (Kc >= ev_.cap()) throw BudgetError("secular_roots: symbol tail not separated from the region");
  }
  for (std::size_t n = 0; n < Kc; ++n) {
    const Complex mn = ev_.symbol_entry(n);
    if (region_.boundary_distance(mn) <= ev_.tolerance().eig_atol) {
      throw DomainError("secular_roots: region boundary within eig_atol of symbol entry " + std::to_string(n));
    }
    if (region_.contains(mn)) cleared_.push_back(mn);
  }
  out_.cleared = cleared_;
}

inline SecularRoots RootSearch::run() {
  prepare();
  Scan top;
  Rect box;
  if (region_.kind == Region::Kind::disk) {
    top = scan_circle(region_.center, region_.radius);
    box = {region_.center.real() - region_.radius, region_.center.real() + region_.radius,
           region_.center.imag() - region_.radius, region_.center.imag() + region_.radius};
  } else {
    box = {region_.x0, region_.x1, region_.y0, region_.y1};
    top = scan_rect(box);
  }
  out_.region_certificate = top.cert;
  if (top.cert.valid && top.cert.winding_count > 0) {
    if (region_.kind == Region::Kind::disk) {
      const Scan sq = scan_rect(box);
      if (sq.cert.valid) {
        search(box, sq.cert.winding_count, sq.cert);
      } else {
        isolated_ = false;
      }
      auto outside = [&](const SecularRoot& r) { return !region_.contains(r.value); };
      out_.roots.erase(std::remove_if(out_.roots.begin(), out_.roots.end(), outside), out_.roots.end());
      out_.symbol_zeros.erase(std::remove_if(out_.symbol_zeros.begin(), out_.symbol_zeros.end(), outside),
                              out_.symbol_zeros.end());
    } else {
      search(box, top.cert.winding_count, top.cert);
    }
  }
  auto by_value = [](const SecularRoot& a, const SecularRoot& b) { return lex_less(a.value, b.value); };
  std::sort(out_.roots.begin(), out_.roots.end(), by_value);
  std::sort(out_.symbol_zeros.begin(), out_.symbol_zeros.end(), by_value);
  std::size_t found = 0;
  bool certs = top.cert.valid;
  for (const auto* list : {&out_.roots, &out_.symbol_zeros}) {
    for (const SecularRoot& r : *list) {
      found += r.multiplicity;
      certs = certs && r.certificate.valid;
    }
  }
  out_.complete = certs && isolated_ && static_cast<long>(found) == top.cert.winding_count;
  out_.evaluations = evals_;
  return out_;
}

}  // namespace detail

/// All zeros of det A_lambda in the region, found by winding-number
/// subdivision of the pole-cleared function and polished by Newton's method
/// with the logarithmic derivative of the truncated sums.
inline SecularRoots secular_roots(const SecularEvaluator& ev, const Region& region, const RootSearchOptions& opt = {}) {
  return detail::RootSearch(ev, region, opt).run();
}

inline SecularRoots secular_roots(const SecularData& data, const Region& region, const TolerancePolicy& tol = {},
                                  const SecularOptions& sopt = {}, const RootSearchOptions& opt = {}) {
  const SecularEvaluator ev(data, tol, sopt);
  return secular_roots(ev, region, opt);
}

/// Winding number of the pole-cleared function along a region boundary.
inline ContourCertificate secular_winding(const SecularEvaluator& ev, const Region& region,
                                          const RootSearchOptions& opt = {}) {
  return detail::RootSearch(ev, region, opt).boundary();
}

}  // namespace dfm
