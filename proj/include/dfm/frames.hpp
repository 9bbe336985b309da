#pragma once

// Finite frames, their analysis/synthesis/frame operators, bounds, duals,
// excess and kernel sequences.

#include <dfm/numeric.hpp>

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dfm {

/// A finite family of N vectors in C^d, stored as the d x N synthesis matrix
/// (column n is the n-th frame vector).
class FiniteFrame {
 public:
  FiniteFrame() = default;

  explicit FiniteFrame(Matrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.cols() < 1) throw ShapeError("frame: needs at least one vector");
    if (synthesis_.rows() < 1) throw ShapeError("frame: ambient dimension must be positive");
    require_finite(synthesis_, "frame");
  }

  static FiniteFrame from_vectors(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw ShapeError("frame: needs at least one vector");
    Matrix d(vectors.front().size(), static_cast<Index>(vectors.size()));
    for (std::size_t n = 0; n < vectors.size(); ++n) {
      if (vectors[n].size() != d.rows()) throw ShapeError("frame: vectors differ in length");
      d.col(static_cast<Index>(n)) = vectors[n];
    }
    return FiniteFrame(std::move(d));
  }

  Index dim() const { return synthesis_.rows(); }
  Index size() const { return synthesis_.cols(); }
  Vector vector(Index n) const { return synthesis_.col(n); }

  /// D: coefficients -> C^d.
  const Matrix& synthesis_matrix() const { return synthesis_; }
  /// C = D^*: C^d -> coefficients.
  Matrix analysis_matrix() const { return synthesis_.adjoint(); }

 private:
  Matrix synthesis_;
};

struct FrameBounds {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
};

/// Kernel sequences d_i of the synthesis operator, normalised to the identity
/// on the excess index set.
struct KernelBasis {
  std::vector<Index> index_set;  // n_1 < ... < n_q
  Matrix sequences;              // N x q, column i is d_i
};

/// (C f)_n = <f, phi_n>.
inline Vector analysis(const FiniteFrame& frame, const Vector& f) {
  if (f.size() != frame.dim()) throw ShapeError("analysis: vector length differs from frame dimension");
  return frame.synthesis_matrix().adjoint() * f;
}

/// D c = sum_n c_n phi_n.
inline Vector synthesis(const FiniteFrame& frame, const Vector& c) {
  if (c.size() != frame.size()) throw ShapeError("synthesis: coefficient length differs from frame size");
  return frame.synthesis_matrix() * c;
}

inline bool is_frame(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  return numerical_rank(frame.synthesis_matrix(), tol) == frame.dim();
}

/// Completeness of a finite sequence: its synthesis matrix has rank d.
inline bool is_complete(const Matrix& synthesis, const TolerancePolicy& tol = {}, double scale = 0.0) {
  return numerical_rank(synthesis, tol, scale) == synthesis.rows();
}

inline void require_frame(const FiniteFrame& frame, const TolerancePolicy& tol, const char* what) {
  if (!is_frame(frame, tol)) {
    throw DomainError(std::string(what) + ": vectors do not span C^" + std::to_string(frame.dim()) +
                      " (not a frame)");
  }
}

/// S = D C.
inline Matrix frame_operator(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  require_frame(frame, tol, "frame_operator");
  const Matrix& d = frame.synthesis_matrix();
  return d * d.adjoint();
}

/// Optimal bounds: extreme eigenvalues of S.
inline FrameBounds frame_bounds(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  const HermitianEigen e = hermitian_eig(frame_operator(frame, tol), tol);
  return {e.values(0), e.values(e.values.size() - 1)};
}

/// Canonical dual S^{-1} phi_n. Formed as (D^+)^* from the SVD of D, which
/// equals S^{-1} D without squaring the condition number.
inline FiniteFrame canonical_dual(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  require_frame(frame, tol, "canonical_dual");
  Eigen::BDCSVD<Matrix> svd(frame.synthesis_matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector inv = svd.singularValues().cwiseInverse();
  return FiniteFrame(svd.matrixU() * inv.asDiagonal() * svd.matrixV().adjoint());
}

/// Canonical Parseval frame S^{-1/2} phi_n, the polar factor U V^* of D.
inline FiniteFrame canonical_parseval(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  require_frame(frame, tol, "canonical_parseval");
  Eigen::BDCSVD<Matrix> svd(frame.synthesis_matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return FiniteFrame(svd.matrixU() * svd.matrixV().adjoint());
}

struct DualityCheck {
  bool dual = false;
  double residual = 0.0;  // ||D_phi C_psi - I||_2
};

/// phi and psi are dual iff D_phi C_psi = I. The residual is symmetric in the
/// two frames because D_psi C_phi is the adjoint of D_phi C_psi.
inline DualityCheck is_dual_pair(const FiniteFrame& phi, const FiniteFrame& psi,
                                 const TolerancePolicy& tol = {}) {
  if (phi.dim() != psi.dim() || phi.size() != psi.size()) {
    throw ShapeError("is_dual_pair: frames differ in dimension or size");
  }
  const Matrix r = phi.synthesis_matrix() * psi.synthesis_matrix().adjoint() -
                   Matrix::Identity(phi.dim(), phi.dim());
  const double res = operator_norm(r);
  return {res <= tol.residual_atol, res};
}

/// dim N(D): N - rank(D).
inline Index excess(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  return frame.size() - numerical_rank(frame.synthesis_matrix(), tol);
}

inline bool is_riesz_basis(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  return frame.size() == frame.dim() && is_frame(frame, tol);
}

namespace detail {

inline Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

inline std::vector<Index> complement(Index n, const std::vector<Index>& removed) {
  std::vector<bool> drop(static_cast<std::size_t>(n), false);
  for (Index i : removed) drop[static_cast<std::size_t>(i)] = true;
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  return keep;
}

}  // namespace detail

/// Greedy excess index set: scan indices upward and drop each vector whose
/// removal keeps the remaining family spanning, until `excess` are dropped.
inline std::vector<Index> default_excess_index_set(const FiniteFrame& frame,
                                                   const TolerancePolicy& tol = {}) {
  require_frame(frame, tol, "default_excess_index_set");
  const Index q = excess(frame, tol);
  std::vector<Index> removed;
  for (Index n = 0; n < frame.size() && static_cast<Index>(removed.size()) < q; ++n) {
    std::vector<Index> trial = removed;
    trial.push_back(n);
    const Matrix rest = detail::select_columns(frame.synthesis_matrix(), detail::complement(frame.size(), trial));
    if (is_complete(rest, tol)) removed = std::move(trial);
  }
  return removed;
}

/// The unique d_i in N(D) with d_i[n_k] = delta_{ik} on the excess index set.
inline KernelBasis kernel_basis(const FiniteFrame& frame, std::vector<Index> index_set,
                                const TolerancePolicy& tol = {}) {
  require_frame(frame, tol, "kernel_basis");
  const Index q = excess(frame, tol);
  std::sort(index_set.begin(), index_set.end());
  if (std::adjacent_find(index_set.begin(), index_set.end()) != index_set.end()) {
    throw DomainError("kernel_basis: index set has repeated entries");
  }
  for (Index i : index_set) {
    if (i < 0 || i >= frame.size()) throw DomainError("kernel_basis: index out of range");
  }
  if (static_cast<Index>(index_set.size()) != q) {
    throw DomainError("kernel_basis: index set has " + std::to_string(index_set.size()) +
                      " entries but the excess is " + std::to_string(q));
  }
  const Matrix& d = frame.synthesis_matrix();
  const std::vector<Index> keep = detail::complement(frame.size(), index_set);
  const Matrix rest = detail::select_columns(d, keep);
  if (rest.cols() != frame.dim() || !is_complete(rest, tol)) {
    throw DomainError("kernel_basis: removing the index set does not leave a Riesz basis");
  }
  Eigen::PartialPivLU<Matrix> lu(rest);
  KernelBasis out{index_set, Matrix::Zero(frame.size(), q)};
  for (Index i = 0; i < q; ++i) {
    const Vector x = lu.solve(-d.col(index_set[static_cast<std::size_t>(i)]));
    out.sequences(index_set[static_cast<std::size_t>(i)], i) = 1.0;
    for (std::size_t k = 0; k < keep.size(); ++k) out.sequences(keep[k], i) = x(static_cast<Index>(k));
  }
  return out;
}

inline KernelBasis kernel_basis(const FiniteFrame& frame, const TolerancePolicy& tol = {}) {
  return kernel_basis(frame, default_excess_index_set(frame, tol), tol);
}

/// m phi = {m_n phi_n}; uses the first N symbol entries.
inline FiniteFrame scaled_frame(const Vector& m, const FiniteFrame& frame) {
  if (m.size() < frame.size()) throw ShapeError("scaled_frame: symbol shorter than the frame");
  return FiniteFrame(frame.synthesis_matrix() * m.head(frame.size()).asDiagonal());
}

/// An infinite frame described by rules: finite sections on demand, closed-form
/// kernel sequences and a summable majorant for their tails.
struct StructuredFrame {
  enum class Kind { riesz_with_excess, closed_form };

  Kind kind = Kind::closed_form;
  std::string name;
  std::optional<std::size_t> excess;  // empty: infinite excess
  /// Finite section with the given size parameter.
  std::function<FiniteFrame(std::size_t)> section;
  /// d_i^n for i < excess (0-based n).
  std::function<Complex(std::size_t, std::size_t)> kernel_entry;
  /// Upper bound on max_i sum_{n >= K} |d_i^n|^2.
  std::function<double(std::size_t)> kernel_tail_sq;
};

}  // namespace dfm
