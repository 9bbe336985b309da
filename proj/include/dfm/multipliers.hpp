#pragma once

// Dual frame multipliers M = D_{m phi} C_psi, their adjoints and the
// kernel/range characterisation of injectivity, surjectivity and bijectivity.

#include <dfm/frames.hpp>

#include <optional>
#include <string>

namespace dfm {

struct MultiplierInstance {
  Vector symbol;  // length N (first N entries of the symbol)
  FiniteFrame phi;
  FiniteFrame psi;
  Matrix matrix;  // d x d
};

inline void require_compatible(const Vector& m, const FiniteFrame& phi, const FiniteFrame& psi, const char* what) {
  if (phi.dim() != psi.dim()) throw ShapeError(std::string(what) + ": frames live in different dimensions");
  if (phi.size() != psi.size()) throw ShapeError(std::string(what) + ": frames have different lengths");
  if (m.size() < phi.size()) throw ShapeError(std::string(what) + ": symbol shorter than the frames");
  require_finite(m, what);
}

/// M f = sum_n m_n <f, psi_n> phi_n.
inline MultiplierInstance assemble(const Vector& m, const FiniteFrame& phi, const FiniteFrame& psi) {
  require_compatible(m, phi, psi, "assemble");
  const Vector mm = m.head(phi.size());
  Matrix M = phi.synthesis_matrix() * mm.asDiagonal() * psi.synthesis_matrix().adjoint();
  return {mm, phi, psi, std::move(M)};
}

/// ||D_{m phi} C_psi - D_phi C_{m* psi}||_2.
inline double factorization_residual(const MultiplierInstance& inst) {
  const Matrix a = scaled_frame(inst.symbol, inst.phi).synthesis_matrix() * inst.psi.analysis_matrix();
  const Matrix b = inst.phi.synthesis_matrix() * scaled_frame(inst.symbol.conjugate(), inst.psi).analysis_matrix();
  return operator_norm(a - b);
}

/// M_{m*, psi, phi}.
inline MultiplierInstance adjoint(const MultiplierInstance& inst) {
  return assemble(inst.symbol.conjugate(), inst.psi, inst.phi);
}

/// Decision for one of the equivalent statements, with the ranks behind it.
struct Criterion {
  bool holds = false;
  Index dim_first = 0;   // dimension of the kernel part
  Index dim_second = 0;  // dimension of the range part
  Index dim_sum = 0;     // rank of the stacked bases
};

struct InvertibilityReport {
  bool injective = false;
  bool surjective = false;
  bool bijective = false;

  // The statements of each characterisation, evaluated independently.
  bool injective_via_psi = false;       // psi complete, N(D_{m phi}) ∩ R(C_psi) = 0
  bool injective_via_mpsi = false;      // m psi complete, N(D_phi) ∩ R(C_{m* psi}) = 0
  bool surjective_via_phi = false;      // phi frame, N(D_phi) + R(C_{m* psi}) = l2
  bool surjective_via_mphi = false;     // m phi frame, N(D_{m phi}) + R(C_psi) = l2
  bool bijective_via_phi = false;       // direct-sum variant of the above
  bool bijective_via_mphi = false;
  bool bijective_via_psi = false;       // psi frame, N(D_psi) ∔ R(C_{m phi}) = l2
  bool bijective_via_mstar_psi = false; // m psi frame, N(D_{m* psi}) ∔ R(C_phi) = l2

  Index direct_rank = 0;  // numerical rank of M itself
  bool consistent = false;  // all statements agree with the direct rank test

  std::optional<Vector> kernel_witness;        // f != 0 with M f = 0
  std::optional<Vector> intersection_witness;  // w in N(D_{m phi}) ∩ R(C_psi)
  std::optional<Vector> unattained_witness;    // g orthogonal to R(M)
};

namespace detail {

inline Criterion intersection_trivial(const Matrix& a, const Matrix& b, const TolerancePolicy& tol) {
  Matrix stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  const Index r = stacked.cols() == 0 ? 0 : numerical_rank(stacked, tol, 1.0);
  return {r == a.cols() + b.cols(), a.cols(), b.cols(), r};
}

inline Criterion sum_is_everything(const Matrix& a, const Matrix& b, const TolerancePolicy& tol) {
  Matrix stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  const Index r = stacked.cols() == 0 ? 0 : numerical_rank(stacked, tol, 1.0);
  return {r == a.rows(), a.cols(), b.cols(), r};
}

inline Criterion direct_sum_is_everything(const Matrix& a, const Matrix& b, const TolerancePolicy& tol) {
  Criterion c = sum_is_everything(a, b, tol);
  c.holds = c.holds && (a.cols() + b.cols() == a.rows());
  return c;
}

/// Basis of N(D) (coefficient space) for a synthesis matrix D.
inline Matrix kernel_of(const Matrix& synthesis, const TolerancePolicy& tol, double scale) {
  return nullspace_basis(synthesis, tol, scale);
}

/// Basis of R(C) = R(D^*) for a synthesis matrix D.
inline Matrix range_of_analysis(const Matrix& synthesis, const TolerancePolicy& tol, double scale) {
  return range_basis(synthesis.adjoint(), tol, scale);
}

}  // namespace detail

/// Decides injectivity, surjectivity and bijectivity of M_{m,phi,psi} through
/// the kernel/range statements and cross-checks them against the rank of M.
inline InvertibilityReport invertibility_report(const Vector& m_in, const FiniteFrame& phi, const FiniteFrame& psi,
                                                const TolerancePolicy& tol = {}) {
  require_compatible(m_in, phi, psi, "invertibility_report");
  const Vector m = m_in.head(phi.size());
  const Index d = phi.dim();
  const double mmax = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  const double nphi = operator_norm(phi.synthesis_matrix());
  const double npsi = operator_norm(psi.synthesis_matrix());
  // Absolute scales keep an exactly cancelled operator (M = 0 up to roundoff)
  // from being declared full rank by a purely relative threshold.
  const double s_phi = nphi, s_psi = npsi;
  const double s_mphi = nphi * mmax, s_mpsi = npsi * mmax;
  const double s_M = nphi * npsi * mmax;

  const Matrix& Dphi = phi.synthesis_matrix();
  const Matrix& Dpsi = psi.synthesis_matrix();
  const Matrix Dmphi = Dphi * m.asDiagonal();
  const Matrix Dmpsi = Dpsi * m.asDiagonal();
  const Matrix Dmstarpsi = Dpsi * m.conjugate().asDiagonal();

  const bool phi_complete = is_complete(Dphi, tol, s_phi);
  const bool psi_complete = is_complete(Dpsi, tol, s_psi);
  const bool mphi_complete = is_complete(Dmphi, tol, s_mphi);
  const bool mpsi_complete = is_complete(Dmpsi, tol, s_mpsi);

  const Matrix N_phi = detail::kernel_of(Dphi, tol, s_phi);
  const Matrix N_psi = detail::kernel_of(Dpsi, tol, s_psi);
  const Matrix N_mphi = detail::kernel_of(Dmphi, tol, s_mphi);
  const Matrix N_mstarpsi = detail::kernel_of(Dmstarpsi, tol, s_mpsi);
  const Matrix R_psi = detail::range_of_analysis(Dpsi, tol, s_psi);
  const Matrix R_phi = detail::range_of_analysis(Dphi, tol, s_phi);
  const Matrix R_mstarpsi = detail::range_of_analysis(Dmstarpsi, tol, s_mpsi);
  const Matrix R_mphi = detail::range_of_analysis(Dmphi, tol, s_mphi);

  InvertibilityReport rep;
  const Criterion inj_b = detail::intersection_trivial(N_mphi, R_psi, tol);
  const Criterion inj_c = detail::intersection_trivial(N_phi, R_mstarpsi, tol);
  rep.injective_via_psi = psi_complete && inj_b.holds;
  rep.injective_via_mpsi = mpsi_complete && inj_c.holds;

  rep.surjective_via_phi = phi_complete && detail::sum_is_everything(N_phi, R_mstarpsi, tol).holds;
  rep.surjective_via_mphi = mphi_complete && detail::sum_is_everything(N_mphi, R_psi, tol).holds;

  rep.bijective_via_phi = phi_complete && detail::direct_sum_is_everything(N_phi, R_mstarpsi, tol).holds;
  rep.bijective_via_mphi = mphi_complete && detail::direct_sum_is_everything(N_mphi, R_psi, tol).holds;
  rep.bijective_via_psi = psi_complete && detail::direct_sum_is_everything(N_psi, R_mphi, tol).holds;
  rep.bijective_via_mstar_psi = mpsi_complete && detail::direct_sum_is_everything(N_mstarpsi, R_phi, tol).holds;

  rep.injective = rep.injective_via_psi;
  rep.surjective = rep.surjective_via_phi;
  rep.bijective = rep.bijective_via_phi;

  const Matrix M = Dmphi * Dpsi.adjoint();
  rep.direct_rank = numerical_rank(M, tol, s_M);
  const bool direct_inj = rep.direct_rank == d;
  rep.consistent = rep.injective_via_psi == direct_inj && rep.injective_via_mpsi == direct_inj &&
                   rep.surjective_via_phi == direct_inj && rep.surjective_via_mphi == direct_inj &&
                   rep.bijective_via_phi == direct_inj && rep.bijective_via_mphi == direct_inj &&
                   rep.bijective_via_psi == direct_inj && rep.bijective_via_mstar_psi == direct_inj &&
                   rep.bijective == (rep.injective && rep.surjective);

  if (!rep.injective) {
    const Matrix ker = nullspace_basis(M, tol, s_M);
    if (ker.cols() > 0) rep.kernel_witness = ker.col(0);
  }
  if (!inj_b.holds) {
    // (a, b) in the kernel of [N | -R] gives N a = R b in the intersection.
    Matrix stacked(N_mphi.rows(), N_mphi.cols() + R_psi.cols());
    stacked << N_mphi, -R_psi;
    const Matrix ker = nullspace_basis(stacked, tol, 1.0);
    if (ker.cols() > 0) {
      Vector w = N_mphi * ker.col(0).head(N_mphi.cols());
      if (w.norm() > 0.0) rep.intersection_witness = w / w.norm();
    }
  }
  if (!rep.surjective) {
    const Matrix coker = nullspace_basis(M.adjoint(), tol, s_M);
    if (coker.cols() > 0) rep.unattained_witness = coker.col(0);
  }
  return rep;
}

inline InvertibilityReport invertibility_report(const MultiplierInstance& inst, const TolerancePolicy& tol = {}) {
  return invertibility_report(inst.symbol, inst.phi, inst.psi, tol);
}

}  // namespace dfm
