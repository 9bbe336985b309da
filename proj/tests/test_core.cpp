#include <gtest/gtest.h>

#include <dfm/dfm.hpp>

#include "oracles.hpp"

using namespace dfm;

namespace {

Matrix random_matrix(std::uint64_t seed, Index r, Index c) {
  Rng rng(seed);
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rng.cnormal();
  return m;
}

FiniteFrame onb(Index d) { return FiniteFrame(Matrix::Identity(d, d)); }

FiniteFrame mercedes() {
  Matrix s(2, 3);
  const double c = std::sqrt(2.0 / 3.0);
  for (Index k = 0; k < 3; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / 3.0 + std::numbers::pi / 2.0;
    s(0, k) = c * std::cos(t);
    s(1, k) = c * std::sin(t);
  }
  return FiniteFrame(s);
}

FiniteFrame duplicated(Index d) { return duplicated_onb_frame(static_cast<std::size_t>(d)); }

}  // namespace

// numeric

TEST(Numeric, HermitianEigIdentityAndDiagonal) {
  EXPECT_TRUE(hermitian_eig(Matrix::Identity(3, 3)).values.isApprox(RealVector::Ones(3)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  const RealVector v = hermitian_eig(d).values;
  EXPECT_DOUBLE_EQ(v(0), -1.0);
  EXPECT_DOUBLE_EQ(v(1), 2.0);
}

TEST(Numeric, HermitianEigMatchesCharpolyRoots) {
  const Matrix g = random_matrix(11, 8, 8);
  const Matrix h = 0.5 * (g + g.adjoint());
  const RealVector v = hermitian_eig(h).values;
  std::vector<Complex> got(v.data(), v.data() + v.size());
  EXPECT_LE(oracle::match_distance(got, oracle::eigenvalues(h)), 1e-8);
}

TEST(Numeric, HermitianEigRejectsNonHermitian) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eig(a), DomainError);
}

TEST(Numeric, GeneralEigSmallCases) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = Complex(0, 1);
  a(1, 1) = Complex(0, -1);
  const auto e = general_eig(a);
  EXPECT_LE(oracle::match_distance(e, {Complex(0, 1), Complex(0, -1)}), 1e-14);
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1.0;
  for (const Complex& z : general_eig(j)) EXPECT_LE(std::abs(z), 1e-12);
}

TEST(Numeric, GeneralEigRootsOfCharpoly) {
  const Matrix a = random_matrix(12, 6, 6);
  const auto c = oracle::charpoly(a);
  const double scale = std::pow(operator_norm(a), 6);
  for (const Complex& z : general_eig(a)) {
    Complex p = c[0];
    for (std::size_t k = 1; k < c.size(); ++k) p = p * z + c[k];
    EXPECT_LE(std::abs(p), 1e-8 * scale);
  }
}

TEST(Numeric, Nullspace) {
  EXPECT_EQ(nullspace_basis(Matrix::Identity(4, 4)).cols(), 0);
  Matrix row(1, 3);
  row << 1.0, 1.0, 1.0;
  row /= std::sqrt(3.0);
  const Matrix n = nullspace_basis(row);
  ASSERT_EQ(n.cols(), 2);
  EXPECT_LE((row * n).norm(), 1e-14);
  EXPECT_LE((n.adjoint() * n - Matrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_EQ(nullspace_basis(duplicated(3).synthesis_matrix()).cols(), 3);
}

TEST(Numeric, PsdInvSqrt) {
  EXPECT_TRUE(psd_inv_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Matrix r = psd_inv_sqrt(d);
  EXPECT_NEAR(r(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 1).real(), 1.0 / 3.0, 1e-15);
  const Matrix g = random_matrix(13, 5, 5);
  const Matrix s = g.adjoint() * g + Matrix::Identity(5, 5);
  const Matrix q = psd_inv_sqrt(s);
  EXPECT_LE((q * s * q - Matrix::Identity(5, 5)).norm(), 1e-10);
}

TEST(Numeric, ToleranceValidation) {
  TolerancePolicy t;
  t.eig_atol = 0.0;
  EXPECT_THROW(t.validate(), DomainError);
}

// frames

TEST(Frames, AnalysisAndSynthesis) {
  Vector e1 = Vector::Zero(3);
  e1(0) = 1.0;
  EXPECT_TRUE(analysis(onb(3), e1).isApprox(e1));
  Matrix s(1, 2);
  s << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Vector f = Vector::Ones(1);
  const Vector c = analysis(FiniteFrame(s), f);
  EXPECT_NEAR(c(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c(1).real(), 1.0 / std::sqrt(2.0), 1e-15);

  Vector c2 = Vector::Zero(3);
  c2(1) = 1.0;
  EXPECT_TRUE(synthesis(onb(3), c2).isApprox(onb(3).vector(1)));
  EXPECT_EQ(synthesis(mercedes(), Vector::Zero(3)).norm(), 0.0);
}

TEST(Frames, AnalysisMatchesInnerProducts) {
  const FiniteFrame f(random_matrix(14, 4, 7));
  const Vector x = random_matrix(15, 4, 1).col(0);
  const Vector c = analysis(f, x);
  for (Index n = 0; n < 7; ++n) EXPECT_LE(std::abs(c(n) - f.vector(n).dot(x)), 1e-14);
  EXPECT_LE((f.synthesis_matrix() - f.analysis_matrix().adjoint()).norm(), 1e-12);
}

TEST(Frames, BoundsOfTightFrames) {
  const FrameBounds b = frame_bounds(onb(3));
  EXPECT_NEAR(b.lower, 1.0, 1e-14);
  EXPECT_NEAR(b.upper, 1.0, 1e-14);
  const FiniteFrame m = mercedes();
  EXPECT_LE((oracle::brute_duality(m.synthesis_matrix(), m.synthesis_matrix()) - Matrix::Identity(2, 2)).norm(), 1e-14);
  const FrameBounds bm = frame_bounds(m);
  EXPECT_NEAR(bm.lower, 1.0, 1e-14);
  EXPECT_NEAR(bm.upper, 1.0, 1e-14);
  const FrameBounds bi = frame_bounds(interleaved_frame(6));
  EXPECT_NEAR(bi.lower, 1.0, 1e-12);
  EXPECT_NEAR(bi.upper, 1.0, 1e-12);
}

TEST(Frames, CanonicalDualAndParseval) {
  EXPECT_TRUE(canonical_dual(onb(3)).synthesis_matrix().isApprox(Matrix::Identity(3, 3)));
  EXPECT_TRUE(canonical_parseval(onb(3)).synthesis_matrix().isApprox(Matrix::Identity(3, 3)));
  Matrix s = Matrix::Identity(2, 2);
  s(0, 0) = 2.0;
  const Matrix dual = canonical_dual(FiniteFrame(s)).synthesis_matrix();
  EXPECT_NEAR(dual(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(dual(1, 1).real(), 1.0, 1e-15);
  const FiniteFrame r(random_matrix(16, 4, 9));
  const Matrix p = canonical_parseval(r).synthesis_matrix();
  EXPECT_LE((oracle::brute_duality(p, p) - Matrix::Identity(4, 4)).norm(), 1e-10);
}

TEST(Frames, DualPairs) {
  EXPECT_TRUE(is_dual_pair(onb(3), onb(3)).dual);
  const FiniteFrame r(random_matrix(17, 3, 6));
  EXPECT_TRUE(is_dual_pair(r, canonical_dual(r)).dual);
  Matrix s = Matrix::Identity(2, 2);
  s(0, 0) = 2.0;
  const DualityCheck c = is_dual_pair(FiniteFrame(s), onb(2));
  EXPECT_FALSE(c.dual);
  EXPECT_NEAR(c.residual, 1.0, 1e-14);
  EXPECT_THROW(is_dual_pair(onb(2), onb(3)), ShapeError);
}

TEST(Frames, ExcessAndRiesz) {
  EXPECT_EQ(excess(onb(4)), 0);
  EXPECT_EQ(excess(mercedes()), 1);
  const FiniteFrame r(random_matrix(18, 3, 7));
  EXPECT_EQ(excess(r), excess(canonical_dual(r)));
  EXPECT_EQ(excess(r), 4);
  EXPECT_TRUE(is_riesz_basis(onb(3)));
  EXPECT_FALSE(is_riesz_basis(duplicated(3)));

  const FiniteFrame t(random_matrix(19, 4, 4));
  EXPECT_TRUE(is_riesz_basis(t));
  const FrameBounds b = frame_bounds(t);
  const RealVector sv = singular_values(t.synthesis_matrix());
  EXPECT_NEAR(b.upper, sv.maxCoeff() * sv.maxCoeff(), 1e-10 * b.upper);
  EXPECT_NEAR(b.lower, sv.minCoeff() * sv.minCoeff(), 1e-10 * b.upper);
}

TEST(Frames, KernelBasis) {
  Matrix s(1, 2);
  s << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const KernelBasis k = kernel_basis(FiniteFrame(s), std::vector<Index>{0});
  ASSERT_EQ(k.sequences.cols(), 1);
  EXPECT_NEAR(k.sequences(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(k.sequences(1, 0).real(), -1.0, 1e-14);

  const FiniteFrame m = mercedes();
  const KernelBasis km = kernel_basis(m, std::vector<Index>{0});
  EXPECT_NEAR(std::abs(km.sequences(0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_LE((m.synthesis_matrix() * km.sequences).norm(), 1e-14);
  // Mercedes vectors sum to zero, so d = (1, 1, 1).
  EXPECT_NEAR(std::abs(km.sequences(1, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(km.sequences(2, 0) - 1.0), 0.0, 1e-12);

  EXPECT_EQ(kernel_basis(onb(3), std::vector<Index>{}).sequences.cols(), 0);
  EXPECT_THROW(kernel_basis(m, std::vector<Index>{0, 0}), DomainError);
}

TEST(Frames, ScaledFrameKeepsExcess) {
  const FiniteFrame m = mercedes();
  EXPECT_TRUE(scaled_frame(Vector::Ones(3), m).synthesis_matrix().isApprox(m.synthesis_matrix()));
  Vector z = Vector::Ones(3);
  z(0) = 0.0;
  const FiniteFrame mz = scaled_frame(z, m);
  EXPECT_TRUE(is_frame(mz));
  EXPECT_EQ(excess(mz), 1);
  const FiniteFrame dup = duplicated(3);
  Vector alt(6);
  for (Index k = 0; k < 6; ++k) alt(k) = k % 2 ? -1.0 : 1.0;
  const FiniteFrame da = scaled_frame(alt, dup);
  EXPECT_TRUE(is_frame(da));
  EXPECT_EQ(excess(da), excess(dup));
}

// symbols

TEST(Symbols, LimitPoints) {
  LimitStructure one{{{1, 0, Complex(0, 0), Majorant::power(1.0, 1.0)}}};
  const Symbol s = Symbol::from_generator([](std::size_t n) { return Complex(1.0 / (n + 1.0), 0); }, one, 100);
  const auto lp = limit_points(s);
  ASSERT_EQ(lp.size(), 1u);
  EXPECT_EQ(lp[0], Complex(0, 0));

  const auto li = limit_points(interleaved_symbol(50));
  ASSERT_EQ(li.size(), 2u);
  EXPECT_EQ(li[0], Complex(0, 0));
  EXPECT_EQ(li[1], Complex(2, 0));

  Vector p(6);
  p << 1, 5, 1, 5, 1, 5;
  LimitStructure per{{{2, 0, Complex(1, 0), Majorant::none()}, {2, 1, Complex(5, 0), Majorant::none()}}};
  const auto lpp = limit_points(Symbol::from_entries(p, per));
  ASSERT_EQ(lpp.size(), 2u);
  EXPECT_EQ(lpp[1], Complex(5, 0));
  EXPECT_THROW(limit_points(Symbol::from_entries(p)), DomainError);
}

TEST(Symbols, CompactSplit) {
  const CompactSplit sp = compact_split(interleaved_symbol(40));
  for (std::size_t n = 0; n < 40; ++n) {
    EXPECT_EQ(sp.constant_part.at(n), n % 2 ? Complex(2, 0) : Complex(0, 0));
  }
  EXPECT_LE(std::abs(sp.vanishing_part.at(39)), 0.06);

  LimitStructure c{{{1, 0, Complex(3, 0), Majorant::none()}}};
  const CompactSplit cs = compact_split(Symbol::from_entries(Vector::Constant(5, 3.0), c));
  for (std::size_t n = 0; n < 5; ++n) {
    EXPECT_EQ(cs.constant_part.at(n), Complex(3, 0));
    EXPECT_EQ(cs.vanishing_part.at(n), Complex(0, 0));
  }

  LimitStructure l{{{1, 0, Complex(0.5, 0), Majorant::power(1.0, 1.0)}}};
  const CompactSplit ls = compact_split(
      Symbol::from_generator([](std::size_t n) { return Complex(0.5 + 1.0 / (n + 1.0), 0); }, l, 20));
  EXPECT_NEAR(ls.vanishing_part.at(3).real(), 0.25, 1e-15);
}

TEST(Symbols, DistanceTo) {
  Vector a(4);
  a << 1, 0, 1, 0;
  EXPECT_DOUBLE_EQ(distance_to(Symbol::from_entries(a), Complex(0.5, 0)), 0.5);
  EXPECT_DOUBLE_EQ(distance_to(Symbol::from_entries(a), Complex(1, 0)), 0.0);
  const Symbol s = interleaved_symbol(60);
  double brute = std::abs(Complex(3, 0) - Complex(2, 0));
  for (std::size_t n = 0; n < 60; ++n) brute = std::min(brute, std::abs(s.at(n) - Complex(3, 0)));
  EXPECT_DOUBLE_EQ(distance_to(s, Complex(3, 0)), brute);
  EXPECT_DOUBLE_EQ(brute, 1.0);
}

TEST(Symbols, MajorantViolation) {
  EXPECT_LE(structure_violation(interleaved_symbol(400), 400), 0.0);
  EXPECT_LE(structure_violation(langley_symbol(4096), 4096), 0.0);
  LimitStructure tight{{{1, 0, Complex(0, 0), Majorant::power(0.1, 1.0)}}};
  const Symbol bad = Symbol::from_generator([](std::size_t n) { return Complex(1.0 / (n + 1.0), 0); }, tight, 50);
  EXPECT_GT(structure_violation(bad, 50), 0.0);
}

// multipliers

TEST(Multipliers, AssembleIdentityOnDualPair) {
  const FiniteFrame r(random_matrix(20, 3, 6));
  const MultiplierInstance inst = assemble(Vector::Ones(6), r, canonical_dual(r));
  EXPECT_LE((inst.matrix - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Multipliers, DuplicatedOnbIsDiagonal) {
  Vector m(8);
  m << 1.0, 3.0, Complex(0, 2), 0.0, -1.0, -1.0, 0.5, 0.25;
  const MultiplierInstance inst = assemble(m, duplicated(4), duplicated(4));
  for (Index k = 0; k < 4; ++k) {
    EXPECT_LE(std::abs(inst.matrix(k, k) - 0.5 * (m(2 * k) + m(2 * k + 1))), 1e-15);
  }
  EXPECT_LE((inst.matrix - Matrix(inst.matrix.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(Multipliers, MatchesTripleSum) {
  const ScenarioInstance s = random_instance(21, 4, 9, SymbolProfile::generic);
  const MultiplierInstance inst = s.multiplier();
  const Matrix ref = oracle::brute_multiplier(inst.symbol, inst.phi.synthesis_matrix(), inst.psi.synthesis_matrix());
  EXPECT_LE((inst.matrix - ref).norm(), 1e-12 * std::max(1.0, ref.norm()));
  EXPECT_THROW(assemble(Vector::Ones(1), onb(2), onb(2)), ShapeError);
  EXPECT_EQ(assemble(Vector::Ones(3), onb(2), onb(2)).symbol.size(), 2);
}

TEST(Multipliers, Adjoint) {
  Vector m(3);
  m << 0.5, -2.0, 1.0;
  const FiniteFrame p = mercedes();
  const MultiplierInstance sa = assemble(m, p, p);
  EXPECT_LE((sa.matrix - sa.matrix.adjoint()).norm(), 1e-15);

  Vector mi(1);
  mi << Complex(0, 1);
  EXPECT_EQ(adjoint(assemble(mi, onb(1), onb(1))).symbol(0), Complex(0, -1));

  const MultiplierInstance r = random_instance(22, 3, 6, SymbolProfile::generic).multiplier();
  EXPECT_LE((adjoint(r).matrix - r.matrix.adjoint()).norm(), 1e-12);
}

TEST(Multipliers, InvertibilityIdentity) {
  const FiniteFrame r(random_matrix(23, 3, 5));
  const InvertibilityReport rep = invertibility_report(assemble(Vector::Ones(5), r, canonical_dual(r)));
  EXPECT_TRUE(rep.injective && rep.surjective && rep.bijective);
  EXPECT_TRUE(rep.consistent);
}

TEST(Multipliers, InvertibilityZeroOperator) {
  Vector m(6);
  for (Index k = 0; k < 6; ++k) m(k) = k % 2 ? -1.0 : 1.0;
  const MultiplierInstance inst = assemble(m, duplicated(3), duplicated(3));
  EXPECT_LE(inst.matrix.norm(), 1e-15);
  const InvertibilityReport rep = invertibility_report(inst);
  EXPECT_FALSE(rep.injective);
  EXPECT_FALSE(rep.surjective);
  EXPECT_FALSE(rep.bijective);
  EXPECT_TRUE(rep.consistent);
  EXPECT_TRUE(is_frame(scaled_frame(m, duplicated(3))));
  ASSERT_TRUE(rep.intersection_witness.has_value());
  const Vector w = *rep.intersection_witness;
  EXPECT_GT(w.norm(), 0.5);
  // w lies in N(D_{m phi}) and in R(C_psi).
  EXPECT_LE((scaled_frame(m, duplicated(3)).synthesis_matrix() * w).norm(), 1e-12);
  const Matrix a = duplicated(3).analysis_matrix();
  const Vector proj = a * (a.completeOrthogonalDecomposition().solve(w));
  EXPECT_LE((proj - w).norm(), 1e-12);
}

TEST(Multipliers, InvertibilityKernelWitness) {
  Vector m(2);
  m << 0.0, 1.0;
  const InvertibilityReport rep = invertibility_report(assemble(m, onb(2), onb(2)));
  EXPECT_FALSE(rep.injective);
  ASSERT_TRUE(rep.kernel_witness.has_value());
  EXPECT_NEAR(std::abs((*rep.kernel_witness)(0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs((*rep.kernel_witness)(1)), 0.0, 1e-14);
}

TEST(Multipliers, InvertibilityPlantedZeros) {
  // Enough zeros to break completeness of m phi makes M singular.
  const ScenarioInstance s = random_instance(24, 3, 4, SymbolProfile::generic);
  Vector m = s.symbol;
  m(0) = 0.0;
  m(1) = 0.0;
  const InvertibilityReport rep = invertibility_report(assemble(m, s.phi, s.psi));
  EXPECT_FALSE(rep.injective);
  EXPECT_TRUE(rep.consistent);
  ASSERT_TRUE(rep.kernel_witness.has_value());
  EXPECT_LE((assemble(m, s.phi, s.psi).matrix * *rep.kernel_witness).norm(), 1e-9);
}
