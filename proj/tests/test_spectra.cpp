#include <gtest/gtest.h>

#include <dfm/dfm.hpp>

#include "oracles.hpp"

using namespace dfm;

namespace {

SecularData two_term(Complex m0, Complex m1) {
  SecularData s;
  s.q = 1;
  s.length = 2;
  s.d = [](std::size_t, std::size_t n) { return n == 0 ? Complex(1, 0) : Complex(-1, 0); };
  s.v = s.d;
  Vector m(2);
  m << m0, m1;
  s.symbol = Symbol::from_entries(m);
  s.d_tail_sq = [](std::size_t) { return 0.0; };
  s.v_tail_sq = s.d_tail_sq;
  s.index_set = {0};
  return s;
}

StructuredModel onb_model() {
  StructuredFrame f;
  f.kind = StructuredFrame::Kind::riesz_with_excess;
  f.name = "onb";
  f.excess = 0;
  f.section = [](std::size_t s) { return FiniteFrame(Matrix::Identity(static_cast<Index>(s), static_cast<Index>(s))); };
  LimitStructure st{{{1, 0, Complex(0, 0), Majorant::power(1.0, 1.0)}}};
  const Symbol sym = Symbol::from_generator([](std::size_t n) { return Complex(1.0 / (n + 1.0), 0); }, st, 64);
  return {"onb", f, f, sym};
}

const StructuredModel& langley() {
  static const StructuredModel m = *example_excess_one_langley(64).model;
  return m;
}

}  // namespace

TEST(Secular, KernelQuotients) {
  const SecularKernels k = secular_kernels(two_term(2.0, 3.0), Complex(0, 0), 2);
  EXPECT_NEAR(k.u(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(k.u(1, 0).real(), -1.0 / 3.0, 1e-15);
  EXPECT_EQ(k.tail_norm_bound, 0.0);
}

TEST(Secular, KernelTailBound) {
  const SecularData data = secular_data(langley());
  const Complex lambda(-0.5, 0.3);
  const std::size_t K = 200;
  const SecularKernels k = secular_kernels(data, lambda, K);
  double tail = 0.0;
  for (std::size_t n = K; n < 400000; ++n) tail += std::norm(langley_d(n) / (langley_m(n) - lambda));
  EXPECT_LE(std::sqrt(tail), k.tail_norm_bound);
}

TEST(Secular, KernelPrefixMatchesClosedForm) {
  const SecularKernels k = secular_kernels(secular_data(langley()), Complex(0, 0), 50);
  for (std::size_t n = 0; n < 50; ++n) {
    EXPECT_LE(std::abs(k.u(static_cast<Index>(n), 0) - langley_d(n) / (langley_m(n) - 0.0)), 1e-15);
  }
}

TEST(Secular, TwoTermMatrix) {
  const SecularValue v = secular_matrix(two_term(2.0, 3.0), Complex(0, 0), 2);
  EXPECT_NEAR(v.matrix(0, 0).real(), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(v.det.real(), 5.0 / 6.0, 1e-15);
}

TEST(Secular, SeriesAgreesWithHighPrecision) {
  const SecularEvaluator ev(secular_data(langley()));
  for (const auto& s : oracle::langley_table()) {
    const SecularValue v = ev.evaluate(s.lambda, std::size_t{1} << 20);
    EXPECT_LE(std::abs(v.det - s.value), v.det_error + 1e-12) << s.lambda;
    EXPECT_LE(v.det_error, 1e-5);
  }
}

TEST(Secular, KernelNorm) {
  const std::size_t K = 100000;
  long double sum = 0.0L;
  for (std::size_t n = K; n-- > 0;) sum += static_cast<long double>(langley_d(n)) * langley_d(n);
  const double rest = oracle::kLangleyKernelNormSq - static_cast<double>(sum);
  EXPECT_GE(rest, 0.0);
  EXPECT_LE(rest, langley_tail_sq(K));
  EXPECT_GE(rest, 0.9 * langley_tail_sq(K));
}

TEST(Secular, DeterminantSmallAtDenseEigenvalue) {
  const MultiplierInstance inst = random_instance(31, 3, 5, SymbolProfile::generic).multiplier();
  const SecularEvaluator ev(secular_data(inst));
  for (const Complex& z : general_eig(inst.matrix)) {
    const SecularValue v = ev.evaluate_adaptive(z);
    EXPECT_LE(std::abs(v.det), 1e-8 * std::max(1.0, v.matrix.norm()));
  }
}

TEST(Secular, ProportionalToCharacteristicPolynomial) {
  const MultiplierInstance inst = random_instance(32, 3, 6, SymbolProfile::generic).multiplier();
  const SecularEvaluator ev(secular_data(inst));
  const auto cp = oracle::charpoly(inst.matrix);
  auto ratio = [&](Complex z) {
    Complex p = cp[0];
    for (std::size_t k = 1; k < cp.size(); ++k) p = p * z + cp[k];
    Complex prod = 1.0;
    for (Index n = 0; n < inst.symbol.size(); ++n) prod *= inst.symbol(n) - z;
    return ev.evaluate(z, 6).det * prod / p;
  };
  const Complex r0 = ratio(Complex(0.3, 0.7));
  EXPECT_LE(std::abs(ratio(Complex(-1.1, 0.2)) - r0), 1e-9 * std::abs(r0));
  EXPECT_LE(std::abs(ratio(Complex(2.0, -0.4)) - r0), 1e-9 * std::abs(r0));
}

TEST(Secular, RegionFarFromSpectrum) {
  const MultiplierInstance inst = random_instance(33, 3, 5, SymbolProfile::generic).multiplier();
  const double r = operator_norm(inst.matrix);
  Region far = Region::disk(Complex(10.0 * r + 10.0, 0.0), 1.0);
  const SecularRoots roots = secular_roots(secular_data(inst), far);
  EXPECT_TRUE(roots.roots.empty());
  EXPECT_TRUE(roots.region_certificate.valid);
  EXPECT_EQ(roots.region_certificate.winding_count, 0);
}

TEST(Secular, RootsMatchDense) {
  for (std::uint64_t seed : {34u, 35u, 36u}) {
    const MultiplierInstance inst = random_instance(seed, 4, 6, SymbolProfile::generic).multiplier();
    const SecularComparison c = compare_secular(inst);
    EXPECT_TRUE(c.dense_matched && c.roots_matched && c.winding_matched) << c.detail;
    EXPECT_TRUE(c.adjoint_matched);
  }
}

TEST(Secular, ExcessOneHasNoRootsInsideRadiusPointNine) {
  const SecularEvaluator ev(secular_data(langley()));
  const SecularRoots roots = secular_roots(ev, Region::disk(Complex(0, 0), 0.9));
  EXPECT_TRUE(roots.roots.empty());
  EXPECT_TRUE(roots.region_certificate.valid);
  EXPECT_EQ(roots.region_certificate.winding_count, 0);
}

TEST(Secular, RegionValidation) {
  EXPECT_THROW(Region::rectangle(1, 0, 0, 1), DomainError);
  EXPECT_THROW(Region::disk(Complex(0, 0), 0.0), DomainError);
}

TEST(Spectra, RieszPairSpectrumIsSymbol) {
  Rng rng(37);
  Matrix t(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) t(i, j) = rng.cnormal();
  const FiniteFrame phi(t);
  Vector m(4);
  m << 1.0, Complex(0, 2), -0.5, 3.0;
  const SpectralReport rep = finite_spectrum(assemble(m, phi, canonical_dual(phi)));
  EXPECT_LE(multiset_distance(rep.eigenvalues, {m(0), m(1), m(2), m(3)}), 1e-9);
}

TEST(Spectra, ConstantSymbol) {
  const FiniteFrame phi(random_instance(38, 3, 5, SymbolProfile::generic).phi);
  const SpectralReport rep = finite_spectrum(assemble(Vector::Constant(5, 2.5), phi, canonical_dual(phi)));
  ASSERT_EQ(rep.points.size(), 1u);
  EXPECT_NEAR(std::abs(rep.points[0].value - 2.5), 0.0, 1e-10);
  EXPECT_EQ(rep.points[0].multiplicity.value_or(0), 3u);
}

TEST(Spectra, DuplicatedOnbAverages) {
  Vector m(6);
  m << 0.2, 0.4, Complex(1, 1), Complex(1, -1), 5.0, -3.0;
  const SpectralReport rep = finite_spectrum(example_duplicated_onb(3, m).multiplier());
  EXPECT_LE(multiset_distance(rep.eigenvalues, duplicated_averages(m)), 1e-12);
}

TEST(Spectra, EssentialSpectrum) {
  EXPECT_THROW(essential_spectrum(*example_interleaved_onb(8).model), DomainError);
  StructuredModel il = onb_model();
  il.symbol = interleaved_symbol(64);
  const SpectralReport e = essential_spectrum(il);
  ASSERT_EQ(e.essential.size(), 2u);
  EXPECT_EQ(e.essential[0], Complex(0, 0));
  EXPECT_EQ(e.essential[1], Complex(2, 0));
  const SpectralReport l = essential_spectrum(langley());
  ASSERT_EQ(l.essential.size(), 1u);
  EXPECT_EQ(l.essential[0], Complex(1, 0));
}

TEST(Spectra, ClassifyExcessOne) {
  const SpectralReport rep =
      classify_spectrum(langley(), {Complex(1, 0), Complex(0.3, 0.1), Complex(-0.8, 0), Complex(0, 0.6)});
  ASSERT_EQ(rep.points.size(), 4u);
  EXPECT_EQ(rep.points[0].label, SpectralPoint::Label::limit_point);
  for (std::size_t k = 1; k < 4; ++k) {
    EXPECT_EQ(rep.points[k].label, SpectralPoint::Label::not_in_spectrum) << rep.points[k].provenance;
  }
}

TEST(Spectra, ClassifyRieszModel) {
  const SpectralReport rep = classify_spectrum(onb_model(), {Complex(1.0 / 3.0, 0), Complex(0, 0), Complex(-1, 0)});
  ASSERT_EQ(rep.points.size(), 3u);
  EXPECT_EQ(rep.points[0].label, SpectralPoint::Label::eigenvalue);
  EXPECT_EQ(rep.points[1].label, SpectralPoint::Label::continuous_candidate);
  EXPECT_EQ(rep.points[2].label, SpectralPoint::Label::not_in_spectrum);
}

TEST(Spectra, TruncationFamily) {
  StructuredModel il = *example_interleaved_onb(8).model;
  const TruncationFamily fam = truncated_spectrum_family(il, {20, 40, 80});
  ASSERT_EQ(fam.rows.size(), 3u);
  EXPECT_LE(fam.rows[0].split_identity_residual, 1e-12);
  EXPECT_GE(fam.rows.back().near_fraction, 0.85);

  // Vanishing part identically zero: M_m equals M_{m'}.
  LimitStructure st = il.symbol.structure().value();
  for (LimitClass& c : st.classes) c.majorant = Majorant::none();
  il.symbol = Symbol::from_generator([st](std::size_t n) { return st.class_of(n).limit; }, st, 64);
  for (const TruncationDiagnostics& r : truncated_spectrum_family(il, {10, 20}).rows) {
    EXPECT_LE(r.split_distance, 1e-12);
    EXPECT_EQ(r.far_count, 0u);
  }
}

TEST(Spectra, TailNormProfile) {
  const StructuredModel il = *example_interleaved_onb(8).model;
  const TailNormProfile p = tail_norm_profile(il, 200, {50, 100, 200});
  EXPECT_TRUE(p.within_bound);
  EXPECT_TRUE(p.decreasing);
}

TEST(Spectra, BehnckeEmptyInterval) {
  Vector m(3);
  m << 1.0, 2.0, 3.0;
  const FiniteFrame onb(Matrix::Identity(3, 3));
  const BehnckeCount c = behncke_interval_count(assemble(m, onb, onb), 5.0, 6.0);
  EXPECT_EQ(c.eigenvalue_count, 0u);
  EXPECT_LE(c.lower_bound, 0);
  EXPECT_TRUE(c.pass);
}

TEST(Spectra, BehnckeRandom) {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    const ScenarioInstance s = random_instance(seed, 4, 6, SymbolProfile::real_symbol);
    const FiniteFrame phi = s.phi;
    const MultiplierInstance inst = assemble(s.symbol, phi, canonical_dual(phi));
    EXPECT_TRUE(behncke_interval_count(inst, -1.0, 1.0).pass);
  }
}

TEST(Spectra, TailReportZero) {
  LimitStructure st{{{1, 0, Complex(1, 0), Majorant::none()}}};
  const Symbol s = Symbol::from_entries(Vector::Ones(10), st);
  const TailReport r = eigenvalue_tail_report(std::vector<double>(10, 1.0), s, 10, 1.0, 0);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].left_sum, 0.0);
  EXPECT_EQ(r.classes[0].right_sum, 0.0);
  EXPECT_TRUE(r.within_bound);
}

TEST(Spectra, TailReportInterleaved) {
  const ScenarioInstance s = example_interleaved_onb(200);
  const RealVector e = hermitian_eig(s.multiplier().matrix).values;
  const std::vector<double> ev(e.data(), e.data() + e.size());
  const std::size_t q = static_cast<std::size_t>(excess(s.phi));
  EXPECT_EQ(q, 200u);
  const TailReport r = eigenvalue_tail_report(ev, interleaved_symbol(400), 400, 2.0, q);
  EXPECT_TRUE(r.within_bound);
}
