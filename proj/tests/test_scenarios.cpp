#include <gtest/gtest.h>

#include <dfm/dfm.hpp>

#include "oracles.hpp"

using namespace dfm;

TEST(Scenarios, InterleavedSmall) {
  const ScenarioInstance s = example_interleaved_onb(4);
  const CompactSplit sp = compact_split(s.model->symbol);
  const MultiplierInstance mp = assemble(sp.constant_part.prefix(8), s.phi, s.psi);
  EXPECT_LE((mp.matrix - Matrix::Identity(4, 4)).norm(), 1e-12);
  const FrameBounds b = frame_bounds(s.phi);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_TRUE(check_facts(s).passed);
}

TEST(Scenarios, InterleavedConcentration) {
  const ScenarioInstance s = example_interleaved_onb(200);
  const auto ev = general_eig(s.multiplier().matrix);
  std::size_t near = 0;
  for (const Complex& z : ev) near += std::abs(z - 1.0) <= 0.1;
  EXPECT_GE(static_cast<double>(near) / static_cast<double>(ev.size()), 0.9);
}

TEST(Scenarios, FourierClosedForms) {
  // Gauss-Legendre on (0,1) with many nodes, computed from scratch.
  const int n = 200;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int k = 1; k <= n; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1) * z * p2 - (k - 1.0) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1 - z);
    w[i] = 1.0 / ((1 - z * z) * pp * pp);
  }
  for (long j = -6; j <= 6; ++j) {
    Complex c1 = 0, c2 = 0;
    for (int i = 0; i < n; ++i) {
      const Complex e = std::exp(Complex(0, -2.0 * std::numbers::pi * j * x[i]));
      c1 += w[i] * x[i] * e;
      c2 += w[i] * x[i] * x[i] * e;
    }
    EXPECT_LE(std::abs(c1 - fourier_x(j)), 1e-12) << j;
    EXPECT_LE(std::abs(c2 - fourier_x2(j)), 1e-12) << j;
  }
}

TEST(Scenarios, SqrtCoefficients) {
  const auto c = fourier_sqrt_one_minus_x2(40);
  for (long j = 0; j <= 40; ++j) EXPECT_NEAR(c[j].real(), oracle::sqrt_cos_coefficient(j), 1e-12) << j;
  for (const auto& [j, v] : oracle::sqrt_sin_table()) EXPECT_NEAR(c[j].imag(), v, 1e-12) << j;
}

TEST(Scenarios, FourierFrameIsParseval) {
  const FiniteFrame f = fourier_x2_frame(8);
  const Matrix S = f.synthesis_matrix() * f.analysis_matrix();
  EXPECT_LE((S - Matrix::Identity(S.rows(), S.cols())).norm(), 1e-10);
}

TEST(Scenarios, FourierSpectrum) {
  const ScenarioInstance s = example_fourier_x2(40);
  const auto ev = general_eig(s.multiplier().matrix);
  std::vector<double> re;
  for (const Complex& z : ev) {
    EXPECT_LE(std::abs(z.imag()), 1e-9);
    EXPECT_GE(z.real(), -1e-9);
    EXPECT_LE(z.real(), 1.0 + 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  double gap = 0;
  for (std::size_t k = 1; k < re.size(); ++k) gap = std::max(gap, re[k] - re[k - 1]);
  EXPECT_LT(gap, 0.2);
}

TEST(Scenarios, DiagonalPair) {
  const ScenarioInstance s = example_diagonal_pair(5);
  const auto ev = general_eig(s.multiplier().matrix);
  EXPECT_LE(multiset_distance(ev, {1.0, 0.25, 1.0 / 9, 1.0 / 16, 1.0 / 25}), 1e-12);
  for (std::size_t size : {3u, 7u, 20u}) {
    const FrameBounds b = frame_bounds(diagonal_pair_frame(size));
    EXPECT_NEAR(b.lower, 1.0, 1e-12);
    EXPECT_NEAR(b.upper, 1.0, 1e-12);
  }
  const FactReport r = check_facts(s);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.discrepancies.empty());
}

TEST(Scenarios, DuplicatedOnb) {
  Vector alt(8);
  for (Index k = 0; k < 8; ++k) alt(k) = k % 2 ? -1.0 : 1.0;
  EXPECT_LE(example_duplicated_onb(4, alt).multiplier().matrix.norm(), 1e-15);

  Vector r(8);
  r << 0.5, 0.5, 1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3, 0.25, 0.25;
  const auto ev = general_eig(example_duplicated_onb(4, r).multiplier().matrix);
  EXPECT_LE(multiset_distance(ev, {0.5, 1.0 / 3, 2.0 / 3, 0.25}), 1e-12);

  const auto c = general_eig(example_duplicated_onb(4, Vector::Constant(8, 0.7)).multiplier().matrix);
  for (const Complex& z : c) EXPECT_NEAR(std::abs(z - 0.7), 0.0, 1e-12);
}

TEST(Scenarios, ExcessOneFacts) {
  const ScenarioInstance s = example_excess_one_langley(256);
  const auto lp = limit_points(s.model->symbol);
  ASSERT_EQ(lp.size(), 1u);
  EXPECT_EQ(lp[0], Complex(1, 0));
  const FactReport r = check_facts(s);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.discrepancies.empty());
  const FrameBounds b = frame_bounds(s.phi);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_EQ(excess(s.phi), 1);
  EXPECT_LE(operator_norm(s.multiplier().matrix), 1.0 + 1e-12);
  EXPECT_THROW(example_excess_one_langley(4), DomainError);
}

TEST(Scenarios, RandomInstances) {
  const ScenarioInstance a = random_instance(0, 3, 5, SymbolProfile::generic);
  const ScenarioInstance b = random_instance(0, 3, 5, SymbolProfile::generic);
  EXPECT_EQ(instance_hash(a.phi, a.psi, a.symbol), instance_hash(b.phi, b.psi, b.symbol));
  EXPECT_NE(instance_hash(a.phi, a.psi, a.symbol),
            instance_hash(random_instance(1, 3, 5, SymbolProfile::generic).phi, a.psi, a.symbol));

  const ScenarioInstance z = random_instance(5, 4, 8, SymbolProfile::planted_zeros);
  EXPECT_TRUE((z.symbol.array() == Complex(0, 0)).any());

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScenarioInstance c = random_instance(seed, 3, 7, SymbolProfile::canonical_dual_pair);
    EXPECT_TRUE(is_dual_pair(c.phi, c.psi).dual);
    EXPECT_LE((oracle::brute_duality(c.phi.synthesis_matrix(), c.psi.synthesis_matrix()) - Matrix::Identity(3, 3)).norm(),
              1e-10);
  }
  const ScenarioInstance rs = random_instance(6, 3, 6, SymbolProfile::real_symbol);
  EXPECT_EQ(rs.symbol.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(random_instance(1, 4, 3, SymbolProfile::generic), DomainError);
  EXPECT_EQ(parse_profile("planted_collisions"), SymbolProfile::planted_collisions);
  EXPECT_THROW(parse_profile("bogus"), InputError);
}

TEST(Scenarios, BuildByName) {
  EXPECT_EQ(build_scenario("example_duplicated_onb", 3).symbol.size(), 6);
  EXPECT_THROW(build_scenario("nope", 3), InputError);
}

TEST(Verify, DiagonalPairSuiteCarriesDiscrepancy) {
  const SuiteResult r = find_suite("example_diagonal_pair")(SuiteOptions{});
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.discrepancies.empty());
}

TEST(Verify, SmallRuns) {
  SuiteOptions o;
  o.instances = 40;
  for (const char* name : {"duality", "invertibility", "riesz", "secular", "adjoint", "behncke"}) {
    EXPECT_TRUE(find_suite(name)(o).passed) << name;
  }
  EXPECT_THROW(find_suite("unknown"), InputError);
}

TEST(Verify, SeedFromEnvironment) {
  ::setenv("SPECTRA_FRAMES_SEED", "77", 1);
  EXPECT_EQ(default_seed(), 77u);
  ::unsetenv("SPECTRA_FRAMES_SEED");
  EXPECT_EQ(default_seed(), kDefaultSeed);
}
