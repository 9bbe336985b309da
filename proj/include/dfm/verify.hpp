#pragma once

// Property suites behind `dfm verify` and the acceptance binary.

#include <dfm/io.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dfm {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// SPECTRA_FRAMES_SEED overrides the default seed.
inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("SPECTRA_FRAMES_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') throw InputError("SPECTRA_FRAMES_SEED must be a non-negative integer");
    return v;
  }
  return kDefaultSeed;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> instances;
  std::vector<std::size_t> sizes;
  TolerancePolicy tol;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::vector<Check> checks;
  std::map<std::string, bool> parts;  // named sub-results, e.g. for criteria sharing a suite
  std::vector<FactOutcome> discrepancies;
  Json counterexample;  // first failing case, null when none
  std::size_t instances = 0;
  double seconds = 0.0;

  void check(const std::string& n, bool ok, const std::string& detail = "") {
    checks.push_back({n, ok, detail});
    passed = passed && ok;
  }
  void part(const std::string& n, bool ok) {
    parts[n] = ok;
    passed = passed && ok;
  }
  void dump(const Json& j) {
    if (counterexample.is_null()) counterexample = j;
  }
};

inline Json to_json(const SuiteResult& r, bool timing) {
  Json checks = Json::array();
  for (const Check& c : r.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json disc = Json::array();
  for (const FactOutcome& f : r.discrepancies) {
    disc.push_back(Json{{"fact", f.name}, {"provenance", to_string(f.provenance)}, {"detail", f.detail}});
  }
  Json j{{"suite", r.name},     {"passed", r.passed},        {"checks", checks}, {"parts", r.parts},
         {"discrepancies", disc}, {"counterexample", r.counterexample}, {"instances", r.instances}};
  if (timing) j["seconds"] = r.seconds;
  return j;
}

/// Explicit instance file for a finite multiplier, for counterexample dumps.
inline InstanceFile instance_file_of(const MultiplierInstance& inst, const std::string& name = "") {
  InstanceFile f;
  f.name = name;
  f.phi = inst.phi;
  f.psi = inst.psi;
  f.symbol = inst.symbol;
  return f;
}

namespace detail {

inline std::string fmt_count(std::size_t bad, std::size_t total) {
  return std::to_string(total - bad) + "/" + std::to_string(total) + " passed";
}

/// (d, N) drawn for instance k of a suite.
struct Shape {
  Index d;
  Index N;
  std::uint64_t seed;
};

inline Shape draw_shape(std::uint64_t seed, std::size_t k, Index dmax, Index qmin, Index qmax, Index Nmax) {
  const std::uint64_t s = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(k)));
  Rng rng(s);
  const Index d = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(dmax)));
  const Index hi = std::min(qmax, Nmax - d);
  const Index q = qmin + static_cast<Index>(rng.index(static_cast<std::size_t>(std::max<Index>(hi - qmin + 1, 1))));
  return {d, d + q, splitmix64(s)};
}

inline SymbolProfile profile_for(std::size_t k) { return static_cast<SymbolProfile>(k % 5); }

template <class F>
SuiteResult timed(const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = name;
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::size_t size_or(const SuiteOptions& o, std::size_t k, std::size_t fallback) {
  return k < o.sizes.size() ? o.sizes[k] : fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Random dual pairs (d <= 12, N <= 24): ||D_phi C_psi - I|| <= 1e-10.
inline SuiteResult suite_duality(const SuiteOptions& o) {
  return detail::timed("duality", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(1000);
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 12, 0, 12, 24);
      const ScenarioInstance s = random_instance(sh.seed, sh.d, sh.N, detail::profile_for(k));
      const double a = is_dual_pair(s.phi, s.psi, o.tol).residual;
      const double b = is_dual_pair(s.psi, s.phi, o.tol).residual;
      worst = std::max({worst, a, b});
      if (a > 1e-10 || b > 1e-10) {
        ++bad;
        r.dump(Json{{"seed", sh.seed}, {"d", sh.d}, {"N", sh.N}, {"residual", a}, {"residual_swapped", b}});
      }
    }
    r.instances = n;
    r.check("duality residual <= 1e-10", bad == 0, detail::fmt_count(bad, n) + ", worst " + detail::fmt(worst));
  });
}

/// Subspace statements of the invertibility characterisation against the
/// rank of M, over all symbol profiles.
inline SuiteResult suite_invertibility(const SuiteOptions& o) {
  return detail::timed("invertibility", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(1000);
    std::size_t bad = 0, bij = 0, witness_bad = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 8, 0, 4, 12);
      const ScenarioInstance s = random_instance(sh.seed, sh.d, sh.N, detail::profile_for(k));
      const MultiplierInstance inst = s.multiplier();
      const InvertibilityReport rep = invertibility_report(inst, o.tol);
      bij += rep.bijective ? 1 : 0;
      bool ok = rep.consistent;
      if (rep.kernel_witness) {
        const double res = (inst.matrix * *rep.kernel_witness).norm();
        if (res > 1e-8 * std::max(1.0, operator_norm(inst.matrix))) {
          ok = false;
          ++witness_bad;
        }
      }
      if (!ok) {
        ++bad;
        Json dump{{"seed", sh.seed}, {"profile", to_string(detail::profile_for(k))}, {"report", to_json(rep)},
                  {"instance", to_json(instance_file_of(inst))}};
        r.dump(dump);
      }
    }
    r.instances = n;
    r.check("subspace verdicts equal direct verdicts", bad == 0,
            detail::fmt_count(bad, n) + "; bijective " + std::to_string(bij) + ", singular " + std::to_string(n - bij));
    r.check("kernel witnesses annihilated", witness_bad == 0, std::to_string(witness_bad) + " bad witnesses");
  });
}

/// Riesz bases with their canonical duals: spectrum equals the symbol.
inline SuiteResult suite_riesz(const SuiteOptions& o) {
  return detail::timed("riesz", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(200);
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 12, 0, 0, 12);
      const SymbolProfile prof = k % 2 == 0 ? SymbolProfile::canonical_dual_pair : detail::profile_for(k);
      ScenarioInstance s = random_instance(sh.seed, sh.d, sh.N, prof);
      s.psi = canonical_dual(s.phi, o.tol);
      const MultiplierInstance inst = s.multiplier();
      const SpectralReport sp = finite_spectrum(inst, o.tol);
      std::vector<Complex> sym(inst.symbol.data(), inst.symbol.data() + inst.symbol.size());
      const double dist = multiset_distance(sp.eigenvalues, sym);
      worst = std::max(worst, dist);
      if (!is_riesz_basis(s.phi, o.tol) || dist > 1e-9) {
        ++bad;
        r.dump(Json{{"seed", sh.seed}, {"distance", dist}, {"instance", to_json(instance_file_of(inst))}});
      }
    }
    r.instances = n;
    r.check("spectrum equals symbol multiset within 1e-9", bad == 0,
            detail::fmt_count(bad, n) + ", worst " + detail::fmt(worst));
  });
}

struct SecularComparison {
  bool dense_matched = true;     // dense eigenvalues off the symbol found as certified roots
  bool roots_matched = true;     // certified roots match dense eigenvalues
  bool winding_matched = true;   // region winding and multiplicities add up to d
  bool adjoint_matched = true;   // spec(M^*) = conj(spec(M))
  double adjoint_distance = 0.0;
  std::size_t off_symbol = 0;
  std::size_t det_within_error = 0;  // dense eigenvalues with |det| <= certified error
  std::string detail;
};

/// Dense versus secular spectra of a finite instance.
inline SecularComparison compare_secular(const MultiplierInstance& inst, const TolerancePolicy& tol = {}) {
  SecularComparison c;
  const std::vector<Complex> dense = general_eig(inst.matrix);
  const double scale = std::max(1.0, operator_norm(inst.matrix));
  const SecularEvaluator ev(secular_data(inst, tol), tol);
  const SecularRoots roots = secular_roots(ev, default_region(inst));

  for (const Complex& z : dense) {
    double dsym = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < inst.symbol.size(); ++n) dsym = std::min(dsym, std::abs(inst.symbol(n) - z));
    if (dsym <= 1e-6 * scale) continue;
    ++c.off_symbol;
    bool found = false;
    for (const SecularRoot& r : roots.roots) found = found || (r.certificate.valid && std::abs(r.value - z) <= 1e-8);
    if (!found) {
      c.dense_matched = false;
      c.detail += "dense eigenvalue " + shortest(z.real()) + "+" + shortest(z.imag()) + "i unmatched; ";
    }
    try {
      const SecularValue v = ev.evaluate_adaptive(z);
      if (std::abs(v.det) <= v.det_error) ++c.det_within_error;
    } catch (const Error&) {
    }
  }
  std::size_t total = 0;
  for (const SecularRoot& r : roots.roots) {
    total += r.multiplicity;
    if (!r.certificate.valid) continue;
    if (nearest_distance(r.value, dense) > 1e-8) {
      c.roots_matched = false;
      c.detail += "secular root " + shortest(r.value.real()) + "+" + shortest(r.value.imag()) + "i unmatched; ";
    }
  }
  for (const SecularRoot& r : roots.symbol_zeros) total += r.multiplicity;
  const long d = static_cast<long>(inst.matrix.rows());
  c.winding_matched = roots.region_certificate.valid && roots.region_certificate.winding_count == d &&
                      total == static_cast<std::size_t>(d);
  if (!c.winding_matched) {
    c.detail += "winding " + std::to_string(roots.region_certificate.winding_count) + ", multiplicities " +
                std::to_string(total) + ", d " + std::to_string(d) + "; ";
  }
  std::vector<Complex> adj = general_eig(adjoint(inst).matrix);
  for (Complex& z : adj) z = std::conj(z);
  c.adjoint_distance = multiset_distance(dense, adj);
  c.adjoint_matched = c.adjoint_distance <= 1e-9;
  return c;
}

/// Random finite instances with excess 1..3: dense versus secular spectra,
/// and the adjoint symmetry on the same instances.
inline SuiteResult suite_secular(const SuiteOptions& o) {
  return detail::timed("secular", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(500);
    std::size_t bad_dense = 0, bad_roots = 0, bad_wind = 0, bad_adj = 0, off = 0, within = 0;
    double worst_adj = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 8, 1, 3, 11);
      const ScenarioInstance s = random_instance(sh.seed, sh.d, sh.N, detail::profile_for(k));
      const MultiplierInstance inst = s.multiplier();
      SecularComparison c;
      try {
        c = compare_secular(inst, o.tol);
      } catch (const Error& e) {
        c.dense_matched = c.roots_matched = c.winding_matched = false;
        c.detail = std::string("error: ") + e.what();
      }
      bad_dense += c.dense_matched ? 0 : 1;
      bad_roots += c.roots_matched ? 0 : 1;
      bad_wind += c.winding_matched ? 0 : 1;
      bad_adj += c.adjoint_matched ? 0 : 1;
      off += c.off_symbol;
      within += c.det_within_error;
      worst_adj = std::max(worst_adj, c.adjoint_distance);
      if (!(c.dense_matched && c.roots_matched && c.winding_matched && c.adjoint_matched)) {
        r.dump(Json{{"seed", sh.seed}, {"profile", to_string(detail::profile_for(k))}, {"detail", c.detail},
                    {"instance", to_json(instance_file_of(inst))}});
      }
    }
    r.instances = n;
    r.check("dense eigenvalues off the symbol are certified secular roots", bad_dense == 0,
            detail::fmt_count(bad_dense, n) + "; |det| <= certified error at " + std::to_string(within) + "/" +
                std::to_string(off) + " dense eigenvalues");
    r.check("certified secular roots match dense eigenvalues within 1e-8", bad_roots == 0, detail::fmt_count(bad_roots, n));
    r.check("region winding equals multiplicity count", bad_wind == 0, detail::fmt_count(bad_wind, n));
    r.check("spec(M^*) = conj spec(M) within 1e-9", bad_adj == 0,
            detail::fmt_count(bad_adj, n) + ", worst " + detail::fmt(worst_adj));
    r.parts["secular_equivalence"] = bad_dense == 0 && bad_roots == 0 && bad_wind == 0;
    r.parts["adjoint_symmetry"] = bad_adj == 0;
  });
}

/// The adjoint check alone, on the same instances as the secular suite.
inline SuiteResult suite_adjoint(const SuiteOptions& o) {
  return detail::timed("adjoint", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(500);
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 8, 1, 3, 11);
      const MultiplierInstance inst = random_instance(sh.seed, sh.d, sh.N, detail::profile_for(k)).multiplier();
      std::vector<Complex> adj = general_eig(adjoint(inst).matrix);
      for (Complex& z : adj) z = std::conj(z);
      const double dist = multiset_distance(general_eig(inst.matrix), adj);
      worst = std::max(worst, dist);
      if (dist > 1e-9) {
        ++bad;
        r.dump(Json{{"seed", sh.seed}, {"distance", dist}, {"instance", to_json(instance_file_of(inst))}});
      }
    }
    r.instances = n;
    r.check("spec(M^*) = conj spec(M) within 1e-9", bad == 0, detail::fmt_count(bad, n) + ", worst " + detail::fmt(worst));
  });
}

inline void record_facts(SuiteResult& r, const ScenarioInstance& s) {
  const FactReport fr = check_facts(s);
  std::string tag;
  for (const char* key : {"size", "truncation"}) {
    if (s.params.count(key)) tag = std::string(" (") + key + " " + shortest(s.params.at(key)) + ")";
  }
  for (const FactOutcome& f : fr.outcomes) {
    if (f.provenance == Provenance::stated && !f.holds) continue;
    r.check(f.name + tag, f.holds, f.detail);
  }
  for (const FactOutcome& f : fr.discrepancies) r.discrepancies.push_back(f);
}

inline SuiteResult suite_interleaved(const SuiteOptions& o) {
  return detail::timed("example_interleaved_onb", [&](SuiteResult& r) {
    const std::size_t size = detail::size_or(o, 0, 200);
    const ScenarioInstance s = example_interleaved_onb(size);
    record_facts(r, s);
    const ScenarioInstance small = example_interleaved_onb(4);
    record_facts(r, small);
    std::vector<std::size_t> Ks;
    for (std::size_t K : {std::size_t{50}, std::size_t{100}, std::size_t{200}}) {
      if (K <= 2 * size) Ks.push_back(K);
    }
    const TailNormProfile prof = tail_norm_profile(*s.model, size, Ks, o.tol);
    std::string rows;
    for (const TailNorm& t : prof.rows) {
      rows += "K=" + std::to_string(t.K) + ": " + detail::fmt(t.norm) + " <= " + detail::fmt(t.bound) + "; ";
    }
    r.check("tail norm within sup bound", prof.within_bound, rows);
    r.check("tail norm decreasing in K", prof.decreasing, rows);
    r.instances = 2;
  });
}

inline SuiteResult suite_fourier(const SuiteOptions& o) {
  return detail::timed("example_fourier_x2", [&](SuiteResult& r) {
    const std::size_t size = detail::size_or(o, 0, 200);
    record_facts(r, example_fourier_x2(size));
    // Entries against an independent quadrature of x^2 exp(2 pi i (n - k) x).
    const std::size_t small = 8;
    const ScenarioInstance s8 = example_fourier_x2(small);
    const Matrix M = s8.multiplier().matrix;
    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    double worst = 0.0;
    for (Index k = 0; k < M.rows(); ++k) {
      for (Index n = 0; n < M.cols(); ++n) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(n - k);
        const double re = Rule::integrate([w](double x) { return x * x * std::cos(w * x); }, 0.0, 1.0, 15, 1e-13);
        const double im = Rule::integrate([w](double x) { return x * x * std::sin(w * x); }, 0.0, 1.0, 15, 1e-13);
        worst = std::max(worst, std::abs(M(k, n) - Complex(re, im)));
      }
    }
    r.check("size 8 entries match quadrature within 1e-10", worst <= 1e-10, "max deviation " + detail::fmt(worst));
    r.instances = 2;
  });
}

inline SuiteResult suite_diagonal_pair(const SuiteOptions& o) {
  return detail::timed("example_diagonal_pair", [&](SuiteResult& r) {
    const std::size_t size = detail::size_or(o, 0, 100);
    record_facts(r, example_diagonal_pair(size));
    record_facts(r, example_diagonal_pair(5));
    r.instances = 2;
  });
}

inline SuiteResult suite_duplicated(const SuiteOptions& o) {
  return detail::timed("example_duplicated_onb", [&](SuiteResult& r) {
    const std::size_t size = detail::size_or(o, 0, 60);
    const Index N = static_cast<Index>(2 * size);
    std::vector<std::pair<std::string, Vector>> choices;
    Vector alt(N), rat(N), cst(N);
    // Rationals in (0, 1] enumerated by denominator, each paired as (r, r).
    std::vector<double> rs;
    for (int den = 1; rs.size() < size; ++den) {
      for (int num = 1; num <= den && rs.size() < size; ++num) {
        if (std::gcd(num, den) == 1) rs.push_back(static_cast<double>(num) / den);
      }
    }
    for (Index k = 0; k < N; ++k) {
      alt(k) = k % 2 == 0 ? 1.0 : -1.0;
      rat(k) = rs[static_cast<std::size_t>(k / 2)];
      cst(k) = Complex(0.25, -0.5);
    }
    choices = {{"(1,-1) pairs", alt}, {"paired rationals", rat}, {"constant", cst}};
    for (const auto& [label, m] : choices) {
      const ScenarioInstance s = example_duplicated_onb(size, m);
      const MultiplierInstance inst = s.multiplier();
      const std::vector<Complex> tau = duplicated_averages(m);
      const double dist = multiset_distance(general_eig(inst.matrix), tau);
      r.check("spectrum equals tau within 1e-12: " + label, dist <= 1e-12, "max deviation " + detail::fmt(dist));
    }
    const MultiplierInstance zero = example_duplicated_onb(size, alt).multiplier();
    const double nz = operator_norm(zero.matrix);
    r.check("(1,-1) pairs give M = 0", nz <= 1e-14, "||M|| = " + detail::fmt(nz));
    const InvertibilityReport inv = invertibility_report(zero, o.tol);
    r.check("(1,-1) pairs: not injective, with intersection witness",
            !inv.injective && !inv.surjective && !inv.bijective && inv.intersection_witness.has_value() && inv.consistent);
    r.instances = choices.size();
  });
}

struct LangleyGrid {
  std::size_t points = 0;
  std::size_t certified = 0;  // |S| > error bound
  double min_modulus = std::numeric_limits<double>::infinity();
  double min_ratio = std::numeric_limits<double>::infinity();  // |S| / error
  Complex worst_point{0.0, 0.0};
  std::size_t max_truncation = 0;
};

/// |S| against its error bound on an n x n grid over |lambda| <= radius.
inline LangleyGrid langley_grid(const SecularEvaluator& ev, std::size_t n, double radius, std::size_t start) {
  LangleyGrid g;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double x = -radius + 2.0 * radius * static_cast<double>(a) / static_cast<double>(n - 1);
      const double y = -radius + 2.0 * radius * static_cast<double>(b) / static_cast<double>(n - 1);
      const Complex lam(x, y);
      if (std::abs(lam) > radius) continue;
      ++g.points;
      const SecularValue v = ev.evaluate_adaptive(lam, {}, start);
      g.max_truncation = std::max(g.max_truncation, v.truncation);
      const double mod = std::abs(v.value);
      const double ratio = v.value_error > 0.0 ? mod / v.value_error : std::numeric_limits<double>::infinity();
      if (v.certified_nonzero()) ++g.certified;
      g.min_modulus = std::min(g.min_modulus, mod);
      if (ratio < g.min_ratio) {
        g.min_ratio = ratio;
        g.worst_point = lam;
      }
    }
  }
  return g;
}

inline SuiteResult suite_langley(const SuiteOptions& o) {
  return detail::timed("example_excess_one_langley", [&](SuiteResult& r) {
    const std::size_t K = detail::size_or(o, 0, std::size_t{1} << 14);
    const std::size_t grid = detail::size_or(o, 1, 200);
    const ScenarioInstance s = example_excess_one_langley(K);
    record_facts(r, s);
    const StructuredModel& model = *s.model;
    const SecularEvaluator ev(secular_data(model), o.tol);

    const LangleyGrid g = langley_grid(ev, grid, 0.99, K);
    r.check("grid over |lambda| <= 0.99: |S| exceeds its error bound everywhere", g.certified == g.points,
            std::to_string(g.certified) + "/" + std::to_string(g.points) + " certified; min |S| " +
                detail::fmt(g.min_modulus) + "; worst |S|/error " + detail::fmt(g.min_ratio) + " at " +
                shortest(g.worst_point.real()) + "+" + shortest(g.worst_point.imag()) + "i; max truncation " +
                std::to_string(g.max_truncation));

    RootSearchOptions ro;
    ro.start_truncation = K;
    ro.max_evaluations = 200000;
    const ContourCertificate c = secular_winding(ev, Region::disk(0.0, 0.995), ro);
    r.check("winding along |lambda| = 0.995 is 0 with a valid certificate", c.valid && c.winding_count == 0,
            "winding " + std::to_string(c.winding_count) + ", valid " + (c.valid ? "true" : "false") +
                ", worst error/|G| " + detail::fmt(c.worst_ratio) + ", samples " + std::to_string(c.samples));

    const ContourCertificate inner = secular_winding(ev, Region::disk(0.0, 0.9), ro);
    r.check("winding along |lambda| = 0.9 is 0 with a valid certificate", inner.valid && inner.winding_count == 0,
            "winding " + std::to_string(inner.winding_count) + ", worst error/|G| " + detail::fmt(inner.worst_ratio));

    const SpectralReport ess = essential_spectrum(model);
    const bool singleton = ess.essential.size() == 1 && std::abs(ess.essential[0] - 1.0) == 0.0;
    r.check("reported spectrum is {1}", singleton && g.certified == g.points && c.valid && c.winding_count == 0,
            singleton ? "essential part {1}; point spectrum in the disk requires both certificates" : "essential part differs");
    r.instances = 1;
  });
}

/// Real symbols with canonical duals: eigenvalue count in [alpha, beta] is at
/// least sum r_k - 3 q.
inline SuiteResult suite_behncke(const SuiteOptions& o) {
  return detail::timed("behncke", [&](SuiteResult& r) {
    const std::size_t n = o.instances.value_or(500);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto sh = detail::draw_shape(o.seed, k, 10, 0, 3, 13);
      ScenarioInstance s = random_instance(sh.seed, sh.d, sh.N, SymbolProfile::real_symbol);
      s.psi = canonical_dual(s.phi, o.tol);
      Rng rng(splitmix64(sh.seed));
      double a = rng.uniform(-2.2, 2.2), b = rng.uniform(-2.2, 2.2);
      if (a > b) std::swap(a, b);
      const BehnckeCount bc = behncke_interval_count(s.multiplier(), a, b, o.tol);
      if (!bc.pass) {
        ++bad;
        r.dump(Json{{"seed", sh.seed}, {"alpha", a}, {"beta", b}, {"count", bc.eigenvalue_count},
                    {"lower_bound", bc.lower_bound}, {"instance", to_json(instance_file_of(s.multiplier()))}});
      }
    }
    r.instances = n;
    r.check("eigenvalue count >= sum r_k - 3q", bad == 0, detail::fmt_count(bad, n));
  });
}

/// l^1 tails on the diagonal-pair example at several truncations.
inline SuiteResult suite_lp_tails(const SuiteOptions& o) {
  return detail::timed("lp_tails", [&](SuiteResult& r) {
    std::vector<std::size_t> sizes = o.sizes.empty() ? std::vector<std::size_t>{50, 100, 200} : o.sizes;
    for (std::size_t size : sizes) {
      const ScenarioInstance s = example_diagonal_pair(size);
      const MultiplierInstance inst = s.multiplier();
      const HermitianEigen e = hermitian_eig(inst.matrix, o.tol);
      std::vector<double> ev(e.values.data(), e.values.data() + e.values.size());
      const std::size_t q = static_cast<std::size_t>(excess(inst.phi, o.tol));
      const TailReport rep = eigenvalue_tail_report(ev, s.model->symbol, static_cast<std::size_t>(inst.phi.size()), 1.0, q);
      std::string detail;
      double nearest = 0.0, bound = 0.0;
      for (const TailClass& c : rep.classes) {
        detail += "l=" + shortest(c.limit) + ": left " + detail::fmt(c.left_sum) + " <= " + detail::fmt(c.left_bound) +
                  ", right " + detail::fmt(c.right_sum) + " <= " + detail::fmt(c.right_bound) + "; ";
        nearest += c.nearest_sum;
        bound = std::max({bound, c.left_bound, c.right_bound});
      }
      r.check("partial sums within (1 + 6q) sum |m - l| at truncation " + std::to_string(size), rep.within_bound,
              detail + "q = " + std::to_string(q));
      // Diagnostic only: grouping eigenvalues by their nearest limit instead of
      // the class intervals gives sum 1/n^2 (up to n = size, without n = 1).
      double ref = 0.0;
      for (std::size_t k = 2; k <= size; ++k) {
        const double v = 1.0 / static_cast<double>(k * k);
        ref += std::min(v, 1.0 - v);
      }
      r.checks.push_back({"diagnostic: nearest-limit grouping sum at truncation " + std::to_string(size),
                          std::abs(nearest - ref) <= 1e-9,
                          "sum " + detail::fmt(nearest) + " (closed form " + detail::fmt(ref) +
                              ", pi^2/6 - 1 = " + detail::fmt(std::numbers::pi * std::numbers::pi / 6.0 - 1.0) +
                              ") against a bound of " + detail::fmt(bound)});
    }
    r.instances = sizes.size();
  });
}

using SuiteFn = std::function<SuiteResult(const SuiteOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"duality", suite_duality},
      {"invertibility", suite_invertibility},
      {"riesz", suite_riesz},
      {"secular", suite_secular},
      {"adjoint", suite_adjoint},
      {"example_interleaved_onb", suite_interleaved},
      {"example_fourier_x2", suite_fourier},
      {"example_diagonal_pair", suite_diagonal_pair},
      {"example_duplicated_onb", suite_duplicated},
      {"example_excess_one_langley", suite_langley},
      {"behncke", suite_behncke},
      {"lp_tails", suite_lp_tails},
  };
  return reg;
}

inline const SuiteFn& find_suite(const std::string& name) {
  for (const auto& [n, f] : suite_registry()) {
    if (n == name) return f;
  }
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace dfm
