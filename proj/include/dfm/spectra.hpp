#pragma once

// Spectra of multipliers: dense finite spectra, essential spectra of
// structured models, classification of candidate points, truncation
// diagnostics, interval eigenvalue counts and l^p tail sums.

#include <dfm/secular.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dfm {

struct SpectralReport {
  std::vector<SpectralPoint> points;
  std::vector<Complex> essential;
  std::vector<Complex> eigenvalues;  // raw, repeated by algebraic multiplicity
  std::vector<ContourCertificate> certificates;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;

  /// Points that belong to the spectrum (anything except not_in_spectrum).
  std::vector<Complex> spectrum() const {
    std::vector<Complex> out;
    for (const SpectralPoint& p : points) {
      if (p.label != SpectralPoint::Label::not_in_spectrum && p.label != SpectralPoint::Label::unclassified) {
        out.push_back(p.value);
      }
    }
    for (const Complex& e : essential) {
      if (nearest_distance(e, out) > 0.0) out.push_back(e);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
  }
};

namespace detail {

/// Groups a sorted eigenvalue list into points with multiplicity; members of
/// a group lie within `radius` of its first element.
inline std::vector<SpectralPoint> group_eigenvalues(const std::vector<Complex>& ev, double radius,
                                                    const std::string& provenance) {
  std::vector<std::vector<Complex>> groups;
  for (const Complex& z : ev) {
    bool placed = false;
    for (auto& g : groups) {
      if (std::abs(g.front() - z) <= radius) {
        g.push_back(z);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({z});
  }
  std::vector<SpectralPoint> out;
  for (const auto& g : groups) {
    Complex mean(0.0, 0.0);
    for (const Complex& z : g) mean += z;
    mean /= static_cast<double>(g.size());
    out.push_back({mean, SpectralPoint::Label::eigenvalue, g.size(), provenance});
  }
  std::sort(out.begin(), out.end(), [](const SpectralPoint& a, const SpectralPoint& b) { return lex_less(a.value, b.value); });
  return out;
}

}  // namespace detail

/// All eigenvalues of the assembled matrix. In finite dimension the whole
/// spectrum is point spectrum.
inline SpectralReport finite_spectrum(const MultiplierInstance& inst, const TolerancePolicy& = {}) {
  SpectralReport rep;
  rep.eigenvalues = general_eig(inst.matrix);
  const double scale = std::max(1.0, operator_norm(inst.matrix));
  const double radius = std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
  rep.points = detail::group_eigenvalues(rep.eigenvalues, radius, "dense eigensolver");
  rep.diagnostics.push_back({"dimension", static_cast<double>(inst.matrix.rows())});
  rep.diagnostics.push_back({"operator_norm", scale});
  return rep;
}

/// For a finite-excess pair the essential spectrum is the set of limit points
/// of the symbol.
inline SpectralReport essential_spectrum(const StructuredModel& model) {
  if (!model.excess()) throw DomainError("essential_spectrum: frames must have a common finite excess");
  if (!model.symbol.structure()) throw DomainError("essential_spectrum: symbol has no declared limit structure");
  SpectralReport rep;
  rep.essential = limit_points(model.symbol);
  rep.notes.push_back("finite excess " + std::to_string(*model.excess()) +
                      ": essential spectrum equals the limit points of the symbol");
  return rep;
}

/// Default search region: bounding box of the symbol and the origin, inflated
/// so that every eigenvalue (|lambda| <= ||M||) lies strictly inside.
inline Region default_region(const MultiplierInstance& inst) {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  for (Index n = 0; n < inst.symbol.size(); ++n) {
    x0 = std::min(x0, inst.symbol(n).real());
    x1 = std::max(x1, inst.symbol(n).real());
    y0 = std::min(y0, inst.symbol(n).imag());
    y1 = std::max(y1, inst.symbol(n).imag());
  }
  const double pad = 1.1 * operator_norm(inst.matrix) + 0.1;
  return Region::rectangle(x0 - pad, x1 + pad, y0 - pad, y1 + pad);
}

/// Eigenvalues of a finite instance from the zeros of det A_lambda (off the
/// symbol) and the zeros of the pole-cleared function at symbol entries.
inline SpectralReport secular_spectrum(const MultiplierInstance& inst, const std::optional<Region>& region = std::nullopt,
                                       const TolerancePolicy& tol = {}, const RootSearchOptions& opt = {}) {
  const SecularEvaluator ev(secular_data(inst, tol), tol);
  const Region reg = region.value_or(default_region(inst));
  const SecularRoots roots = secular_roots(ev, reg, opt);
  SpectralReport rep;
  for (const SecularRoot& r : roots.roots) {
    rep.points.push_back({r.value, SpectralPoint::Label::eigenvalue, r.multiplicity, "secular determinant vanishes"});
    rep.certificates.push_back(r.certificate);
    for (std::size_t k = 0; k < r.multiplicity; ++k) rep.eigenvalues.push_back(r.value);
  }
  for (const SecularRoot& r : roots.symbol_zeros) {
    rep.points.push_back({r.value, SpectralPoint::Label::eigenvalue, r.multiplicity,
                          "symbol value: zero of the pole-cleared secular function"});
    rep.certificates.push_back(r.certificate);
    for (std::size_t k = 0; k < r.multiplicity; ++k) rep.eigenvalues.push_back(r.value);
  }
  std::sort(rep.points.begin(), rep.points.end(),
            [](const SpectralPoint& a, const SpectralPoint& b) { return lex_less(a.value, b.value); });
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), lex_less);
  rep.certificates.insert(rep.certificates.begin(), roots.region_certificate);
  rep.diagnostics.push_back({"excess", static_cast<double>(ev.data().q)});
  rep.diagnostics.push_back({"region_winding", static_cast<double>(roots.region_certificate.winding_count)});
  rep.diagnostics.push_back({"evaluations", static_cast<double>(roots.evaluations)});
  rep.diagnostics.push_back({"complete", roots.complete ? 1.0 : 0.0});
  if (!roots.complete) rep.notes.push_back("root search incomplete: some certificate failed or a cluster was not isolated");
  return rep;
}

struct ClassifyOptions {
  std::size_t section_size = 256;  // truncation used for symbol-value tests
  SecularOptions secular;
  RootSearchOptions roots;
};

/// Labels each candidate by the first matching case: limit point, symbol
/// value (completeness / direct-sum tests on a truncation), or the secular
/// determinant. Residual spectrum is never reported.
inline SpectralReport classify_spectrum(const StructuredModel& model, const std::vector<Complex>& candidates,
                                        const TolerancePolicy& tol = {}, const ClassifyOptions& opt = {}) {
  if (!model.excess()) throw DomainError("classify_spectrum: frames must have a common finite excess");
  if (!model.symbol.structure()) throw DomainError("classify_spectrum: symbol has no declared limit structure");
  const std::size_t q = *model.excess();
  const LimitStructure& st = *model.symbol.structure();
  SpectralReport rep;
  rep.essential = limit_points(model.symbol);

  std::optional<SecularEvaluator> ev;
  auto evaluator = [&]() -> const SecularEvaluator& {
    if (!ev) ev.emplace(secular_data(model), tol, opt.secular);
    return *ev;
  };

  for (const Complex& lambda : candidates) {
    SpectralPoint pt{lambda, SpectralPoint::Label::unclassified, std::nullopt, ""};
    // Limit point.
    const LimitClass* hit = nullptr;
    for (const LimitClass& c : st.classes) {
      if (std::abs(c.limit - lambda) <= tol.eig_atol) {
        if (!hit || c.majorant.kind == Majorant::Kind::zero) hit = &c;
      }
    }
    // Symbol entries equal to lambda: the tail beyond Kc is certified away.
    std::size_t Kc = 16;
    bool tail_separated = true;
    if (!hit) {
      while (certified_tail_distance(model.symbol, lambda, Kc) <= tol.eig_atol) {
        Kc *= 2;
        if (Kc > opt.secular.max_truncation) {
          tail_separated = false;
          break;
        }
      }
    }
    std::vector<std::size_t> equal_at;
    for (std::size_t n = 0; n < std::min(Kc, opt.secular.max_truncation); ++n) {
      if (std::abs(model.symbol.at(n) - lambda) <= tol.eig_atol) equal_at.push_back(n);
    }

    if (hit) {
      pt.value = hit->limit;
      if (hit->majorant.kind == Majorant::Kind::zero) {
        pt.label = SpectralPoint::Label::eigenvalue;
        pt.provenance = "limit point attained infinitely often: eigenvalue";
      } else if (q == 0 && equal_at.empty()) {
        pt.label = SpectralPoint::Label::continuous_candidate;
        pt.provenance = "limit point of a Riesz-basis symbol, not attained: continuous spectrum";
      } else {
        pt.label = SpectralPoint::Label::limit_point;
        pt.provenance = "limit point attained finitely often: eigenvalue or continuous spectrum";
      }
    } else if (!tail_separated) {
      pt.provenance = "symbol tail not separated from lambda within the truncation cap";
    } else if (!equal_at.empty()) {
      const std::size_t T = std::max(opt.section_size, equal_at.back() + 8);
      const FiniteFrame phi = model.phi.section(T);
      const FiniteFrame psi = model.psi.section(T);
      const Vector shifted = model.symbol.prefix(static_cast<std::size_t>(phi.size())).array() - lambda;
      const Matrix Dshift = phi.synthesis_matrix() * shifted.asDiagonal();
      const double sc = operator_norm(phi.synthesis_matrix()) * std::max(1e-300, shifted.cwiseAbs().maxCoeff());
      if (!is_complete(Dshift, tol, sc)) {
        pt.label = SpectralPoint::Label::eigenvalue;
        pt.provenance = "symbol value: (m - lambda) phi not complete (truncation " + std::to_string(T) + ")";
      } else {
        const Matrix ker = nullspace_basis(Dshift, tol, sc);
        const Matrix ran = range_basis(psi.synthesis_matrix().adjoint(), tol, operator_norm(psi.synthesis_matrix()));
        if (!detail::direct_sum_is_everything(ker, ran, tol).holds) {
          pt.label = SpectralPoint::Label::eigenvalue;
          pt.provenance = "symbol value: kernel and analysis range not a direct sum (truncation " +
                          std::to_string(T) + ")";
        } else {
          pt.label = SpectralPoint::Label::not_in_spectrum;
          pt.provenance = "symbol value: M - lambda bijective on truncation " + std::to_string(T);
        }
      }
      pt.multiplicity = std::nullopt;
    } else {
      const SecularEvaluator& e = evaluator();
      try {
        const SecularValue val = e.evaluate_adaptive(lambda);
        rep.diagnostics.push_back({"truncation", static_cast<double>(val.truncation)});
        if (val.certified_nonzero()) {
          pt.label = SpectralPoint::Label::not_in_spectrum;
          pt.provenance = "secular determinant certified nonzero";
        } else {
          const double rho = 1e-6 * std::max(1.0, std::abs(lambda));
          const ContourCertificate c = secular_winding(e, Region::disk(lambda, rho), opt.roots);
          rep.certificates.push_back(c);
          if (c.valid && c.winding_count > 0) {
            pt.label = SpectralPoint::Label::eigenvalue;
            pt.multiplicity = static_cast<std::size_t>(c.winding_count);
            pt.provenance = "secular determinant vanishes within " + std::to_string(rho);
          } else if (c.valid) {
            pt.label = SpectralPoint::Label::not_in_spectrum;
            pt.provenance = "no secular root within " + std::to_string(rho);
          } else {
            pt.provenance = "secular determinant inconclusive at the truncation cap";
          }
        }
      } catch (const Error& err) {
        pt.provenance = std::string("secular evaluation failed: ") + err.what();
      }
    }
    rep.points.push_back(pt);
  }
  return rep;
}

struct TruncationDiagnostics {
  std::size_t size = 0;
  std::vector<Complex> eigenvalues;        // of M_m on the section
  std::vector<Complex> split_eigenvalues;  // of M_{m'}
  double near_fraction = 0.0;   // share of eigenvalues within eps of spec(M_{m'})
  std::size_t far_count = 0;    // eigenvalues farther than eps
  double split_distance = 0.0;  // max distance to spec(M_{m'}) outside eps-disks around limit points
  double split_identity_residual = 0.0;  // ||M_{m'} - c I|| when spec(M_{m'}) is a single point
};

struct TruncationFamily {
  std::vector<TruncationDiagnostics> rows;
  bool monotone = false;  // near_fraction non-decreasing in size
};

/// Spectra of M_m and M_{m'} on increasing sections.
inline TruncationFamily truncated_spectrum_family(const StructuredModel& model, const std::vector<std::size_t>& sizes,
                                                  double eps = 0.1) {
  if (!model.phi.section || !model.psi.section) throw DomainError("truncated_spectrum_family: missing generator");
  const CompactSplit split = compact_split(model.symbol);
  const std::vector<Complex> limits = limit_points(model.symbol);
  TruncationFamily fam;
  fam.monotone = true;
  for (std::size_t s : sizes) {
    const FiniteFrame phi = model.phi.section(s), psi = model.psi.section(s);
    const std::size_t N = static_cast<std::size_t>(phi.size());
    const MultiplierInstance M = assemble(model.symbol.prefix(N), phi, psi);
    const MultiplierInstance Mp = assemble(split.constant_part.prefix(N), phi, psi);
    TruncationDiagnostics row;
    row.size = s;
    row.eigenvalues = general_eig(M.matrix);
    row.split_eigenvalues = general_eig(Mp.matrix);
    std::size_t near = 0;
    for (const Complex& z : row.eigenvalues) {
      const double dist = nearest_distance(z, row.split_eigenvalues);
      if (dist <= eps) {
        ++near;
      } else {
        ++row.far_count;
      }
      if (nearest_distance(z, limits) > eps) row.split_distance = std::max(row.split_distance, dist);
    }
    row.near_fraction = row.eigenvalues.empty() ? 1.0 : static_cast<double>(near) / static_cast<double>(row.eigenvalues.size());
    const Complex c = row.split_eigenvalues.empty() ? Complex(0.0, 0.0) : row.split_eigenvalues.front();
    row.split_identity_residual =
        operator_norm(Mp.matrix - c * Matrix::Identity(Mp.matrix.rows(), Mp.matrix.cols()));
    if (!fam.rows.empty() && row.near_fraction + 1e-12 < fam.rows.back().near_fraction) fam.monotone = false;
    fam.rows.push_back(std::move(row));
  }
  return fam;
}

struct TailNorm {
  std::size_t K = 0;
  double norm = 0.0;   // ||M_{m'' restricted to n > K}||
  double bound = 0.0;  // sqrt(B_phi B_psi) * sup_{n > K} |m''_n|
};

struct TailNormProfile {
  std::vector<TailNorm> rows;
  bool within_bound = false;
  bool decreasing = false;
};

/// Norm of the multiplier whose symbol is m'' with its first K entries
/// removed, on a fixed section.
inline TailNormProfile tail_norm_profile(const StructuredModel& model, std::size_t size, const std::vector<std::size_t>& Ks,
                                         const TolerancePolicy& tol = {}) {
  const CompactSplit split = compact_split(model.symbol);
  const FiniteFrame phi = model.phi.section(size), psi = model.psi.section(size);
  const std::size_t N = static_cast<std::size_t>(phi.size());
  const double B = std::sqrt(frame_bounds(phi, tol).upper * frame_bounds(psi, tol).upper);
  const Vector mpp = split.vanishing_part.prefix(N);
  TailNormProfile prof;
  prof.within_bound = true;
  prof.decreasing = true;
  for (std::size_t K : Ks) {
    Vector cut = mpp;
    for (std::size_t n = 0; n < std::min(K, N); ++n) cut(static_cast<Index>(n)) = 0.0;
    TailNorm row;
    row.K = K;
    row.norm = operator_norm(assemble(cut, phi, psi).matrix);
    row.bound = B * (cut.size() ? cut.cwiseAbs().maxCoeff() : 0.0);
    if (row.norm > row.bound + tol.residual_atol) prof.within_bound = false;
    if (!prof.rows.empty() && row.norm > prof.rows.back().norm + tol.residual_atol) prof.decreasing = false;
    prof.rows.push_back(row);
  }
  return prof;
}

struct BehnckeCount {
  double alpha = 0.0, beta = 0.0;  // interval after the endpoint rule
  std::size_t eigenvalue_count = 0;
  long lower_bound = 0;  // sum r_k - 3 q
  std::size_t symbol_count = 0;  // sum r_k
  std::size_t excess = 0;
  bool pass = false;
};

/// Eigenvalues of M_{m,phi,psi} in [alpha, beta] for real m and psi the
/// canonical dual, counted on the similar self-adjoint M_{m,rho,rho}.
inline BehnckeCount behncke_interval_count(const MultiplierInstance& inst, double alpha, double beta,
                                           const TolerancePolicy& tol = {}) {
  if (!(beta >= alpha)) throw DomainError("behncke_interval_count: empty interval");
  if (inst.symbol.imag().cwiseAbs().maxCoeff() > 0.0) throw DomainError("behncke_interval_count: symbol is not real");
  const FiniteFrame dual = canonical_dual(inst.phi, tol);
  const double dev = operator_norm(dual.synthesis_matrix() - inst.psi.synthesis_matrix());
  if (dev > tol.residual_atol * std::max(1.0, operator_norm(dual.synthesis_matrix()))) {
    throw DomainError("behncke_interval_count: psi is not the canonical dual of phi");
  }
  BehnckeCount out;
  out.alpha = alpha - 10.0 * tol.eig_atol;
  out.beta = beta + 10.0 * tol.eig_atol;
  const FiniteFrame rho = canonical_parseval(inst.phi, tol);
  const Matrix H = assemble(inst.symbol, rho, rho).matrix;
  const HermitianEigen e = hermitian_eig(H, tol);
  for (Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) >= out.alpha && e.values(k) <= out.beta) ++out.eigenvalue_count;
  }
  for (Index n = 0; n < inst.symbol.size(); ++n) {
    const double v = inst.symbol(n).real();
    if (v >= alpha && v <= beta) ++out.symbol_count;
  }
  out.excess = static_cast<std::size_t>(excess(inst.phi, tol));
  out.lower_bound = static_cast<long>(out.symbol_count) - 3 * static_cast<long>(out.excess);
  out.pass = static_cast<long>(out.eigenvalue_count) >= out.lower_bound;
  return out;
}

struct TailClass {
  double limit = 0.0;
  double p = 1.0;
  double left_sum = 0.0;    // over eigenvalues in [min m^l, l]
  double right_sum = 0.0;   // over eigenvalues in [l, max m^r]
  double left_bound = 0.0;  // (1 + 6q) sum |m^l - l|^p
  double right_bound = 0.0;
  double nearest_sum = 0.0;  // over eigenvalues whose nearest limit is l
  std::size_t nearest_count = 0;
  bool within_bound = false;
};

struct TailReport {
  std::vector<TailClass> classes;
  std::size_t excess = 0;
  bool within_bound = false;
};

/// Partial l^p sums of eigenvalue distances to the limits. Class i collects
/// the eigenvalues in [min m_i^l, l_i] and [l_i, max m_i^r], where m_i^l and
/// m_i^r are the class entries in (l_{i-1}, l_i] and [l_i, l_{i+1}).
inline TailReport eigenvalue_tail_report(const std::vector<double>& eigenvalues, const std::vector<double>& symbol,
                                         const std::vector<std::size_t>& class_of, const std::vector<double>& limits,
                                         const std::vector<double>& p, std::size_t q, double slack = 1e-9) {
  if (symbol.size() != class_of.size()) throw ShapeError("eigenvalue_tail_report: class assignment length differs");
  if (limits.size() != p.size()) throw ShapeError("eigenvalue_tail_report: one exponent per limit expected");
  std::vector<std::size_t> order(limits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return limits[a] < limits[b]; });
  TailReport rep;
  rep.excess = q;
  rep.within_bound = true;
  const double factor = 1.0 + 6.0 * static_cast<double>(q);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    const double l = limits[i];
    const double lprev = pos == 0 ? -std::numeric_limits<double>::infinity() : limits[order[pos - 1]];
    const double lnext = pos + 1 == order.size() ? std::numeric_limits<double>::infinity() : limits[order[pos + 1]];
    TailClass tc;
    tc.limit = l;
    tc.p = p[i];
    std::optional<double> lo, hi;
    for (std::size_t n = 0; n < symbol.size(); ++n) {
      if (class_of[n] != i) continue;
      const double v = symbol[n];
      if (v > lprev && v <= l) {
        tc.left_bound += std::pow(std::abs(v - l), tc.p);
        lo = lo ? std::min(*lo, v) : v;
      }
      if (v >= l && v < lnext) {
        tc.right_bound += std::pow(std::abs(v - l), tc.p);
        hi = hi ? std::max(*hi, v) : v;
      }
    }
    tc.left_bound *= factor;
    tc.right_bound *= factor;
    std::size_t left_n = 0, right_n = 0;
    for (double lam : eigenvalues) {
      if (lo && lam >= *lo - slack && lam <= l + slack) {
        tc.left_sum += std::pow(std::abs(lam - l), tc.p);
        ++left_n;
      }
      if (hi && lam >= l - slack && lam <= *hi + slack) {
        tc.right_sum += std::pow(std::abs(lam - l), tc.p);
        ++right_n;
      }
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t k = 0; k < limits.size(); ++k) {
        if (std::abs(lam - limits[k]) < best) {
          best = std::abs(lam - limits[k]);
          arg = k;
        }
      }
      if (arg == i) {
        tc.nearest_sum += std::pow(best, tc.p);
        ++tc.nearest_count;
      }
    }
    const double tol_l = static_cast<double>(left_n) * std::pow(slack, tc.p);
    const double tol_r = static_cast<double>(right_n) * std::pow(slack, tc.p);
    tc.within_bound = tc.left_sum <= tc.left_bound + tol_l && tc.right_sum <= tc.right_bound + tol_r;
    rep.within_bound = rep.within_bound && tc.within_bound;
    rep.classes.push_back(tc);
  }
  std::sort(rep.classes.begin(), rep.classes.end(), [](const TailClass& a, const TailClass& b) { return a.limit < b.limit; });
  return rep;
}

/// Same report for a real symbol with declared structure, using its first N
/// entries and the class assignment of the structure.
inline TailReport eigenvalue_tail_report(const std::vector<double>& eigenvalues, const Symbol& symbol, std::size_t N,
                                         double p, std::size_t q) {
  if (!symbol.structure()) throw DomainError("eigenvalue_tail_report: symbol has no declared limit structure");
  const LimitStructure& st = *symbol.structure();
  std::vector<double> limits, ps;
  std::vector<std::size_t> class_map(st.classes.size());
  for (std::size_t k = 0; k < st.classes.size(); ++k) {
    const double l = st.classes[k].limit.real();
    auto it = std::find(limits.begin(), limits.end(), l);
    if (it == limits.end()) {
      class_map[k] = limits.size();
      limits.push_back(l);
      ps.push_back(p);
    } else {
      class_map[k] = static_cast<std::size_t>(it - limits.begin());
    }
  }
  std::vector<double> entries(N);
  std::vector<std::size_t> cls(N);
  for (std::size_t n = 0; n < N; ++n) {
    entries[n] = symbol.at(n).real();
    cls[n] = class_map[st.class_index(n)];
  }
  return eigenvalue_tail_report(eigenvalues, entries, cls, limits, ps, q);
}

}  // namespace dfm
