#pragma once

// Command-line front end. run() is the whole program; tools/dfm.cpp only
// forwards argv.

#include <dfm/verify.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace dfm {

namespace cli {

inline Region parse_region(const std::string& spec) {
  auto numbers = [&](const std::string& body, std::size_t want) {
    std::vector<double> v;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size()) throw InputError("--region: bad number '" + tok + "'");
      v.push_back(x);
    }
    if (v.size() != want) throw InputError("--region: expected " + std::to_string(want) + " numbers in '" + spec + "'");
    return v;
  };
  try {
    if (spec.rfind("rect:", 0) == 0) {
      const auto v = numbers(spec.substr(5), 4);
      return Region::rectangle(v[0], v[1], v[2], v[3]);
    }
    if (spec.rfind("disk:", 0) == 0) {
      const auto v = numbers(spec.substr(5), 3);
      return Region::disk(Complex(v[0], v[1]), v[2]);
    }
  } catch (const DomainError& e) {
    throw InputError(std::string("--region: ") + e.what());
  }
  throw InputError("--region: expected rect:x0,x1,y0,y1 or disk:re,im,r");
}

inline std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("--sizes: expected a comma-separated list of positive integers");
    }
    out.push_back(std::stoul(tok));
  }
  return out;
}

inline Json frame_summary(const FiniteFrame& f, const TolerancePolicy& tol) {
  Json j{{"dim", f.dim()}, {"size", f.size()}};
  const bool frame = is_frame(f, tol);
  j["is_frame"] = frame;
  j["excess"] = excess(f, tol);
  j["riesz"] = is_riesz_basis(f, tol);
  if (frame) {
    const FrameBounds b = frame_bounds(f, tol);
    j["bounds"] = Json{{"lower", b.lower}, {"upper", b.upper}};
    j["parseval"] = std::abs(b.lower - 1.0) <= tol.residual_atol && std::abs(b.upper - 1.0) <= tol.residual_atol;
  } else {
    j["bounds"] = nullptr;
    j["parseval"] = false;
  }
  return j;
}

/// Instance restricted to a new section size (structured files only).
inline MultiplierInstance section_of(const LoadedInstance& L, std::optional<std::size_t> size) {
  if (!size || !L.model) return L.finite;
  const FiniteFrame phi = L.model->phi.section(*size), psi = L.model->psi.section(*size);
  return assemble(L.model->symbol.prefix(static_cast<std::size_t>(phi.size())), phi, psi);
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const std::string& c : cells) s += (s.empty() ? "" : ",") + c;
  return s + "\n";
}

struct Context {
  std::vector<std::string> argv;
  bool timing = false;
  std::string out_path;
};

inline Json envelope(const Context& ctx, const TolerancePolicy& tol) {
  return Json{{"command", ctx.argv}, {"tolerance", io::to_json(tol)}, {"discrepancies", Json::array()}};
}

inline void emit(const Context& ctx, const Json& report, std::ostream& out) {
  const std::string text = dump(report);
  if (ctx.out_path.empty()) {
    out << text;
  } else {
    write_file(ctx.out_path, text);
  }
}

// ---------------------------------------------------------------------------

inline int cmd_frame_info(const Context& ctx, const std::string& file, std::ostream& out) {
  const LoadedInstance L = materialize(load_instance(file));
  Json rep = envelope(ctx, L.tol);
  const MultiplierInstance& inst = L.finite;
  Json res{{"phi", frame_summary(inst.phi, L.tol)}, {"psi", frame_summary(inst.psi, L.tol)}};
  const DualityCheck dc = is_dual_pair(inst.phi, inst.psi, L.tol);
  res["dual_pair"] = Json{{"holds", dc.dual}, {"residual", dc.residual}};
  res["symbol"] = Json{{"length", inst.symbol.size()},
                       {"sup", inst.symbol.size() ? inst.symbol.cwiseAbs().maxCoeff() : 0.0}};
  res["notes"] = L.notes;
  rep["results"] = res;
  emit(ctx, rep, out);
  return 0;
}

struct SpectrumArgs {
  std::string file;
  std::string method = "dense";
  std::string region;
  std::optional<std::size_t> truncation;
  std::string csv;
};

inline SpectralReport secular_report(const LoadedInstance& L, const std::optional<Region>& region,
                                     const std::optional<std::size_t>& truncation) {
  RootSearchOptions ro;
  if (L.model) {
    if (!L.model->excess()) {
      throw DomainError("secular method needs frames with a common finite excess; '" + L.model->name +
                        "' has infinite excess");
    }
    if (!region) throw InputError("secular method on a structured instance needs --region");
    if (truncation) ro.start_truncation = truncation;
    const SecularEvaluator ev(secular_data(*L.model), L.tol);
    const SecularRoots roots = secular_roots(ev, *region, ro);
    SpectralReport rep = classify_spectrum(*L.model, limit_points(L.model->symbol), L.tol);
    rep.notes.push_back(essential_spectrum(*L.model).notes.front());
    rep.certificates.insert(rep.certificates.begin(), roots.region_certificate);
    for (const auto* list : {&roots.roots, &roots.symbol_zeros}) {
      for (const SecularRoot& r : *list) {
        rep.points.push_back({r.value, SpectralPoint::Label::eigenvalue, r.multiplicity,
                              r.at_symbol ? "symbol value: zero of the pole-cleared secular function"
                                          : "secular determinant vanishes"});
        rep.certificates.push_back(r.certificate);
        for (std::size_t k = 0; k < r.multiplicity; ++k) rep.eigenvalues.push_back(r.value);
      }
    }
    rep.diagnostics.push_back({"excess", static_cast<double>(*L.model->excess())});
    rep.diagnostics.push_back({"region_winding", static_cast<double>(roots.region_certificate.winding_count)});
    rep.diagnostics.push_back({"evaluations", static_cast<double>(roots.evaluations)});
    rep.diagnostics.push_back({"complete", roots.complete ? 1.0 : 0.0});
    if (!roots.complete) {
      rep.notes.push_back("root search incomplete: a boundary certificate failed, so zeros inside the region are not excluded");
    }
    std::sort(rep.points.begin(), rep.points.end(),
              [](const SpectralPoint& a, const SpectralPoint& b) { return lex_less(a.value, b.value); });
    return rep;
  }
  const MultiplierInstance& inst = L.finite;
  const Region reg = region.value_or(default_region(inst));
  if (excess(inst.phi, L.tol) == 0) {
    for (Index n = 0; n < inst.symbol.size(); ++n) {
      if (reg.distance(inst.symbol(n)) <= L.tol.eig_atol) {
        throw DomainError("secular method with excess 0: the secular matrix is empty and every eigenvalue is a symbol "
                          "value, so a region touching the symbol cannot be resolved this way; use --method dense");
      }
    }
  }
  return secular_spectrum(inst, reg, L.tol, ro);
}

inline int cmd_spectrum(const Context& ctx, const SpectrumArgs& a, std::ostream& out) {
  const LoadedInstance L = materialize(load_instance(a.file));
  std::optional<Region> region;
  if (!a.region.empty()) region = parse_region(a.region);
  Json rep = envelope(ctx, L.tol);
  Json res{{"method", a.method}};
  std::vector<SpectralPoint> csv_points;
  int code = 0;
  std::optional<SpectralReport> dense, secular;
  if (a.method == "dense" || a.method == "both") {
    const MultiplierInstance inst = section_of(L, a.truncation);
    dense = finite_spectrum(inst, L.tol);
    if (L.model) dense->notes.push_back("dense spectrum of the section with " + std::to_string(inst.phi.size()) + " vectors");
    res["dense"] = to_json(*dense);
    csv_points = dense->points;
  }
  if (a.method == "secular" || a.method == "both") {
    secular = secular_report(L, region, a.truncation);
    res["secular"] = to_json(*secular);
    csv_points = secular->points;
  }
  if (dense && secular) {
    if (L.model) {
      res["cross_validation"] = Json{{"performed", false}, {"reason", "dense results are for a finite section only"}};
    } else {
      const Region reg = region.value_or(default_region(L.finite));
      std::vector<Complex> inside;
      for (const Complex& z : dense->eigenvalues) {
        if (reg.contains(z)) inside.push_back(z);
      }
      const double dist = multiset_distance(inside, secular->eigenvalues);
      const bool ok = inside.size() == secular->eigenvalues.size() && dist <= 1e-8;
      res["cross_validation"] = Json{{"performed", true}, {"passed", ok}, {"distance", dist},
                                     {"dense_count", inside.size()}, {"secular_count", secular->eigenvalues.size()}};
      if (!ok) code = 1;
    }
  }
  rep["results"] = res;
  if (!a.csv.empty()) write_file(a.csv, points_csv(csv_points));
  emit(ctx, rep, out);
  return code;
}

inline int cmd_invertibility(const Context& ctx, const std::string& file, std::ostream& out) {
  const LoadedInstance L = materialize(load_instance(file));
  Json rep = envelope(ctx, L.tol);
  rep["results"] = to_json(invertibility_report(L.finite, L.tol));
  if (L.model) rep["results"]["note"] = "decided on the finite section";
  emit(ctx, rep, out);
  return 0;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> instances;
  std::string sizes;
};

inline int cmd_verify(const Context& ctx, const VerifyArgs& a, std::ostream& out) {
  SuiteOptions o;
  o.seed = a.seed.value_or(default_seed());
  o.instances = a.instances;
  if (!a.sizes.empty()) o.sizes = parse_sizes(a.sizes);
  std::vector<std::string> names = a.suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    names.clear();
    for (const auto& [n, f] : suite_registry()) names.push_back(n);
  }
  for (const std::string& n : names) find_suite(n);  // reject unknown names before running anything
  Json rep = envelope(ctx, o.tol);
  rep["seed"] = o.seed;
  Json suites = Json::array();
  bool ok = true;
  for (const std::string& n : names) {
    const SuiteResult r = find_suite(n)(o);
    ok = ok && r.passed;
    suites.push_back(to_json(r, ctx.timing));
    for (const FactOutcome& f : r.discrepancies) {
      rep["discrepancies"].push_back(Json{{"suite", n}, {"fact", f.name}, {"detail", f.detail}});
    }
  }
  rep["results"] = Json{{"passed", ok}, {"suites", suites}};
  emit(ctx, rep, out);
  return ok ? 0 : 1;
}

struct PlotArgs {
  std::string file;
  std::string outdir;
  std::string region;
  std::size_t grid = 50;
  std::optional<std::size_t> truncation;
};

inline int cmd_emit_plot_data(const Context& ctx, const PlotArgs& a, std::ostream& out) {
  const LoadedInstance L = materialize(load_instance(a.file));
  std::error_code ec;
  std::filesystem::create_directories(a.outdir, ec);
  if (ec || !std::filesystem::is_directory(a.outdir)) throw InputError("cannot create directory '" + a.outdir + "'");
  const std::filesystem::path dir(a.outdir);
  Json files = Json::object();

  // Spectrum cloud of the finite instance or section.
  const MultiplierInstance inst = section_of(L, a.truncation);
  std::string cloud = "re,im\n";
  for (const Complex& z : general_eig(inst.matrix)) cloud += csv_row({shortest(z.real()), shortest(z.imag())});
  write_file((dir / "spectrum_cloud.csv").string(), cloud);
  files["spectrum_cloud"] = "spectrum_cloud.csv";

  // |det A_lambda| against its error bound on a grid.
  std::string heat = "re,im,abs_value,error_bound,truncation,certified\n";
  std::optional<SecularEvaluator> ev;
  std::optional<Region> region;
  if (!a.region.empty()) region = parse_region(a.region);
  if (L.model && L.model->excess() && *L.model->excess() > 0) {
    ev.emplace(secular_data(*L.model), L.tol);
  } else if (!L.model && excess(inst.phi, L.tol) > 0) {
    ev.emplace(secular_data(inst, L.tol), L.tol);
    if (!region) region = default_region(inst);
  }
  std::size_t grid_points = 0;
  if (ev && region && a.grid > 0) {
    double x0, x1, y0, y1;
    if (region->kind == Region::Kind::disk) {
      x0 = region->center.real() - region->radius;
      x1 = region->center.real() + region->radius;
      y0 = region->center.imag() - region->radius;
      y1 = region->center.imag() + region->radius;
    } else {
      x0 = region->x0, x1 = region->x1, y0 = region->y0, y1 = region->y1;
    }
    const std::size_t n = a.grid;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double fx = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
        const double fy = n == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(n - 1);
        const Complex z(x0 + (x1 - x0) * fx, y0 + (y1 - y0) * fy);
        if (!region->contains(z)) continue;
        try {
          const SecularValue v = ev->evaluate_adaptive(z, {}, a.truncation);
          heat += csv_row({shortest(z.real()), shortest(z.imag()), shortest(std::abs(v.value)), shortest(v.value_error),
                           std::to_string(v.truncation), v.certified_nonzero() ? "1" : "0"});
          ++grid_points;
        } catch (const DomainError&) {
          // on a symbol entry
        }
      }
    }
  }
  write_file((dir / "secular_heat.csv").string(), heat);
  files["secular_heat"] = "secular_heat.csv";

  // Convergence of det A_lambda in the truncation at the region centre.
  std::string conv_sec = "truncation,re,im,error_bound\n";
  if (ev && !ev->finite() && region) {
    const Complex z = region->kind == Region::Kind::disk ? region->center
                                                         : Complex(0.5 * (region->x0 + region->x1), 0.5 * (region->y0 + region->y1));
    for (std::size_t K = 64; K <= ev->cap(); K *= 4) {
      try {
        const SecularValue v = ev->evaluate(z, K);
        conv_sec += csv_row({std::to_string(K), shortest(v.value.real()), shortest(v.value.imag()), shortest(v.value_error)});
      } catch (const DomainError&) {
        break;
      }
    }
  }
  write_file((dir / "convergence_secular.csv").string(), conv_sec);
  files["convergence_secular"] = "convergence_secular.csv";

  // Finite-section diagnostics for closed-form models.
  std::string conv_sec2 = "size,near_fraction,split_distance,far_count\n";
  if (L.model && L.model->symbol.structure() && L.model->phi.kind == StructuredFrame::Kind::closed_form) {
    std::vector<std::size_t> sizes;
    const std::size_t top = a.truncation.value_or(64);
    for (std::size_t s = 8; s <= top; s *= 2) sizes.push_back(s);
    for (const TruncationDiagnostics& row : truncated_spectrum_family(*L.model, sizes).rows) {
      conv_sec2 += csv_row({std::to_string(row.size), shortest(row.near_fraction), shortest(row.split_distance),
                            std::to_string(row.far_count)});
    }
  }
  write_file((dir / "convergence_sections.csv").string(), conv_sec2);
  files["convergence_sections"] = "convergence_sections.csv";

  Json rep = envelope(ctx, L.tol);
  rep["results"] = Json{{"directory", a.outdir}, {"files", files}, {"grid_points", grid_points}};
  emit(ctx, rep, out);
  return 0;
}

inline int cmd_scenario(const Context& ctx, const std::string& name, std::size_t size, bool explicit_frames,
                        std::ostream& out) {
  InstanceFile f;
  f.name = name;
  if (explicit_frames) {
    const ScenarioInstance s = [&]() {
      try {
        return build_scenario(name, size);
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
    }();
    f.phi = s.phi;
    f.psi = s.psi;
    f.symbol = s.symbol;
  } else {
    try {
      build_scenario(name, size);
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
    f.scenario = name;
    f.size = size;
  }
  emit(ctx, to_json(f), out);
  return 0;
}

inline int cmd_random(const Context& ctx, std::uint64_t seed, Index d, Index N, const std::string& profile,
                      std::ostream& out) {
  if (d < 1 || N < d) throw InputError("random: need N >= d >= 1");
  const ScenarioInstance s = random_instance(seed, d, N, parse_profile(profile));
  InstanceFile f = instance_file_of(s.multiplier(), "random_instance");
  emit(ctx, to_json(f), out);
  return 0;
}

}  // namespace cli

/// Runs the command line; returns the process exit code (0 success, 1 suite
/// or cross-validation failure, 2 input error).
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual frame multipliers: spectra, invertibility and verification suites", "dfm"};
  app.require_subcommand(1);
  cli::Context ctx;
  for (int k = 0; k < argc; ++k) ctx.argv.push_back(k == 0 ? "dfm" : argv[k]);
  app.add_flag("--timing", ctx.timing, "Include wall-clock timings in reports");
  app.add_option("-o,--out", ctx.out_path, "Write the JSON report to this file instead of stdout");

  std::string file;
  auto* fi = app.add_subcommand("frame-info", "Frame bounds, excess, Riesz/Parseval/dual-pair status");
  fi->add_option("file", file, "Instance file")->required();

  cli::SpectrumArgs sa;
  auto* sp = app.add_subcommand("spectrum", "Spectrum by dense eigensolver and/or secular determinant");
  sp->add_option("file", sa.file, "Instance file")->required();
  sp->add_option("--method", sa.method, "dense, secular or both")->check(CLI::IsMember({"dense", "secular", "both"}));
  sp->add_option("--region", sa.region, "rect:x0,x1,y0,y1 or disk:re,im,r");
  sp->add_option("--truncation", sa.truncation, "Section size (dense) or starting truncation (secular)");
  sp->add_option("--csv", sa.csv, "Write spectral points to this CSV file");

  auto* inv = app.add_subcommand("invertibility", "Injectivity, surjectivity and bijectivity with witnesses");
  inv->add_option("file", file, "Instance file")->required();

  cli::VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run property suites (default: all)");
  ver->add_option("suites", va.suites, "Suite names or 'all'");
  ver->add_option("--seed", va.seed, "Seed (default from SPECTRA_FRAMES_SEED or built in)");
  ver->add_option("--instances", va.instances, "Number of random instances per suite");
  ver->add_option("--sizes", va.sizes, "Comma-separated sizes for scenario suites");

  cli::PlotArgs pa;
  auto* pl = app.add_subcommand("emit-plot-data", "Write CSV plot data into a directory");
  pl->add_option("file", pa.file, "Instance file")->required();
  pl->add_option("outdir", pa.outdir, "Output directory")->required();
  pl->add_option("--region", pa.region, "rect:x0,x1,y0,y1 or disk:re,im,r");
  pl->add_option("--grid", pa.grid, "Grid points per axis (0 writes headers only)");
  pl->add_option("--truncation", pa.truncation, "Section size or starting truncation");

  std::string sname;
  std::size_t ssize = 8;
  bool sexplicit = false;
  auto* sc = app.add_subcommand("scenario", "Print an instance file for a named scenario");
  sc->add_option("name", sname, "Scenario name")->required();
  sc->add_option("--size", ssize, "Size or truncation parameter");
  sc->add_flag("--explicit", sexplicit, "Write explicit frames instead of a structured block");

  std::uint64_t rseed = 0;
  Index rd = 3, rN = 5;
  std::string rprofile = "generic";
  auto* rnd = app.add_subcommand("random", "Print a random instance file");
  rnd->add_option("--seed", rseed, "Seed");
  rnd->add_option("--d", rd, "Dimension");
  rnd->add_option("--N", rN, "Number of vectors");
  rnd->add_option("--profile", rprofile, "generic, planted_zeros, planted_collisions, real_symbol, canonical_dual_pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dfm: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*fi) return cli::cmd_frame_info(ctx, file, out);
    if (*sp) return cli::cmd_spectrum(ctx, sa, out);
    if (*inv) return cli::cmd_invertibility(ctx, file, out);
    if (*ver) return cli::cmd_verify(ctx, va, out);
    if (*pl) return cli::cmd_emit_plot_data(ctx, pa, out);
    if (*sc) return cli::cmd_scenario(ctx, sname, ssize, sexplicit, out);
    if (*rnd) return cli::cmd_random(ctx, rseed, rd, rN, rprofile, out);
  } catch (const InputError& e) {
    err << "dfm: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    err << "dfm: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "dfm: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dfm
