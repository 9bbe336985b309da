#pragma once

// Instance files (JSON, schema version 1), report serialisation and CSV
// point clouds.

#include <dfm/scenarios.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dfm {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that reads back to the same double.
inline std::string shortest(double v) {
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace io {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw InputError((path.empty() ? std::string("/") : path) + ": " + msg);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing key '" + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im] pair");
  return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

inline Json to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const Complex& z : v) a.push_back(to_json(z));
  return a;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(to_json(v(k)));
  return a;
}

inline Vector vector_from(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [re, im] pairs");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = complex_from(j[k], path + "/" + std::to_string(k));
  return v;
}

/// {"dim": d, "vectors": [[[re, im], ...], ...]} with one inner array per vector.
inline Json to_json(const FiniteFrame& f) {
  Json vecs = Json::array();
  for (Index n = 0; n < f.size(); ++n) vecs.push_back(to_json(Vector(f.vector(n))));
  return Json{{"dim", f.dim()}, {"vectors", vecs}};
}

inline FiniteFrame frame_from(const Json& j, const std::string& path) {
  const std::size_t d = count(member(j, "dim", path), path + "/dim");
  const Json& vecs = member(j, "vectors", path);
  if (!vecs.is_array() || vecs.empty()) fail(path + "/vectors", "expected a non-empty array of vectors");
  if (d == 0) fail(path + "/dim", "dimension must be positive");
  Matrix D(static_cast<Index>(d), static_cast<Index>(vecs.size()));
  for (std::size_t n = 0; n < vecs.size(); ++n) {
    const std::string p = path + "/vectors/" + std::to_string(n);
    const Vector v = vector_from(vecs[n], p);
    if (v.size() != static_cast<Index>(d)) fail(p, "vector length " + std::to_string(v.size()) + " differs from dim");
    D.col(static_cast<Index>(n)) = v;
  }
  if (!D.allFinite()) fail(path, "non-finite entry");
  return FiniteFrame(D);
}

inline Json to_json(const Majorant& m) {
  if (m.kind == Majorant::Kind::zero) return Json{{"kind", "zero"}};
  return Json{{"kind", "power"}, {"scale", m.scale}, {"exponent", m.exponent}};
}

inline Majorant majorant_from(const Json& j, const std::string& path) {
  const Json& k = member(j, "kind", path);
  if (k == "zero") return Majorant::none();
  if (k == "power") {
    return Majorant::power(number(member(j, "scale", path), path + "/scale"),
                           number(member(j, "exponent", path), path + "/exponent"));
  }
  fail(path + "/kind", "expected \"zero\" or \"power\"");
}

inline Json to_json(const LimitStructure& st) {
  Json a = Json::array();
  for (const LimitClass& c : st.classes) {
    a.push_back(Json{{"modulus", c.modulus}, {"residue", c.residue}, {"limit", to_json(c.limit)},
                     {"majorant", to_json(c.majorant)}});
  }
  return a;
}

inline LimitStructure structure_from(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of classes");
  LimitStructure st;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "/" + std::to_string(k);
    LimitClass c;
    c.modulus = count(member(j[k], "modulus", p), p + "/modulus");
    c.residue = count(member(j[k], "residue", p), p + "/residue");
    c.limit = complex_from(member(j[k], "limit", p), p + "/limit");
    if (j[k].contains("majorant")) c.majorant = majorant_from(j[k]["majorant"], p + "/majorant");
    st.classes.push_back(c);
  }
  try {
    st.validate();
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return st;
}

inline Json to_json(const TolerancePolicy& t) {
  return Json{{"rank_rtol", t.rank_rtol}, {"eig_atol", t.eig_atol}, {"residual_atol", t.residual_atol}};
}

inline TolerancePolicy tolerance_from(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  TolerancePolicy t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = path + "/" + it.key();
    if (it.key() == "rank_rtol") t.rank_rtol = number(*it, p);
    else if (it.key() == "eig_atol") t.eig_atol = number(*it, p);
    else if (it.key() == "residual_atol") t.residual_atol = number(*it, p);
    else fail(p, "unknown tolerance field");
  }
  try {
    t.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return t;
}

}  // namespace io

/// Contents of an instance file. Either explicit frames and symbol, or a
/// structured block naming a scenario.
struct InstanceFile {
  int schema_version = kSchemaVersion;
  std::string name;
  std::optional<FiniteFrame> phi;
  std::optional<FiniteFrame> psi;  // empty with psi_rule set
  std::string psi_rule;            // "", "same" or "canonical_dual"
  std::optional<Vector> symbol;
  std::optional<LimitStructure> structure;
  std::optional<std::string> scenario;
  std::size_t size = 0;
  std::optional<TolerancePolicy> tolerance;
};

inline Json to_json(const InstanceFile& f) {
  Json j;
  j["schema_version"] = f.schema_version;
  if (!f.name.empty()) j["name"] = f.name;
  if (f.scenario) j["structured"] = Json{{"scenario", *f.scenario}, {"size", f.size}};
  if (f.phi) j["phi"] = io::to_json(*f.phi);
  if (f.psi) j["psi"] = io::to_json(*f.psi);
  else if (!f.psi_rule.empty()) j["psi"] = f.psi_rule;
  if (f.symbol || f.structure) {
    Json s = Json::object();
    if (f.symbol) s["entries"] = io::to_json(*f.symbol);
    if (f.structure) s["classes"] = io::to_json(*f.structure);
    j["symbol"] = s;
  }
  if (f.tolerance) j["tolerance"] = io::to_json(*f.tolerance);
  return j;
}

inline InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) io::fail("", "instance must be a JSON object");
  InstanceFile f;
  const Json& ver = io::member(j, "schema_version", "");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
    io::fail("/schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"schema_version", "name", "structured", "phi", "psi", "symbol", "tolerance"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      io::fail("/" + it.key(), "unknown field");
    }
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) io::fail("/name", "expected a string");
    f.name = j["name"].get<std::string>();
  }
  if (j.contains("tolerance")) f.tolerance = io::tolerance_from(j["tolerance"], "/tolerance");
  if (j.contains("structured")) {
    const Json& s = j["structured"];
    const Json& sc = io::member(s, "scenario", "/structured");
    if (!sc.is_string()) io::fail("/structured/scenario", "expected a string");
    f.scenario = sc.get<std::string>();
    f.size = io::count(io::member(s, "size", "/structured"), "/structured/size");
    if (j.contains("phi") || j.contains("psi") || j.contains("symbol")) {
      io::fail("/structured", "a structured instance cannot also carry phi, psi or symbol");
    }
    return f;
  }
  f.phi = io::frame_from(io::member(j, "phi", ""), "/phi");
  if (j.contains("psi")) {
    const Json& p = j["psi"];
    if (p.is_string()) {
      f.psi_rule = p.get<std::string>();
      if (f.psi_rule != "same" && f.psi_rule != "canonical_dual") {
        io::fail("/psi", "expected a frame, \"same\" or \"canonical_dual\"");
      }
    } else {
      f.psi = io::frame_from(p, "/psi");
    }
  } else {
    f.psi_rule = "same";
  }
  const Json& s = io::member(j, "symbol", "");
  if (s.contains("entries")) f.symbol = io::vector_from(s["entries"], "/symbol/entries");
  if (s.contains("classes")) f.structure = io::structure_from(s["classes"], "/symbol/classes");
  if (!f.symbol) io::fail("/symbol", "missing key 'entries'");
  return f;
}

/// Parses text, reporting syntax errors with line and column.
inline InstanceFile parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  return instance_from_json(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InstanceFile load_instance(const std::string& path) { return parse_instance(read_file(path)); }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes via a temporary file and a rename.
inline void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("cannot write '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot write '" + path + "'");
}

/// A ready-to-use instance: the finite multiplier, plus the structured model
/// for scenario-backed files.
struct LoadedInstance {
  std::string name;
  MultiplierInstance finite;
  std::optional<StructuredModel> model;
  TolerancePolicy tol;
  std::vector<std::string> notes;
};

inline LoadedInstance materialize(const InstanceFile& f) {
  LoadedInstance out;
  out.tol = f.tolerance.value_or(TolerancePolicy{});
  out.name = f.name;
  if (f.scenario) {
    ScenarioInstance s = [&]() {
      try {
        return build_scenario(*f.scenario, f.size);
      } catch (const DomainError& e) {
        throw InputError(std::string("/structured: ") + e.what());
      }
    }();
    if (out.name.empty()) out.name = s.name;
    out.finite = s.multiplier();
    out.model = s.model;
    out.notes = s.notes;
    return out;
  }
  const FiniteFrame& phi = *f.phi;
  FiniteFrame psi = phi;
  if (f.psi) psi = *f.psi;
  else if (f.psi_rule == "canonical_dual") psi = canonical_dual(phi, out.tol);
  if (psi.dim() != phi.dim() || psi.size() != phi.size()) throw InputError("/psi: shape differs from phi");
  Vector m = *f.symbol;
  if (m.size() < phi.size() && f.structure) {
    m = Symbol::from_entries(m, f.structure).with_length(static_cast<std::size_t>(phi.size())).prefix(
        static_cast<std::size_t>(phi.size()));
  }
  if (m.size() != phi.size()) {
    throw InputError("/symbol/entries: length " + std::to_string(m.size()) + " differs from the number of vectors " +
                     std::to_string(phi.size()));
  }
  out.finite = assemble(m, phi, psi);
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json to_json(const Region& r) {
  if (r.kind == Region::Kind::disk) {
    return Json{{"kind", "disk"}, {"center", io::to_json(r.center)}, {"radius", r.radius}};
  }
  return Json{{"kind", "rectangle"}, {"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}};
}

inline Json to_json(const ContourCertificate& c) {
  return Json{{"region", to_json(c.region)},
              {"winding_count", c.winding_count},
              {"min_modulus_on_boundary", c.min_modulus_on_boundary},
              {"evaluation_tail_bound", c.evaluation_tail_bound},
              {"worst_ratio", c.worst_ratio},
              {"samples", c.samples},
              {"max_truncation", c.max_truncation},
              {"valid", c.valid}};
}

inline Json to_json(const SpectralPoint& p) {
  Json j{{"value", io::to_json(p.value)}, {"label", to_string(p.label)}, {"provenance", p.provenance}};
  j["multiplicity"] = p.multiplicity ? Json(*p.multiplicity) : Json(nullptr);
  return j;
}

inline Json to_json(const SpectralReport& r) {
  Json pts = Json::array();
  for (const SpectralPoint& p : r.points) pts.push_back(to_json(p));
  Json certs = Json::array();
  for (const ContourCertificate& c : r.certificates) certs.push_back(to_json(c));
  Json diag = Json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  return Json{{"points", pts},
              {"essential", io::to_json(r.essential)},
              {"eigenvalues", io::to_json(r.eigenvalues)},
              {"certificates", certs},
              {"diagnostics", diag},
              {"notes", r.notes}};
}

inline Json to_json(const InvertibilityReport& r) {
  Json j{{"injective", r.injective},
         {"surjective", r.surjective},
         {"bijective", r.bijective},
         {"statements",
          {{"injective_via_psi", r.injective_via_psi},
           {"injective_via_mpsi", r.injective_via_mpsi},
           {"surjective_via_phi", r.surjective_via_phi},
           {"surjective_via_mphi", r.surjective_via_mphi},
           {"bijective_via_phi", r.bijective_via_phi},
           {"bijective_via_mphi", r.bijective_via_mphi},
           {"bijective_via_psi", r.bijective_via_psi},
           {"bijective_via_mstar_psi", r.bijective_via_mstar_psi}}},
         {"direct_rank", r.direct_rank},
         {"consistent", r.consistent}};
  j["kernel_witness"] = r.kernel_witness ? io::to_json(*r.kernel_witness) : Json(nullptr);
  j["intersection_witness"] = r.intersection_witness ? io::to_json(*r.intersection_witness) : Json(nullptr);
  j["unattained_witness"] = r.unattained_witness ? io::to_json(*r.unattained_witness) : Json(nullptr);
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Columns: re, im, multiplicity, label, provenance.
inline std::string points_csv(const std::vector<SpectralPoint>& pts) {
  std::string out = "re,im,multiplicity,label,provenance\n";
  for (const SpectralPoint& p : pts) {
    out += shortest(p.value.real()) + "," + shortest(p.value.imag()) + "," +
           (p.multiplicity ? std::to_string(*p.multiplicity) : std::string()) + "," + to_string(p.label) + "," +
           csv_escape(p.provenance) + "\n";
  }
  return out;
}

}  // namespace dfm
