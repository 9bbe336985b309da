#pragma once

// Bounded symbol sequences with an optional declared limit-point structure,
// and the splitting m = m' + m'' into a piecewise-constant part and a part
// that tends to zero.

#include <dfm/numeric.hpp>

#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace dfm {

/// Decreasing bound on |m_n - l| inside one limit class (0-based n):
/// zero, or scale * (n + 1)^(-exponent).
struct Majorant {
  enum class Kind { zero, power };
  Kind kind = Kind::zero;
  double scale = 0.0;
  double exponent = 1.0;

  static Majorant none() { return {}; }
  static Majorant power(double scale, double exponent) { return {Kind::power, scale, exponent}; }

  double at(std::size_t n) const {
    if (kind == Kind::zero) return 0.0;
    return scale * std::pow(static_cast<double>(n) + 1.0, -exponent);
  }
  /// sup_{n >= K} of the bound.
  double tail(std::size_t K) const { return at(K); }
};

/// Indices n with n % modulus == residue (0-based) form one class I_k.
struct LimitClass {
  std::size_t modulus = 1;
  std::size_t residue = 0;
  Complex limit{0.0, 0.0};
  Majorant majorant;

  bool contains(std::size_t n) const { return n % modulus == residue; }
};

struct LimitStructure {
  std::vector<LimitClass> classes;

  /// Classes must be disjoint and cover every index.
  void validate() const {
    if (classes.empty()) throw DomainError("limit structure: no classes");
    std::size_t period = 1;
    for (const LimitClass& c : classes) {
      if (c.modulus == 0) throw DomainError("limit structure: modulus must be positive");
      if (c.residue >= c.modulus) throw DomainError("limit structure: residue out of range");
      if (!std::isfinite(c.limit.real()) || !std::isfinite(c.limit.imag())) {
        throw DomainError("limit structure: limits must be finite");
      }
      if (c.majorant.kind == Majorant::Kind::power && !(c.majorant.scale >= 0.0 && c.majorant.exponent > 0.0)) {
        throw DomainError("limit structure: power majorant needs scale >= 0 and exponent > 0");
      }
      period = std::lcm(period, c.modulus);
      if (period > (1u << 20)) throw DomainError("limit structure: class period too large");
    }
    for (std::size_t r = 0; r < period; ++r) {
      int hits = 0;
      for (const LimitClass& c : classes) hits += c.contains(r) ? 1 : 0;
      if (hits == 0) throw DomainError("limit structure: index " + std::to_string(r) + " not covered");
      if (hits > 1) throw DomainError("limit structure: classes overlap at index " + std::to_string(r));
    }
  }

  const LimitClass& class_of(std::size_t n) const {
    for (const LimitClass& c : classes) {
      if (c.contains(n)) return c;
    }
    throw DomainError("limit structure: index not covered");
  }

  std::size_t class_index(std::size_t n) const {
    for (std::size_t k = 0; k < classes.size(); ++k) {
      if (classes[k].contains(n)) return k;
    }
    throw DomainError("limit structure: index not covered");
  }
};

/// A bounded complex sequence: a stored prefix and/or a generator rule.
class Symbol {
 public:
  using Generator = std::function<Complex(std::size_t)>;

  Symbol() = default;

  static Symbol from_entries(Vector entries, std::optional<LimitStructure> structure = std::nullopt) {
    require_finite(entries, "symbol");
    if (structure) structure->validate();
    Symbol s;
    s.entries_ = std::move(entries);
    s.structure_ = std::move(structure);
    s.length_ = static_cast<std::size_t>(s.entries_.size());
    return s;
  }

  /// `nominal_length` is the prefix consulted by prefix-based queries.
  static Symbol from_generator(Generator generator, LimitStructure structure, std::size_t nominal_length) {
    structure.validate();
    if (nominal_length == 0) throw DomainError("symbol: nominal length must be positive");
    Symbol s;
    s.generator_ = std::move(generator);
    s.structure_ = std::move(structure);
    s.length_ = nominal_length;
    return s;
  }

  std::size_t length() const { return length_; }
  bool has_generator() const { return static_cast<bool>(generator_); }
  const std::optional<LimitStructure>& structure() const { return structure_; }

  Complex at(std::size_t n) const {
    if (n < static_cast<std::size_t>(entries_.size())) return entries_(static_cast<Index>(n));
    if (generator_) return generator_(n);
    // A stored prefix extends only through classes that are exactly constant.
    if (structure_) {
      const LimitClass& c = structure_->class_of(n);
      if (c.majorant.kind == Majorant::Kind::zero) return c.limit;
    }
    throw DomainError("symbol: entry " + std::to_string(n) + " beyond stored prefix and no generator");
  }

  Vector prefix(std::size_t n) const {
    Vector out(static_cast<Index>(n));
    for (std::size_t k = 0; k < n; ++k) out(static_cast<Index>(k)) = at(k);
    return out;
  }

  /// Same entries with a different nominal length.
  Symbol with_length(std::size_t n) const {
    Symbol s = *this;
    if (!generator_ && n > static_cast<std::size_t>(entries_.size())) s.entries_ = prefix(n);
    s.length_ = n;
    return s;
  }

 private:
  Vector entries_;
  Generator generator_;
  std::optional<LimitStructure> structure_;
  std::size_t length_ = 0;
};

/// Checks every prefix entry against its class majorant; returns the largest
/// violation (0 when the declaration holds on the prefix).
inline double structure_violation(const Symbol& s, std::size_t prefix_len) {
  if (!s.structure()) throw DomainError("structure_violation: symbol has no declared structure");
  double worst = 0.0;
  for (std::size_t n = 0; n < prefix_len; ++n) {
    const LimitClass& c = s.structure()->class_of(n);
    const double gap = std::abs(s.at(n) - c.limit) - c.majorant.at(n);
    worst = std::max(worst, gap);
  }
  return worst;
}

namespace detail {

/// Single-linkage clusters of `pts` with linking radius eps; returns centroids
/// of clusters with at least two members, sorted lexicographically.
inline std::vector<Complex> linkage_centroids(const std::vector<Complex>& pts, double eps) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(pts[i] - pts[j]) <= eps) parent[find(i)] = find(j);
    }
  }
  std::vector<Complex> sum(n, Complex(0.0, 0.0));
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += pts[i];
    ++count[find(i)];
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] >= 2) out.push_back(sum[i] / static_cast<double>(count[i]));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

inline void dedupe_sorted(std::vector<Complex>& v) {
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

/// Declared limits when a structure is present, otherwise an estimate by
/// clustering the tail half of the prefix (heuristic, needs >= 64 entries).
inline std::vector<Complex> limit_points(const Symbol& s, double cluster_eps = 1e-3) {
  if (s.length() == 0) throw DomainError("limit_points: empty symbol");
  if (s.structure()) {
    std::vector<Complex> out;
    for (const LimitClass& c : s.structure()->classes) out.push_back(c.limit);
    std::sort(out.begin(), out.end(), lex_less);
    detail::dedupe_sorted(out);
    return out;
  }
  if (s.length() < 64) {
    throw DomainError("limit_points: no declared structure and prefix shorter than 64");
  }
  std::vector<Complex> tail;
  for (std::size_t n = s.length() / 2; n < s.length(); ++n) tail.push_back(s.at(n));
  return detail::linkage_centroids(tail, cluster_eps);
}

/// m' (equal to l_k on I_k) and m'' = m - m'.
struct CompactSplit {
  Symbol constant_part;
  Symbol vanishing_part;
};

inline CompactSplit compact_split(const Symbol& s) {
  if (!s.structure()) throw DomainError("compact_split: symbol has no declared limit structure");
  const LimitStructure st = *s.structure();
  LimitStructure vanishing = st;
  for (LimitClass& c : vanishing.classes) c.limit = Complex(0.0, 0.0);
  LimitStructure constant = st;
  for (LimitClass& c : constant.classes) c.majorant = Majorant::none();

  if (s.has_generator()) {
    auto mprime = [st](std::size_t n) { return st.class_of(n).limit; };
    auto mpp = [s, st](std::size_t n) { return s.at(n) - st.class_of(n).limit; };
    return {Symbol::from_generator(mprime, constant, s.length()),
            Symbol::from_generator(mpp, vanishing, s.length())};
  }
  Vector a(static_cast<Index>(s.length())), b(static_cast<Index>(s.length()));
  for (std::size_t n = 0; n < s.length(); ++n) {
    a(static_cast<Index>(n)) = st.class_of(n).limit;
    b(static_cast<Index>(n)) = s.at(n) - a(static_cast<Index>(n));
  }
  return {Symbol::from_entries(a, constant), Symbol::from_entries(b, vanishing)};
}

/// inf_n |m_n - lambda|, as the prefix minimum combined with the distances to
/// the declared limits.
inline double distance_to(const Symbol& s, Complex lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < s.length(); ++n) best = std::min(best, std::abs(s.at(n) - lambda));
  if (s.structure()) {
    for (const LimitClass& c : s.structure()->classes) best = std::min(best, std::abs(c.limit - lambda));
  }
  return best;
}

/// Lower bound on |m_n - lambda| over all n >= K from the class majorants.
/// May be <= 0, meaning no bound is available at this K.
inline double certified_tail_distance(const Symbol& s, Complex lambda, std::size_t K) {
  if (!s.structure()) throw DomainError("certified_tail_distance: symbol has no declared structure");
  double best = std::numeric_limits<double>::infinity();
  for (const LimitClass& c : s.structure()->classes) {
    best = std::min(best, std::abs(c.limit - lambda) - c.majorant.tail(K));
  }
  return best;
}

/// Upper bound on sup_n |m_n| using the prefix and the class majorants.
inline double sup_bound(const Symbol& s) {
  double best = 0.0;
  for (std::size_t n = 0; n < s.length(); ++n) best = std::max(best, std::abs(s.at(n)));
  if (s.structure()) {
    for (const LimitClass& c : s.structure()->classes) {
      best = std::max(best, std::abs(c.limit) + c.majorant.tail(s.length()));
    }
  }
  return best;
}

struct SpectralPoint {
  enum class Label { limit_point, eigenvalue, continuous_candidate, not_in_spectrum, unclassified };

  Complex value{0.0, 0.0};
  Label label = Label::unclassified;
  std::optional<std::size_t> multiplicity;
  std::string provenance;
};

inline const char* to_string(SpectralPoint::Label l) {
  switch (l) {
    case SpectralPoint::Label::limit_point: return "limit_point";
    case SpectralPoint::Label::eigenvalue: return "eigenvalue";
    case SpectralPoint::Label::continuous_candidate: return "continuous_candidate";
    case SpectralPoint::Label::not_in_spectrum: return "not_in_spectrum";
    case SpectralPoint::Label::unclassified: return "unclassified";
  }
  return "unclassified";
}

}  // namespace dfm
