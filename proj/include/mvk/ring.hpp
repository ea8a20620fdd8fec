#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mvk/common.hpp"

namespace mvk {

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

using AtomId = std::uint32_t;

/// One opaque generator symbol standing for an irreducible variety of a fixed
/// dimension. Everything else about the variety is carried by tags and labels
/// declared elsewhere, never inferred.
struct Atom {
  std::string name;
  int dim = 0;
  bool irreducible = true;
  bool geom_irreducible = true;
};

/// Append-only registry of atoms. Built single-threaded; read-only afterwards.
class AtomTable {
 public:
  AtomId define(std::string name, int dim, bool irreducible = true,
                bool geom_irreducible = true) {
    if (dim < 0) fail(Errc::GradeBelowDimension, "atom dimension must be >= 0: " + name);
    if (by_name_.count(name)) fail(Errc::NameClash, "atom name already defined: " + name);
    AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(Atom{name, dim, irreducible, geom_irreducible});
    by_name_.emplace(atoms_.back().name, id);
    return id;
  }

  const Atom& operator[](AtomId id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }

  std::optional<AtomId> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<Atom> atoms_;
  std::map<std::string, AtomId> by_name_;
};

inline int atom_dim(const AtomTable& table, AtomId id) { return table[id].dim; }
inline std::string atom_text(const AtomTable& table, AtomId id) { return table[id].name; }

// ---------------------------------------------------------------------------
// Monomials and formal integer sums of monomials
// ---------------------------------------------------------------------------

/// Monomial t^tau * L^lef * (product of atoms). The atom list is kept sorted;
/// repeated entries encode powers.
template <class A>
struct Monomial {
  int tau = 0;
  int lef = 0;
  std::vector<A> atoms;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  bool is_unit() const { return tau == 0 && lef == 0 && atoms.empty(); }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    r.tau = tau + o.tau;
    r.lef = lef + o.lef;
    r.atoms.reserve(atoms.size() + o.atoms.size());
    std::merge(atoms.begin(), atoms.end(), o.atoms.begin(), o.atoms.end(),
               std::back_inserter(r.atoms));
    return r;
  }
};

template <class A>
int grade(const AtomTable& table, const Monomial<A>& m) {
  int g = m.tau + m.lef;
  for (const A& a : m.atoms) g += atom_dim(table, a);
  return g;
}

/// Finite Z-linear combination of monomials in canonical form: no stored
/// coefficient is zero. Value type; all operations are pure.
template <class A>
class FormalSum {
 public:
  using Mono = Monomial<A>;
  using TermMap = std::map<Mono, Int>;

  FormalSum() = default;

  static FormalSum zero() { return FormalSum(); }
  static FormalSum unit() { return of_monomial(Mono{}, 1); }

  static FormalSum of_monomial(Mono m, Int coeff = 1) {
    FormalSum s;
    if (coeff != 0) s.terms_.emplace(std::move(m), std::move(coeff));
    return s;
  }

  static FormalSum tau_power(int e) {
    if (e < 0) fail(Errc::GradeBelowDimension, "negative power of t");
    return of_monomial(Mono{e, 0, {}});
  }

  static FormalSum lef_power(int e) {
    if (e < 0) fail(Errc::GradeBelowDimension, "negative power of L");
    return of_monomial(Mono{0, e, {}});
  }

  static FormalSum atom(A a) { return of_monomial(Mono{0, 0, {a}}); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Int coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Int(0) : it->second;
  }

  void add_term(const Mono& m, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  FormalSum operator+(const FormalSum& o) const {
    FormalSum r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }

  FormalSum operator-() const {
    FormalSum r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  FormalSum operator-(const FormalSum& o) const { return *this + (-o); }

  FormalSum operator*(const FormalSum& o) const {
    FormalSum r;
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
  }

  FormalSum operator*(const Int& k) const {
    FormalSum r;
    if (k == 0) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * k);
    return r;
  }

  FormalSum& operator+=(const FormalSum& o) { return *this = *this + o; }
  FormalSum& operator-=(const FormalSum& o) { return *this = *this - o; }
  FormalSum& operator*=(const FormalSum& o) { return *this = *this * o; }

  friend bool operator==(const FormalSum&, const FormalSum&) = default;

  FormalSum pow(int e) const {
    if (e < 0) fail(Errc::GradeBelowDimension, "negative exponent");
    FormalSum r = unit();
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  /// Grade of a homogeneous sum; nullopt for 0 or mixed grades.
  std::optional<int> homogeneous_grade(const AtomTable& table) const {
    std::optional<int> g;
    for (const auto& [m, c] : terms_) {
      int gm = grade(table, m);
      if (!g)
        g = gm;
      else if (*g != gm)
        return std::nullopt;
    }
    return g;
  }

 private:
  TermMap terms_;
};

using GradedMonomial = Monomial<AtomId>;
using GradedClass = FormalSum<AtomId>;

// ---------------------------------------------------------------------------
// Distinguished classes
// ---------------------------------------------------------------------------

/// [X]_d for an atom X, i.e. t^(d-dim X) * X. Requires d >= dim X.
inline GradedClass atom_class(const AtomTable& table, AtomId a, int d) {
  int dim = table[a].dim;
  if (d < dim)
    fail(Errc::GradeBelowDimension,
         "grade " + std::to_string(d) + " below dim " + std::to_string(dim) + " of atom " +
             table[a].name);
  return GradedClass::of_monomial(GradedMonomial{d - dim, 0, {a}});
}

/// Class of n-dimensional projective space in degree d >= n:
/// t^d + t^(d-1) L + ... + t^(d-n) L^n.
template <class A = AtomId>
FormalSum<A> projective_class(int n, int d) {
  if (n < 0) fail(Errc::GradeBelowDimension, "negative projective dimension");
  if (d < n) fail(Errc::GradeBelowDimension, "grade below projective dimension");
  FormalSum<A> r;
  for (int i = 0; i <= n; ++i) r.add_term(Monomial<A>{d - i, i, {}}, 1);
  return r;
}

/// Class of the k-torus in degree d >= k: t^(d-k) (L - t)^k, expanded.
template <class A = AtomId>
FormalSum<A> torus_class(int k, int d) {
  if (k < 0) fail(Errc::GradeBelowDimension, "negative torus dimension");
  if (d < k) fail(Errc::GradeBelowDimension, "grade below torus dimension");
  FormalSum<A> lt = FormalSum<A>::lef_power(1) - FormalSum<A>::tau_power(1);
  return FormalSum<A>::tau_power(d - k) * lt.pow(k);
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

enum class ReduceMode { TauToOne, ModTau, ModTauLef };

/// Substitute t := 1. The result has tau = 0 in every monomial and represents
/// the image in the ungraded ring.
template <class A>
FormalSum<A> reduce_tau_to_one(const FormalSum<A>& x) {
  FormalSum<A> r;
  for (const auto& [m, c] : x.terms()) {
    Monomial<A> n = m;
    n.tau = 0;
    r.add_term(n, c);
  }
  return r;
}

/// Canonical representative modulo the ideal (t): drop every monomial with a
/// positive power of t.
template <class A>
FormalSum<A> reduce_mod_tau(const FormalSum<A>& x) {
  FormalSum<A> r;
  for (const auto& [m, c] : x.terms())
    if (m.tau == 0) r.add_term(m, c);
  return r;
}

/// Canonical representative modulo the ideal (t*L).
template <class A>
FormalSum<A> reduce_mod_tau_lef(const FormalSum<A>& x) {
  FormalSum<A> r;
  for (const auto& [m, c] : x.terms())
    if (!(m.tau >= 1 && m.lef >= 1)) r.add_term(m, c);
  return r;
}

template <class A>
FormalSum<A> reduce(const FormalSum<A>& x, ReduceMode mode) {
  switch (mode) {
    case ReduceMode::TauToOne: return reduce_tau_to_one(x);
    case ReduceMode::ModTau: return reduce_mod_tau(x);
    case ReduceMode::ModTauLef: return reduce_mod_tau_lef(x);
  }
  fail(Errc::SchemaViolation, "unknown reduce mode");
}

enum class IdealGen { Tau, TauLef };

/// Membership in the monomial ideal generated by t (resp. t*L). Returns the
/// exact quotient when every monomial is divisible, nullopt otherwise.
template <class A>
std::optional<FormalSum<A>> in_ideal(const FormalSum<A>& x, IdealGen gen) {
  int need_lef = gen == IdealGen::TauLef ? 1 : 0;
  FormalSum<A> q;
  for (const auto& [m, c] : x.terms()) {
    if (m.tau < 1 || m.lef < need_lef) return std::nullopt;
    Monomial<A> n = m;
    n.tau -= 1;
    n.lef -= need_lef;
    q.add_term(n, c);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Blow-up difference
// ---------------------------------------------------------------------------

/// [E]_e - [Z]_e for the blow-up of a smooth Y along a smooth center Z with
/// exceptional divisor E, expressed through the center's class z (homogeneous
/// of grade dim_z). Equals [Bl_Z Y]_e - [Y]_e. Zero when the center is a
/// divisor (codimension 1).
inline GradedClass blowup_delta(const AtomTable& table, const GradedClass& z, int dim_y,
                                int dim_z, int e) {
  if (!(0 <= dim_z && dim_z < dim_y && dim_y <= e))
    fail(Errc::InvalidBlowup, "need 0 <= dim Z < dim Y <= e");
  auto g = z.homogeneous_grade(table);
  if (!z.is_zero() && (!g || *g != dim_z))
    fail(Errc::InvalidBlowup, "center class must be homogeneous of its own dimension");
  int c = dim_y - dim_z;
  GradedClass bundle = projective_class(c - 1, c - 1) * GradedClass::tau_power(e - dim_y + 1);
  return z * (bundle - GradedClass::tau_power(e - dim_z));
}

// ---------------------------------------------------------------------------
// Canonical rendering
// ---------------------------------------------------------------------------

/// Display order: descending grade, then descending t-power, then descending
/// L-power, then atom names. Deterministic output for golden tests.
template <class A>
std::vector<std::pair<Monomial<A>, Int>> canonical_terms(const AtomTable& table,
                                                         const FormalSum<A>& x) {
  std::vector<std::pair<Monomial<A>, Int>> out(x.terms().begin(), x.terms().end());
  auto names = [&](const Monomial<A>& m) {
    std::vector<std::string> v;
    v.reserve(m.atoms.size());
    for (const A& a : m.atoms) v.push_back(atom_text(table, a));
    return v;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& p, const auto& q) {
    int gp = grade(table, p.first), gq = grade(table, q.first);
    if (gp != gq) return gp > gq;
    if (p.first.tau != q.first.tau) return p.first.tau > q.first.tau;
    if (p.first.lef != q.first.lef) return p.first.lef > q.first.lef;
    return names(p.first) < names(q.first);
  });
  return out;
}

template <class A>
std::string monomial_text(const AtomTable& table, const Monomial<A>& m) {
  std::vector<std::string> parts;
  auto power = [](const std::string& sym, int e) {
    return e == 1 ? sym : sym + "^" + std::to_string(e);
  };
  if (m.tau > 0) parts.push_back(power("t", m.tau));
  if (m.lef > 0) parts.push_back(power("L", m.lef));
  for (std::size_t i = 0; i < m.atoms.size();) {
    std::size_t j = i;
    while (j < m.atoms.size() && !(m.atoms[i] < m.atoms[j]) && !(m.atoms[j] < m.atoms[i])) ++j;
    parts.push_back(power(atom_text(table, m.atoms[i]), static_cast<int>(j - i)));
    i = j;
  }
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
  return s;
}

template <class A>
std::string render_text(const AtomTable& table, const FormalSum<A>& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : canonical_terms(table, x)) {
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::string mono = monomial_text(table, m);
    if (a != 1)
      os << a.str() << (mono == "1" ? "" : "*" + mono);
    else
      os << mono;
  }
  return os.str();
}

}  // namespace mvk
