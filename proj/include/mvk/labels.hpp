#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mvk/ring.hpp"

namespace mvk {

// ---------------------------------------------------------------------------
// Labels: formal (stable) birational types over a store of declared knowledge
// ---------------------------------------------------------------------------

/// One opaque irreducible base that is not known to be rational.
struct BaseFactor {
  std::string name;
  int dim = 0;
  friend auto operator<=>(const BaseFactor&, const BaseFactor&) = default;
};

/// Normal form of a birational type symbol: a sorted multiset of opaque base
/// factors times a projective-space power. Rational pieces are absorbed into
/// the power, so the empty-factor labels are exactly the known-rational ones:
/// proj = 0 is the point, proj = m the class of m-space.
struct Label {
  std::vector<BaseFactor> factors;
  int proj = 0;

  friend auto operator<=>(const Label&, const Label&) = default;

  int dim() const {
    int d = proj;
    for (const auto& f : factors) d += f.dim;
    return d;
  }
  bool is_point() const { return factors.empty() && proj == 0; }
  bool is_rational() const { return factors.empty(); }

  static Label point() { return Label{}; }
  static Label rational(int m) { return Label{{}, m}; }
  static Label base(std::string name, int dim) { return Label{{{std::move(name), dim}}, 0}; }

  Label times_proj(int c) const {
    Label r = *this;
    r.proj += c;
    return r;
  }

  friend Label operator*(const Label& a, const Label& b) {
    Label r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    std::merge(a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
               std::back_inserter(r.factors));
    r.proj = a.proj + b.proj;
    return r;
  }
};

inline std::string label_text(const Label& l) {
  if (l.is_point()) return "pt";
  std::string s;
  for (std::size_t i = 0; i < l.factors.size(); ++i) {
    if (i) s += " x ";
    s += l.factors[i].name;
  }
  if (l.proj > 0) {
    if (!s.empty()) s += " x ";
    s += "P^" + std::to_string(l.proj);
  }
  return s;
}

/// Stable type: factor names only, powers and dimensions forgotten.
using SBKey = std::vector<std::string>;

inline std::string sb_text(const SBKey& k) {
  if (k.empty()) return "pt";
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += " x ";
    s += k[i];
  }
  return s;
}

// ---------------------------------------------------------------------------
// LabelStore: declared equivalences, distinctions, rationality knowledge
// ---------------------------------------------------------------------------

/// Side knowledge about the opaque bases, all user-declared and sourced from
/// the literature. Frozen before any verdict is computed.
class LabelStore {
 public:
  void declare_equivalent(const std::string& a, const std::string& b) {
    ensure_mutable();
    link(find(a), find(b));
  }
  void declare_distinct(const std::string& a, const std::string& b) {
    ensure_mutable();
    distinct_pairs_.emplace_back(a, b);
  }
  /// Declares {name} != {pt} in the stable group.
  void declare_not_stably_rational(const std::string& name) {
    ensure_mutable();
    nsr_decl_.insert(name);
  }
  /// Declares that the base collapses to the point stably.
  void declare_stably_rational(const std::string& name) {
    ensure_mutable();
    sb_point_decl_.insert(name);
  }

  void set_atom_label(AtomId id, Label l) {
    ensure_mutable();
    atom_labels_[id] = std::move(l);
  }

  /// Closes the declarations and checks their mutual consistency.
  void freeze() {
    if (frozen_) return;
    for (const auto& n : nsr_decl_) nsr_rep_.insert(rep(n));
    for (const auto& n : sb_point_decl_) sb_point_rep_.insert(rep(n));
    for (const auto& n : nsr_rep_)
      if (sb_point_rep_.count(n))
        fail(Errc::LabelConflict, "label both stably rational and not: " + n);
    for (const auto& [a, b] : distinct_pairs_) {
      if (rep(a) == rep(b))
        fail(Errc::LabelConflict, "pair declared both equivalent and distinct: " + a + ", " + b);
      distinct_rep_.insert(ordered(rep(a), rep(b)));
    }
    frozen_ = true;
  }
  bool frozen() const { return frozen_; }

  std::string rep(const std::string& name) const {
    auto it = parent_.find(name);
    if (it == parent_.end()) return name;
    std::string r = name;
    while (true) {
      auto j = parent_.find(r);
      if (j == parent_.end() || j->second == r) return r;
      r = j->second;
    }
  }

  bool is_nsr(const std::string& rep_name) const { return nsr_rep_.count(rep_name) > 0; }
  bool is_sb_point(const std::string& rep_name) const {
    return sb_point_rep_.count(rep_name) > 0;
  }
  bool declared_distinct(const std::string& rep_a, const std::string& rep_b) const {
    return distinct_rep_.count(ordered(rep_a, rep_b)) > 0;
  }

  /// Canonical label of an atom: the declared override, or the atom itself as
  /// an opaque base. Factor names are replaced by class representatives.
  Label atom_label(const AtomTable& table, AtomId id) const {
    auto it = atom_labels_.find(id);
    Label l = it != atom_labels_.end() ? it->second : Label::base(table[id].name, table[id].dim);
    return canon(l);
  }

  Label canon(const Label& l) const {
    Label r;
    r.proj = l.proj;
    for (const auto& f : l.factors) r.factors.push_back(BaseFactor{rep(f.name), f.dim});
    std::sort(r.factors.begin(), r.factors.end());
    return r;
  }

  /// Collapse to the stable type: powers stripped, stably rational bases
  /// removed, names canonical.
  SBKey sb_key(const Label& l) const {
    SBKey k;
    for (const auto& f : l.factors) {
      std::string r = rep(f.name);
      if (!is_sb_point(r)) k.push_back(r);
    }
    std::sort(k.begin(), k.end());
    return k;
  }

 private:
  void ensure_mutable() {
    if (frozen_) fail(Errc::LabelConflict, "label store is frozen");
  }
  std::string find(const std::string& n) {
    parent_.emplace(n, n);
    std::string r = n;
    while (parent_[r] != r) r = parent_[r];
    // path compression
    std::string c = n;
    while (parent_[c] != r) {
      std::string next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }
  void link(const std::string& a, const std::string& b) {
    if (a == b) return;
    // deterministic representative: lexicographically smallest
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }
  static std::pair<std::string, std::string> ordered(const std::string& a,
                                                     const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::map<std::string, std::string> parent_;
  std::vector<std::pair<std::string, std::string>> distinct_pairs_;
  std::set<std::string> nsr_decl_, sb_point_decl_;
  std::set<std::string> nsr_rep_, sb_point_rep_;
  std::set<std::pair<std::string, std::string>> distinct_rep_;
  std::map<AtomId, Label> atom_labels_;
  bool frozen_ = false;
};

// ---------------------------------------------------------------------------
// Free abelian groups on labels
// ---------------------------------------------------------------------------

template <class K>
struct FreeAbelian {
  std::map<K, Int> terms;

  bool is_zero() const { return terms.empty(); }

  void add_term(const K& k, const Int& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  FreeAbelian operator+(const FreeAbelian& o) const {
    FreeAbelian r = *this;
    for (const auto& [k, c] : o.terms) r.add_term(k, c);
    return r;
  }
  FreeAbelian operator-() const {
    FreeAbelian r = *this;
    for (auto& [k, c] : r.terms) c = -c;
    return r;
  }
  FreeAbelian operator-(const FreeAbelian& o) const { return *this + (-o); }

  friend bool operator==(const FreeAbelian&, const FreeAbelian&) = default;
};

/// Graded by dimension; each label knows its degree.
struct BirClass : FreeAbelian<Label> {
  BirClass() = default;
  explicit BirClass(FreeAbelian<Label> f) : FreeAbelian<Label>(std::move(f)) {}

  BirClass operator*(const BirClass& o) const {
    BirClass r;
    for (const auto& [k1, c1] : terms)
      for (const auto& [k2, c2] : o.terms) r.add_term(k1 * k2, c1 * c2);
    return r;
  }
  BirClass operator+(const BirClass& o) const {
    return BirClass(FreeAbelian<Label>::operator+(o));
  }
  BirClass operator-(const BirClass& o) const {
    return BirClass(FreeAbelian<Label>::operator-(o));
  }
};

struct SBClass : FreeAbelian<SBKey> {
  SBClass() = default;
  explicit SBClass(FreeAbelian<SBKey> f) : FreeAbelian<SBKey>(std::move(f)) {}

  SBClass operator+(const SBClass& o) const { return SBClass(FreeAbelian<SBKey>::operator+(o)); }
  SBClass operator-(const SBClass& o) const { return SBClass(FreeAbelian<SBKey>::operator-(o)); }
};

template <class TermText, class C>
std::string signed_sum_text(const C& cls, TermText term_text) {
  if (cls.terms.empty()) return "0";
  std::vector<std::pair<std::string, Int>> pos, neg;
  for (const auto& [k, c] : cls.terms) (c > 0 ? pos : neg).emplace_back(term_text(k), c);
  auto bylex = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(pos.begin(), pos.end(), bylex);
  std::sort(neg.begin(), neg.end(), bylex);
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::pair<std::string, Int>& t) {
    Int a = t.second < 0 ? Int(-t.second) : t.second;
    if (first) {
      if (t.second < 0) os << "-";
      first = false;
    } else {
      os << (t.second < 0 ? " - " : " + ");
    }
    if (a != 1) os << a.str();
    os << "{" << t.first << "}";
  };
  for (const auto& t : pos) emit(t);
  for (const auto& t : neg) emit(t);
  return os.str();
}

inline std::string render_text(const BirClass& b) {
  return signed_sum_text(b, [](const Label& l) { return label_text(l); });
}
inline std::string render_text(const SBClass& s) {
  return signed_sum_text(s, [](const SBKey& k) { return sb_text(k); });
}

// ---------------------------------------------------------------------------
// Reduction maps
// ---------------------------------------------------------------------------

/// Image of a homogeneous degree-d class in the dimension-graded group of
/// birational types. Kills every monomial with a positive power of t;
/// surviving L-powers become projective factors.
inline BirClass bir_of(const AtomTable& table, const LabelStore& store, const GradedClass& x,
                       int d) {
  for (const auto& [m, c] : x.terms())
    for (AtomId a : m.atoms)
      if (!table[a].geom_irreducible)
        fail(Errc::AmbiguousComponents,
             "atom is not geometrically irreducible: " + table[a].name);
  auto g = x.homogeneous_grade(table);
  if (!x.is_zero() && (!g || *g != d))
    fail(Errc::NotHomogeneous, "class is not homogeneous of grade " + std::to_string(d));
  BirClass r;
  for (const auto& [m, c] : x.terms()) {
    if (m.tau != 0) continue;
    Label l = Label::rational(m.lef);
    for (AtomId a : m.atoms) l = l * store.atom_label(table, a);
    r.add_term(store.canon(l), c);
  }
  return r;
}

inline SBClass sb_of(const LabelStore& store, const BirClass& b) {
  SBClass r;
  for (const auto& [l, c] : b.terms) r.add_term(store.sb_key(l), c);
  return r;
}

// ---------------------------------------------------------------------------
// Merge search: can a class be made equal to a target, given the declared
// knowledge, by identifying some of the occurring labels?
// ---------------------------------------------------------------------------

struct MergeResult {
  bool possible = false;
  /// True when equality holds outright, with no undeclared identification.
  bool exact = false;
  /// Witness partition (rendered labels, one inner list per merge class).
  std::vector<std::vector<std::string>> witness;
};

inline constexpr int kDefaultMergeBudget = 12;

namespace detail {

template <class K, class Mergeable, class Text>
MergeResult merge_search(const std::map<K, Int>& target, const std::map<K, Int>& x,
                         Mergeable mergeable, Text text, int budget) {
  if (target == x) {
    MergeResult r;
    r.possible = true;
    r.exact = true;
    for (const auto& [k, c] : x) r.witness.push_back({text(k)});
    return r;
  }

  std::vector<K> keys;
  for (const auto& [k, c] : x) keys.push_back(k);
  for (const auto& [k, c] : target)
    if (!x.count(k)) keys.push_back(k);
  int n = static_cast<int>(keys.size());
  if (n > budget)
    fail(Errc::SearchBudget,
         "merge search over " + std::to_string(n) + " labels exceeds budget " +
             std::to_string(budget));

  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, true));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ok[i][j] = ok[j][i] = mergeable(keys[i], keys[j]);

  // restricted growth strings = set partitions, pruned by pairwise merge
  // admissibility inside each block
  std::map<K, int> index;
  for (int i = 0; i < n; ++i) index.emplace(keys[i], i);

  std::vector<int> block(n, 0);
  std::vector<std::vector<int>> members;
  MergeResult found;

  auto collapse_equal = [&]() {
    std::map<int, Int> cx, ct;
    auto fold = [&](const std::map<K, Int>& cls, std::map<int, Int>& out) {
      for (const auto& [k, c] : cls) out[block[index.at(k)]] += c;
      std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    };
    fold(x, cx);
    fold(target, ct);
    return cx == ct;
  };

  auto record = [&]() {
    found.possible = true;
    found.exact = false;
    found.witness.clear();
    for (const auto& blk : members) {
      std::vector<std::string> names;
      for (int i : blk) names.push_back(text(keys[i]));
      found.witness.push_back(names);
    }
  };

  // depth-first over assignments of key i to an existing or fresh block
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == n) {
      if (collapse_equal()) {
        record();
        return true;
      }
      return false;
    }
    int nb = static_cast<int>(members.size());
    for (int b = 0; b <= nb && b <= i; ++b) {
      bool fits = true;
      if (b < nb)
        for (int j : members[b])
          if (!ok[i][j]) {
            fits = false;
            break;
          }
      if (!fits) continue;
      if (b == nb) members.emplace_back();
      members[b].push_back(i);
      block[i] = b;
      if (self(self, i + 1)) return true;
      members[b].pop_back();
      if (b == nb) members.pop_back();
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

}  // namespace detail

/// Stable-type comparison. NO means: every admissible identification of the
/// occurring labels leaves the classes different in the free group.
inline MergeResult can_equal_sb(const LabelStore& store, const SBClass& target,
                                const SBClass& x, int budget = kDefaultMergeBudget) {
  auto known_nsr = [&](const SBKey& k) { return k.size() == 1 && store.is_nsr(k[0]); };
  auto mergeable = [&](const SBKey& a, const SBKey& b) {
    if ((known_nsr(a) && b.empty()) || (known_nsr(b) && a.empty())) return false;
    if (a.size() == 1 && b.size() == 1 && store.declared_distinct(a[0], b[0])) return false;
    return true;
  };
  return detail::merge_search(target.terms, x.terms, mergeable,
                              [](const SBKey& k) { return sb_text(k); }, budget);
}

/// Dimension-graded comparison: merge classes must be equidimensional.
inline MergeResult can_equal_bir(const LabelStore& store, const BirClass& target,
                                 const BirClass& x, int budget = kDefaultMergeBudget) {
  auto known_nsr = [&](const Label& l) {
    return l.factors.size() == 1 && store.is_nsr(l.factors[0].name);
  };
  auto mergeable = [&](const Label& a, const Label& b) {
    if (a.dim() != b.dim()) return false;
    if ((known_nsr(a) && b.is_rational()) || (known_nsr(b) && a.is_rational())) return false;
    if (a.factors.size() == 1 && b.factors.size() == 1 &&
        store.declared_distinct(a.factors[0].name, b.factors[0].name))
      return false;
    return true;
  };
  return detail::merge_search(target.terms, x.terms, mergeable,
                              [](const Label& l) { return label_text(l); }, budget);
}

}  // namespace mvk
