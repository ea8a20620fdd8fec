#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvk/labels.hpp"
#include "mvk/ring.hpp"

namespace mvk {

/// Shared symbol state for one degeneration: the atom registry and the
/// declared birational knowledge. Built once, then read-only.
struct Context {
  AtomTable atoms;
  LabelStore labels;
};

enum class Tag { Rational, StablyRational, Irrational, Unknown };

inline const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Rational: return "rational";
    case Tag::StablyRational: return "stably_rational";
    case Tag::Irrational: return "irrational";
    case Tag::Unknown: return "unknown";
  }
  return "unknown";
}

/// Declarative description of one stratum of the special fiber.
struct StratumSpec {
  std::string id;
  int codim = 0;
  Tag tag = Tag::Unknown;
  std::string label;  // birational label of the closed stratum; defaults to id
};

/// Materialized stratum. The open interior is a product of atoms (usually
/// one; none for zero-dimensional strata, whose interior is a point).
struct Stratum {
  std::string id;
  int codim = 0;
  int dim = 0;
  Tag tag = Tag::Unknown;
  std::vector<AtomId> open_atoms;
  Label label;
};

struct Diagnostic {
  Errc code;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
  std::string joined() const {
    std::string s;
    for (const auto& d : diagnostics) {
      if (!s.empty()) s += "; " + std::string(errc_name(d.code)) + ": ";
      s += d.message;
    }
    return s;
  }
};

/// Poset of strata with codimensions. leq[i][j] means stratum i is contained
/// in stratum j; the relation is reflexive and transitively closed.
struct StrataComplex {
  int fiber_dim = 0;
  std::vector<Stratum> strata;
  std::vector<std::vector<bool>> leq;

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < strata.size(); ++i)
      if (strata[i].id == id) return i;
    fail(Errc::SchemaViolation, "unknown stratum id: " + id);
  }

  std::vector<std::size_t> below(std::size_t i) const {  // substrata, including i
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < strata.size(); ++j)
      if (leq[j][i]) out.push_back(j);
    return out;
  }
  std::vector<std::size_t> above(std::size_t i) const {  // containing strata, including i
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < strata.size(); ++j)
      if (leq[i][j]) out.push_back(j);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation and construction
// ---------------------------------------------------------------------------

namespace detail {

/// Reflexive-transitive closure of the containment edges; reports cycles.
inline std::optional<std::vector<std::vector<bool>>> close_containment(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    ValidationReport& report, const std::vector<std::string>& ids) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [sub, sup] : edges) leq[sub][sup] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i]) {
        report.diagnostics.push_back(
            {Errc::PosetCycle, "containment cycle through " + ids[i] + " and " + ids[j]});
        return std::nullopt;
      }
  return leq;
}

}  // namespace detail

/// Structural validation: everything that can be checked before any atom or
/// label is created. Collects every violated invariant.
inline ValidationReport validate_strata(
    int fiber_dim, const std::vector<StratumSpec>& specs,
    const std::vector<std::pair<std::string, std::string>>& contains) {
  ValidationReport report;
  if (specs.empty()) {
    report.diagnostics.push_back({Errc::NoComponents, "no strata declared"});
    return report;
  }
  std::map<std::string, std::size_t> index;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!index.emplace(specs[i].id, i).second)
      report.diagnostics.push_back({Errc::NameClash, "duplicate stratum id " + specs[i].id});
    ids.push_back(specs[i].id);
    if (specs[i].codim < 0 || specs[i].codim > fiber_dim)
      report.diagnostics.push_back(
          {Errc::CodimNotMonotone, "codim of " + specs[i].id + " outside [0, fiber_dim]"});
    if (specs[i].codim == fiber_dim && specs[i].tag == Tag::Irrational)
      report.diagnostics.push_back(
          {Errc::LabelConflict, "zero-dimensional stratum " + specs[i].id +
                                    " cannot be irrational"});
  }
  if (!report.ok()) return report;

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [sub, sup] : contains) {
    auto a = index.find(sub), b = index.find(sup);
    if (a == index.end() || b == index.end()) {
      report.diagnostics.push_back(
          {Errc::SchemaViolation, "containment references unknown stratum " +
                                      (a == index.end() ? sub : sup)});
      continue;
    }
    edges.emplace_back(a->second, b->second);
  }
  if (!report.ok()) return report;

  auto closed = detail::close_containment(specs.size(), edges, report, ids);
  if (!closed) return report;
  const auto& leq = *closed;
  const std::size_t n = specs.size();

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && leq[i][j] && specs[i].codim <= specs[j].codim)
        report.diagnostics.push_back(
            {Errc::CodimNotMonotone,
             ids[i] + " <= " + ids[j] + " but codims are " + std::to_string(specs[i].codim) +
                 " and " + std::to_string(specs[j].codim)});
  if (!report.ok()) return report;

  for (std::size_t i = 0; i < n; ++i) {
    bool maximal = true, under_component = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq[i][j]) maximal = false;
      if (leq[i][j] && specs[j].codim == 0) under_component = true;
    }
    if (maximal && specs[i].codim != 0)
      report.diagnostics.push_back(
          {Errc::CodimNotMonotone, "maximal stratum " + ids[i] + " has positive codim"});
    if (!under_component)
      report.diagnostics.push_back(
          {Errc::NoComponents, ids[i] + " is not contained in any codim-0 component"});
  }

  // interval condition: alternating codim counts cancel on every open interval
  for (std::size_t lo = 0; lo < n; ++lo)
    for (std::size_t hi = 0; hi < n; ++hi) {
      if (!leq[lo][hi]) continue;
      long sum = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (leq[lo][k] && leq[k][hi]) sum += specs[k].codim % 2 == 0 ? 1 : -1;
      long expect = lo == hi ? (specs[lo].codim % 2 == 0 ? 1 : -1) : 0;
      if (sum != expect)
        report.diagnostics.push_back(
            {Errc::IntervalConditionFailed,
             "interval [" + ids[lo] + ", " + ids[hi] + "] sums to " + std::to_string(sum)});
    }
  return report;
}

/// Validates, then materializes atoms and labels. Zero-dimensional strata get
/// the unit class and the point label; everything else gets one fresh atom
/// per stratum, labelled by the closed stratum.
inline StrataComplex build_complex(
    Context& ctx, int fiber_dim, const std::vector<StratumSpec>& specs,
    const std::vector<std::pair<std::string, std::string>>& contains) {
  ValidationReport report = validate_strata(fiber_dim, specs, contains);
  if (!report.ok()) throw Error(report.diagnostics.front().code, report.joined());

  StrataComplex x;
  x.fiber_dim = fiber_dim;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < specs.size(); ++i) index.emplace(specs[i].id, i);

  for (const auto& s : specs) {
    Stratum st;
    st.id = s.id;
    st.codim = s.codim;
    st.dim = fiber_dim - s.codim;
    st.tag = s.tag;
    std::string label_name = s.label.empty() ? s.id : s.label;
    if (st.dim == 0) {
      st.label = Label::point();
    } else if (s.tag == Tag::Rational) {
      st.label = Label::rational(st.dim);
    } else {
      st.label = Label::base(label_name, st.dim);
      if (s.tag == Tag::Irrational) ctx.labels.declare_not_stably_rational(label_name);
      if (s.tag == Tag::StablyRational) ctx.labels.declare_stably_rational(label_name);
    }
    if (st.dim > 0) {
      AtomId a = ctx.atoms.define(s.id + "°", st.dim);
      st.open_atoms.push_back(a);
      ctx.labels.set_atom_label(a, st.label);
    }
    x.strata.push_back(std::move(st));
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [sub, sup] : contains) edges.emplace_back(index.at(sub), index.at(sup));
  ValidationReport ignore;
  std::vector<std::string> ids;
  for (const auto& s : specs) ids.push_back(s.id);
  x.leq = *detail::close_containment(specs.size(), edges, ignore, ids);
  return x;
}

// ---------------------------------------------------------------------------
// Nerve input
// ---------------------------------------------------------------------------

struct PieceSpec {
  std::string name;
  Tag tag = Tag::Unknown;
  std::string label;  // defaults to name
};

struct NerveEntry {
  std::vector<std::string> of;  // component names, |of| >= 2
  std::vector<PieceSpec> pieces;
};

/// Expand a normal-crossings nerve into a strata poset. Intersections of j
/// components sit in codimension j-1. Containment follows the subset order;
/// when an intersection is disconnected, hints name the enclosing piece.
inline StrataComplex from_snc_nerve(
    Context& ctx, int fiber_dim, const std::vector<PieceSpec>& components,
    const std::vector<NerveEntry>& nerve,
    const std::vector<std::pair<std::string, std::string>>& hints = {}) {
  if (components.empty()) fail(Errc::NoComponents, "no components declared");
  std::set<std::string> comp_names;
  for (const auto& c : components)
    if (!comp_names.insert(c.name).second)
      fail(Errc::NameClash, "duplicate component " + c.name);

  std::map<std::set<std::string>, std::vector<PieceSpec>> table;
  for (const auto& c : components) table[{c.name}] = {c};
  for (const auto& e : nerve) {
    std::set<std::string> j(e.of.begin(), e.of.end());
    if (j.size() != e.of.size() || j.size() < 2)
      fail(Errc::NerveInconsistent, "intersection subsets need >= 2 distinct components");
    for (const auto& n : j)
      if (!comp_names.count(n)) fail(Errc::NerveInconsistent, "unknown component " + n);
    if (e.pieces.empty()) fail(Errc::NerveInconsistent, "empty piece list for an intersection");
    if (table.count(j)) fail(Errc::NerveInconsistent, "duplicate nerve subset");
    table[j] = e.pieces;
  }

  // downward closure: a non-empty intersection forces all sub-intersections
  for (const auto& [j, pieces] : table) {
    if (j.size() < 3) continue;
    for (const auto& drop : j) {
      std::set<std::string> sub = j;
      sub.erase(drop);
      if (!table.count(sub))
        fail(Errc::NerveInconsistent,
             "nerve not downward closed: missing sub-intersection of size " +
                 std::to_string(sub.size()));
    }
  }

  std::vector<StratumSpec> specs;
  std::map<std::string, std::set<std::string>> piece_subset;
  for (const auto& [j, pieces] : table)
    for (const auto& p : pieces) {
      if (piece_subset.count(p.name)) fail(Errc::NameClash, "duplicate stratum " + p.name);
      piece_subset[p.name] = j;
      specs.push_back(StratumSpec{p.name, static_cast<int>(j.size()) - 1, p.tag, p.label});
    }

  std::multimap<std::string, std::string> hint_map;
  for (const auto& [sub, sup] : hints) hint_map.emplace(sub, sup);

  std::vector<std::pair<std::string, std::string>> contains;
  for (const auto& [j, pieces] : table) {
    if (j.size() < 2) continue;
    // containment into every proper sub-intersection
    std::vector<std::set<std::string>> subs;
    for (const auto& [j2, pieces2] : table)
      if (j2.size() < j.size() && std::includes(j.begin(), j.end(), j2.begin(), j2.end()))
        subs.push_back(j2);
    for (const auto& p : pieces) {
      for (const auto& j2 : subs) {
        const auto& candidates = table.at(j2);
        std::vector<std::string> chosen;
        if (candidates.size() == 1) {
          chosen.push_back(candidates[0].name);
        } else {
          auto [lo, hi] = hint_map.equal_range(p.name);
          for (auto it = lo; it != hi; ++it)
            for (const auto& c : candidates)
              if (c.name == it->second) chosen.push_back(c.name);
        }
        if (chosen.empty())
          fail(Errc::NerveInconsistent,
               "piece " + p.name + " needs a containment hint into a disconnected intersection");
        if (chosen.size() > 1)
          fail(Errc::NerveInconsistent,
               "piece " + p.name + " has conflicting containment hints");
        contains.emplace_back(p.name, chosen.front());
      }
    }
  }
  return build_complex(ctx, fiber_dim, specs, contains);
}

// ---------------------------------------------------------------------------
// Classes attached to strata
// ---------------------------------------------------------------------------

/// Interior class at the requested grade: t-shift times the open atoms.
inline GradedClass open_class(const Context&, const StrataComplex& x, std::size_t i,
                              int grade) {
  const Stratum& s = x.strata[i];
  if (grade < s.dim)
    fail(Errc::GradeBelowDimension, "grade below dim of stratum " + s.id);
  GradedMonomial m{grade - s.dim, 0, s.open_atoms};
  std::sort(m.atoms.begin(), m.atoms.end());
  return GradedClass::of_monomial(m);
}

/// Closed stratum as the sum of the interiors of its substrata.
inline GradedClass closed_class(const Context& ctx, const StrataComplex& x, std::size_t i,
                                int grade) {
  const Stratum& s = x.strata[i];
  if (grade < s.dim)
    fail(Errc::GradeBelowDimension, "grade below dim of stratum " + s.id);
  GradedClass sum;
  for (std::size_t j : x.below(i)) sum += open_class(ctx, x, j, grade);
  return sum;
}

/// Boundary class of the stratum: torus powers of the codimensions of the
/// strata containing it. For simplicial local structure this is a projective
/// space class.
inline GradedClass p_class(const StrataComplex& x, std::size_t i, int grade) {
  const Stratum& s = x.strata[i];
  if (grade < s.codim)
    fail(Errc::GradeBelowDimension, "grade below codim of stratum " + s.id);
  GradedClass sum;
  for (std::size_t j : x.above(i)) sum += torus_class(x.strata[j].codim, s.codim);
  return GradedClass::tau_power(grade - s.codim) * sum;
}

/// Alternating sum over interiors times tori.
inline GradedClass open_sum(const Context& ctx, const StrataComplex& x, int e) {
  if (e < x.fiber_dim) fail(Errc::GradeBelowDimension, "grade below fiber dimension");
  GradedClass total;
  for (std::size_t i = 0; i < x.strata.size(); ++i) {
    int c = x.strata[i].codim;
    GradedClass term = open_class(ctx, x, i, e - c) * torus_class(c, c);
    total += c % 2 == 0 ? term : -term;
  }
  return total;
}

/// Alternating sum over closed strata times their boundary classes.
inline GradedClass closed_sum(const Context& ctx, const StrataComplex& x, int e) {
  if (e < x.fiber_dim) fail(Errc::GradeBelowDimension, "grade below fiber dimension");
  GradedClass total;
  for (std::size_t i = 0; i < x.strata.size(); ++i) {
    int c = x.strata[i].codim;
    GradedClass term =
        closed_class(ctx, x, i, e - c) * p_class(x, i, c);
    total += c % 2 == 0 ? term : -term;
  }
  return total;
}

/// Product degeneration: pairs of strata, added codimensions, concatenated
/// interiors, pointwise containment.
inline StrataComplex product_complex(const StrataComplex& a, const StrataComplex& b) {
  StrataComplex p;
  p.fiber_dim = a.fiber_dim + b.fiber_dim;
  for (const auto& sa : a.strata)
    for (const auto& sb : b.strata) {
      Stratum s;
      s.id = sa.id + "*" + sb.id;
      s.codim = sa.codim + sb.codim;
      s.dim = sa.dim + sb.dim;
      s.tag = sa.tag == Tag::Rational && sb.tag == Tag::Rational ? Tag::Rational : Tag::Unknown;
      s.open_atoms = sa.open_atoms;
      s.open_atoms.insert(s.open_atoms.end(), sb.open_atoms.begin(), sb.open_atoms.end());
      std::sort(s.open_atoms.begin(), s.open_atoms.end());
      s.label = sa.label * sb.label;
      p.strata.push_back(std::move(s));
    }
  std::size_t nb = b.strata.size();
  p.leq.assign(p.strata.size(), std::vector<bool>(p.strata.size(), false));
  for (std::size_t i = 0; i < p.strata.size(); ++i)
    for (std::size_t j = 0; j < p.strata.size(); ++j)
      p.leq[i][j] = a.leq[i / nb][j / nb] && b.leq[i % nb][j % nb];
  return p;
}

}  // namespace mvk
