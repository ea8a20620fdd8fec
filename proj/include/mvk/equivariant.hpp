#pragma once

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mvk/strata.hpp"
#include "mvk/volume.hpp"

namespace mvk {

/// Atom with a cyclic action of the given order. Order one is the trivial
/// action; t and L never carry one.
struct EquivAtom {
  AtomId id = 0;
  int order = 1;
  friend auto operator<=>(const EquivAtom&, const EquivAtom&) = default;
};

inline int atom_dim(const AtomTable& table, const EquivAtom& a) { return table[a.id].dim; }
inline std::string atom_text(const AtomTable& table, const EquivAtom& a) {
  std::string s = table[a.id].name;
  if (a.order > 1) s += "[" + std::to_string(a.order) + "]";
  return s;
}

using EquivMonomial = Monomial<EquivAtom>;
using EquivClass = FormalSum<EquivAtom>;

// ---------------------------------------------------------------------------
// Models with multiplicities and user-supplied covers
// ---------------------------------------------------------------------------

struct CoverPiece {
  std::string name;
  int order = 1;
};

struct ModelStratumSpec {
  std::vector<std::string> of;      // component names, any size >= 1
  std::vector<CoverPiece> covers;   // pieces of the cover over the open stratum
};

struct ModelStratum {
  std::set<std::string> subset;
  int codim = 0;
  std::vector<EquivAtom> pieces;
};

/// Normal-crossings model over the small disc: components with
/// multiplicities, and for every non-empty intersection the pieces of the
/// cyclic cover over its interior, with their action orders.
struct EquivModel {
  int fiber_dim = 0;
  std::vector<std::pair<std::string, int>> components;
  std::vector<ModelStratum> strata;
};

inline int lcm_mult(const EquivModel& m) {
  if (m.components.empty()) fail(Errc::NoComponents, "model has no components");
  int l = 1;
  for (const auto& [name, mult] : m.components) l = std::lcm(l, mult);
  return l;
}

inline EquivModel build_model(Context& ctx, int fiber_dim,
                              const std::vector<std::pair<std::string, int>>& components,
                              const std::vector<ModelStratumSpec>& nerve) {
  if (components.empty()) fail(Errc::NoComponents, "model has no components");
  std::set<std::string> comp_names;
  int lcm_all = 1;
  for (const auto& [name, mult] : components) {
    if (mult < 1) fail(Errc::SchemaViolation, "multiplicity of " + name + " must be >= 1");
    if (!comp_names.insert(name).second) fail(Errc::NameClash, "duplicate component " + name);
    lcm_all = std::lcm(lcm_all, mult);
  }

  std::map<std::set<std::string>, const ModelStratumSpec*> table;
  for (const auto& e : nerve) {
    std::set<std::string> j(e.of.begin(), e.of.end());
    if (j.empty() || j.size() != e.of.size())
      fail(Errc::NerveInconsistent, "nerve subsets must list distinct components");
    for (const auto& n : j)
      if (!comp_names.count(n)) fail(Errc::NerveInconsistent, "unknown component " + n);
    if (!table.emplace(j, &e).second) fail(Errc::NerveInconsistent, "duplicate nerve subset");
  }
  for (const auto& [name, mult] : components)
    if (!table.count({name})) fail(Errc::MissingCover, "no cover declared over " + name);
  for (const auto& [j, spec] : table) {
    if (j.size() < 2) continue;
    for (const auto& drop : j) {
      std::set<std::string> sub = j;
      sub.erase(drop);
      if (!table.count(sub)) fail(Errc::NerveInconsistent, "nerve not downward closed");
    }
  }

  std::set<std::string> meets_others;
  for (const auto& [j, spec] : table)
    if (j.size() >= 2)
      for (const auto& n : j) meets_others.insert(n);

  EquivModel model;
  model.fiber_dim = fiber_dim;
  model.components = components;
  for (const auto& [j, spec] : table) {
    ModelStratum st;
    st.subset = j;
    st.codim = static_cast<int>(j.size()) - 1;
    if (spec->covers.empty())
      fail(Errc::MissingCover, "empty cover over a declared stratum");
    int dim = fiber_dim - st.codim;
    if (dim < 0) fail(Errc::CodimNotMonotone, "stratum deeper than the fiber dimension");
    for (const auto& p : spec->covers) {
      if (p.order < 1) fail(Errc::SchemaViolation, "action order must be >= 1");
      if (lcm_all % p.order != 0)
        fail(Errc::LabelConflict,
             "action order " + std::to_string(p.order) + " of " + p.name +
                 " does not divide the multiplicity lcm " + std::to_string(lcm_all));
      AtomId a = ctx.atoms.define(p.name + "°", dim);
      st.pieces.push_back(EquivAtom{a, p.order});
    }
    if (j.size() == 1) {
      auto comp = std::find_if(components.begin(), components.end(),
                               [&](const auto& c) { return c.first == *j.begin(); });
      if (comp->second == 1 && !meets_others.count(comp->first)) {
        if (st.pieces.size() != 1 || st.pieces[0].order != 1)
          fail(Errc::LabelConflict,
               "reduced isolated component " + comp->first + " must carry the trivial cover");
      }
    }
    model.strata.push_back(std::move(st));
  }
  return model;
}

// ---------------------------------------------------------------------------
// The equivariant volume and the action maps
// ---------------------------------------------------------------------------

/// Alternating cover sum in both the open and the closed form; the closed
/// form partitions each closed cover stratum into the interiors above it.
/// The forms agree whenever the declared data is consistent.
inline EquivClass vol_equivariant(const Context&, const EquivModel& m, int e) {
  if (e < m.fiber_dim) fail(Errc::GradeBelowDimension, "grade below fiber dimension");
  EquivClass open, closed;
  for (const auto& st : m.strata) {
    int c = st.codim;
    EquivClass interiors;
    for (const EquivAtom& p : st.pieces) interiors += EquivClass::atom(p);
    EquivClass open_term =
        EquivClass::tau_power(e - m.fiber_dim) * interiors * torus_class<EquivAtom>(c, c);
    open += c % 2 == 0 ? open_term : -open_term;

    EquivClass closed_piece;  // [cover of the closed stratum] at grade e - c
    for (const auto& st2 : m.strata) {
      if (!std::includes(st2.subset.begin(), st2.subset.end(), st.subset.begin(),
                         st.subset.end()))
        continue;
      int dim2 = m.fiber_dim - st2.codim;
      for (const EquivAtom& p : st2.pieces)
        closed_piece += EquivClass::tau_power((e - c) - dim2) * EquivClass::atom(p);
    }
    EquivClass closed_term = closed_piece * projective_class<EquivAtom>(c, c);
    closed += c % 2 == 0 ? closed_term : -closed_term;
  }
  if (!(open == closed))
    fail(Errc::InvariantViolation, "equivariant open and closed sums disagree");
  return open;
}

inline GradedClass forget_action(const EquivClass& x) {
  GradedClass r;
  for (const auto& [m, c] : x.terms()) {
    GradedMonomial n{m.tau, m.lef, {}};
    for (const EquivAtom& a : m.atoms) n.atoms.push_back(a.id);
    std::sort(n.atoms.begin(), n.atoms.end());
    r.add_term(n, c);
  }
  return r;
}

/// Restrict to the subgroup cutting out the m-th roots: an order-n action
/// becomes order n / gcd(n, m).
inline EquivClass restrict_action(const EquivClass& x, int m) {
  if (m < 1) fail(Errc::SchemaViolation, "restriction index must be >= 1");
  EquivClass r;
  for (const auto& [mono, c] : x.terms()) {
    EquivMonomial n{mono.tau, mono.lef, {}};
    for (const EquivAtom& a : mono.atoms)
      n.atoms.push_back(EquivAtom{a.id, a.order / std::gcd(a.order, m)});
    std::sort(n.atoms.begin(), n.atoms.end());
    r.add_term(n, c);
  }
  return r;
}

struct CommuteReport {
  bool ok = true;
  std::string mismatch;
};

/// Does the forgotten equivariant volume equal the plain volume of the
/// base-changed degeneration, under the declared identification of cover
/// pieces with strata?
inline CommuteReport check_commute(const Context& ctx, const EquivModel& m,
                                   const StrataComplex& base,
                                   const std::map<std::string, std::string>& identify) {
  CommuteReport rep;
  if (base.fiber_dim != m.fiber_dim) {
    rep.ok = false;
    rep.mismatch = "fiber dimensions differ";
    return rep;
  }
  // substitution: cover piece atom -> open monomial of the identified stratum
  std::map<AtomId, std::vector<AtomId>> subst;
  for (const auto& st : m.strata)
    for (const EquivAtom& p : st.pieces) {
      std::string piece = ctx.atoms[p.id].name;
      std::string key = piece.substr(0, piece.size() - std::string("°").size());
      auto it = identify.find(key);
      if (it == identify.end()) {
        rep.ok = false;
        rep.mismatch = "no identification for cover piece " + key;
        return rep;
      }
      const Stratum& s = base.strata[base.index_of(it->second)];
      if (s.dim != ctx.atoms[p.id].dim) {
        rep.ok = false;
        rep.mismatch = "identification of " + key + " does not preserve dimension";
        return rep;
      }
      subst[p.id] = s.open_atoms;
    }

  GradedClass lhs_raw = forget_action(vol_equivariant(ctx, m, m.fiber_dim));
  GradedClass lhs;
  for (const auto& [mono, c] : lhs_raw.terms()) {
    GradedMonomial n{mono.tau, mono.lef, {}};
    for (AtomId a : mono.atoms) {
      auto it = subst.find(a);
      if (it == subst.end())
        n.atoms.push_back(a);
      else
        n.atoms.insert(n.atoms.end(), it->second.begin(), it->second.end());
    }
    std::sort(n.atoms.begin(), n.atoms.end());
    lhs.add_term(n, c);
  }
  GradedClass rhs = vol(ctx, base, base.fiber_dim);
  if (lhs == rhs) return rep;
  rep.ok = false;
  GradedClass diff = lhs - rhs;
  auto sorted = canonical_terms(ctx.atoms, diff);
  rep.mismatch = "first differing monomial: " + monomial_text(ctx.atoms, sorted.front().first);
  return rep;
}

}  // namespace mvk
