#pragma once

#include <string>
#include <vector>

#include "mvk/strata.hpp"

namespace mvk {

/// The motivic volume of the degeneration at grade e: the alternating strata
/// sum. Both the open and the closed expansion are computed; they agree for
/// every validated complex, and disagreement means a bug, not bad input.
inline GradedClass vol(const Context& ctx, const StrataComplex& x, int e) {
  GradedClass open = open_sum(ctx, x, e);
  GradedClass closed = closed_sum(ctx, x, e);
  if (open != closed)
    fail(Errc::InvariantViolation, "open and closed strata sums disagree");
  return open;
}

/// Image of the volume in the dimension-graded group of birational types:
/// closed strata times projective powers, one term per stratum.
inline BirClass vol_bir(const Context& ctx, const StrataComplex& x) {
  BirClass r;
  for (const auto& s : x.strata) {
    Label l = ctx.labels.canon(s.label).times_proj(s.codim);
    if (l.dim() != x.fiber_dim)
      fail(Errc::UnlabeledStratum, "label of " + s.id + " has the wrong dimension");
    r.add_term(l, s.codim % 2 == 0 ? 1 : -1);
  }
  return r;
}

/// Image in the free group on stable types: plain alternating sum of closed
/// strata, projective factors gone.
inline SBClass vol_sb(const Context& ctx, const StrataComplex& x) {
  SBClass r;
  for (const auto& s : x.strata)
    r.add_term(ctx.labels.sb_key(s.label), s.codim % 2 == 0 ? 1 : -1);
  return r;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class VerdictStatus { Obstructed, NotObstructed, Inconclusive };

inline const char* verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Obstructed: return "OBSTRUCTED";
    case VerdictStatus::NotObstructed: return "NOT_OBSTRUCTED";
    case VerdictStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

struct Verdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::string rule;
  std::string evidence;  // the computed class, rendered
  std::vector<std::vector<std::string>> witness;
  std::string reason;
};

inline Verdict verdict_from_merge(const MergeResult& m, std::string rule, std::string evidence) {
  Verdict v;
  v.rule = std::move(rule);
  v.evidence = std::move(evidence);
  if (!m.possible) {
    v.status = VerdictStatus::Obstructed;
  } else if (m.exact) {
    v.status = VerdictStatus::NotObstructed;
    v.witness = m.witness;
  } else {
    v.status = VerdictStatus::Inconclusive;
    v.witness = m.witness;
    v.reason = "equality is possible under identifications not implied by the declarations";
  }
  return v;
}

/// Stable rationality obstruction: OBSTRUCTED when the stable volume cannot
/// equal the point class under any admissible identification of labels.
inline Verdict obstruct_stable(const Context& ctx, const StrataComplex& x,
                               int budget = kDefaultMergeBudget) {
  SBClass cls = vol_sb(ctx, x);
  SBClass target;
  target.add_term(SBKey{}, 1);
  MergeResult m = can_equal_sb(ctx.labels, target, cls, budget);
  return verdict_from_merge(m, "stable", render_text(cls));
}

/// Rationality obstruction. The target is the class of projective n-space in
/// degree n, the image of a rational generic fiber; pass literal_point_target
/// to compare against the degree-0 point class instead.
inline Verdict obstruct_rational(const Context& ctx, const StrataComplex& x,
                                 int budget = kDefaultMergeBudget,
                                 bool literal_point_target = false) {
  BirClass cls = vol_bir(ctx, x);
  BirClass target;
  target.add_term(literal_point_target ? Label::point() : Label::rational(x.fiber_dim), 1);
  MergeResult m = can_equal_bir(ctx.labels, target, cls, budget);
  return verdict_from_merge(m, "rational", render_text(cls));
}

/// Parity shortcut: if one codimension parity is entirely stably rational and
/// the other contains a stratum that is not, no cancellation can reach the
/// point class.
inline Verdict parity_rule(const Context& ctx, const StrataComplex& x) {
  bool all_sr[2] = {true, true};
  bool any_nsr[2] = {false, false};
  for (const auto& s : x.strata) {
    int p = s.codim % 2;
    bool point_stratum = s.dim == 0;
    bool known_sr = point_stratum || s.tag == Tag::Rational || s.tag == Tag::StablyRational;
    if (!known_sr) all_sr[p] = false;
    if (s.tag == Tag::Irrational) any_nsr[p] = true;
  }
  Verdict v;
  v.rule = "parity";
  v.evidence = render_text(vol_sb(ctx, x));
  if ((all_sr[0] && any_nsr[1]) || (all_sr[1] && any_nsr[0])) {
    v.status = VerdictStatus::Obstructed;
  } else {
    v.status = VerdictStatus::Inconclusive;
    v.reason = "not applicable: no parity is entirely stably rational with the other obstructed";
  }
  return v;
}

/// Smooth-model specialization: the volume of a one-stratum complex is the
/// special fiber itself. Returns whether identifying the generic fiber's
/// label with the special fiber's is consistent with the declarations.
inline bool specialization_check(const Context& ctx, const StrataComplex& x,
                                 const Label& generic_label) {
  if (x.strata.size() != 1 || x.strata[0].codim != 0)
    fail(Errc::SchemaViolation, "specialization check requires a single-stratum complex");
  BirClass v = vol_bir(ctx, x);
  Label special = ctx.labels.canon(x.strata[0].label);
  BirClass expect;
  expect.add_term(special, 1);
  if (!(v == expect)) fail(Errc::InvariantViolation, "volume of a smooth model is its fiber");

  Label lk = ctx.labels.canon(generic_label);
  if (lk.dim() != special.dim()) return false;
  auto known_nsr = [&](const Label& l) {
    return l.factors.size() == 1 && ctx.labels.is_nsr(l.factors[0].name);
  };
  if ((known_nsr(lk) && special.is_rational()) || (known_nsr(special) && lk.is_rational()))
    return false;
  if (lk.factors.size() == 1 && special.factors.size() == 1 &&
      ctx.labels.declared_distinct(lk.factors[0].name, special.factors[0].name))
    return false;
  return true;
}

}  // namespace mvk
