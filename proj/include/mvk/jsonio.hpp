#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mvk/cones.hpp"
#include "mvk/equivariant.hpp"
#include "mvk/labels.hpp"
#include "mvk/ring.hpp"
#include "mvk/strata.hpp"
#include "mvk/volume.hpp"

namespace mvk {

using Json = nlohmann::ordered_json;

inline Json coeff_json(const Int& c) {
  static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
  static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
  if (c >= lo && c <= hi) return Json(static_cast<std::int64_t>(c));
  return Json(c.str());
}

inline Json class_json(const AtomTable& table, const GradedClass& x) {
  Json terms = Json::array();
  for (const auto& [m, c] : canonical_terms(table, x)) {
    Json atoms = Json::array();
    for (AtomId a : m.atoms) atoms.push_back(table[a].name);
    terms.push_back({{"coeff", coeff_json(c)}, {"tau", m.tau}, {"lef", m.lef}, {"atoms", atoms}});
  }
  return Json{{"text", render_text(table, x)}, {"terms", terms}};
}

inline Json class_json(const AtomTable& table, const EquivClass& x) {
  Json terms = Json::array();
  for (const auto& [m, c] : canonical_terms(table, x)) {
    Json atoms = Json::array();
    for (const EquivAtom& a : m.atoms)
      atoms.push_back({{"name", table[a.id].name}, {"order", a.order}});
    terms.push_back({{"coeff", coeff_json(c)}, {"tau", m.tau}, {"lef", m.lef}, {"atoms", atoms}});
  }
  return Json{{"text", render_text(table, x)}, {"terms", terms}};
}

namespace detail {
template <class K, class Entry>
Json signed_terms_json(const std::map<K, Int>& terms, Entry entry) {
  std::vector<std::pair<K, Int>> pos, neg;
  for (const auto& [k, c] : terms) (c > 0 ? pos : neg).emplace_back(k, c);
  auto bytext = [&](const auto& a, const auto& b) {
    return entry(a.first, a.second)["label"].template get<std::string>() <
           entry(b.first, b.second)["label"].template get<std::string>();
  };
  std::sort(pos.begin(), pos.end(), bytext);
  std::sort(neg.begin(), neg.end(), bytext);
  Json out = Json::array();
  for (const auto& [k, c] : pos) out.push_back(entry(k, c));
  for (const auto& [k, c] : neg) out.push_back(entry(k, c));
  return out;
}
}  // namespace detail

inline Json class_json(const BirClass& b) {
  Json terms = detail::signed_terms_json(b.terms, [](const Label& l, const Int& c) {
    return Json{{"label", label_text(l)}, {"dim", l.dim()}, {"coeff", coeff_json(c)}};
  });
  return Json{{"text", render_text(b)}, {"terms", terms}};
}

inline Json class_json(const SBClass& s) {
  Json terms = detail::signed_terms_json(s.terms, [](const SBKey& k, const Int& c) {
    return Json{{"label", sb_text(k)}, {"coeff", coeff_json(c)}};
  });
  return Json{{"text", render_text(s)}, {"terms", terms}};
}

inline Json verdict_json(const Verdict& v) {
  Json j{{"rule", v.rule}, {"status", verdict_name(v.status)}};
  if (!v.witness.empty()) {
    Json w = Json::array();
    for (const auto& blk : v.witness) w.push_back(blk);
    j["witness"] = w;
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline Json report_json(const ValidationReport& r) {
  Json diags = Json::array();
  for (const auto& d : r.diagnostics)
    diags.push_back({{"code", errc_name(d.code)}, {"message", d.message}});
  return Json{{"ok", r.ok()}, {"diagnostics", diags}};
}

inline Json faces_json(const FaceLattice& fl) {
  Json faces = Json::array();
  for (const auto& f : fl.faces) faces.push_back({{"dim", f.dim}, {"rays", f.ray_indices}});
  return Json{{"cone_dim", fl.cone_dim},
              {"euler", euler_number(fl)},
              {"counts", fl.counts_by_dim()},
              {"faces", faces}};
}

}  // namespace mvk
