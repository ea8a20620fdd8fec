#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mvk/jsonio.hpp"

namespace mvk {

// ---------------------------------------------------------------------------
// Scenario documents: schema-checked degeneration descriptions
// ---------------------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

enum class GeometryKind { Complex, Nerve, Model, Cone };

struct ScenarioDoc {
  std::string name;
  std::string source;

  struct AtomDecl {
    std::string name;
    int dim = 0;
    bool irreducible = true;
    bool geom_irreducible = true;
  };
  std::vector<AtomDecl> atoms;

  std::vector<std::string> not_stably_rational, stably_rational;
  std::vector<std::pair<std::string, std::string>> equivalences, distinctions;

  GeometryKind kind = GeometryKind::Complex;

  // complex payload
  int fiber_dim = 0;
  std::vector<StratumSpec> strata;
  std::vector<std::pair<std::string, std::string>> contains;

  // nerve payload
  std::vector<PieceSpec> components;
  std::vector<NerveEntry> intersections;
  std::vector<std::pair<std::string, std::string>> hints;

  // model payload
  std::vector<std::pair<std::string, int>> mult_components;
  std::vector<ModelStratumSpec> model_nerve;
  bool has_base_change = false;
  int base_fiber_dim = 0;
  std::vector<StratumSpec> base_strata;
  std::vector<std::pair<std::string, std::string>> base_contains;
  std::map<std::string, std::string> identify;

  // cone payload
  int rank = 0;
  IntMat rays;

  std::vector<std::string> commands;
};

namespace schema {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  fail(Errc::SchemaViolation, where + ": " + what);
}

inline void expect_keys(const Json& j, const std::string& where,
                        std::initializer_list<const char*> required,
                        std::initializer_list<const char*> optional) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const char* k : required)
    if (!j.contains(k)) bad(where, std::string("missing field '") + k + "'");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* r : required) known |= k == r;
    for (const char* o : optional) known |= k == o;
    if (!known) bad(where, "unknown field '" + k + "'");
  }
}

inline std::string str(const Json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_string()) bad(where, std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

inline int integer(const Json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number_integer()) bad(where, std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

inline bool boolean(const Json& j, const char* key, const std::string& where, bool dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) bad(where, std::string("'") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

inline const Json& array(const Json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_array()) bad(where, std::string("'") + key + "' must be an array");
  return j.at(key);
}

inline Tag tag_of(const Json& j, const std::string& where) {
  if (!j.contains("tag")) return Tag::Unknown;
  std::string t = str(j, "tag", where);
  if (t == "rational") return Tag::Rational;
  if (t == "stably_rational") return Tag::StablyRational;
  if (t == "irrational") return Tag::Irrational;
  if (t == "unknown") return Tag::Unknown;
  bad(where, "unknown tag '" + t + "'");
}

inline std::vector<std::pair<std::string, std::string>> pair_list(const Json& arr,
                                                                  const std::string& where) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      bad(where, "expected [name, name] pairs");
    out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return out;
}

inline std::vector<StratumSpec> strata_list(const Json& arr, const std::string& where) {
  std::vector<StratumSpec> out;
  for (const auto& s : arr) {
    expect_keys(s, where + ".strata", {"id", "codim"}, {"tag", "label"});
    StratumSpec spec;
    spec.id = str(s, "id", where);
    spec.codim = integer(s, "codim", where);
    spec.tag = tag_of(s, where);
    if (s.contains("label")) spec.label = str(s, "label", where);
    out.push_back(std::move(spec));
  }
  return out;
}

inline std::vector<PieceSpec> piece_list(const Json& arr, const std::string& where) {
  std::vector<PieceSpec> out;
  for (const auto& p : arr) {
    expect_keys(p, where, {"name"}, {"tag", "label"});
    PieceSpec spec;
    spec.name = str(p, "name", where);
    spec.tag = tag_of(p, where);
    if (p.contains("label")) spec.label = str(p, "label", where);
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace schema

inline ScenarioDoc parse_scenario(const Json& j) {
  using namespace schema;
  expect_keys(j, "scenario", {"schema", "name"},
              {"source", "atoms", "labels", "complex", "nerve", "model", "cone", "commands"});
  if (integer(j, "schema", "scenario") != kSchemaVersion)
    bad("scenario", "unsupported schema version");

  ScenarioDoc doc;
  doc.name = str(j, "name", "scenario");
  if (j.contains("source")) doc.source = str(j, "source", "scenario");

  if (j.contains("atoms"))
    for (const auto& a : array(j, "atoms", "scenario")) {
      expect_keys(a, "atoms", {"name", "dim"}, {"irreducible", "geom_irreducible"});
      doc.atoms.push_back({str(a, "name", "atoms"), integer(a, "dim", "atoms"),
                           boolean(a, "irreducible", "atoms", true),
                           boolean(a, "geom_irreducible", "atoms", true)});
    }

  if (j.contains("labels")) {
    const Json& l = j.at("labels");
    expect_keys(l, "labels", {},
                {"not_stably_rational", "stably_rational", "equivalences", "distinctions"});
    if (l.contains("not_stably_rational"))
      for (const auto& n : array(l, "not_stably_rational", "labels"))
        doc.not_stably_rational.push_back(n.get<std::string>());
    if (l.contains("stably_rational"))
      for (const auto& n : array(l, "stably_rational", "labels"))
        doc.stably_rational.push_back(n.get<std::string>());
    if (l.contains("equivalences"))
      doc.equivalences = pair_list(array(l, "equivalences", "labels"), "labels.equivalences");
    if (l.contains("distinctions"))
      doc.distinctions = pair_list(array(l, "distinctions", "labels"), "labels.distinctions");
  }

  int geoms = j.contains("complex") + j.contains("nerve") + j.contains("model") +
              j.contains("cone");
  if (geoms != 1) bad("scenario", "exactly one geometry payload is required");

  if (j.contains("complex")) {
    doc.kind = GeometryKind::Complex;
    const Json& c = j.at("complex");
    expect_keys(c, "complex", {"fiber_dim", "strata"}, {"contains"});
    doc.fiber_dim = integer(c, "fiber_dim", "complex");
    doc.strata = strata_list(array(c, "strata", "complex"), "complex");
    if (c.contains("contains"))
      doc.contains = pair_list(array(c, "contains", "complex"), "complex.contains");
  } else if (j.contains("nerve")) {
    doc.kind = GeometryKind::Nerve;
    const Json& n = j.at("nerve");
    expect_keys(n, "nerve", {"fiber_dim", "components"}, {"intersections", "hints"});
    doc.fiber_dim = integer(n, "fiber_dim", "nerve");
    doc.components = piece_list(array(n, "components", "nerve"), "nerve.components");
    if (n.contains("intersections"))
      for (const auto& e : array(n, "intersections", "nerve")) {
        expect_keys(e, "nerve.intersections", {"of", "pieces"}, {});
        NerveEntry entry;
        for (const auto& name : array(e, "of", "nerve.intersections"))
          entry.of.push_back(name.get<std::string>());
        entry.pieces = piece_list(array(e, "pieces", "nerve.intersections"),
                                  "nerve.intersections.pieces");
        doc.intersections.push_back(std::move(entry));
      }
    if (n.contains("hints")) doc.hints = pair_list(array(n, "hints", "nerve"), "nerve.hints");
  } else if (j.contains("model")) {
    doc.kind = GeometryKind::Model;
    const Json& m = j.at("model");
    expect_keys(m, "model", {"fiber_dim", "components", "nerve"}, {"base_change"});
    doc.fiber_dim = integer(m, "fiber_dim", "model");
    for (const auto& c : array(m, "components", "model")) {
      expect_keys(c, "model.components", {"name", "mult"}, {});
      doc.mult_components.emplace_back(str(c, "name", "model"), integer(c, "mult", "model"));
    }
    for (const auto& e : array(m, "nerve", "model")) {
      expect_keys(e, "model.nerve", {"of", "covers"}, {});
      ModelStratumSpec spec;
      for (const auto& name : array(e, "of", "model.nerve"))
        spec.of.push_back(name.get<std::string>());
      for (const auto& c : array(e, "covers", "model.nerve")) {
        expect_keys(c, "model.nerve.covers", {"name"}, {"order"});
        CoverPiece piece;
        piece.name = str(c, "name", "model.nerve.covers");
        piece.order = c.contains("order") ? integer(c, "order", "model.nerve.covers") : 1;
        spec.covers.push_back(std::move(piece));
      }
      doc.model_nerve.push_back(std::move(spec));
    }
    if (m.contains("base_change")) {
      doc.has_base_change = true;
      const Json& b = m.at("base_change");
      expect_keys(b, "model.base_change", {"complex", "identify"}, {});
      const Json& c = b.at("complex");
      expect_keys(c, "model.base_change.complex", {"fiber_dim", "strata"}, {"contains"});
      doc.base_fiber_dim = integer(c, "fiber_dim", "base_change.complex");
      doc.base_strata = strata_list(array(c, "strata", "base_change.complex"), "base_change");
      if (c.contains("contains"))
        doc.base_contains =
            pair_list(array(c, "contains", "base_change.complex"), "base_change.contains");
      if (!b.at("identify").is_object()) bad("model.base_change", "'identify' must be an object");
      for (const auto& [k, v] : b.at("identify").items())
        doc.identify[k] = v.get<std::string>();
    }
  } else {
    doc.kind = GeometryKind::Cone;
    const Json& c = j.at("cone");
    expect_keys(c, "cone", {"rank", "rays"}, {});
    doc.rank = integer(c, "rank", "cone");
    for (const auto& ray : array(c, "rays", "cone")) {
      IntVec v;
      for (const auto& x : ray) {
        if (!x.is_number_integer()) bad("cone.rays", "entries must be integers");
        v.push_back(Int(x.get<std::int64_t>()));
      }
      doc.rays.push_back(std::move(v));
    }
  }

  if (j.contains("commands"))
    for (const auto& c : array(j, "commands", "scenario"))
      doc.commands.push_back(c.get<std::string>());
  return doc;
}

inline ScenarioDoc parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::SchemaViolation, std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline ScenarioDoc load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::SchemaViolation, "cannot read scenario file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str());
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

struct LoadedScenario {
  ScenarioDoc doc;
  Context ctx;
  std::optional<StrataComplex> complex;
  std::optional<EquivModel> model;
  std::optional<StrataComplex> base_complex;
  std::optional<Cone> cone;
};

inline LoadedScenario materialize(ScenarioDoc doc) {
  LoadedScenario s;
  for (const auto& a : doc.atoms)
    s.ctx.atoms.define(a.name, a.dim, a.irreducible, a.geom_irreducible);

  switch (doc.kind) {
    case GeometryKind::Complex:
      s.complex = build_complex(s.ctx, doc.fiber_dim, doc.strata, doc.contains);
      break;
    case GeometryKind::Nerve:
      s.complex =
          from_snc_nerve(s.ctx, doc.fiber_dim, doc.components, doc.intersections, doc.hints);
      break;
    case GeometryKind::Model:
      s.model = build_model(s.ctx, doc.fiber_dim, doc.mult_components, doc.model_nerve);
      if (doc.has_base_change)
        s.base_complex =
            build_complex(s.ctx, doc.base_fiber_dim, doc.base_strata, doc.base_contains);
      break;
    case GeometryKind::Cone:
      s.cone = cone_from_rays(doc.rank, doc.rays);
      break;
  }

  for (const auto& n : doc.not_stably_rational) s.ctx.labels.declare_not_stably_rational(n);
  for (const auto& n : doc.stably_rational) s.ctx.labels.declare_stably_rational(n);
  for (const auto& [a, b] : doc.equivalences) s.ctx.labels.declare_equivalent(a, b);
  for (const auto& [a, b] : doc.distinctions) s.ctx.labels.declare_distinct(a, b);

  // equivalent labels must agree in dimension wherever both are strata labels
  if (s.complex) {
    std::map<std::string, int> dims;
    for (const auto& st : s.complex->strata)
      if (!st.label.factors.empty()) dims[st.label.factors[0].name] = st.label.dim();
    for (const auto& [a, b] : doc.equivalences) {
      auto i = dims.find(a), j = dims.find(b);
      if (i != dims.end() && j != dims.end() && i->second != j->second)
        fail(Errc::LabelConflict, "equivalent labels of different dimension: " + a + ", " + b);
    }
  }
  s.ctx.labels.freeze();
  s.doc = std::move(doc);
  return s;
}

/// Validation that never throws: every diagnostic is collected into the
/// report, including schema-level and store-level failures.
inline ValidationReport validate_scenario(const ScenarioDoc& doc) {
  if (doc.kind == GeometryKind::Complex) {
    ValidationReport r = validate_strata(doc.fiber_dim, doc.strata, doc.contains);
    if (!r.ok()) return r;
  }
  try {
    materialize(doc);
  } catch (const Error& e) {
    ValidationReport r;
    r.diagnostics.push_back({e.code(), e.what()});
    return r;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Command {
  std::string raw;
  std::string verb;
  std::optional<int> grade;      // vol
  std::string rule = "stable";   // obstruct
  bool literal_point = false;    // obstruct
  std::string mod;               // reduce
  std::optional<int> restrict_m; // equivariant
  bool forget = false;           // equivariant
  bool check_commute = false;    // equivariant
  int budget = kDefaultMergeBudget;
};

inline Command parse_command(const std::string& raw) {
  Command c;
  c.raw = raw;
  std::istringstream in(raw);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  if (words.empty()) fail(Errc::SchemaViolation, "empty command");
  c.verb = words[0];
  auto need_value = [&](std::size_t i, const std::string& flag) -> std::string {
    if (i + 1 >= words.size()) fail(Errc::SchemaViolation, flag + " needs a value");
    return words[i + 1];
  };
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w == "--grade")
      c.grade = std::stoi(need_value(i++, w));
    else if (w == "--stable" || w == "--rational" || w == "--parity")
      c.rule = w.substr(2);
    else if (w == "--literal-point-target")
      c.literal_point = true;
    else if (w == "--mod")
      c.mod = need_value(i++, w);
    else if (w == "--restrict")
      c.restrict_m = std::stoi(need_value(i++, w));
    else if (w == "--forget")
      c.forget = true;
    else if (w == "--check-commute")
      c.check_commute = true;
    else if (w == "--budget")
      c.budget = std::stoi(need_value(i++, w));
    else
      fail(Errc::SchemaViolation, "unknown flag '" + w + "' in command '" + raw + "'");
  }
  return c;
}

/// Executes one command against a loaded scenario and returns the canonical
/// report object. The same path serves the CLI and the corpus diff.
inline Json run_command(LoadedScenario& s, const Command& cmd) {
  Json out{{"scenario", s.doc.name}, {"command", cmd.raw}};
  auto need_complex = [&]() -> StrataComplex& {
    if (!s.complex)
      fail(Errc::SchemaViolation, "command '" + cmd.verb + "' needs a strata geometry");
    return *s.complex;
  };

  if (cmd.verb == "validate") {
    out.update(report_json(validate_scenario(s.doc)));
  } else if (cmd.verb == "vol") {
    StrataComplex& x = need_complex();
    int e = cmd.grade.value_or(x.fiber_dim);
    out["grade"] = e;
    out["class"] = class_json(s.ctx.atoms, vol(s.ctx, x, e));
  } else if (cmd.verb == "vol-bir") {
    out["class"] = class_json(vol_bir(s.ctx, need_complex()));
  } else if (cmd.verb == "vol-sb") {
    out["class"] = class_json(vol_sb(s.ctx, need_complex()));
  } else if (cmd.verb == "obstruct") {
    StrataComplex& x = need_complex();
    Verdict v;
    if (cmd.rule == "stable")
      v = obstruct_stable(s.ctx, x, cmd.budget);
    else if (cmd.rule == "rational")
      v = obstruct_rational(s.ctx, x, cmd.budget, cmd.literal_point);
    else if (cmd.rule == "parity")
      v = parity_rule(s.ctx, x);
    else
      fail(Errc::SchemaViolation, "unknown obstruction rule " + cmd.rule);
    out.update(verdict_json(v));
    out["class"] =
        cmd.rule == "rational" ? class_json(vol_bir(s.ctx, x)) : class_json(vol_sb(s.ctx, x));
  } else if (cmd.verb == "reduce") {
    GradedClass base;
    if (s.complex)
      base = vol(s.ctx, *s.complex, s.complex->fiber_dim);
    else if (s.model)
      base = forget_action(vol_equivariant(s.ctx, *s.model, s.model->fiber_dim));
    else if (s.cone)
      base = p_class_from_cone(*s.cone, face_lattice(*s.cone).cone_dim - 1);
    ReduceMode mode;
    if (cmd.mod == "tau")
      mode = ReduceMode::ModTau;
    else if (cmd.mod == "tau-1")
      mode = ReduceMode::TauToOne;
    else if (cmd.mod == "tauL")
      mode = ReduceMode::ModTauLef;
    else
      fail(Errc::SchemaViolation, "reduce needs --mod tau|tau-1|tauL");
    out["mod"] = cmd.mod;
    out["class"] = class_json(s.ctx.atoms, reduce(base, mode));
  } else if (cmd.verb == "faces") {
    if (!s.cone) fail(Errc::SchemaViolation, "'faces' needs a cone geometry");
    out.update(faces_json(face_lattice(*s.cone)));
  } else if (cmd.verb == "equivariant") {
    if (!s.model) fail(Errc::SchemaViolation, "'equivariant' needs a model geometry");
    if (cmd.check_commute) {
      if (!s.base_complex)
        fail(Errc::SchemaViolation, "scenario has no base_change section");
      CommuteReport rep = check_commute(s.ctx, *s.model, *s.base_complex, s.doc.identify);
      out["check_commute"] = Json{{"ok", rep.ok}, {"mismatch", rep.mismatch}};
    } else {
      EquivClass v = vol_equivariant(s.ctx, *s.model, s.model->fiber_dim);
      if (cmd.restrict_m) {
        out["restrict"] = *cmd.restrict_m;
        v = restrict_action(v, *cmd.restrict_m);
      }
      if (cmd.forget) {
        out["forget"] = true;
        out["class"] = class_json(s.ctx.atoms, forget_action(v));
      } else {
        out["class"] = class_json(s.ctx.atoms, v);
      }
    }
  } else {
    fail(Errc::SchemaViolation, "unknown command '" + cmd.verb + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bundled corpus
// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::string file;     // stem under <data>/corpus/
  std::string rule;     // obstruction rule the scenario exercises
  std::string verdict;  // expected outcome of that rule
  std::string note;
};

/// The bundled degenerations and their expected verdicts. Everything is
/// obstructed except the smooth specialization model.
inline std::vector<CorpusEntry> corpus_manifest() {
  return {
      {"ex-4.1-specialization", "stable", "NOT_OBSTRUCTED",
       "smooth proper model with a rational special fiber"},
      {"ex-4.2-double-solid", "stable", "OBSTRUCTED",
       "quartic double solid degenerating to the Artin-Mumford solid plus exceptional quadrics"},
      {"ex-4.3-quartic", "stable", "OBSTRUCTED",
       "quartic hypersurface with two symmetric components meeting in a double solid"},
      {"ex-4.4-sextic", "parity", "OBSTRUCTED",
       "sextic degenerating to three quadrics; the triple intersection obstructs"},
      {"ex-4.5-bidegree", "stable", "OBSTRUCTED",
       "bidegree (2,d) hypersurface degenerating to a linear space plus a (2,d-1) hypersurface"},
      {"ex-4.6-delpezzo", "stable", "OBSTRUCTED",
       "del Pezzo fibration: two rational components over an irrational intersection"},
      {"ex-4.7-conic-bundle", "rational", "OBSTRUCTED",
       "conic bundle fourfold with two irrational components"},
  };
}

inline std::string data_dir() {
  if (const char* env = std::getenv("MVK_CORPUS_DIR")) return env;
#ifdef MVK_DATA_DIR
  return MVK_DATA_DIR;
#else
  return "data";
#endif
}

/// Canonical report for one scenario file: every command it requests, in
/// order. Serialized with two-space indentation as the golden format.
inline Json scenario_report(const std::string& path) {
  ScenarioDoc doc = load_scenario_file(path);
  Json reports = Json::array();
  LoadedScenario loaded = materialize(doc);
  for (const auto& raw : loaded.doc.commands)
    reports.push_back(run_command(loaded, parse_command(raw)));
  return Json{{"schema", kSchemaVersion},
              {"name", loaded.doc.name},
              {"source", loaded.doc.source},
              {"reports", reports}};
}

struct CorpusOutcome {
  std::string name;
  bool match = false;
};

inline std::vector<CorpusOutcome> run_corpus(const std::string& dir, std::string* rendered) {
  std::vector<CorpusOutcome> out;
  std::string all;
  for (const auto& entry : corpus_manifest()) {
    std::string path = dir + "/corpus/" + entry.file + ".json";
    std::string golden_path = dir + "/golden/" + entry.file + ".golden.json";
    Json report = scenario_report(path);
    std::string text = report.dump(2) + "\n";
    std::ifstream golden(golden_path);
    std::ostringstream want;
    want << golden.rdbuf();
    out.push_back({entry.file, golden.good() && want.str() == text});
    all += text;
  }
  if (rendered) *rendered = all;
  return out;
}

}  // namespace mvk
