#include <catch2/catch_amalgamated.hpp>

#include "mvk/scenario.hpp"

using namespace mvk;

namespace {

const std::string kData = [] {
  if (const char* env = std::getenv("MVK_CORPUS_DIR")) return std::string(env);
  return std::string(MVK_DATA_DIR);
}();

Json minimal_scenario() {
  return Json{{"schema", 1},
              {"name", "t"},
              {"complex", Json{{"fiber_dim", 2},
                               {"strata", Json::array({Json{{"id", "X"}, {"codim", 0}}})}}}};
}

}  // namespace

TEST_CASE("schema is strict") {
  SECTION("minimal scenario parses") {
    ScenarioDoc d = parse_scenario(minimal_scenario());
    CHECK(d.name == "t");
    CHECK(d.kind == GeometryKind::Complex);
  }
  SECTION("unknown top-level fields are rejected") {
    Json j = minimal_scenario();
    j["extra"] = 1;
    CHECK_THROWS_MATCHES(parse_scenario(j), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::SchemaViolation;
                         }));
  }
  SECTION("unknown nested fields are rejected") {
    Json j = minimal_scenario();
    j["complex"]["strata"][0]["color"] = "blue";
    CHECK_THROWS_AS(parse_scenario(j), Error);
  }
  SECTION("wrong schema version") {
    Json j = minimal_scenario();
    j["schema"] = 2;
    CHECK_THROWS_AS(parse_scenario(j), Error);
  }
  SECTION("exactly one geometry payload") {
    Json j = minimal_scenario();
    j["cone"] = Json{{"rank", 2}, {"rays", Json::array()}};
    CHECK_THROWS_AS(parse_scenario(j), Error);
    Json k{{"schema", 1}, {"name", "none"}};
    CHECK_THROWS_AS(parse_scenario(k), Error);
  }
  SECTION("bad tag") {
    Json j = minimal_scenario();
    j["complex"]["strata"][0]["tag"] = "mysterious";
    CHECK_THROWS_AS(parse_scenario(j), Error);
  }
  SECTION("invalid JSON text") {
    CHECK_THROWS_AS(parse_scenario_text("{ not json"), Error);
  }
}

TEST_CASE("materialization wires tags into the label store") {
  Json j{{"schema", 1},
         {"name", "wiring"},
         {"labels", Json{{"equivalences", Json::array({Json::array({"E1", "E2"})})}}},
         {"complex",
          Json{{"fiber_dim", 3},
               {"strata", Json::array({Json{{"id", "E1"}, {"codim", 0}},
                                       Json{{"id", "E2"}, {"codim", 0}},
                                       Json{{"id", "D"}, {"codim", 1}, {"tag", "irrational"}}})},
               {"contains", Json::array({Json::array({"D", "E1"}), Json::array({"D", "E2"})})}}}};
  LoadedScenario s = materialize(parse_scenario(j));
  CHECK(s.ctx.labels.is_nsr("D"));
  CHECK(s.ctx.labels.rep("E2") == "E1");
  SBClass v = vol_sb(s.ctx, *s.complex);
  CHECK(render_text(v) == "2{E1} - {D}");
}

TEST_CASE("equivalent labels must have equal dimension") {
  Json j{{"schema", 1},
         {"name", "baddim"},
         {"labels", Json{{"equivalences", Json::array({Json::array({"E1", "D"})})}}},
         {"complex",
          Json{{"fiber_dim", 3},
               {"strata", Json::array({Json{{"id", "E1"}, {"codim", 0}},
                                       Json{{"id", "E2"}, {"codim", 0}},
                                       Json{{"id", "D"}, {"codim", 1}}})},
               {"contains", Json::array({Json::array({"D", "E1"}), Json::array({"D", "E2"})})}}}};
  CHECK_THROWS_MATCHES(materialize(parse_scenario(j)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::LabelConflict;
                       }));
}

TEST_CASE("validate_scenario collects diagnostics instead of throwing") {
  Json j{{"schema", 1},
         {"name", "broken"},
         {"complex", Json{{"fiber_dim", 3},
                          {"strata", Json::array({Json{{"id", "E0"}, {"codim", 0}},
                                                  Json{{"id", "E1"}, {"codim", 1}},
                                                  Json{{"id", "E2"}, {"codim", 2}}})},
                          {"contains", Json::array({Json::array({"E2", "E1"}),
                                                    Json::array({"E1", "E0"})})}}}};
  ValidationReport r = validate_scenario(parse_scenario(j));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.front().code == Errc::IntervalConditionFailed);
}

TEST_CASE("corpus manifest") {
  auto manifest = corpus_manifest();
  CHECK(manifest.size() == 7);
  int obstructed = 0;
  for (const auto& e : manifest) obstructed += e.verdict == "OBSTRUCTED" ? 1 : 0;
  CHECK(obstructed == 6);
  CHECK(manifest[0].verdict == "NOT_OBSTRUCTED");
  for (const auto& e : manifest) {
    ScenarioDoc doc = load_scenario_file(kData + "/corpus/" + e.file + ".json");
    CHECK(validate_scenario(doc).ok());
    LoadedScenario s = materialize(std::move(doc));
    REQUIRE(s.complex);
    Command cmd = parse_command("obstruct --" + e.rule);
    Json report = run_command(s, cmd);
    INFO(e.file);
    CHECK(report["status"].get<std::string>() == e.verdict);

    // setting t := 1 in the volume recovers the ungraded strata expression
    int n = s.complex->fiber_dim;
    GradedClass classical;
    GradedClass lm1 = GradedClass::lef_power(1) - GradedClass::unit();
    for (const auto& st : s.complex->strata) {
      GradedMonomial m{0, 0, st.open_atoms};
      GradedClass term = GradedClass::of_monomial(m) * lm1.pow(st.codim);
      classical += st.codim % 2 == 0 ? term : -term;
    }
    CHECK(reduce(vol(s.ctx, *s.complex, n), ReduceMode::TauToOne) == classical);
  }
}

TEST_CASE("corpus scenarios match the golden outputs") {
  auto outcomes = run_corpus(kData, nullptr);
  REQUIRE(outcomes.size() == 7);
  for (const auto& o : outcomes) {
    INFO(o.name);
    CHECK(o.match);
  }
}

TEST_CASE("reports are deterministic") {
  std::string path = kData + "/corpus/ex-4.4-sextic.json";
  std::string a = scenario_report(path).dump(2);
  std::string b = scenario_report(path).dump(2);
  CHECK(a == b);
}

TEST_CASE("cone and model scenario commands") {
  SECTION("faces of the sample cone") {
    LoadedScenario s = materialize(load_scenario_file(kData + "/samples/sample-cone.json"));
    Json r = run_command(s, parse_command("faces"));
    CHECK(r["cone_dim"] == 3);
    CHECK(r["euler"] == 0);
    CHECK(r["counts"] == Json::array({1, 4, 4, 1}));
    Json red = run_command(s, parse_command("reduce --mod tau-1"));
    CHECK(red["class"]["text"] == "L^2 + 2*L + 1");
  }
  SECTION("equivariant sample model") {
    LoadedScenario s = materialize(load_scenario_file(kData + "/samples/sample-model.json"));
    Json r = run_command(s, parse_command("equivariant"));
    CHECK(r["class"]["text"].get<std::string>().find("At°[2]") != std::string::npos);
    Json f = run_command(s, parse_command("equivariant --forget"));
    CHECK(f["class"]["text"].get<std::string>().find("[2]") == std::string::npos);
    Json rr = run_command(s, parse_command("equivariant --restrict 2"));
    CHECK(rr["class"]["text"].get<std::string>().find("[2]") == std::string::npos);
  }
  SECTION("strata commands refuse a cone geometry") {
    LoadedScenario s = materialize(load_scenario_file(kData + "/samples/sample-cone.json"));
    CHECK_THROWS_AS(run_command(s, parse_command("vol-sb")), Error);
  }
}

TEST_CASE("command parsing") {
  Command c = parse_command("obstruct --rational --literal-point-target --budget 9");
  CHECK(c.verb == "obstruct");
  CHECK(c.rule == "rational");
  CHECK(c.literal_point);
  CHECK(c.budget == 9);
  CHECK_THROWS_AS(parse_command("obstruct --frobnicate"), Error);
  CHECK_THROWS_AS(parse_command(""), Error);
  Command v = parse_command("vol --grade 6");
  CHECK(v.grade == 6);
}
