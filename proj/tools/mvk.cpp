// mvk: motivic volumes of strictly toroidal degenerations and the resulting
// (stable) rationality obstructions, over scenario files.

#include <CLI11.hpp>
#include <iostream>

#include "mvk/scenario.hpp"

namespace {

using namespace mvk;

int exit_code(const Error& e) { return is_budget_error(e.code()) ? 3 : 2; }

void print_witness(const Json& report) {
  if (report.contains("witness")) {
    std::cout << "witness merge:";
    for (const auto& blk : report["witness"]) {
      std::cout << " [";
      for (std::size_t i = 0; i < blk.size(); ++i)
        std::cout << (i ? ", " : "") << blk[i].get<std::string>();
      std::cout << "]";
    }
    std::cout << "\n";
  }
  if (report.contains("reason"))
    std::cout << "reason: " << report["reason"].get<std::string>() << "\n";
}

int emit(const Json& report, bool json) {
  if (json) {
    std::cout << report.dump(2) << "\n";
    return 0;
  }
  const std::string cmd = report["command"].get<std::string>();
  if (cmd.rfind("validate", 0) == 0) {
    if (report["ok"].get<bool>()) {
      std::cout << "ok\n";
    } else {
      for (const auto& d : report["diagnostics"])
        std::cout << d["code"].get<std::string>() << ": " << d["message"].get<std::string>()
                  << "\n";
      return 2;
    }
  } else if (report.contains("status")) {
    std::cout << report["status"].get<std::string>() << " (rule=" << report["rule"].get<std::string>()
              << ")\n"
              << "class: " << report["class"]["text"].get<std::string>() << "\n";
    print_witness(report);
  } else if (report.contains("check_commute")) {
    const Json& c = report["check_commute"];
    std::cout << (c["ok"].get<bool>() ? "commutes" : "mismatch: " + c["mismatch"].get<std::string>())
              << "\n";
    return c["ok"].get<bool>() ? 0 : 2;
  } else if (report.contains("counts")) {
    std::cout << "cone dim " << report["cone_dim"] << ", faces by dim " << report["counts"].dump()
              << ", euler " << report["euler"] << "\n";
  } else if (report.contains("class")) {
    std::cout << report["class"]["text"].get<std::string>() << "\n";
  }
  return 0;
}

int run_one(const std::string& file, Command cmd, bool json) {
  if (cmd.verb == "validate") {
    ScenarioDoc doc = load_scenario_file(file);
    ValidationReport r = validate_scenario(doc);
    Json report{{"scenario", doc.name}, {"command", cmd.raw}};
    report.update(report_json(r));
    int rc = emit(report, json);
    if (!r.ok()) return 2;
    return rc;
  }
  LoadedScenario s = materialize(load_scenario_file(file));
  return emit(run_command(s, cmd), json);
}

int run_corpus_cmd(bool json) {
  std::string dir = data_dir();
  auto outcomes = run_corpus(dir, nullptr);
  int matched = 0;
  for (const auto& o : outcomes) matched += o.match;
  if (json) {
    Json results = Json::array();
    for (const auto& o : outcomes) results.push_back({{"name", o.name}, {"match", o.match}});
    Json report{{"command", "corpus"},
                {"total", outcomes.size()},
                {"matched", matched},
                {"results", results}};
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& o : outcomes) std::cout << o.name << ": " << (o.match ? "OK" : "DIFF") << "\n";
    std::cout << matched << "/" << outcomes.size() << " scenarios match golden outputs\n";
  }
  return matched == static_cast<int>(outcomes.size()) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motivic volume and rationality obstruction engine"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::string file;
  Command cmd;
  bool literal = false, forget = false, commute = false;
  int grade = -1, restrict_m = 0, budget = kDefaultMergeBudget;
  std::string mod;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "scenario file")->required();
  };

  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario against the schema and the poset axioms");
  add_file(validate);

  CLI::App* vol = app.add_subcommand("vol", "motivic volume of the degeneration");
  add_file(vol);
  vol->add_option("--grade", grade, "degree (default: fiber dimension)");

  CLI::App* volbir = app.add_subcommand("vol-bir", "volume in the graded group of birational types");
  add_file(volbir);

  CLI::App* volsb = app.add_subcommand("vol-sb", "volume in the group of stable birational types");
  add_file(volsb);

  CLI::App* obstruct = app.add_subcommand("obstruct", "rationality obstruction verdicts");
  add_file(obstruct);
  bool o_stable = false, o_rational = false, o_parity = false;
  obstruct->add_flag("--stable", o_stable, "stable rationality (default)");
  obstruct->add_flag("--rational", o_rational, "rationality");
  obstruct->add_flag("--parity", o_parity, "codimension-parity shortcut");
  obstruct->add_flag("--literal-point-target", literal,
                     "compare the birational volume against the degree-0 point class");
  obstruct->add_option("--budget", budget, "label cap for the merge search");

  CLI::App* reduce = app.add_subcommand("reduce", "reduce the scenario's volume");
  add_file(reduce);
  reduce->add_option("--mod", mod, "tau | tau-1 | tauL")->required();

  CLI::App* faces = app.add_subcommand("faces", "face lattice of a cone scenario");
  add_file(faces);

  CLI::App* equivariant =
      app.add_subcommand("equivariant", "equivariant volume of a multiplicity model");
  add_file(equivariant);
  equivariant->add_option("--restrict", restrict_m, "restrict the action index");
  equivariant->add_flag("--forget", forget, "forget the action");
  equivariant->add_flag("--check-commute", commute, "compare against the base-changed complex");

  app.add_subcommand("corpus", "run the bundled scenarios against golden outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string verb = sub->get_name();
    if (verb == "corpus") return run_corpus_cmd(json);

    cmd.verb = verb;
    cmd.raw = verb;
    cmd.budget = budget;
    if (verb == "vol" && grade >= 0) {
      cmd.grade = grade;
      cmd.raw += " --grade " + std::to_string(grade);
    }
    if (verb == "obstruct") {
      if (o_stable + o_rational + o_parity > 1)
        fail(Errc::SchemaViolation, "choose one of --stable, --rational, --parity");
      cmd.rule = o_rational ? "rational" : o_parity ? "parity" : "stable";
      cmd.raw += " --" + cmd.rule;
      cmd.literal_point = literal;
      if (literal) cmd.raw += " --literal-point-target";
    }
    if (verb == "reduce") {
      cmd.mod = mod;
      cmd.raw += " --mod " + mod;
    }
    if (verb == "equivariant") {
      if (restrict_m > 0) {
        cmd.restrict_m = restrict_m;
        cmd.raw += " --restrict " + std::to_string(restrict_m);
      }
      cmd.forget = forget;
      if (forget) cmd.raw += " --forget";
      cmd.check_commute = commute;
      if (commute) cmd.raw += " --check-commute";
    }
    return run_one(file, cmd, json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
