// homdiv: run divisibility task files, or a single task given on the command line.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homdiv/taskfile.hpp"

namespace {

using homdiv::json;

struct Common {
  std::string format = "text";
  bool strict = false;
  bool harness = false;
  bool timings = false;
  unsigned workers = 0;
  std::size_t subgroup_bound = 0;
};

struct Shorthand {
  std::string group;
  std::string ring;
  std::int64_t n = 0;
  std::size_t rank = 0;
  std::size_t unknowns = 0;
  std::vector<std::string> relators;
  std::vector<std::string> subgroup;
  std::vector<std::string> words;
  std::vector<std::string> constants;
  std::vector<std::string> equations;
  std::vector<std::string> unit_generators;
};

// "name=value"; value parsed as JSON when possible, else kept as a label string.
std::pair<std::string, json> split_binding(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw homdiv::ParseError("expected name=value, got '" + text + "'");
  const std::string value = text.substr(eq + 1);
  json v = json::parse(value, nullptr, false);
  if (v.is_discarded() || v.is_string()) v = value;
  return {text.substr(0, eq), v};
}

json element_list(const std::vector<std::string>& items) {
  json out = json::array();
  for (const auto& s : items) {
    json v = json::parse(s, nullptr, false);
    out.push_back(v.is_discarded() || !(v.is_array()) ? json(s) : v);
  }
  return out;
}

// Expands a subcommand into a one-task file.
json shorthand_file(const std::string& kind, const Shorthand& s) {
  json doc{{"version", homdiv::kTaskFileVersion}};
  json task{{"name", kind}, {"kind", kind}};
  auto with_group = [&] {
    if (s.group.empty()) throw homdiv::ParseError(kind + " needs --group");
    doc["groups"]["G"] = s.group;
    task["group"] = "G";
  };
  auto with_presentation = [&] {
    json p{{"generators", homdiv::Presentation::default_names(s.rank ? s.rank : 1)}, {"relators", s.relators}};
    doc["presentations"]["F"] = p;
    task["presentation"] = "F";
  };
  auto with_subgroup = [&] {
    doc["subgroups"]["H"] = {{"group", "G"}, {"generators", element_list(s.subgroup)}};
    task["subgroup"] = "H";
  };
  auto with_constants = [&](const char* owner_key, const char* owner) {
    for (const auto& c : s.constants) {
      auto [name, value] = split_binding(c);
      doc["constants"][name] = {{owner_key, owner}, {"value", value}};
    }
  };
  if (kind == "generating-tuples" || kind == "hall-oracle") {
    with_group();
    task["n"] = s.n;
  } else if (kind == "epimorphisms") {
    with_group();
    with_presentation();
  } else if (kind == "nth-roots") {
    with_group();
    with_subgroup();
    task["n"] = s.n;
  } else if (kind == "group-equations") {
    with_group();
    with_constants("group", "G");
    task["unknowns"] = s.unknowns;
    task["equations"] = s.equations;
  } else if (kind == "ring-equations" || kind == "check-homogeneity") {
    if (s.ring.empty()) throw homdiv::ParseError(kind + " needs --ring");
    doc["rings"]["R"] = s.ring;
    task["ring"] = "R";
    with_constants("ring", "R");
    task["unknowns"] = s.unknowns;
    task["equations"] = s.equations;
    if (!s.unit_generators.empty()) task["unit_generators"] = element_list(s.unit_generators);
  } else if (kind == "verify-main-theorem") {
    with_group();
    with_presentation();
    json inner{{"name", "inner"}, {"kind", "all-homs"}, {"group", "G"}, {"presentation", "F"}};
    if (!s.subgroup.empty()) {
      with_subgroup();
      inner["kind"] = "subset-in-subgroup";
      inner["subgroup"] = "H";
      inner["words"] = s.words.empty() ? json(homdiv::Presentation::default_names(s.rank ? s.rank : 1)) : json(s.words);
    }
    task = {{"name", kind}, {"kind", kind}, {"task", inner}};
  }
  doc["tasks"] = json::array({task});
  return doc;
}

int finish(const homdiv::Report& report, const Common& c) {
  std::cout << homdiv::emit_report(report, c.format == "json" ? homdiv::ReportFormat::Json : homdiv::ReportFormat::Text);
  return report.exit_code;
}

homdiv::OptionOverrides overrides(const Common& c) {
  homdiv::OptionOverrides o;
  if (c.workers) o.workers = c.workers;
  if (c.subgroup_bound) o.subgroup_bound = c.subgroup_bound;
  if (c.harness) o.harness = true;
  if (c.strict) o.strict = true;
  if (c.timings) o.timings = true;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact divisibility checks for counts of homomorphisms and equation solutions"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--strict", common.strict, "Exit 3 when a theorem hypothesis does not hold");
  app.add_option("--workers", common.workers, "Worker threads per task")->check(CLI::PositiveNumber);
  app.add_option("--subgroup-bound", common.subgroup_bound, "Largest group order for subgroup lattices")
      ->check(CLI::PositiveNumber);
  app.add_flag("--harness", common.harness, "Attach similarity-class evidence to counting tasks");
  app.add_flag("--timings", common.timings, "Record per-task wall-clock time in the report");

  std::string file;
  auto* run = app.add_subcommand("run", "Run a JSON task file");
  run->add_option("file", file, "Task file")->required();

  Shorthand s;
  std::vector<CLI::App*> shorthands;
  auto sub = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    shorthands.push_back(c);
    return c;
  };
  auto group_opt = [&](CLI::App* c) { c->add_option("--group", s.group, "Group spec, e.g. sym:3")->required(); };
  auto pres_opts = [&](CLI::App* c) {
    c->add_option("--rank", s.rank, "Generators x0..x(rank-1)")->required()->check(CLI::PositiveNumber);
    c->add_option("--relator", s.relators, "Relator word over x0, x1, ...");
  };
  auto eq_opts = [&](CLI::App* c) {
    c->add_option("--unknowns", s.unknowns, "Number of unknowns x0..")->required()->check(CLI::PositiveNumber);
    c->add_option("--equation", s.equations, "Equation text")->required();
    c->add_option("--const", s.constants, "Constant binding name=value");
  };

  auto* gt = sub("generating-tuples", "Count generating n-tuples");
  group_opt(gt);
  gt->add_option("--n", s.n, "Tuple length")->required();
  auto* hall = sub("hall-oracle", "Compare the Hall formula with enumerated generating tuples");
  group_opt(hall);
  hall->add_option("--n", s.n, "Tuple length")->required();
  auto* epi = sub("epimorphisms", "Count surjective homomorphisms from a presentation");
  group_opt(epi);
  pres_opts(epi);
  auto* roots = sub("nth-roots", "Count g with g^n in H");
  group_opt(roots);
  roots->add_option("--n", s.n, "Exponent")->required();
  roots->add_option("--subgroup-gen", s.subgroup, "Generator of H (index or label)");
  auto* geq = sub("group-equations", "Count solutions of equations over a group");
  group_opt(geq);
  eq_opts(geq);
  auto* req = sub("ring-equations", "Count unit solutions of ring equations");
  req->add_option("--ring", s.ring, "Ring spec, e.g. zmod:7")->required();
  eq_opts(req);
  req->add_option("--unit-gen", s.unit_generators, "Generator of the unit subgroup G (ring literal)");
  auto* hom = sub("check-homogeneity", "Test whether a ring system is generalized homogeneous");
  hom->add_option("--ring", s.ring, "Ring spec used to read constants")->required();
  eq_opts(hom);
  auto* vmt = sub("verify-main-theorem", "Run the similarity-class harness on a homomorphism set");
  group_opt(vmt);
  pres_opts(vmt);
  vmt->add_option("--subgroup-gen", s.subgroup, "Generator of H (index or label)");
  vmt->add_option("--word", s.words, "Word constrained into H (default: every generator)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : homdiv::kExitParse;
  }

  try {
    if (run->parsed()) return finish(homdiv::run_task_file(file, overrides(common)), common);
    for (auto* c : shorthands)
      if (c->parsed()) {
        const auto doc = shorthand_file(c->get_name(), s);
        return finish(homdiv::run_loaded(homdiv::load_task_file(doc, std::filesystem::current_path(), overrides(common))),
                      common);
      }
  } catch (const homdiv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return homdiv::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return homdiv::kExitRuntime;
  }
  return homdiv::kExitRuntime;
}
