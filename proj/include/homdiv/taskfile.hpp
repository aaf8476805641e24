#pragma once

/**
 * @file taskfile.hpp
 * @brief JSON task files: definitions, task dispatch, reports and exit codes.
 *
 * Loading resolves every reference and parses every word and equation before
 * any task runs. Tasks then execute in declared order; an exception inside a
 * task is recorded on that task only. Reports are nlohmann::json objects, so
 * keys serialize in sorted order and identical inputs give identical bytes.
 * See docs/schema.md for the document layout.
 */

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/harness.hpp"
#include "homdiv/homomorphisms.hpp"
#include "homdiv/presentation.hpp"
#include "homdiv/ring.hpp"
#include "homdiv/ring_equations.hpp"
#include "homdiv/specs.hpp"
#include "homdiv/subgroups.hpp"
#include "homdiv/theorems.hpp"

namespace homdiv {

using json = nlohmann::json;

inline constexpr int kTaskFileVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitParse = 2, kExitNotApplicable = 3, kExitViolation = 4 };

struct RunOptions {
  unsigned workers = 1;
  std::size_t subgroup_bound = kDefaultOrderBound;
  std::uint64_t cardinality_bound = kDefaultCardinalityBound;
  bool harness = false;
  std::size_t harness_cap = 500;
  bool strict = false;
  bool timings = false;
};

/// Command-line values that take precedence over the file's options block.
struct OptionOverrides {
  std::optional<unsigned> workers;
  std::optional<std::size_t> subgroup_bound;
  std::optional<bool> harness;
  std::optional<bool> strict;
  std::optional<bool> timings;
};

enum class TaskStatus { Ok, NotApplicable, Error, Violation };

inline const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Ok: return "ok";
    case TaskStatus::NotApplicable: return "not-applicable";
    case TaskStatus::Error: return "error";
    case TaskStatus::Violation: return "violation";
  }
  return "?";
}

struct TaskOutcome {
  TaskStatus status = TaskStatus::Ok;
  json result;
};

struct PreparedTask {
  std::string name;
  std::string kind;
  json inputs;
  std::function<TaskOutcome()> run;
};

struct LoadedTaskFile {
  RunOptions options;
  /// Canonical echo of every definition; itself a valid definitions block.
  json definitions;
  std::vector<PreparedTask> tasks;
};

// ---------------------------------------------------------------------------
// JSON helpers

namespace detail {

inline void expect_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing '" + key + "'");
  return *it;
}

inline std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + " must be a string");
  return v.get<std::string>();
}

inline std::int64_t get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + " must be an integer");
  return v.get<std::int64_t>();
}

inline std::uint64_t get_positive(const json& v, const std::string& where) {
  const auto x = get_int(v, where);
  if (x < 1) throw ParseError(where + " must be positive");
  return std::uint64_t(x);
}

inline bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ParseError(where + " must be true or false");
  return v.get<bool>();
}

inline std::vector<std::string> get_strings(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(get_string(e, where));
  return out;
}

}  // namespace detail

/// Integer: element index. String: element label. Anything else: its compact
/// JSON text used as a label (ring literals in unit groups).
inline Element resolve_element(const FiniteGroup& g, const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || std::uint64_t(i) >= g.order())
      throw ParseError(where + ": element index " + std::to_string(i) + " out of range");
    return Element(i);
  }
  const std::string label = v.is_string() ? v.get<std::string>() : v.dump();
  auto e = g.find_label(label);
  if (!e) throw ParseError(where + ": no element labelled '" + label + "'");
  return *e;
}

/// Integer for Z/n, k x k nested arrays for matrices, one entry per
/// component for products.
inline RingElement parse_ring_literal(const FiniteRing& r, const json& v, const std::string& where) {
  const auto reduce = [&](const json& x) { return detail::mod(detail::get_int(x, where), r.modulus()); };
  switch (r.kind()) {
    case FiniteRing::Kind::Modular:
      return {reduce(v)};
    case FiniteRing::Kind::Matrix: {
      const std::size_t k = r.dimension();
      if (!v.is_array() || v.size() != k) throw ParseError(where + ": expected a " + std::to_string(k) + "x" + std::to_string(k) + " matrix");
      RingElement out;
      for (const auto& row : v) {
        if (!row.is_array() || row.size() != k) throw ParseError(where + ": matrix rows must have " + std::to_string(k) + " entries");
        for (const auto& x : row) out.push_back(reduce(x));
      }
      return out;
    }
    case FiniteRing::Kind::Product: {
      const auto& parts = r.components();
      if (!v.is_array() || v.size() != parts.size())
        throw ParseError(where + ": expected " + std::to_string(parts.size()) + " product components");
      RingElement out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto c = parse_ring_literal(parts[i], v[i], where);
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    }
  }
  throw ParseError(where + ": bad ring literal");
}

inline json ring_literal_json(const FiniteRing& r, const RingElement& x) { return json::parse(r.format(x)); }

// ---------------------------------------------------------------------------
// Report pieces

inline json to_json(const HarnessReport& h) {
  json classes = json::array();
  for (const auto& c : h.classes)
    classes.push_back({{"members", c.members},
                       {"tail_classes", c.tail_classes},
                       {"fiber_sizes", c.fiber_sizes},
                       {"core_order", c.core_order},
                       {"core_index", c.core_index}});
  std::vector<std::size_t> sizes;
  for (const auto& c : h.classes) sizes.push_back(c.members);
  return {{"hom_count", h.hom_count},
          {"subgroup_order", h.subgroup_order},
          {"class_sizes", sizes},
          {"classes", classes},
          {"conditions_I_holds", h.conditions_I_holds},
          {"conditions_II_holds", h.conditions_II_holds},
          {"all_classes_size_H", h.all_classes_size_H},
          {"class_structure_holds", h.class_structure_holds}};
}

inline bool harness_clean(const HarnessReport& h) {
  return h.conditions_I_holds && h.conditions_II_holds && h.all_classes_size_H && h.class_structure_holds;
}

inline json to_json(const DivisibilityReport& r) {
  json out{{"count", r.count},
           {"divisor", r.divisor},
           {"divisor_desc", r.divisor_desc},
           {"divisible", r.divisible},
           {"quotient", r.quotient ? json(*r.quotient) : json(nullptr)},
           {"theorem_applicable", r.theorem_applicable}};
  if (!r.supplementary.empty()) {
    json sup = json::array();
    for (const auto& s : r.supplementary)
      sup.push_back({{"description", s.description}, {"divisor", s.divisor}, {"divisible", s.divisible}});
    out["supplementary"] = sup;
  }
  if (r.harness) out["harness"] = to_json(*r.harness);
  if (!r.harness_note.empty()) out["harness_note"] = r.harness_note;
  return out;
}

/// Violation when an applicable theorem's divisibility or the harness
/// conditions fail; not-applicable when the hypothesis does not hold.
inline TaskStatus classify(const DivisibilityReport& r) {
  if (r.theorem_applicable) {
    bool bad = !r.divisible;
    for (const auto& s : r.supplementary) bad = bad || !s.divisible;
    if (r.harness && !harness_clean(*r.harness)) bad = true;
    return bad ? TaskStatus::Violation : TaskStatus::Ok;
  }
  return TaskStatus::NotApplicable;
}

inline json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.rows) rows.push_back(r);
  return rows;
}

inline json to_json(const HomogeneityResult& h, const RingSystem& s) {
  json per = json::array(), diff = json::array();
  for (const auto& m : h.matrices.per_equation) per.push_back(to_json(m));
  for (const auto& m : h.matrices.differences) diff.push_back(to_json(m));
  json out{{"unknowns", s.unknowns},
           {"exponent_matrices", per},
           {"difference_matrices", diff},
           {"stacked", to_json(h.matrices.stacked)},
           {"rank", h.rank},
           {"homogeneous", h.assignment.has_value()},
           {"proposition_bound_holds", proposition_bound_holds(s)}};
  if (h.assignment) {
    out["degrees"] = h.assignment->degrees;
    out["equation_degrees"] = h.assignment->equation_degrees;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

namespace detail {

struct GroupDef {
  std::string spec;
  FiniteGroup group;
};

struct RingDef {
  std::string spec;
  FiniteRing ring;
};

struct SubgroupDef {
  std::string group;
  Subgroup subgroup;
  json generators;
};

struct ConstantDef {
  std::string owner;
  bool is_ring = false;
  Element element = 0;
  RingElement value;
};

struct PresentationDef {
  IndexedPresentation::Ptr indexed;
  std::optional<std::string> coefficient_group;
  json echo;
};

class Loader {
 public:
  Loader(const json& doc, std::filesystem::path base_dir, const OptionOverrides& overrides)
      : doc_(doc), base_dir_(std::move(base_dir)) {
    expect_keys(doc, {"version", "options", "groups", "rings", "subgroups", "constants", "presentations", "tasks"},
                "task file");
    if (auto it = doc.find("version"); it != doc.end() && get_int(*it, "version") != kTaskFileVersion)
      throw ParseError("unsupported task file version " + it->dump());
    read_options(overrides);
    read_groups();
    read_rings();
    read_subgroups();
    read_constants();
    read_presentations();
  }

  LoadedTaskFile finish() {
    LoadedTaskFile out;
    out.options = options_;
    out.definitions = definitions_;
    if (auto it = doc_.find("tasks"); it != doc_.end()) {
      if (!it->is_array()) throw ParseError("'tasks' must be an array");
      std::set<std::string> names;
      for (std::size_t i = 0; i < it->size(); ++i) {
        auto task = prepare((*it)[i], "task " + std::to_string(i), false);
        if (!names.insert(task.name).second) throw ParseError("duplicate task name '" + task.name + "'");
        out.tasks.push_back(std::move(task));
      }
    }
    return out;
  }

 private:
  const json& doc_;
  std::filesystem::path base_dir_;
  RunOptions options_;
  json definitions_ = json::object();
  std::map<std::string, GroupDef> groups_;
  std::map<std::string, RingDef> rings_;
  std::map<std::string, SubgroupDef> subgroups_;
  std::map<std::string, ConstantDef> constants_;
  std::map<std::string, PresentationDef> presentations_;

  const json& section(const char* key) const {
    static const json empty = json::object();
    auto it = doc_.find(key);
    if (it == doc_.end()) return empty;
    if (!it->is_object()) throw ParseError(std::string("'") + key + "' must be an object");
    return *it;
  }

  void read_options(const OptionOverrides& o) {
    const auto& opts = section("options");
    expect_keys(opts, {"workers", "subgroup_bound", "cardinality_bound", "harness", "harness_cap", "strict", "timings"},
                "options");
    if (opts.contains("workers")) options_.workers = unsigned(get_positive(opts["workers"], "options.workers"));
    if (opts.contains("subgroup_bound"))
      options_.subgroup_bound = get_positive(opts["subgroup_bound"], "options.subgroup_bound");
    if (opts.contains("cardinality_bound"))
      options_.cardinality_bound = get_positive(opts["cardinality_bound"], "options.cardinality_bound");
    if (opts.contains("harness")) options_.harness = get_bool(opts["harness"], "options.harness");
    if (opts.contains("harness_cap")) options_.harness_cap = get_positive(opts["harness_cap"], "options.harness_cap");
    if (opts.contains("strict")) options_.strict = get_bool(opts["strict"], "options.strict");
    if (opts.contains("timings")) options_.timings = get_bool(opts["timings"], "options.timings");
    if (o.workers) options_.workers = *o.workers;
    if (o.subgroup_bound) options_.subgroup_bound = *o.subgroup_bound;
    if (o.harness) options_.harness = *o.harness;
    if (o.strict) options_.strict = *o.strict;
    if (o.timings) options_.timings = *o.timings;
  }

  void read_groups() {
    definitions_["groups"] = json::object();
    for (const auto& [name, v] : section("groups").items()) {
      const auto spec = get_string(v, "groups." + name);
      groups_.emplace(name, GroupDef{spec, build_group(spec, base_dir_, options_.cardinality_bound)});
      definitions_["groups"][name] = spec;
    }
  }

  void read_rings() {
    definitions_["rings"] = json::object();
    for (const auto& [name, v] : section("rings").items()) {
      const auto spec = get_string(v, "rings." + name);
      auto ring = build_ring(spec, options_.cardinality_bound);
      definitions_["rings"][name] = ring.describe();
      rings_.emplace(name, RingDef{spec, std::move(ring)});
    }
  }

  const GroupDef& group(const json& v, const std::string& where) const {
    const auto name = get_string(v, where);
    auto it = groups_.find(name);
    if (it == groups_.end()) throw ParseError(where + ": undefined group '" + name + "'");
    return it->second;
  }

  const RingDef& ring(const json& v, const std::string& where) const {
    const auto name = get_string(v, where);
    auto it = rings_.find(name);
    if (it == rings_.end()) throw ParseError(where + ": undefined ring '" + name + "'");
    return it->second;
  }

  const SubgroupDef& subgroup(const json& v, const std::string& group_name, const std::string& where) const {
    const auto name = get_string(v, where);
    auto it = subgroups_.find(name);
    if (it == subgroups_.end()) throw ParseError(where + ": undefined subgroup '" + name + "'");
    if (it->second.group != group_name)
      throw ParseError(where + ": subgroup '" + name + "' lives in '" + it->second.group + "', not '" + group_name + "'");
    return it->second;
  }

  const PresentationDef& presentation(const json& v, const std::string& where) const {
    const auto name = get_string(v, where);
    auto it = presentations_.find(name);
    if (it == presentations_.end()) throw ParseError(where + ": undefined presentation '" + name + "'");
    return it->second;
  }

  void read_subgroups() {
    definitions_["subgroups"] = json::object();
    for (const auto& [name, v] : section("subgroups").items()) {
      const std::string where = "subgroups." + name;
      expect_keys(v, {"group", "generators"}, where);
      const auto group_name = get_string(require(v, "group", where), where + ".group");
      const auto& g = group(v["group"], where + ".group").group;
      std::vector<Element> gens;
      json echo = json::array();
      if (v.contains("generators")) {
        if (!v["generators"].is_array()) throw ParseError(where + ".generators must be an array");
        for (const auto& e : v["generators"]) {
          gens.push_back(resolve_element(g, e, where));
          echo.push_back(g.label(gens.back()));
        }
      }
      subgroups_.emplace(name, SubgroupDef{group_name, subgroup_closure(g, gens), echo});
      definitions_["subgroups"][name] = {{"group", group_name}, {"generators", echo}};
    }
  }

  void read_constants() {
    definitions_["constants"] = json::object();
    for (const auto& [name, v] : section("constants").items()) {
      const std::string where = "constants." + name;
      expect_keys(v, {"group", "ring", "value"}, where);
      if (name.empty() || (name[0] == 'x' && name.size() > 1 && std::isdigit(static_cast<unsigned char>(name[1]))) ||
          std::isdigit(static_cast<unsigned char>(name[0])))
        throw ParseError(where + ": constant names must not look like unknowns or integers");
      const auto& value = require(v, "value", where);
      ConstantDef c;
      if (v.contains("group") == v.contains("ring")) throw ParseError(where + ": give exactly one of 'group' or 'ring'");
      if (v.contains("group")) {
        c.owner = get_string(v["group"], where + ".group");
        const auto& g = group(v["group"], where + ".group").group;
        c.element = resolve_element(g, value, where);
        definitions_["constants"][name] = {{"group", c.owner}, {"value", g.label(c.element)}};
      } else {
        c.owner = get_string(v["ring"], where + ".ring");
        c.is_ring = true;
        const auto& r = ring(v["ring"], where + ".ring").ring;
        c.value = parse_ring_literal(r, value, where);
        definitions_["constants"][name] = {{"ring", c.owner}, {"value", ring_literal_json(r, c.value)}};
      }
      constants_.emplace(name, std::move(c));
    }
  }

  void read_presentations() {
    definitions_["presentations"] = json::object();
    for (const auto& [name, v] : section("presentations").items()) {
      const std::string where = "presentations." + name;
      PresentationDef def;
      if (v.contains("semidirect")) {
        expect_keys(v, {"semidirect"}, where);
        const auto& sd = v["semidirect"];
        expect_keys(sd, {"base", "automorphism"}, where + ".semidirect");
        const auto base_name = get_string(require(sd, "base", where), where + ".semidirect.base");
        const auto& base = group(sd["base"], where + ".semidirect.base").group;
        const auto& aut = require(sd, "automorphism", where + ".semidirect");
        if (!aut.is_array()) throw ParseError(where + ".semidirect.automorphism must be an array of indices");
        std::vector<Element> images;
        for (const auto& e : aut) images.push_back(resolve_element(base, e, where + ".semidirect.automorphism"));
        def.indexed = IndexedPresentation::semidirect(base, images);
        def.echo = {{"semidirect", {{"base", base_name}, {"automorphism", images}}}};
      } else if (v.contains("free")) {
        expect_keys(v, {"free", "degrees"}, where);
        const auto rank = get_positive(v["free"], where + ".free");
        IntVector d;
        if (v.contains("degrees")) d = v["degrees"].get<IntVector>();
        def.indexed = IndexedPresentation::free(rank, d);
        def.echo = {{"free", rank}, {"degrees", def.indexed->degrees()}};
      } else {
        expect_keys(v, {"generators", "relators", "fixed", "coefficient_group", "degrees"}, where);
        Presentation p;
        p.generators = get_strings(require(v, "generators", where), where + ".generators");
        if (p.generators.empty()) throw ParseError(where + ": needs at least one generator");
        std::set<std::string> unique(p.generators.begin(), p.generators.end());
        if (unique.size() != p.generators.size()) throw ParseError(where + ": duplicate generator names");
        if (v.contains("relators"))
          for (const auto& r : get_strings(v["relators"], where + ".relators")) p.relators.push_back(parse_word(r, p.generators));
        json fixed_echo = json::object();
        if (v.contains("fixed")) {
          const auto cg = get_string(require(v, "coefficient_group", where), where + ".coefficient_group");
          const auto& g = group(v["coefficient_group"], where + ".coefficient_group").group;
          p.coefficient_group = g;
          p.fixed_images.assign(p.generators.size(), std::nullopt);
          if (!v["fixed"].is_object()) throw ParseError(where + ".fixed must be an object");
          for (const auto& [gen, value] : v["fixed"].items()) {
            auto pos = std::find(p.generators.begin(), p.generators.end(), gen);
            if (pos == p.generators.end()) throw ParseError(where + ".fixed: unknown generator '" + gen + "'");
            const auto e = resolve_element(g, value, where + ".fixed." + gen);
            p.fixed_images[std::size_t(pos - p.generators.begin())] = e;
            fixed_echo[gen] = g.label(e);
          }
          def.coefficient_group = cg;
        } else if (v.contains("coefficient_group")) {
          throw ParseError(where + ": coefficient_group without fixed images");
        }
        json relators = json::array();
        for (const auto& r : p.relators) relators.push_back(format_word(r, p.generators));
        const auto gens = p.generators;
        if (v.contains("degrees")) def.indexed = IndexedPresentation::create(std::move(p), v["degrees"].get<IntVector>());
        else def.indexed = IndexedPresentation::derive(std::move(p));
        def.echo = {{"generators", gens}, {"relators", relators}, {"degrees", def.indexed->degrees()}};
        if (def.coefficient_group) {
          def.echo["fixed"] = fixed_echo;
          def.echo["coefficient_group"] = *def.coefficient_group;
        }
      }
      definitions_["presentations"][name] = def.echo;
      presentations_.emplace(name, std::move(def));
    }
  }

  HarnessOptions harness_for(const json& t, const std::string& where, bool force) const {
    HarnessOptions h;
    h.enabled = options_.harness;
    if (t.contains("harness")) h.enabled = get_bool(t["harness"], where + ".harness");
    if (force) h.enabled = true;
    h.max_homs = options_.harness_cap;
    return h;
  }

  std::vector<Word> words(const json& t, const char* key, const IndexedPresentation& p, const std::string& where) const {
    std::vector<Word> out;
    for (const auto& w : get_strings(require(t, key, where), where + "." + key)) out.push_back(parse_word(w, p.names()));
    return out;
  }

  PreparedTask prepare(const json& t, const std::string& where_in, bool force_harness) {
    if (!t.is_object()) throw ParseError(where_in + " must be an object");
    PreparedTask out;
    out.kind = get_string(require(t, "kind", where_in), where_in + ".kind");
    out.name = t.contains("name") ? get_string(t["name"], where_in + ".name") : where_in;
    out.inputs = t;
    const std::string where = "task '" + out.name + "'";
    const auto harness = harness_for(t, where, force_harness);
    const EnumerationOptions enumeration{EnumerationMode::Prune, options_.workers};

    auto theorem = [&](TheoremKind kind, std::initializer_list<const char*> keys) {
      std::vector<const char*> allowed{"name", "kind", "harness", "group"};
      allowed.insert(allowed.end(), keys.begin(), keys.end());
      for (const auto& [key, _] : t.items())
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
          throw ParseError(where + ": unknown key '" + key + "'");
      TheoremTask task;
      task.kind = kind;
      const auto group_name = get_string(require(t, "group", where), where + ".group");
      task.group = group(t["group"], where + ".group").group;
      task.harness = harness;
      task.enumeration = enumeration;
      task.order_bound = options_.subgroup_bound;
      if (t.contains("presentation")) {
        const auto& def = presentation(t["presentation"], where + ".presentation");
        if (def.coefficient_group && *def.coefficient_group != group_name)
          throw ParseError(where + ": presentation fixes images in '" + *def.coefficient_group + "', task group is '" +
                           group_name + "'");
        task.presentation = def.indexed;
      }
      if (t.contains("subgroup")) task.subgroup = subgroup(t["subgroup"], group_name, where + ".subgroup").subgroup;
      if (t.contains("n")) task.n = get_int(t["n"], where + ".n");
      return task;
    };
    auto theorem_runner = [](TheoremTask task) {
      return [task = std::move(task)] {
        const auto r = run_theorem_task(task);
        return TaskOutcome{classify(r), to_json(r)};
      };
    };

    if (out.kind == "all-homs" || out.kind == "epimorphisms") {
      auto task = theorem(out.kind == "all-homs" ? TheoremKind::AllHoms : TheoremKind::Epimorphisms, {"presentation"});
      require(t, "presentation", where);
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "generating-tuples") {
      auto task = theorem(TheoremKind::GeneratingTuples, {"n"});
      task.n = get_int(require(t, "n", where), where + ".n");
      if (task.n < 1) throw ParseError(where + ": n must be at least 1");
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "subset-in-subgroup" || out.kind == "image-equals") {
      const bool image = out.kind == "image-equals";
      auto task = theorem(image ? TheoremKind::ImageEquals : TheoremKind::SubsetInSubgroup, {"presentation", "subgroup", "words"});
      require(t, "presentation", where);
      require(t, "subgroup", where);
      task.words = words(t, "words", *task.presentation, where);
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "double-coset") {
      auto task = theorem(TheoremKind::DoubleCoset, {"presentation", "subgroup", "words", "representatives"});
      require(t, "presentation", where);
      require(t, "subgroup", where);
      task.words = words(t, "words", *task.presentation, where);
      const auto& reps = require(t, "representatives", where);
      if (!reps.is_array() || reps.size() != task.words.size())
        throw ParseError(where + ": 'representatives' needs one element per word");
      for (const auto& e : reps) task.coset_representatives.push_back(resolve_element(task.group, e, where + ".representatives"));
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "nth-roots") {
      auto task = theorem(TheoremKind::NthRoots, {"subgroup", "n"});
      require(t, "subgroup", where);
      require(t, "n", where);
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "injective-restriction") {
      auto task = theorem(TheoremKind::InjectiveRestriction, {"presentation", "subgroup", "elements", "words", "image_equal"});
      require(t, "presentation", where);
      require(t, "subgroup", where);
      const auto& sd = task.presentation->semidirect_data();
      if (!sd) throw ParseError(where + ": injective-restriction needs a semidirect presentation");
      if (t.contains("elements")) {
        if (!t["elements"].is_array()) throw ParseError(where + ".elements must be an array");
        for (const auto& e : t["elements"])
          task.words.push_back(task.presentation->base_element_word(resolve_element(sd->base, e, where + ".elements")));
      }
      if (t.contains("words")) {
        auto extra = words(t, "words", *task.presentation, where);
        task.words.insert(task.words.end(), extra.begin(), extra.end());
      }
      if (task.words.empty()) throw ParseError(where + ": give W through 'elements' or 'words'");
      if (t.contains("image_equal")) task.image_equal = get_bool(t["image_equal"], where + ".image_equal");
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "group-equations") {
      auto task = theorem(TheoremKind::EquationSystem, {"unknowns", "equations"});
      const auto group_name = get_string(t["group"], where + ".group");
      const auto unknowns = get_positive(require(t, "unknowns", where), where + ".unknowns");
      const auto eqs = get_strings(require(t, "equations", where), where + ".equations");
      std::vector<std::pair<std::string, Element>> all;
      for (const auto& [name, c] : constants_)
        if (!c.is_ring && c.owner == group_name) all.emplace_back(name, c.element);
      // Keep only the constants that occur, so the divisor is the centralizer
      // of the actual coefficients.
      const auto probe = GroupEquationSystem::parse(unknowns, all, eqs);
      std::vector<std::pair<std::string, Element>> used;
      for (std::size_t i = 0; i < all.size(); ++i) {
        const std::int64_t letter = std::int64_t(unknowns + i);
        bool occurs = false;
        for (const auto& w : probe.equations)
          for (const auto& l : w.letters) occurs = occurs || std::int64_t(l.generator) == letter;
        if (occurs) used.push_back(all[i]);
      }
      task.equations = GroupEquationSystem::parse(unknowns, used, eqs);
      out.run = theorem_runner(std::move(task));
    } else if (out.kind == "ring-equations" || out.kind == "check-homogeneity") {
      const bool count = out.kind == "ring-equations";
      if (count) expect_keys(t, {"name", "kind", "harness", "ring", "unknowns", "equations", "unit_generators"}, where);
      else expect_keys(t, {"name", "kind", "ring", "unknowns", "equations"}, where);
      const auto ring_name = get_string(require(t, "ring", where), where + ".ring");
      const FiniteRing r = ring(t["ring"], where + ".ring").ring;
      RingConstants consts;
      for (const auto& [name, c] : constants_)
        if (c.is_ring && c.owner == ring_name) consts.emplace(name, c.value);
      const auto unknowns = get_positive(require(t, "unknowns", where), where + ".unknowns");
      auto system = parse_ring_system(get_strings(require(t, "equations", where), where + ".equations"), unknowns, r, consts);
      if (!count) {
        out.run = [system] { return TaskOutcome{TaskStatus::Ok, to_json(analyze_homogeneity(system), system)}; };
      } else {
        std::vector<RingElement> gens;
        const bool whole = !t.contains("unit_generators");
        if (!whole) {
          if (!t["unit_generators"].is_array()) throw ParseError(where + ".unit_generators must be an array");
          for (const auto& e : t["unit_generators"]) gens.push_back(parse_ring_literal(r, e, where + ".unit_generators"));
        }
        const auto bound = options_.cardinality_bound;
        const auto workers = options_.workers;
        out.run = [r, system, gens, whole, harness, bound, workers] {
          const auto units = units_group(r, bound);
          std::vector<Element> idx;
          for (const auto& x : gens) {
            auto e = units.from_ring(x);
            if (!e) throw NonInvertibleBase("unit generator " + r.format(x) + " is not invertible");
            idx.push_back(*e);
          }
          const Subgroup g = whole ? Subgroup::whole(units.group) : subgroup_closure(units.group, idx);
          const auto rep = count_unit_solutions(units, g, system, harness, workers);
          auto result = to_json(rep);
          result["unit_group_order"] = units.group.order();
          result["subgroup_order"] = g.order();
          if (auto d = homogeneity_check(system)) result["degrees"] = d->degrees;
          return TaskOutcome{classify(rep), result};
        };
      }
    } else if (out.kind == "hall-oracle") {
      auto task = theorem(TheoremKind::GeneratingTuples, {"n"});
      task.n = get_int(require(t, "n", where), where + ".n");
      if (task.n < 1) throw ParseError(where + ": n must be at least 1");
      out.run = [task] {
        const auto hall = hall_count(task.group, task.n, task.order_bound);
        const auto r = run_theorem_task(task);
        auto result = to_json(r);
        result["hall_count"] = hall;
        result["agrees"] = hall == r.count;
        auto status = classify(r);
        if (hall != r.count) status = TaskStatus::Violation;
        return TaskOutcome{status, result};
      };
    } else if (out.kind == "verify-main-theorem") {
      expect_keys(t, {"name", "kind", "task"}, where);
      const auto& inner_json = require(t, "task", where);
      if (inner_json.is_object() && inner_json.contains("kind") && inner_json["kind"] == "verify-main-theorem")
        throw ParseError(where + ": verify-main-theorem cannot nest itself");
      auto inner = prepare(inner_json, where + ".task", true);
      if (inner.kind == "check-homogeneity") throw ParseError(where + ": check-homogeneity has no homomorphism set to verify");
      out.run = [run = inner.run] {
        auto o = run();
        if (o.status == TaskStatus::Ok && !o.result.contains("harness")) o.status = TaskStatus::Error;
        return o;
      };
    } else {
      throw ParseError(where + ": unknown task kind '" + out.kind + "'");
    }
    return out;
  }
};

}  // namespace detail

inline LoadedTaskFile load_task_file(const json& doc, const std::filesystem::path& base_dir = {},
                                     const OptionOverrides& overrides = {}) {
  if (!doc.is_object()) throw ParseError("task file must be a JSON object");
  try {
    return detail::Loader(doc, base_dir, overrides).finish();
  } catch (const json::exception& e) {
    throw ParseError(std::string("task file: ") + e.what());
  }
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline LoadedTaskFile load_task_file(const std::filesystem::path& path, const OptionOverrides& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open task file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_task_file(parse_json_text(buffer.str(), path.string()), path.parent_path(), overrides);
}

// ---------------------------------------------------------------------------
// Running and emitting

struct Report {
  json document;
  int exit_code = kExitOk;
};

inline int exit_code_for(const json& summary, bool strict) {
  if (summary["violations"].get<std::size_t>() > 0) return kExitViolation;
  if (summary["errors"].get<std::size_t>() > 0) return kExitRuntime;
  if (strict && summary["not_applicable"].get<std::size_t>() > 0) return kExitNotApplicable;
  return kExitOk;
}

inline Report run_loaded(const LoadedTaskFile& file) {
  json tasks = json::array();
  std::size_t counts[4] = {0, 0, 0, 0};
  json violating = json::array();
  for (const auto& task : file.tasks) {
    json entry{{"name", task.name}, {"kind", task.kind}, {"inputs", task.inputs}};
    const auto start = std::chrono::steady_clock::now();
    TaskOutcome outcome;
    try {
      outcome = task.run();
      entry["result"] = outcome.result;
    } catch (const std::exception& e) {
      outcome.status = TaskStatus::Error;
      entry["error"] = e.what();
    }
    if (file.options.timings)
      entry["duration_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    entry["status"] = to_string(outcome.status);
    ++counts[int(outcome.status)];
    if (outcome.status == TaskStatus::Violation) violating.push_back(task.name);
    tasks.push_back(std::move(entry));
  }
  const auto& o = file.options;
  json summary{{"tasks", file.tasks.size()},
               {"ok", counts[int(TaskStatus::Ok)]},
               {"not_applicable", counts[int(TaskStatus::NotApplicable)]},
               {"errors", counts[int(TaskStatus::Error)]},
               {"violations", counts[int(TaskStatus::Violation)]},
               {"violating_tasks", violating}};
  Report r;
  r.exit_code = exit_code_for(summary, o.strict);
  r.document = {{"version", kTaskFileVersion},
                {"options",
                 {{"workers", o.workers},
                  {"subgroup_bound", o.subgroup_bound},
                  {"cardinality_bound", o.cardinality_bound},
                  {"harness", o.harness},
                  {"harness_cap", o.harness_cap},
                  {"strict", o.strict},
                  {"timings", o.timings}}},
                {"definitions", file.definitions},
                {"tasks", tasks},
                {"summary", summary},
                {"exit_code", r.exit_code}};
  return r;
}

inline Report run_task_file(const std::filesystem::path& path, const OptionOverrides& overrides = {}) {
  return run_loaded(load_task_file(path, overrides));
}

enum class ReportFormat { Text, Json };

namespace detail {

inline bool is_scalar_array(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v)
    if (e.is_object() || (e.is_array() && !is_scalar_array(e))) return false;
  return true;
}

inline std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline void render_text(std::ostream& out, const json& v, int indent) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  if (v.is_object()) {
    for (const auto& [key, val] : v.items()) {
      if ((val.is_object() && !val.empty()) || (val.is_array() && !is_scalar_array(val) && !val.empty())) {
        out << pad << key << ":\n";
        render_text(out, val, indent + 1);
      } else {
        out << pad << key << ": " << (val.is_structured() ? val.dump() : scalar_text(val)) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << pad << "- [" << i << "]\n";
      render_text(out, v[i], indent + 1);
    }
  } else {
    out << pad << scalar_text(v) << "\n";
  }
}

}  // namespace detail

/// JSON: the document with sorted keys and two-space indentation. Text: a
/// status table followed by the same tree rendered as indented key: value lines.
inline std::string emit_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.document.dump(2) + "\n";
  std::ostringstream out;
  const auto& doc = report.document;
  out << "homdiv report (version " << doc["version"].get<int>() << ")\n\n";
  std::size_t width = 4;
  for (const auto& t : doc["tasks"]) width = std::max(width, t["name"].get<std::string>().size());
  for (const auto& t : doc["tasks"]) {
    const auto name = t["name"].get<std::string>();
    out << "  " << name << std::string(width - name.size() + 2, ' ') << t["status"].get<std::string>();
    if (t.contains("result") && t["result"].contains("count"))
      out << "  count " << t["result"]["count"].dump() << ", divisor " << t["result"]["divisor"].dump();
    if (t.contains("result") && t["result"].contains("rank"))
      out << "  rank " << t["result"]["rank"].dump() << ", homogeneous " << t["result"]["homogeneous"].dump();
    out << "\n";
  }
  const auto& s = doc["summary"];
  out << "\nsummary: " << s["tasks"].dump() << " tasks, " << s["ok"].dump() << " ok, " << s["not_applicable"].dump()
      << " not applicable, " << s["errors"].dump() << " errors, " << s["violations"].dump() << " violations\n\n";
  detail::render_text(out, doc, 0);
  return out.str();
}

}  // namespace homdiv
