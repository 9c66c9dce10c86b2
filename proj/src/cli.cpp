#include "secblocks/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json_util.hpp"
#include "secblocks/blocks.hpp"
#include "secblocks/catalog.hpp"
#include "secblocks/linksim.hpp"
#include "secblocks/model.hpp"
#include "secblocks/surface.hpp"
#include "secblocks/threatmap.hpp"

namespace secblocks {

namespace {

namespace fs = std::filesystem;
using detail::Json;

struct Failure {
  int code;
  std::string message;
};

struct Options {
  std::string model_path;
  std::string builtin;
  std::string catalog_path;
  std::string labels_path;
  std::string vehicle;
  std::optional<std::string> profile;
  std::string format;
  std::string output;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string events;
  std::string metrics;
  std::string dump_what;
  std::string dump_name;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DanglingReference:
    case ErrorKind::DuplicateId:
    case ErrorKind::InvalidModel:
      return kExitViolations;
    case ErrorKind::MissingLabel:
    case ErrorKind::UnsupportedTopology:
      return kExitRuntime;
    default:
      return kExitConfig;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{kExitRuntime, "cannot write '" + path + "'"};
}

// ---------------------------------------------------------------------------
// Inputs

struct LoadedModel {
  SystemModel model;
  std::string builtin;  // empty when loaded from a file
};

LoadedModel load_model(const Options& o) {
  if (o.model_path.empty() == o.builtin.empty())
    throw Failure{kExitConfig, "exactly one of --model or --builtin is required"};
  if (!o.builtin.empty()) return {builtin_model(o.builtin), o.builtin};
  return {parse_model(read_file(o.model_path)), ""};
}

// Catalog problems are configuration errors even when they share a kind with
// model violations (duplicate ids).
template <typename F>
auto as_config(F&& load) -> decltype(load()) {
  try {
    return load();
  } catch (const Error& e) {
    throw Failure{kExitConfig, e.what()};
  }
}

Catalog load_catalog_option(const Options& o) {
  if (o.catalog_path.empty()) return builtin_catalog();
  return as_config([&] { return load_catalog(read_file(o.catalog_path)); });
}

LabelTable load_labels_option(const Options& o) {
  if (o.labels_path.empty()) return builtin_labels();
  return as_config([&] { return load_labels(read_file(o.labels_path)); });
}

// paper-eo is the default only for the builtin single-leo model.
std::optional<Profile> load_profile_option(const Options& o, const LoadedModel& m) {
  const std::string choice = o.profile.value_or(m.builtin == "single-leo" ? "paper-eo" : "none");
  if (choice == "none") return std::nullopt;
  if (choice == "paper-eo") return builtin_profile();
  return as_config([&] { return load_profile(read_file(choice)); });
}

ScenarioConfig load_scenario_option(const Options& o) {
  const fs::path base = fs::path(o.scenario).parent_path();
  ScenarioConfig c = load_scenario(read_file(o.scenario), [&](const std::string& ref) {
    const fs::path p(ref);
    return read_file(p.is_absolute() ? ref : (base / p).string());
  });
  if (o.seed) c.seed = *o.seed;
  return c;
}

// ---------------------------------------------------------------------------
// Renderers shared by the single-step subcommands and `report`

std::string surface_text(const SurfaceTable& table, const SystemModel& model, const std::string& fmt) {
  return fmt == "json" ? surface_json(table, model) : surface_markdown(table, model);
}

std::string threats_text(const ThreatReport& r, const Catalog& c, const std::string& fmt) {
  return fmt == "json" ? threats_json(r) : threats_markdown(r, c);
}

std::string principles_text(const ThreatReport& r, const Catalog& c, const std::string& fmt) {
  return fmt == "json" ? principles_json(r, c) : principles_markdown(r, c);
}

std::string plan_text(const SecurityPlan& p, const Catalog& c, const std::string& fmt) {
  return fmt == "json" ? plan_json(p) : plan_markdown(p, c);
}

std::string shall_text(const std::vector<ShallStatement>& s, const std::string& fmt) {
  return fmt == "json" ? shall_json(s) : shall_markdown(s);
}

std::string sim_text(const SimResult& r, const std::string& fmt) {
  return fmt == "json" ? result_json(r) : metrics_markdown(r);
}

std::string violations_text(const std::vector<Violation>& vs, const std::string& fmt) {
  if (fmt == "json") {
    Json arr = Json::array();
    for (const auto& v : vs)
      arr.push_back({{"code", v.code},
                     {"subject", v.subject},
                     {"message", v.message},
                     {"severity", v.severity == Severity::Error ? "error" : "warning"}});
    return detail::dump_json(arr);
  }
  std::string out;
  for (const auto& v : vs)
    out += std::string("- ") + (v.severity == Severity::Error ? "error" : "warning") + " " + v.code + " `" +
           v.subject + "`: " + v.message + "\n";
  return out;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty())
    out << text;
  else
    write_file(o.output, text);
}

void require_format(const Options& o, std::initializer_list<std::string_view> allowed) {
  for (auto f : allowed)
    if (o.format == f) return;
  throw Failure{kExitConfig, "format '" + o.format + "' is not supported by this subcommand"};
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o, {"md", "json"});
  if (o.model_path.empty() == o.builtin.empty())
    throw Failure{kExitConfig, "exactly one of --model or --builtin is required"};
  const SystemModel model = o.builtin.empty() ? parse_model_unchecked(read_file(o.model_path)) : builtin_model(o.builtin);
  const auto violations = validate(model);
  emit(o, out, violations_text(violations, o.format));
  if (!has_errors(violations)) return kExitOk;
  std::size_t errors = 0;
  const Violation* first = nullptr;
  for (const auto& v : violations) {
    if (v.severity != Severity::Error) continue;
    if (!first) first = &v;
    ++errors;
  }
  err << "error: " << first->code << " " << first->subject << ": " << first->message;
  if (errors > 1) err << " (" << errors - 1 << " more)";
  err << "\n";
  return kExitViolations;
}

int cmd_surface(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const auto m = load_model(o);
  SurfaceTable table = enumerate_surfaces(m.model, load_labels_option(o));
  if (!o.vehicle.empty()) {
    if (!m.model.find_vehicle(o.vehicle)) throw Failure{kExitConfig, "unknown vehicle '" + o.vehicle + "'"};
    table = restrict_to_vehicle(table, m.model, o.vehicle);
  }
  emit(o, out, surface_text(table, m.model, o.format));
  return kExitOk;
}

int cmd_threats(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const auto m = load_model(o);
  const Catalog catalog = load_catalog_option(o);
  emit(o, out, threats_text(enumerate_threats(m.model, catalog), catalog, o.format));
  return kExitOk;
}

int cmd_plan(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const auto m = load_model(o);
  const Catalog catalog = load_catalog_option(o);
  const SecurityPlan plan = derive_plan(enumerate_threats(m.model, catalog), catalog, m.model);
  emit(o, out, plan_text(plan, catalog, o.format));
  return kExitOk;
}

int cmd_shall(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const auto m = load_model(o);
  const Catalog catalog = load_catalog_option(o);
  const auto profile = load_profile_option(o, m);
  const SecurityPlan plan = derive_plan(enumerate_threats(m.model, catalog), catalog, m.model);
  emit(o, out, shall_text(generate_shall(plan, catalog, profile ? &*profile : nullptr), o.format));
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const SimResult result = run_simulation(load_scenario_option(o));
  if (!o.events.empty()) write_file(o.events, events_jsonl(result));
  if (!o.metrics.empty()) write_file(o.metrics, metrics_json(result));
  emit(o, out, sim_text(result, o.format));
  return kExitOk;
}

int cmd_graph(const Options& o, std::ostream& out) {
  if (o.format != "dot" && o.format != "md") require_format(o, {"dot"});
  emit(o, out, to_dot(load_model(o).model));
  return kExitOk;
}

constexpr std::string_view kStepTitles[] = {
    "",
    "Scope",
    "System decomposition",
    "Attack surfaces",
    "Threats",
    "Countermeasure selection",
    "Secure blocks",
    "Shall statements",
};

struct Section {
  int step;
  std::string key;
  std::string title;
  std::string body;  // subcommand output in the report's format
};

int cmd_report(const Options& o, std::ostream& out) {
  require_format(o, {"md", "json"});
  const auto m = load_model(o);
  const Catalog catalog = load_catalog_option(o);
  const LabelTable labels = load_labels_option(o);
  const auto profile = load_profile_option(o, m);
  std::optional<SimResult> sim;
  if (!o.scenario.empty()) sim = run_simulation(load_scenario_option(o));

  const ThreatReport threats = enumerate_threats(m.model, catalog);
  const SecurityPlan plan = derive_plan(threats, catalog, m.model);
  const auto statements = generate_shall(plan, catalog, profile ? &*profile : nullptr);

  std::vector<Section> sections = {
      {2, "decomposition", std::string(kStepTitles[2]), to_dot(m.model)},
      {3, "surface", std::string(kStepTitles[3]),
       surface_text(enumerate_surfaces(m.model, labels), m.model, o.format)},
      {4, "threats", std::string(kStepTitles[4]), threats_text(threats, catalog, o.format)},
      {5, "principles", std::string(kStepTitles[5]), principles_text(threats, catalog, o.format)},
  };
  if (sim) sections.push_back({5, "simulation", "Countermeasure evaluation", sim_text(*sim, o.format)});
  sections.push_back({6, "plan", std::string(kStepTitles[6]), plan_text(plan, catalog, o.format)});
  sections.push_back({7, "shall", std::string(kStepTitles[7]), shall_text(statements, o.format)});

  if (o.format == "json") {
    Json doc = Json::object();
    doc["model"] = m.model.name;
    doc["sections"] = Json::array();
    for (const auto& s : sections) {
      Json entry = {{"step", s.step}, {"key", s.key}, {"title", s.title}};
      entry["content"] = s.key == "decomposition" ? Json(s.body) : Json::parse(s.body);
      doc["sections"].push_back(entry);
    }
    emit(o, out, detail::dump_json(doc));
    return kExitOk;
  }

  std::ostringstream os;
  os << "# Security report: " << m.model.name << "\n";
  for (const auto& s : sections) {
    os << "\n## Step " << s.step << ": " << s.title << "\n\n";
    if (s.key == "decomposition")
      os << "```dot\n" << s.body << "```\n";
    else
      os << s.body;
  }
  emit(o, out, os.str());
  return kExitOk;
}

int cmd_dump(const Options& o, std::ostream& out) {
  const std::string& what = o.dump_what;
  if (what == "model") {
    emit(o, out, serialize_model(builtin_model(o.dump_name)));
  } else if (what == "catalog") {
    emit(o, out, serialize_catalog(builtin_catalog()));
  } else if (what == "labels") {
    emit(o, out, serialize_labels(builtin_labels()));
  } else if (what == "profile") {
    emit(o, out, serialize_profile(builtin_profile()));
  } else if (what == "scenario") {
    if (o.dump_name != "downlink-denial" && o.dump_name != "downlink-denial-cm0070")
      throw Failure{kExitConfig, "unknown builtin scenario '" + o.dump_name + "'"};
    emit(o, out, serialize_scenario(downlink_denial_scenario(o.dump_name == "downlink-denial-cm0070")));
  } else {
    throw Failure{kExitConfig, "cannot dump '" + what + "'"};
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Flag wiring

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model_path, "System model JSON file");
  sub->add_option("--builtin", o.builtin, "Builtin model: single-leo or leo-network");
}

void add_format_flag(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "md", "dot"}));
}

void add_output_flag(CLI::App* sub, Options& o) {
  sub->add_option("--output", o.output, "Write the primary output here instead of stdout");
}

std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure-by-component analysis of satellite system models", "secblocks"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Check a system model for structural violations");
  add_model_flags(validate_cmd, o);

  auto* surface_cmd = app.add_subcommand("surface", "Enumerate attack surfaces");
  add_model_flags(surface_cmd, o);
  surface_cmd->add_option("--labels", o.labels_path, "Service label table JSON file");
  surface_cmd->add_option("--vehicle", o.vehicle, "Only rows for components on this vehicle");

  auto* threats_cmd = app.add_subcommand("threats", "Map catalog techniques onto the model");
  add_model_flags(threats_cmd, o);

  auto* plan_cmd = app.add_subcommand("plan", "Derive secure blocks");
  add_model_flags(plan_cmd, o);

  auto* shall_cmd = app.add_subcommand("shall", "Generate shall statements");
  add_model_flags(shall_cmd, o);
  shall_cmd->add_option("--profile", o.profile, "paper-eo, none, or a profile JSON file");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a link-segment scenario");
  simulate_cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  simulate_cmd->add_option("--seed", o.seed, "Override the scenario seed");
  simulate_cmd->add_option("--events", o.events, "Write the event log as JSON lines");
  simulate_cmd->add_option("--metrics", o.metrics, "Write metrics JSON");

  auto* report_cmd = app.add_subcommand("report", "Run steps 2 to 7 and emit one report");
  add_model_flags(report_cmd, o);
  report_cmd->add_option("--labels", o.labels_path, "Service label table JSON file");
  report_cmd->add_option("--profile", o.profile, "paper-eo, none, or a profile JSON file");
  report_cmd->add_option("--scenario", o.scenario, "Also simulate this scenario");

  auto* graph_cmd = app.add_subcommand("graph", "Emit the model topology as Graphviz DOT");
  add_model_flags(graph_cmd, o);

  auto* dump_cmd = app.add_subcommand("dump", "Print a builtin dataset in its file format");
  dump_cmd->add_option("what", o.dump_what, "model, catalog, labels, profile or scenario")->required();
  dump_cmd->add_option("name", o.dump_name, "Builtin name for model and scenario");

  for (auto* sub : {validate_cmd, surface_cmd, threats_cmd, plan_cmd, shall_cmd, simulate_cmd, report_cmd})
    add_format_flag(sub, o);
  add_format_flag(graph_cmd, o);
  for (auto* sub : {threats_cmd, plan_cmd, shall_cmd, report_cmd})
    sub->add_option("--catalog", o.catalog_path, "Technique catalog JSON file");
  for (auto* sub : {validate_cmd, surface_cmd, threats_cmd, plan_cmd, shall_cmd, simulate_cmd, report_cmd, graph_cmd,
                    dump_cmd})
    add_output_flag(sub, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitConfig;
  }

  if (o.format.empty()) o.format = graph_cmd->parsed() ? "dot" : "md";

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    if (surface_cmd->parsed()) return cmd_surface(o, out);
    if (threats_cmd->parsed()) return cmd_threats(o, out);
    if (plan_cmd->parsed()) return cmd_plan(o, out);
    if (shall_cmd->parsed()) return cmd_shall(o, out);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (report_cmd->parsed()) return cmd_report(o, out);
    if (graph_cmd->parsed()) return cmd_graph(o, out);
    return cmd_dump(o, out);
  } catch (const Failure& f) {
    err << "error: " << one_line(f.message) << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitRuntime;
  }
}

}  // namespace secblocks
