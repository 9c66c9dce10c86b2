// Scenario file format and SimResult rendering.

#include <sstream>

#include "json_util.hpp"
#include "secblocks/linksim.hpp"

namespace secblocks {

namespace {

using detail::Json;

constexpr std::string_view kBuiltinPrefix = "builtin:";

Tick tick_field(const Json& obj, std::string_view key, std::string_view where) {
  return detail::require_integer(obj, key, where);
}

std::optional<Tick> optional_tick(const Json& obj, std::string_view key, std::string_view where) {
  if (!obj.contains(key)) return std::nullopt;
  return tick_field(obj, key, where);
}

Attack parse_attack(const Json& j) {
  using namespace detail;
  Attack a;
  a.technique = require_string(j, "technique", "attack");
  a.mode = parse_enum<AttackMode>(parse_attack_mode, require_string(j, "mode", "attack"), "attack mode");
  a.target = require_string(j, "target", "attack");
  const Json& window = require(j, "window", "attack");
  if (!window.is_array() || window.size() != 2 || !window[0].is_number_integer() || !window[1].is_number_integer())
    throw SyntaxError("attack: 'window' must be [start, end]", 0, 0);
  a.start = window[0].get<Tick>();
  a.end = window[1].get<Tick>();
  a.delay = optional_tick(j, "delay", "attack");
  if (j.contains("on_axis")) {
    if (!j["on_axis"].is_boolean()) throw SyntaxError("attack: 'on_axis' must be a boolean", 0, 0);
    a.on_axis = j["on_axis"].get<bool>();
  }
  if (auto p = optional_string(j, "inject_payload", "attack"))
    a.inject_payload = parse_enum<PayloadClass>(parse_payload_class, *p, "payload class");
  return a;
}

Json attack_json(const Attack& a) {
  Json j = Json::object();
  j["technique"] = a.technique;
  j["mode"] = to_string(a.mode);
  j["target"] = a.target;
  j["window"] = Json::array({a.start, a.end});
  if (a.delay) j["delay"] = *a.delay;
  if (a.on_axis) j["on_axis"] = *a.on_axis;
  if (a.inject_payload) j["inject_payload"] = to_string(*a.inject_payload);
  return j;
}

}  // namespace

ScenarioConfig load_scenario(std::string_view text,
                             const std::function<std::string(const std::string&)>& read_file) {
  using namespace detail;
  const Json doc = parse_json(text);
  require_object(doc, "scenario");

  ScenarioConfig c;
  const Json& model = require(doc, "model", "scenario");
  if (model.is_string()) {
    c.model_ref = model.get<std::string>();
    if (c.model_ref.rfind(kBuiltinPrefix, 0) == 0) {
      try {
        c.model = builtin_model(c.model_ref.substr(kBuiltinPrefix.size()));
      } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
      }
    } else {
      c.model = parse_model(read_file(c.model_ref));
    }
  } else {
    c.model = parse_model(model.dump());
  }

  c.horizon = tick_field(doc, "horizon", "scenario");
  if (doc.contains("schedule"))
    for (const auto& s : require_array(doc, "schedule", "scenario"))
      c.schedule.push_back({tick_field(s, "tick", "schedule entry"), require_string(s, "command", "schedule entry")});

  if (doc.contains("link_params")) {
    const Json& lp = doc["link_params"];
    require_object(lp, "link_params");
    for (const auto& [flow, p] : lp.items()) {
      LinkParams params;
      params.latency = tick_field(p, "latency", "link_params");
      if (p.contains("alt_path")) {
        const Json& alt = p["alt_path"];
        AltPath path;
        path.latency = tick_field(alt, "latency", "alt_path");
        if (auto m = optional_string(alt, "medium", "alt_path"))
          path.medium = parse_enum<Medium>(parse_medium, *m, "medium");
        params.alt_path = path;
      }
      c.link_params[flow] = params;
    }
  }

  if (doc.contains("deployments"))
    for (const auto& d : require_array(doc, "deployments", "scenario"))
      c.deployments.insert({require_string(d, "target", "deployment"), require_string(d, "countermeasure", "deployment")});

  if (doc.contains("attacks"))
    for (const auto& a : require_array(doc, "attacks", "scenario")) c.attacks.push_back(parse_attack(a));

  if (doc.contains("reroute_timeout")) c.reroute_timeout = tick_field(doc, "reroute_timeout", "scenario");
  if (doc.contains("fault_recovery")) c.fault_recovery = tick_field(doc, "fault_recovery", "scenario");
  if (doc.contains("seed")) {
    const Json& seed = doc["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
      throw SyntaxError("scenario: 'seed' must be an unsigned integer", 0, 0);
    c.seed = seed.get<std::uint64_t>();
  }

  if (doc.contains("privileges")) {
    const Json& priv = doc["privileges"];
    require_object(priv, "privileges");
    for (const auto& [kind, payloads] : priv.items()) {
      auto& set = c.privileges[parse_enum<ComponentKind>(parse_component_kind, kind, "component kind")];
      for (const auto& p : string_array(payloads, "privileges"))
        set.insert(parse_enum<PayloadClass>(parse_payload_class, p, "payload class"));
    }
  }

  check_scenario(c);
  return c;
}

std::string serialize_scenario(const ScenarioConfig& config) {
  Json doc = Json::object();
  if (config.model_ref.empty())
    doc["model"] = Json::parse(serialize_model(config.model));
  else
    doc["model"] = config.model_ref;
  doc["horizon"] = config.horizon;
  doc["schedule"] = Json::array();
  for (const auto& s : config.schedule) doc["schedule"].push_back({{"tick", s.tick}, {"command", s.command}});
  doc["link_params"] = Json::object();
  for (const auto& [flow, p] : config.link_params) {
    Json j = {{"latency", p.latency}};
    if (p.alt_path) j["alt_path"] = {{"latency", p.alt_path->latency}, {"medium", to_string(p.alt_path->medium)}};
    doc["link_params"][flow] = j;
  }
  doc["deployments"] = Json::array();
  for (const auto& d : config.deployments)
    doc["deployments"].push_back({{"target", d.target}, {"countermeasure", d.countermeasure}});
  doc["attacks"] = Json::array();
  for (const auto& a : config.attacks) doc["attacks"].push_back(attack_json(a));
  doc["reroute_timeout"] = config.reroute_timeout;
  doc["fault_recovery"] = config.fault_recovery;
  doc["seed"] = config.seed;
  if (!config.privileges.empty()) {
    doc["privileges"] = Json::object();
    for (const auto& [kind, payloads] : config.privileges) {
      Json arr = Json::array();
      for (auto p : payloads) arr.push_back(to_string(p));
      doc["privileges"][std::string(to_string(kind))] = arr;
    }
  }
  return detail::dump_json(doc);
}

// ---------------------------------------------------------------------------
// Results

namespace {

Json event_object(const Event& e) {
  Json j = Json::object();
  j["tick"] = e.tick;
  j["kind"] = to_string(e.kind);
  if (!e.message.empty()) j["message"] = e.message;
  if (!e.flow.empty()) j["flow"] = e.flow;
  if (!e.component.empty()) j["component"] = e.component;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

Json metrics_object(const SimMetrics& m) {
  Json j = Json::object();
  j["commanded"] = m.commanded;
  j["captured"] = m.captured;
  j["delivered"] = m.delivered;
  j["mean_delivery_latency"] = {{"num", m.mean_delivery_latency.num}, {"den", m.mean_delivery_latency.den}};
  j["detections"] = m.detections;
  j["blocked"] = m.blocked;
  j["integrity_violations_accepted"] = m.integrity_violations_accepted;
  j["confidentiality_breaches"] = m.confidentiality_breaches;
  j["degraded_captures"] = m.degraded_captures;
  j["faults"] = m.faults;
  return j;
}

Json flows_object(const SimResult& r) {
  Json j = Json::object();
  for (const auto& [id, t] : r.flows)
    j[id] = {{"sent", t.sent},       {"delivered", t.delivered}, {"dropped", t.dropped},
             {"rejected", t.rejected}, {"blocked", t.blocked},   {"in_flight", t.in_flight}};
  return j;
}

}  // namespace

std::string event_json_line(const Event& e) { return event_object(e).dump(); }

std::string events_jsonl(const SimResult& result) {
  std::string out;
  for (const auto& e : result.events) out += event_json_line(e) + "\n";
  return out;
}

std::string metrics_json(const SimResult& result) {
  Json doc = Json::object();
  doc["seed"] = result.seed;
  doc["metrics"] = metrics_object(result.metrics);
  doc["flows"] = flows_object(result);
  return detail::dump_json(doc);
}

std::string result_json(const SimResult& result) {
  Json doc = Json::object();
  doc["seed"] = result.seed;
  doc["metrics"] = metrics_object(result.metrics);
  doc["flows"] = flows_object(result);
  doc["in_flight"] = result.in_flight;
  doc["events"] = Json::array();
  for (const auto& e : result.events) doc["events"].push_back(event_object(e));
  return detail::dump_json(doc);
}

std::string metrics_markdown(const SimResult& result) {
  const SimMetrics& m = result.metrics;
  std::ostringstream os;
  os << "| Metric | Value |\n";
  os << "|---|---|\n";
  os << "| commanded | " << m.commanded << " |\n";
  os << "| captured | " << m.captured << " |\n";
  os << "| delivered | " << m.delivered << " |\n";
  os << "| mean_delivery_latency | " << m.mean_delivery_latency.num;
  if (m.mean_delivery_latency.den != 1) os << "/" << m.mean_delivery_latency.den;
  os << " |\n";
  os << "| detections | " << m.detections << " |\n";
  os << "| blocked | " << m.blocked << " |\n";
  os << "| integrity_violations_accepted | " << m.integrity_violations_accepted << " |\n";
  os << "| confidentiality_breaches | " << m.confidentiality_breaches << " |\n";
  os << "| degraded_captures | " << m.degraded_captures << " |\n";
  os << "| faults | " << m.faults << " |\n";
  return os.str();
}

}  // namespace secblocks
