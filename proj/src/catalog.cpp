#include "secblocks/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "json_util.hpp"

namespace secblocks {

std::string_view to_string(SubjectKind v) {
  switch (v) {
    case SubjectKind::Flow: return "Flow";
    case SubjectKind::Component: return "Component";
    case SubjectKind::TrustRelationship: return "TrustRelationship";
  }
  return "?";
}

std::optional<SubjectKind> parse_subject_kind(std::string_view s) {
  if (s == "Flow") return SubjectKind::Flow;
  if (s == "Component") return SubjectKind::Component;
  if (s == "TrustRelationship") return SubjectKind::TrustRelationship;
  return std::nullopt;
}

const Technique* Catalog::find_technique(std::string_view id) const {
  for (const auto& t : techniques)
    if (t.id == id) return &t;
  return nullptr;
}

const Countermeasure* Catalog::find_countermeasure(std::string_view id) const {
  for (const auto& c : countermeasures)
    if (c.id == id) return &c;
  return nullptr;
}

int Catalog::countermeasure_index(std::string_view id) const {
  for (std::size_t i = 0; i < countermeasures.size(); ++i)
    if (countermeasures[i].id == id) return static_cast<int>(i);
  return -1;
}

const std::vector<std::string>& Catalog::mapped(std::string_view technique_id) const {
  static const std::vector<std::string> kNone;
  for (const auto& [tid, cms] : mappings)
    if (tid == technique_id) return cms;
  return kNone;
}

bool is_technique_id(std::string_view id) {
  static const std::regex kPattern("^[A-Z]{2}-[0-9]{4}$");
  return std::regex_match(id.begin(), id.end(), kPattern);
}

bool is_countermeasure_id(std::string_view id) {
  static const std::regex kPattern("^CM[0-9]{4}$");
  return std::regex_match(id.begin(), id.end(), kPattern);
}

void check_catalog(const Catalog& catalog) {
  std::set<std::string> technique_ids;
  for (const auto& t : catalog.techniques) {
    if (!is_technique_id(t.id))
      throw Error(ErrorKind::PatternViolation, "technique id '" + t.id + "' does not match AA-0000");
    if (!technique_ids.insert(t.id).second)
      throw Error(ErrorKind::DuplicateId, "technique '" + t.id + "' declared more than once");
    if (t.selectors.empty())
      throw Error(ErrorKind::EmptySelectors, "technique '" + t.id + "' has no selectors");
    for (const auto& s : t.selectors) {
      const bool flow_fields = s.link_kinds || s.payload_classes || s.crosses_vehicle_boundary;
      if (s.target != SubjectKind::Flow && flow_fields)
        throw Error(ErrorKind::InvalidSelector,
                    "technique '" + t.id + "': link/payload/boundary constraints need a Flow target");
      if (s.target != SubjectKind::Component && s.component_kinds)
        throw Error(ErrorKind::InvalidSelector,
                    "technique '" + t.id + "': component_kinds needs a Component target");
      const bool constrained = flow_fields || s.component_kinds;
      if (!constrained && s.target != SubjectKind::TrustRelationship)
        throw Error(ErrorKind::InvalidSelector,
                    "technique '" + t.id + "': selector carries no constraint");
    }
  }

  std::set<std::string> cm_ids;
  for (const auto& c : catalog.countermeasures) {
    if (!is_countermeasure_id(c.id))
      throw Error(ErrorKind::PatternViolation, "countermeasure id '" + c.id + "' does not match CM0000");
    if (!cm_ids.insert(c.id).second)
      throw Error(ErrorKind::DuplicateId, "countermeasure '" + c.id + "' declared more than once");
    if (c.action_phrase.empty())
      throw Error(ErrorKind::InvalidSelector, "countermeasure '" + c.id + "' has an empty action phrase");
  }

  std::set<std::string> mapped_keys;
  for (const auto& [tid, cms] : catalog.mappings) {
    if (!technique_ids.count(tid))
      throw Error(ErrorKind::DanglingMapping, "mapping key '" + tid + "' is not a declared technique");
    if (!mapped_keys.insert(tid).second)
      throw Error(ErrorKind::DuplicateId, "technique '" + tid + "' mapped more than once");
    for (const auto& cm : cms)
      if (!cm_ids.count(cm))
        throw Error(ErrorKind::DanglingMapping,
                    "mapping " + tid + " -> '" + cm + "' names no declared countermeasure");
  }
  for (const auto& t : catalog.techniques)
    if (catalog.mapped(t.id).empty())
      throw Error(ErrorKind::DanglingMapping, "technique '" + t.id + "' maps to no countermeasure");
}

// ---------------------------------------------------------------------------
// File format

namespace {

using detail::Json;

template <typename Enum, typename Parser>
std::vector<Enum> enum_list(const Json& j, Parser parser, std::string_view what) {
  std::vector<Enum> out;
  for (const auto& s : detail::string_array(j, what))
    out.push_back(detail::parse_enum<Enum>(parser, s, what));
  return out;
}

template <typename Enum>
Json names(const std::vector<Enum>& values) {
  Json out = Json::array();
  for (auto v : values) out.push_back(to_string(v));
  return out;
}

Selector parse_selector(const Json& j) {
  using namespace detail;
  Selector s;
  s.target = parse_enum<SubjectKind>(parse_subject_kind, require_string(j, "target", "selector"),
                                     "selector target");
  if (j.contains("link_kinds"))
    s.link_kinds = enum_list<LinkKind>(j["link_kinds"], parse_link_kind, "link kind");
  if (j.contains("payload_classes"))
    s.payload_classes = enum_list<PayloadClass>(j["payload_classes"], parse_payload_class, "payload class");
  if (j.contains("component_kinds"))
    s.component_kinds = enum_list<ComponentKind>(j["component_kinds"], parse_component_kind, "component kind");
  if (j.contains("crosses_vehicle_boundary")) {
    if (!j["crosses_vehicle_boundary"].is_boolean())
      throw SyntaxError("selector: 'crosses_vehicle_boundary' must be a boolean", 0, 0);
    s.crosses_vehicle_boundary = j["crosses_vehicle_boundary"].get<bool>();
  }
  s.description = optional_string(j, "description", "selector").value_or("");
  return s;
}

Json selector_json(const Selector& s) {
  Json j = Json::object();
  j["target"] = to_string(s.target);
  if (s.link_kinds) j["link_kinds"] = names(*s.link_kinds);
  if (s.payload_classes) j["payload_classes"] = names(*s.payload_classes);
  if (s.component_kinds) j["component_kinds"] = names(*s.component_kinds);
  if (s.crosses_vehicle_boundary) j["crosses_vehicle_boundary"] = *s.crosses_vehicle_boundary;
  j["description"] = s.description;
  return j;
}

}  // namespace

Catalog load_catalog(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text);
  require_object(doc, "catalog");
  Catalog c;
  for (const auto& t : require_array(doc, "techniques", "catalog")) {
    Technique out;
    out.id = require_string(t, "id", "technique");
    out.name = require_string(t, "name", "technique");
    out.description = optional_string(t, "description", "technique").value_or("");
    for (const auto& s : require_array(t, "selectors", "technique")) out.selectors.push_back(parse_selector(s));
    c.techniques.push_back(std::move(out));
  }
  for (const auto& m : require_array(doc, "countermeasures", "catalog")) {
    Countermeasure out;
    out.id = require_string(m, "id", "countermeasure");
    out.name = require_string(m, "name", "countermeasure");
    out.description = optional_string(m, "description", "countermeasure").value_or("");
    out.action_phrase = require_string(m, "action_phrase", "countermeasure");
    if (m.contains("rationale_clauses"))
      out.rationale_clauses = string_array(m["rationale_clauses"], "rationale_clauses");
    c.countermeasures.push_back(std::move(out));
  }
  const Json& mappings = require(doc, "mappings", "catalog");
  require_object(mappings, "mappings");
  for (const auto& [tid, cms] : mappings.items())
    c.mappings.emplace_back(tid, string_array(cms, "mapping"));
  check_catalog(c);
  return c;
}

std::string serialize_catalog(const Catalog& catalog) {
  Json doc = Json::object();
  doc["techniques"] = Json::array();
  for (const auto& t : catalog.techniques) {
    Json sel = Json::array();
    for (const auto& s : t.selectors) sel.push_back(selector_json(s));
    doc["techniques"].push_back(
        {{"id", t.id}, {"name", t.name}, {"description", t.description}, {"selectors", sel}});
  }
  doc["countermeasures"] = Json::array();
  for (const auto& c : catalog.countermeasures)
    doc["countermeasures"].push_back({{"id", c.id},
                                      {"name", c.name},
                                      {"description", c.description},
                                      {"action_phrase", c.action_phrase},
                                      {"rationale_clauses", c.rationale_clauses}});
  doc["mappings"] = Json::object();
  for (const auto& [tid, cms] : catalog.mappings) doc["mappings"][tid] = cms;
  return detail::dump_json(doc);
}

// ---------------------------------------------------------------------------
// Built-in content

Catalog builtin_catalog() {
  Catalog c;

  Selector crosses;
  crosses.target = SubjectKind::Flow;
  crosses.crosses_vehicle_boundary = true;
  crosses.description = "{subject} crosses a vehicle trust boundary";

  Selector any_trust;
  any_trust.target = SubjectKind::TrustRelationship;
  any_trust.description = "{subject} grants implicit trust among its members";

  Selector payload_parts;
  payload_parts.target = SubjectKind::Component;
  payload_parts.component_kinds =
      std::vector{ComponentKind::Camera, ComponentKind::Storage, ComponentKind::ImageProcessing};
  payload_parts.description = "{subject} is part of the hosted imaging payload";

  Selector housekeeping;
  housekeeping.target = SubjectKind::Flow;
  housekeeping.payload_classes = std::vector{PayloadClass::HousekeepingData};
  housekeeping.description = "{subject} carries housekeeping data that could be falsified";

  Selector downlink;
  downlink.target = SubjectKind::Flow;
  downlink.link_kinds = std::vector{LinkKind::Downlink};
  downlink.description = "{subject} is a downlink whose transmission could be prevented";

  c.techniques = {
      {"IA-0009", "Trusted Relationship",
       "Abuse of an established trust between elements to gain access or inject commands.",
       {crosses, any_trust}},
      {"IA-0006", "Compromise Hosted Payload",
       "Compromise of payload elements or their telemetry to manipulate mission products.",
       {payload_parts, housekeeping}},
      {"DE-0002", "Prevent Downlink",
       "Denial of the downlink so that mission data never reaches the ground.",
       {downlink}},
  };

  c.countermeasures = {
      {"CM0002", "COMSEC",
       "Secure communication protocols providing confidentiality and integrity of exchanged data.",
       "enforce communications security on all external flows",
       {"to protect mission data and commands from interception;",
        "to reject traffic whose integrity or origin cannot be verified."}},
      {"CM0032", "Onboard Intrusion Detection & Prevention",
       "Real-time monitoring and response on the onboard computer.",
       "implement onboard intrusion detection mechanisms",
       {"to monitor unauthorized and/or malicious access attempts;"}},
      {"CM0038", "Segmentation",
       "Isolated compartments that contain intrusions and protect critical elements.",
       "implement segregation",
       {"to ensure that control algorithms are isolated from other system components to prevent "
        "cross-contamination of faults;",
        "to provide multi-layered security for critical algorithms."}},
      {"CM0039", "Least Privilege",
       "Access rights of each process limited to what its function requires.",
       "restrict process privileges to mission-essential functions",
       {"to accept only the inputs required by the block's function;",
        "to limit the reach of a compromised process."}},
      {"CM0042", "Robust Fault Management",
       "Fault detection, diagnosis and recovery that keep the system functional.",
       "feature robust fault management systems",
       {"to detect, analyze, and promptly rectify anomalies;",
        "to support fallback operational modes that can be activated during fault conditions to "
        "maintain basic functionality."}},
      {"CM0070", "Alternate Communications Paths",
       "Redundant paths that keep data and command traffic flowing when the primary path fails.",
       "establish and maintain alternate communication paths",
       {"to ensure data transmission continuity in the case of primary link failure;"}},
  };

  c.mappings = {
      {"IA-0009", {"CM0002", "CM0032", "CM0038", "CM0039", "CM0070"}},
      {"IA-0006", {"CM0032", "CM0038", "CM0039"}},
      {"DE-0002", {"CM0070", "CM0042"}},
  };
  return c;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

template <typename T>
bool contains(const std::optional<std::vector<T>>& set, T value) {
  return !set || std::find(set->begin(), set->end(), value) != set->end();
}

}  // namespace

bool matches(const Selector& selector, const SystemModel& model, SubjectKind kind,
             std::string_view subject_id) {
  if (selector.target != kind) return false;
  switch (kind) {
    case SubjectKind::Flow: {
      const DataFlow* f = model.find_flow(subject_id);
      if (!f) return false;
      if (!contains(selector.link_kinds, f->link)) return false;
      if (!contains(selector.payload_classes, f->payload)) return false;
      if (selector.crosses_vehicle_boundary) {
        const Component* src = model.find_component(f->source);
        const Component* dst = model.find_component(f->dest);
        if (!src || !dst) return false;
        if ((src->vehicle != dst->vehicle) != *selector.crosses_vehicle_boundary) return false;
      }
      return true;
    }
    case SubjectKind::Component: {
      const Component* c = model.find_component(subject_id);
      return c && contains(selector.component_kinds, c->kind);
    }
    case SubjectKind::TrustRelationship:
      return model.find_trust(subject_id) != nullptr;
  }
  return false;
}

}  // namespace secblocks
