#include "secblocks/model.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "json_util.hpp"

namespace secblocks {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<VehicleRole, 3> kRoleNames{{
    {VehicleRole::GroundSite, "GroundSite"},
    {VehicleRole::Satellite, "Satellite"},
    {VehicleRole::Mothership, "Mothership"},
}};

constexpr NameTable<ComponentKind, 12> kKindNames{{
    {ComponentKind::GroundStation, "GroundStation"},
    {ComponentKind::PayloadControl, "PayloadControl"},
    {ComponentKind::Camera, "Camera"},
    {ComponentKind::Storage, "Storage"},
    {ComponentKind::ImageProcessing, "ImageProcessing"},
    {ComponentKind::AdcsAlgorithm, "AdcsAlgorithm"},
    {ComponentKind::PropulsionControl, "PropulsionControl"},
    {ComponentKind::SensorsActuators, "SensorsActuators"},
    {ComponentKind::OnboardComputer, "OnboardComputer"},
    {ComponentKind::OrbitDetermination, "OrbitDetermination"},
    {ComponentKind::SectoringAltitudeCalculation, "SectoringAltitudeCalculation"},
    {ComponentKind::ManeuverCalculation, "ManeuverCalculation"},
}};

constexpr NameTable<LinkKind, 4> kLinkNames{{
    {LinkKind::Internal, "Internal"},
    {LinkKind::Uplink, "Uplink"},
    {LinkKind::Downlink, "Downlink"},
    {LinkKind::Isl, "Isl"},
}};

constexpr NameTable<PayloadClass, 13> kPayloadNames{{
    {PayloadClass::ImageSchedule, "ImageSchedule"},
    {PayloadClass::ScheduledCommand, "ScheduledCommand"},
    {PayloadClass::ImageGeneration, "ImageGeneration"},
    {PayloadClass::RawImages, "RawImages"},
    {PayloadClass::ProcessedImages, "ProcessedImages"},
    {PayloadClass::HousekeepingData, "HousekeepingData"},
    {PayloadClass::OrbitalElements, "OrbitalElements"},
    {PayloadClass::AttitudeReference, "AttitudeReference"},
    {PayloadClass::ImagingTimePlan, "ImagingTimePlan"},
    {PayloadClass::OrbitalManeuverSchedule, "OrbitalManeuverSchedule"},
    {PayloadClass::SensorFeedback, "SensorFeedback"},
    {PayloadClass::ManeuverCommand, "ManeuverCommand"},
    {PayloadClass::Acknowledgement, "Acknowledgement"},
}};

constexpr NameTable<Medium, 3> kMediumNames{{
    {Medium::RF, "RF"},
    {Medium::FSO, "FSO"},
    {Medium::Wired, "Wired"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum v) {
  for (const auto& [e, name] : table)
    if (e == v) return name;
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const NameTable<Enum, N>& table, std::string_view s) {
  for (const auto& [e, name] : table)
    if (name == s) return e;
  return std::nullopt;
}

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& t) { return t.id == id; });
  return it == items.end() ? nullptr : &*it;
}

template <typename T>
int index_by_id(const std::vector<T>& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::string_view to_string(VehicleRole v) { return name_of(kRoleNames, v); }
std::string_view to_string(ComponentKind v) { return name_of(kKindNames, v); }
std::string_view to_string(LinkKind v) { return name_of(kLinkNames, v); }
std::string_view to_string(PayloadClass v) { return name_of(kPayloadNames, v); }
std::string_view to_string(Medium v) { return name_of(kMediumNames, v); }

std::optional<VehicleRole> parse_vehicle_role(std::string_view s) { return value_of(kRoleNames, s); }
std::optional<ComponentKind> parse_component_kind(std::string_view s) { return value_of(kKindNames, s); }
std::optional<LinkKind> parse_link_kind(std::string_view s) { return value_of(kLinkNames, s); }
std::optional<PayloadClass> parse_payload_class(std::string_view s) { return value_of(kPayloadNames, s); }
std::optional<Medium> parse_medium(std::string_view s) { return value_of(kMediumNames, s); }

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::PatternViolation: return "PatternViolation";
    case ErrorKind::DanglingMapping: return "DanglingMapping";
    case ErrorKind::EmptySelectors: return "EmptySelectors";
    case ErrorKind::InvalidSelector: return "InvalidSelector";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::DanglingProfileReference: return "DanglingProfileReference";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::UnsupportedTopology: return "UnsupportedTopology";
  }
  return "Error";
}

const Vehicle* SystemModel::find_vehicle(std::string_view id) const { return find_by_id(vehicles, id); }
const Component* SystemModel::find_component(std::string_view id) const { return find_by_id(components, id); }
const DataFlow* SystemModel::find_flow(std::string_view id) const { return find_by_id(flows, id); }
const TrustRelationship* SystemModel::find_trust(std::string_view id) const { return find_by_id(trust, id); }
int SystemModel::component_index(std::string_view id) const { return index_by_id(components, id); }
int SystemModel::flow_index(std::string_view id) const { return index_by_id(flows, id); }

const Vehicle* SystemModel::vehicle_of(std::string_view component_id) const {
  const Component* c = find_component(component_id);
  return c ? find_vehicle(c->vehicle) : nullptr;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class ViolationSink {
 public:
  void error(std::string code, std::string subject, std::string message) {
    out_.push_back({std::move(code), std::move(subject), std::move(message), Severity::Error});
  }
  void warning(std::string code, std::string subject, std::string message) {
    out_.push_back({std::move(code), std::move(subject), std::move(message), Severity::Warning});
  }
  std::vector<Violation> take() && {
    std::stable_sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.code, a.subject) < std::tie(b.code, b.subject);
    });
    return std::move(out_);
  }

 private:
  std::vector<Violation> out_;
};

template <typename T>
void check_ids(const std::vector<T>& items, std::string_view space, ViolationSink& sink) {
  std::map<std::string, int> seen;
  for (const auto& item : items) {
    if (item.id.empty()) {
      sink.error("EMPTY_ID", "", std::string(space) + " with empty id");
      continue;
    }
    if (++seen[item.id] == 2)
      sink.error("DUPLICATE_ID", item.id, std::string(space) + " id '" + item.id + "' declared more than once");
  }
}

std::string describe_link(LinkKind link) {
  switch (link) {
    case LinkKind::Uplink: return "Uplink must run from a ground site to a space vehicle";
    case LinkKind::Downlink: return "Downlink must run from a space vehicle to a ground site";
    case LinkKind::Isl: return "Isl must join two distinct space vehicles";
    case LinkKind::Internal: return "Internal flow must stay on one vehicle";
  }
  return "";
}

bool link_consistent(LinkKind link, const Vehicle& src, const Vehicle& dst) {
  switch (link) {
    case LinkKind::Uplink:
      return src.role == VehicleRole::GroundSite && is_space_segment(dst.role);
    case LinkKind::Downlink:
      return is_space_segment(src.role) && dst.role == VehicleRole::GroundSite;
    case LinkKind::Isl:
      return is_space_segment(src.role) && is_space_segment(dst.role) && src.id != dst.id;
    case LinkKind::Internal:
      return src.id == dst.id;
  }
  return false;
}

}  // namespace

std::vector<Violation> validate(const SystemModel& model) {
  ViolationSink sink;
  check_ids(model.vehicles, "vehicle", sink);
  check_ids(model.components, "component", sink);
  check_ids(model.flows, "flow", sink);
  check_ids(model.trust, "trust relationship", sink);

  // Deployments and attacks address components and flows by bare id.
  {
    std::set<std::string> component_ids;
    for (const auto& c : model.components) component_ids.insert(c.id);
    std::set<std::string> reported;
    for (const auto& f : model.flows)
      if (component_ids.count(f.id) && reported.insert(f.id).second)
        sink.error("DUPLICATE_ID", f.id, "id '" + f.id + "' names both a component and a flow");
  }

  for (const auto& c : model.components)
    if (!model.find_vehicle(c.vehicle))
      sink.error("DANGLING_REFERENCE", c.id, "component references unknown vehicle '" + c.vehicle + "'");

  std::set<std::string> referenced;
  for (const auto& f : model.flows) {
    const Component* src = model.find_component(f.source);
    const Component* dst = model.find_component(f.dest);
    if (!src)
      sink.error("DANGLING_REFERENCE", f.id, "flow source '" + f.source + "' does not resolve");
    if (!dst)
      sink.error("DANGLING_REFERENCE", f.id, "flow dest '" + f.dest + "' does not resolve");
    if (f.source == f.dest)
      sink.error("SELF_LOOP", f.id, "flow endpoints must differ");
    if (f.medium == Medium::Wired && f.link != LinkKind::Internal)
      sink.error("MEDIUM_MISMATCH", f.id, "Wired medium is only permitted on Internal flows");
    referenced.insert(f.source);
    referenced.insert(f.dest);
    if (!src || !dst) continue;
    const Vehicle* sv = model.find_vehicle(src->vehicle);
    const Vehicle* dv = model.find_vehicle(dst->vehicle);
    if (sv && dv && !link_consistent(f.link, *sv, *dv))
      sink.error("LINK_SEGMENT_MISMATCH", f.id, describe_link(f.link));
  }

  for (const auto& t : model.trust) {
    std::set<std::string> unique(t.members.begin(), t.members.end());
    if (unique.size() != t.members.size())
      sink.error("DUPLICATE_MEMBER", t.id, "trust relationship lists a member twice");
    if (unique.size() < 2)
      sink.error("TRUST_TOO_SMALL", t.id, "trust relationship needs at least two members");
    for (const auto& m : t.members) {
      if (!model.find_component(m))
        sink.error("DANGLING_REFERENCE", t.id, "trust member '" + m + "' does not resolve");
      referenced.insert(m);
    }
  }

  for (const auto& c : model.components)
    if (!referenced.count(c.id))
      sink.warning("UNREFERENCED_COMPONENT", c.id, "unreferenced component");

  return std::move(sink).take();
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------
// File format

SystemModel parse_model_unchecked(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text);
  require_object(doc, "model");

  SystemModel m;
  m.name = require_string(doc, "name", "model");

  for (const auto& v : require_array(doc, "vehicles", "model")) {
    Vehicle out;
    out.id = require_string(v, "id", "vehicle");
    out.name = require_string(v, "name", "vehicle");
    out.role = parse_enum<VehicleRole>(parse_vehicle_role, require_string(v, "role", "vehicle"), "vehicle role");
    m.vehicles.push_back(std::move(out));
  }
  for (const auto& c : require_array(doc, "components", "model")) {
    Component out;
    out.id = require_string(c, "id", "component");
    out.name = require_string(c, "name", "component");
    out.kind = parse_enum<ComponentKind>(parse_component_kind, require_string(c, "kind", "component"), "component kind");
    out.vehicle = require_string(c, "vehicle", "component");
    m.components.push_back(std::move(out));
  }
  for (const auto& f : require_array(doc, "flows", "model")) {
    DataFlow out;
    out.id = require_string(f, "id", "flow");
    out.name = require_string(f, "name", "flow");
    out.source = require_string(f, "source", "flow");
    out.dest = require_string(f, "dest", "flow");
    out.link = parse_enum<LinkKind>(parse_link_kind, require_string(f, "link", "flow"), "link kind");
    out.payload = parse_enum<PayloadClass>(parse_payload_class, require_string(f, "payload", "flow"), "payload class");
    if (auto medium = optional_string(f, "medium", "flow"))
      out.medium = parse_enum<Medium>(parse_medium, *medium, "medium");
    else
      out.medium = default_medium(out.link);
    m.flows.push_back(std::move(out));
  }
  if (doc.contains("trust")) {
    for (const auto& t : require_array(doc, "trust", "model")) {
      TrustRelationship out;
      out.id = require_string(t, "id", "trust");
      out.members = string_array(require(t, "members", "trust"), "trust members");
      out.description = optional_string(t, "description", "trust").value_or("");
      // Members are a set: keep first occurrence order, drop repeats.
      std::vector<std::string> unique;
      for (auto& member : out.members)
        if (std::find(unique.begin(), unique.end(), member) == unique.end())
          unique.push_back(std::move(member));
      out.members = std::move(unique);
      m.trust.push_back(std::move(out));
    }
  }
  return m;
}

SystemModel parse_model(std::string_view text) {
  SystemModel m = parse_model_unchecked(text);
  for (const auto& v : validate(m)) {
    if (v.severity != Severity::Error) continue;
    const std::string message = v.subject + ": " + v.message;
    if (v.code == "DANGLING_REFERENCE") throw Error(ErrorKind::DanglingReference, message);
    if (v.code == "DUPLICATE_ID") throw Error(ErrorKind::DuplicateId, message);
    throw Error(ErrorKind::InvalidModel, v.code + " " + message);
  }
  return m;
}

std::string serialize_model(const SystemModel& model) {
  using detail::Json;
  Json doc = Json::object();
  doc["name"] = model.name;
  doc["vehicles"] = Json::array();
  for (const auto& v : model.vehicles)
    doc["vehicles"].push_back({{"id", v.id}, {"name", v.name}, {"role", to_string(v.role)}});
  doc["components"] = Json::array();
  for (const auto& c : model.components)
    doc["components"].push_back(
        {{"id", c.id}, {"name", c.name}, {"kind", to_string(c.kind)}, {"vehicle", c.vehicle}});
  doc["flows"] = Json::array();
  for (const auto& f : model.flows)
    doc["flows"].push_back({{"id", f.id},
                            {"name", f.name},
                            {"source", f.source},
                            {"dest", f.dest},
                            {"link", to_string(f.link)},
                            {"payload", to_string(f.payload)},
                            {"medium", to_string(f.medium)}});
  doc["trust"] = Json::array();
  for (const auto& t : model.trust)
    doc["trust"].push_back({{"id", t.id}, {"members", t.members}, {"description", t.description}});
  return detail::dump_json(doc);
}

// ---------------------------------------------------------------------------
// Built-in mission decompositions

namespace {

DataFlow flow(std::string id, std::string name, std::string source, std::string dest,
              LinkKind link, PayloadClass payload) {
  return {std::move(id), std::move(name), std::move(source), std::move(dest),
          link,          payload,         default_medium(link)};
}

DataFlow optical(DataFlow f) {
  f.medium = Medium::FSO;
  return f;
}

using enum ComponentKind;
using enum LinkKind;
using enum PayloadClass;

std::vector<DataFlow> satellite_bus_flows() {
  return {
      flow("maneuver_command", "Image support maneuvers", "payload_control", "propulsion_control", Internal, ManeuverCommand),
      flow("attitude_reference", "Attitude reference", "adcs", "propulsion_control", Internal, AttitudeReference),
      flow("sensor_feedback_payload", "Sensor feedback", "sensors_actuators", "payload_control", Internal, SensorFeedback),
      flow("sensor_feedback_propulsion", "Sensor feedback", "sensors_actuators", "propulsion_control", Internal, SensorFeedback),
  };
}

SystemModel single_leo() {
  SystemModel m;
  m.name = "single-leo";
  m.vehicles = {
      {"ground", "Ground segment", VehicleRole::GroundSite},
      {"leo_sat", "LEO satellite", VehicleRole::Satellite},
  };
  m.components = {
      {"ground_station", "Ground station", GroundStation, "ground"},
      {"payload_control", "Payload control", PayloadControl, "leo_sat"},
      {"camera", "Camera", Camera, "leo_sat"},
      {"storage", "Storage", Storage, "leo_sat"},
      {"image_processing", "Image processing", ImageProcessing, "leo_sat"},
      {"adcs", "Attitude determination and control algorithm", AdcsAlgorithm, "leo_sat"},
      {"propulsion_control", "Propulsion control", PropulsionControl, "leo_sat"},
      {"sensors_actuators", "Sensors and actuators", SensorsActuators, "leo_sat"},
  };
  m.flows = {
      flow("image_schedule", "Image schedule", "ground_station", "payload_control", Uplink, ImageSchedule),
      flow("image_generation_command", "Image generation", "payload_control", "camera", Internal, ImageGeneration),
      flow("image_generation", "Image generation", "camera", "storage", Internal, ImageGeneration),
      flow("raw_images", "Raw images", "storage", "image_processing", Internal, RawImages),
      flow("processed_images_downlink", "Processed images", "image_processing", "ground_station", Downlink, ProcessedImages),
      flow("housekeeping_downlink", "Housekeeping data", "storage", "ground_station", Downlink, HousekeepingData),
  };
  for (auto& f : satellite_bus_flows()) m.flows.push_back(std::move(f));
  m.trust = {
      {"ground-to-space", {"ground_station", "payload_control"},
       "Ground station commands accepted by the payload control element over the uplink"},
      {"image-acquisition-cluster", {"adcs", "propulsion_control", "sensors_actuators", "payload_control"},
       "Attitude, propulsion and sensing elements that jointly support image capture"},
  };
  return m;
}

SystemModel leo_network() {
  SystemModel m;
  m.name = "leo-network";
  m.vehicles = {
      {"ground", "Ground segment", VehicleRole::GroundSite},
      {"mothership", "Mothership", VehicleRole::Mothership},
      {"trailing_sat", "Trailing LEO satellite", VehicleRole::Satellite},
  };
  m.components = {
      {"ground_station", "Ground station", GroundStation, "ground"},
      {"mothership_obc", "Mothership onboard computer", OnboardComputer, "mothership"},
      {"orbit_determination", "Orbit determination", OrbitDetermination, "mothership"},
      {"sectoring_altitude", "Sectoring altitude calculation", SectoringAltitudeCalculation, "mothership"},
      {"maneuver_calculation", "Maneuver calculation", ManeuverCalculation, "mothership"},
      {"satellite_obc", "Satellite onboard computer", OnboardComputer, "trailing_sat"},
      {"payload_control", "Payload control", PayloadControl, "trailing_sat"},
      {"camera", "Camera", Camera, "trailing_sat"},
      {"storage", "Storage", Storage, "trailing_sat"},
      {"mothership_image_processing", "Image processing", ImageProcessing, "mothership"},
      {"mothership_storage", "Storage", Storage, "mothership"},
      {"adcs", "Attitude determination and control algorithm", AdcsAlgorithm, "trailing_sat"},
      {"propulsion_control", "Propulsion control", PropulsionControl, "trailing_sat"},
      {"sensors_actuators", "Sensors and actuators", SensorsActuators, "trailing_sat"},
  };
  m.flows = {
      flow("image_schedule", "Image schedule", "ground_station", "mothership_obc", Uplink, ImageSchedule),
      flow("orbit_determination_command", "Orbit determination command", "mothership_obc", "orbit_determination", Internal, ScheduledCommand),
      flow("sectoring_and_altitude", "Sectoring and altitude", "orbit_determination", "sectoring_altitude", Internal, OrbitalElements),
      flow("altitude_reference", "Altitude reference", "sectoring_altitude", "maneuver_calculation", Internal, AttitudeReference),
      flow("maneuver_acknowledgement", "Acknowledgement", "maneuver_calculation", "mothership_obc", Internal, Acknowledgement),
      optical(flow("imaging_time_plan", "Imaging time plan", "mothership_obc", "satellite_obc", Isl, ImagingTimePlan)),
      optical(flow("orbital_maneuver_schedule", "Orbital maneuver schedule", "mothership_obc", "satellite_obc", Isl, OrbitalManeuverSchedule)),
      flow("satellite_time_plan", "Imaging time plan", "satellite_obc", "payload_control", Internal, ImagingTimePlan),
      flow("satellite_maneuver_schedule", "Orbital maneuver schedule", "satellite_obc", "propulsion_control", Internal, OrbitalManeuverSchedule),
      flow("image_generation_command", "Image generation", "payload_control", "camera", Internal, ImageGeneration),
      flow("image_generation", "Image generation", "camera", "storage", Internal, ImageGeneration),
      optical(flow("raw_images_isl", "Raw images", "storage", "mothership_obc", Isl, RawImages)),
      optical(flow("housekeeping_isl", "Housekeeping data", "satellite_obc", "mothership_obc", Isl, HousekeepingData)),
      flow("raw_images", "Raw images", "mothership_obc", "mothership_image_processing", Internal, RawImages),
      flow("processed_images_downlink", "Processed images", "mothership_image_processing", "ground_station", Downlink, ProcessedImages),
      flow("processed_image_copy", "Processed image copy", "mothership_image_processing", "mothership_storage", Internal, ProcessedImages),
      flow("housekeeping_downlink", "Housekeeping data", "mothership_obc", "ground_station", Downlink, HousekeepingData),
  };
  for (auto& f : satellite_bus_flows()) m.flows.push_back(std::move(f));
  m.trust = {
      {"ground-to-space", {"ground_station", "payload_control"},
       "Ground station commands accepted by the payload control element over the uplink"},
      {"image-acquisition-cluster", {"adcs", "propulsion_control", "sensors_actuators", "payload_control"},
       "Attitude, propulsion and sensing elements that jointly support image capture"},
      {"mothership-trailing", {"mothership_obc", "satellite_obc"},
       "Trailing satellite relies on plans and orbital data issued by the mothership"},
  };
  return m;
}

}  // namespace

SystemModel builtin_model(std::string_view scenario) {
  if (scenario == "single-leo") return single_leo();
  if (scenario == "leo-network") return leo_network();
  throw Error(ErrorKind::UnknownScenario, "unknown built-in scenario '" + std::string(scenario) + "'");
}

// ---------------------------------------------------------------------------
// Graphviz

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const SystemModel& model) {
  std::ostringstream os;
  os << "digraph " << quoted(model.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box];\n";
  for (const auto& v : model.vehicles) {
    os << "  subgraph " << quoted("cluster_" + v.id) << " {\n";
    os << "    label=" << quoted(v.name + " (" + std::string(to_string(v.role)) + ")") << ";\n";
    for (const auto& c : model.components)
      if (c.vehicle == v.id) os << "    " << quoted(c.id) << " [label=" << quoted(c.name) << "];\n";
    os << "  }\n";
  }
  for (const auto& f : model.flows) {
    os << "  " << quoted(f.source) << " -> " << quoted(f.dest) << " [label="
       << quoted(std::string(to_string(f.payload)) + " (" + std::string(to_string(f.link)) + ")")
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace secblocks
