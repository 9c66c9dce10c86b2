#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secblocks/error.hpp"

namespace secblocks {

enum class VehicleRole { GroundSite, Satellite, Mothership };

enum class ComponentKind {
  GroundStation,
  PayloadControl,
  Camera,
  Storage,
  ImageProcessing,
  AdcsAlgorithm,
  PropulsionControl,
  SensorsActuators,
  OnboardComputer,
  OrbitDetermination,
  SectoringAltitudeCalculation,
  ManeuverCalculation,
};

enum class LinkKind { Internal, Uplink, Downlink, Isl };

enum class PayloadClass {
  ImageSchedule,
  ScheduledCommand,
  ImageGeneration,
  RawImages,
  ProcessedImages,
  HousekeepingData,
  OrbitalElements,
  AttitudeReference,
  ImagingTimePlan,
  OrbitalManeuverSchedule,
  SensorFeedback,
  ManeuverCommand,
  Acknowledgement,
};

enum class Medium { RF, FSO, Wired };

// Enumeration spellings are the CamelCase identifiers above; they are part of
// the file formats, so parsing is exact and case-sensitive.
std::string_view to_string(VehicleRole v);
std::string_view to_string(ComponentKind v);
std::string_view to_string(LinkKind v);
std::string_view to_string(PayloadClass v);
std::string_view to_string(Medium v);

std::optional<VehicleRole> parse_vehicle_role(std::string_view s);
std::optional<ComponentKind> parse_component_kind(std::string_view s);
std::optional<LinkKind> parse_link_kind(std::string_view s);
std::optional<PayloadClass> parse_payload_class(std::string_view s);
std::optional<Medium> parse_medium(std::string_view s);

inline constexpr ComponentKind kAllComponentKinds[] = {
    ComponentKind::GroundStation,      ComponentKind::PayloadControl,
    ComponentKind::Camera,             ComponentKind::Storage,
    ComponentKind::ImageProcessing,    ComponentKind::AdcsAlgorithm,
    ComponentKind::PropulsionControl,  ComponentKind::SensorsActuators,
    ComponentKind::OnboardComputer,    ComponentKind::OrbitDetermination,
    ComponentKind::SectoringAltitudeCalculation,
    ComponentKind::ManeuverCalculation,
};

inline constexpr PayloadClass kAllPayloadClasses[] = {
    PayloadClass::ImageSchedule,     PayloadClass::ScheduledCommand,
    PayloadClass::ImageGeneration,   PayloadClass::RawImages,
    PayloadClass::ProcessedImages,   PayloadClass::HousekeepingData,
    PayloadClass::OrbitalElements,   PayloadClass::AttitudeReference,
    PayloadClass::ImagingTimePlan,   PayloadClass::OrbitalManeuverSchedule,
    PayloadClass::SensorFeedback,    PayloadClass::ManeuverCommand,
    PayloadClass::Acknowledgement,
};

inline constexpr LinkKind kAllLinkKinds[] = {LinkKind::Internal, LinkKind::Uplink,
                                             LinkKind::Downlink, LinkKind::Isl};

inline bool is_space_segment(VehicleRole role) {
  return role != VehicleRole::GroundSite;
}

// Wired for Internal links, RF for everything that leaves a vehicle.
inline Medium default_medium(LinkKind link) {
  return link == LinkKind::Internal ? Medium::Wired : Medium::RF;
}

struct Vehicle {
  std::string id;
  std::string name;
  VehicleRole role = VehicleRole::Satellite;

  bool operator==(const Vehicle&) const = default;
};

struct Component {
  std::string id;
  std::string name;
  ComponentKind kind = ComponentKind::GroundStation;
  std::string vehicle;

  bool operator==(const Component&) const = default;
};

struct DataFlow {
  std::string id;
  std::string name;
  std::string source;
  std::string dest;
  LinkKind link = LinkKind::Internal;
  PayloadClass payload = PayloadClass::ImageSchedule;
  Medium medium = Medium::Wired;

  bool operator==(const DataFlow&) const = default;
};

struct TrustRelationship {
  std::string id;
  std::vector<std::string> members;
  std::string description;

  bool operator==(const TrustRelationship&) const = default;
};

struct SystemModel {
  std::string name;
  std::vector<Vehicle> vehicles;
  std::vector<Component> components;
  std::vector<DataFlow> flows;
  std::vector<TrustRelationship> trust;

  const Vehicle* find_vehicle(std::string_view id) const;
  const Component* find_component(std::string_view id) const;
  const DataFlow* find_flow(std::string_view id) const;
  const TrustRelationship* find_trust(std::string_view id) const;

  // Position of a component/flow in declaration order, or -1.
  int component_index(std::string_view id) const;
  int flow_index(std::string_view id) const;

  // Vehicle hosting the component; null when either reference dangles.
  const Vehicle* vehicle_of(std::string_view component_id) const;

  bool operator==(const SystemModel&) const = default;
};

enum class Severity { Error, Warning };

struct Violation {
  std::string code;
  std::string subject;
  std::string message;
  Severity severity = Severity::Error;

  bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant of a model. The result is empty iff the
/// model is fully consistent; entries are sorted by (code, subject).
std::vector<Violation> validate(const SystemModel& model);

bool has_errors(const std::vector<Violation>& violations);

/// Parses the JSON model format without checking cross references. Throws
/// SyntaxError for malformed documents and UnknownKind for enumeration values
/// outside the closed sets.
SystemModel parse_model_unchecked(std::string_view text);

/// Parses and validates. Error-severity violations are raised as
/// DanglingReference, DuplicateId or InvalidModel.
SystemModel parse_model(std::string_view text);

std::string serialize_model(const SystemModel& model);

SystemModel builtin_model(std::string_view scenario);

std::string to_dot(const SystemModel& model);

}  // namespace secblocks
