#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secblocks/model.hpp"

namespace secblocks {

using Tick = std::int64_t;

struct AltPath {
  Tick latency = 1;
  Medium medium = Medium::RF;

  bool operator==(const AltPath&) const = default;
};

struct LinkParams {
  Tick latency = 1;
  std::optional<AltPath> alt_path;

  bool operator==(const LinkParams&) const = default;
};

enum class AttackMode { Drop, Tamper, Delay, Inject, Eavesdrop };

std::string_view to_string(AttackMode v);
std::optional<AttackMode> parse_attack_mode(std::string_view s);

struct Attack {
  std::string technique;
  AttackMode mode = AttackMode::Drop;
  std::string target;  // flow id
  Tick start = 0;      // window is [start, end)
  Tick end = 0;
  std::optional<Tick> delay;                  // Delay
  std::optional<bool> on_axis;                // Eavesdrop on FSO
  std::optional<PayloadClass> inject_payload;  // Inject

  bool operator==(const Attack&) const = default;
};

struct ScheduledCapture {
  Tick tick = 0;
  std::string command;

  bool operator==(const ScheduledCapture&) const = default;
};

// A countermeasure deployed on a component, or on a flow (then it applies to
// both endpoints for traffic on that flow only).
struct Deployment {
  std::string target;
  std::string countermeasure;

  auto operator<=>(const Deployment&) const = default;
};

struct ScenarioConfig {
  SystemModel model;
  std::string model_ref;  // "builtin:<name>" or a path, as written in the file
  Tick horizon = 100;
  std::vector<ScheduledCapture> schedule;
  std::map<std::string, LinkParams> link_params;  // flows not listed: latency 1
  std::set<Deployment> deployments;
  std::vector<Attack> attacks;
  Tick reroute_timeout = 1;
  Tick fault_recovery = 1;
  std::uint64_t seed = 0;
  // Payload classes each component kind may accept under least privilege.
  // Empty: use default_privileges().
  std::map<ComponentKind, std::set<PayloadClass>> privileges;
};

std::map<ComponentKind, std::set<PayloadClass>> default_privileges();

enum class EventKind {
  Sent,
  Delivered,
  Dropped,
  Tampered,
  Rejected,
  Detected,
  Blocked,
  Rerouted,
  Eavesdropped,
  FaultInjected,
  FaultRecovered,
  Captured,
  Stored,
  Processed,
};

std::string_view to_string(EventKind v);

struct Event {
  Tick tick = 0;
  EventKind kind = EventKind::Sent;
  std::string message;    // empty for component-only events
  std::string flow;
  std::string component;
  std::string detail;

  bool operator==(const Event&) const = default;
};

// Exact rational so serialized output never depends on float formatting.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator==(const Rational&) const = default;
};

struct SimMetrics {
  std::int64_t commanded = 0;
  std::int64_t captured = 0;
  std::int64_t delivered = 0;
  Rational mean_delivery_latency;
  std::int64_t detections = 0;
  std::int64_t blocked = 0;
  std::int64_t integrity_violations_accepted = 0;
  std::int64_t confidentiality_breaches = 0;
  std::int64_t degraded_captures = 0;
  std::int64_t faults = 0;

  bool operator==(const SimMetrics&) const = default;
};

struct FlowTally {
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t rejected = 0;
  std::int64_t blocked = 0;
  std::int64_t in_flight = 0;

  bool operator==(const FlowTally&) const = default;
};

struct SimResult {
  std::uint64_t seed = 0;
  std::vector<Event> events;
  SimMetrics metrics;
  std::map<std::string, FlowTally> flows;   // every flow of the model
  std::vector<std::string> in_flight;        // message ids pending at horizon

  bool operator==(const SimResult&) const = default;
};

/// Throws ConfigError or UnsupportedTopology.
void check_scenario(const ScenarioConfig& config);

SimResult run_simulation(const ScenarioConfig& config);

// Same as run_simulation; the named entry point for determinism checks.
SimResult replay(const ScenarioConfig& config);

// `read_file` maps a non-builtin model reference (a path) to its contents.
ScenarioConfig load_scenario(std::string_view text,
                             const std::function<std::string(const std::string&)>& read_file);
std::string serialize_scenario(const ScenarioConfig& config);

std::string event_json_line(const Event& e);
std::string events_jsonl(const SimResult& result);
std::string metrics_json(const SimResult& result);
std::string result_json(const SimResult& result);
std::string metrics_markdown(const SimResult& result);

/// Ten captures on single-leo with a Drop on the processed-image downlink
/// spanning the whole horizon; with `alternate_path`, CM0070 is deployed on
/// the image processing element and the downlink has an alternate path.
ScenarioConfig downlink_denial_scenario(bool alternate_path);

}  // namespace secblocks
