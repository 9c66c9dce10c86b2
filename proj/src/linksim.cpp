#include "secblocks/linksim.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

#include "secblocks/catalog.hpp"

namespace secblocks {

std::string_view to_string(AttackMode v) {
  switch (v) {
    case AttackMode::Drop: return "Drop";
    case AttackMode::Tamper: return "Tamper";
    case AttackMode::Delay: return "Delay";
    case AttackMode::Inject: return "Inject";
    case AttackMode::Eavesdrop: return "Eavesdrop";
  }
  return "?";
}

std::optional<AttackMode> parse_attack_mode(std::string_view s) {
  for (auto m : {AttackMode::Drop, AttackMode::Tamper, AttackMode::Delay, AttackMode::Inject, AttackMode::Eavesdrop})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::string_view to_string(EventKind v) {
  switch (v) {
    case EventKind::Sent: return "Sent";
    case EventKind::Delivered: return "Delivered";
    case EventKind::Dropped: return "Dropped";
    case EventKind::Tampered: return "Tampered";
    case EventKind::Rejected: return "Rejected";
    case EventKind::Detected: return "Detected";
    case EventKind::Blocked: return "Blocked";
    case EventKind::Rerouted: return "Rerouted";
    case EventKind::Eavesdropped: return "Eavesdropped";
    case EventKind::FaultInjected: return "FaultInjected";
    case EventKind::FaultRecovered: return "FaultRecovered";
    case EventKind::Captured: return "Captured";
    case EventKind::Stored: return "Stored";
    case EventKind::Processed: return "Processed";
  }
  return "?";
}

std::map<ComponentKind, std::set<PayloadClass>> default_privileges() {
  using enum ComponentKind;
  using enum PayloadClass;
  return {
      {GroundStation, {ProcessedImages, HousekeepingData, Acknowledgement}},
      {PayloadControl, {ImageSchedule, ImagingTimePlan, SensorFeedback, Acknowledgement}},
      {Camera, {ImageGeneration}},
      {Storage, {ImageGeneration, ProcessedImages}},
      {ImageProcessing, {RawImages}},
      {AdcsAlgorithm, {SensorFeedback, AttitudeReference}},
      {PropulsionControl, {ManeuverCommand, AttitudeReference, SensorFeedback, OrbitalManeuverSchedule}},
      {SensorsActuators, {}},
      {OnboardComputer,
       {ImageSchedule, ImagingTimePlan, OrbitalManeuverSchedule, RawImages, HousekeepingData, Acknowledgement}},
      {OrbitDetermination, {ScheduledCommand}},
      {SectoringAltitudeCalculation, {OrbitalElements}},
      {ManeuverCalculation, {AttitudeReference}},
  };
}

namespace {

namespace cm {
constexpr std::string_view kComsec = "CM0002";
constexpr std::string_view kIntrusionDetection = "CM0032";
constexpr std::string_view kSegmentation = "CM0038";
constexpr std::string_view kLeastPrivilege = "CM0039";
constexpr std::string_view kFaultManagement = "CM0042";
constexpr std::string_view kAlternatePaths = "CM0070";
}  // namespace cm

// What a component emits after accepting a payload. Outputs go out on every
// outbound flow of the component that carries the output class.
std::vector<PayloadClass> reactions(ComponentKind kind, PayloadClass in) {
  using enum ComponentKind;
  using enum PayloadClass;
  switch (kind) {
    case PayloadControl:
      if (in == ImageSchedule || in == ImagingTimePlan) return {ImageGeneration, ManeuverCommand};
      break;
    case Camera:
      if (in == ImageGeneration) return {ImageGeneration};
      break;
    case Storage:
      if (in == ImageGeneration) return {RawImages, HousekeepingData};
      break;
    case ImageProcessing:
      if (in == RawImages) return {ProcessedImages};
      break;
    case OnboardComputer:
      switch (in) {
        case ImageSchedule: return {ScheduledCommand, ImagingTimePlan, OrbitalManeuverSchedule};
        case ImagingTimePlan: return {ImagingTimePlan, HousekeepingData};
        case OrbitalManeuverSchedule: return {OrbitalManeuverSchedule};
        case RawImages: return {RawImages};
        case HousekeepingData: return {HousekeepingData};
        default: break;
      }
      break;
    case OrbitDetermination:
      if (in == ScheduledCommand) return {OrbitalElements};
      break;
    case SectoringAltitudeCalculation:
      if (in == OrbitalElements) return {AttitudeReference};
      break;
    case ManeuverCalculation:
      if (in == AttitudeReference) return {Acknowledgement};
      break;
    default:
      break;
  }
  return {};
}

bool is_uplink_command(const SystemModel& model, const DataFlow& f) {
  const Component* src = model.find_component(f.source);
  return f.link == LinkKind::Uplink && f.payload == PayloadClass::ImageSchedule && src &&
         src->kind == ComponentKind::GroundStation;
}

// The workflow must carry a ground command through a camera and bring
// processed imagery back down to a ground station.
void check_topology(const SystemModel& model) {
  std::set<std::pair<std::string, PayloadClass>> seen;
  std::vector<const DataFlow*> frontier;
  for (const auto& f : model.flows)
    if (is_uplink_command(model, f)) frontier.push_back(&f);
  if (frontier.empty())
    throw Error(ErrorKind::UnsupportedTopology, "no ImageSchedule uplink from a ground station");

  bool captured = false;
  bool downlinked = false;
  while (!frontier.empty()) {
    const DataFlow* f = frontier.back();
    frontier.pop_back();
    if (!seen.emplace(f->dest, f->payload).second) continue;
    const Component* dst = model.find_component(f->dest);
    if (!dst) continue;
    if (dst->kind == ComponentKind::Camera && f->payload == PayloadClass::ImageGeneration) captured = true;
    if (captured && dst->kind == ComponentKind::GroundStation && f->link == LinkKind::Downlink &&
        f->payload == PayloadClass::ProcessedImages)
      downlinked = true;
    for (auto out : reactions(dst->kind, f->payload))
      for (const auto& g : model.flows)
        if (g.source == dst->id && g.payload == out) frontier.push_back(&g);
  }
  if (!captured || !downlinked)
    throw Error(ErrorKind::UnsupportedTopology,
                "model does not route a ground command through a camera to a processed-image downlink");
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

}  // namespace

void check_scenario(const ScenarioConfig& config) {
  const SystemModel& model = config.model;
  for (const auto& v : validate(model))
    if (v.severity == Severity::Error) config_error("model is invalid: " + v.code + " " + v.subject);

  if (config.horizon < 1) config_error("horizon must be at least 1 tick");
  if (config.reroute_timeout < 0) config_error("reroute_timeout must be non-negative");
  if (config.fault_recovery < 1) config_error("fault_recovery must be at least 1 tick");

  std::set<std::string> commands;
  for (const auto& s : config.schedule) {
    if (s.tick < 0 || s.tick >= config.horizon)
      config_error("capture '" + s.command + "' scheduled outside [0, horizon)");
    if (s.command.empty() || !commands.insert(s.command).second)
      config_error("capture command ids must be non-empty and unique ('" + s.command + "')");
  }

  for (const auto& [flow, params] : config.link_params) {
    if (!model.find_flow(flow)) config_error("link_params names unknown flow '" + flow + "'");
    if (params.latency < 1) config_error("latency of '" + flow + "' must be at least 1 tick");
    if (params.alt_path && params.alt_path->latency < 1)
      config_error("alternate path latency of '" + flow + "' must be at least 1 tick");
  }

  for (const auto& d : config.deployments) {
    if (!model.find_component(d.target) && !model.find_flow(d.target))
      config_error("deployment target '" + d.target + "' is neither a component nor a flow");
    if (!is_countermeasure_id(d.countermeasure))
      config_error("deployment countermeasure '" + d.countermeasure + "' is not a countermeasure id");
  }

  for (const auto& a : config.attacks) {
    if (!is_technique_id(a.technique)) config_error("attack technique '" + a.technique + "' is not a technique id");
    const DataFlow* f = model.find_flow(a.target);
    if (!f) config_error("attack targets unknown flow '" + a.target + "'");
    if (a.start < 0 || a.start >= a.end || a.end > config.horizon)
      config_error("attack window on '" + a.target + "' must satisfy 0 <= start < end <= horizon");
    switch (a.mode) {
      case AttackMode::Delay:
        if (!a.delay || *a.delay < 1) config_error("Delay attack on '" + a.target + "' needs delay >= 1");
        break;
      case AttackMode::Inject:
        if (!a.inject_payload) config_error("Inject attack on '" + a.target + "' needs inject_payload");
        break;
      case AttackMode::Eavesdrop:
        if (f->medium == Medium::FSO && !a.on_axis)
          config_error("Eavesdrop attack on FSO flow '" + a.target + "' needs on_axis");
        break;
      default:
        break;
    }
  }

  check_topology(model);
}

namespace {

struct Message {
  std::string id;
  int flow = 0;
  PayloadClass payload = PayloadClass::ImageSchedule;
  Tick sent = 0;
  Tick due = 0;
  bool integrity = true;
  bool injected = false;
  bool alternate = false;
  bool dropped = false;
  int capture = -1;  // index into the schedule; -1 for adversary traffic
};

enum class Action { Arrival, Capture, Inject, Reroute, Recover };

struct Scheduled {
  Tick tick;
  std::uint64_t seq;
  Action action;
  int index;  // message, schedule entry, attack, or component index

  bool operator>(const Scheduled& o) const { return std::tie(tick, seq) > std::tie(o.tick, o.seq); }
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config)
      : config_(config),
        model_(config.model),
        privileges_(config.privileges.empty() ? default_privileges() : config.privileges) {
    result_.seed = config.seed;
    for (const auto& f : model_.flows) result_.flows[f.id] = FlowTally{};
    for (const auto& v : model_.vehicles) misaligned_[v.id] = false;
  }

  SimResult run() && {
    for (std::size_t i = 0; i < config_.schedule.size(); ++i)
      push(config_.schedule[i].tick, Action::Capture, static_cast<int>(i));
    for (std::size_t a = 0; a < config_.attacks.size(); ++a) {
      const Attack& attack = config_.attacks[a];
      if (attack.mode != AttackMode::Inject) continue;
      for (Tick t = attack.start; t < attack.end; ++t) push(t, Action::Inject, static_cast<int>(a));
    }

    while (!queue_.empty() && queue_.top().tick < config_.horizon) {
      const Scheduled s = queue_.top();
      queue_.pop();
      now_ = s.tick;
      switch (s.action) {
        case Action::Arrival: arrive(s.index); break;
        case Action::Capture: start_capture(s.index); break;
        case Action::Inject: inject(s.index); break;
        case Action::Reroute: reroute(s.index); break;
        case Action::Recover: recover(s.index); break;
      }
    }

    // Whatever remains queued as an arrival is still in transit.
    std::vector<Scheduled> rest;
    while (!queue_.empty()) {
      rest.push_back(queue_.top());
      queue_.pop();
    }
    for (const auto& s : rest) {
      if (s.action != Action::Arrival) continue;
      const Message& m = messages_[s.index];
      result_.in_flight.push_back(m.id);
      ++tally(m).in_flight;
    }

    SimMetrics& metrics = result_.metrics;
    metrics.captured = static_cast<std::int64_t>(captured_.size());
    metrics.delivered = static_cast<std::int64_t>(delivered_.size());
    if (metrics.delivered > 0) {
      const std::int64_t g = std::gcd(latency_sum_, metrics.delivered);
      metrics.mean_delivery_latency = {latency_sum_ / g, metrics.delivered / g};
    }
    return std::move(result_);
  }

 private:
  void push(Tick tick, Action action, int index) { queue_.push({tick, seq_++, action, index}); }

  void log(EventKind kind, const std::string& message, const std::string& flow, const std::string& component,
           std::string detail = {}) {
    result_.events.push_back({now_, kind, message, flow, component, std::move(detail)});
  }

  const DataFlow& flow_of(const Message& m) const { return model_.flows[m.flow]; }
  FlowTally& tally(const Message& m) { return result_.flows[flow_of(m).id]; }

  bool deployed(const std::string& component, const DataFlow& flow, std::string_view countermeasure) const {
    const std::string cm(countermeasure);
    return config_.deployments.count({component, cm}) || config_.deployments.count({flow.id, cm});
  }

  LinkParams params(const DataFlow& f) const {
    auto it = config_.link_params.find(f.id);
    return it == config_.link_params.end() ? LinkParams{} : it->second;
  }

  static bool overlaps(const Attack& a, Tick from, Tick to) { return a.start < to && from < a.end; }

  void send(int flow_index, PayloadClass payload, bool injected, int capture, bool alternate, bool integrity = true) {
    const DataFlow& f = model_.flows[flow_index];
    const LinkParams lp = params(f);

    Message m;
    m.id = "m" + std::to_string(messages_.size() + 1);
    m.flow = flow_index;
    m.payload = payload;
    m.sent = now_;
    m.injected = injected;
    m.alternate = alternate;
    m.capture = capture;
    m.integrity = integrity;
    m.due = now_ + (alternate ? lp.alt_path->latency : lp.latency);

    std::string detail = alternate ? "alternate" : (injected ? "injected" : "");
    log(EventKind::Sent, m.id, f.id, f.source, detail);
    ++result_.flows[f.id].sent;

    // Alternate-path transits are out of reach of attacks on the primary flow.
    if (!alternate) {
      const Tick base_due = m.due;
      for (const auto& a : config_.attacks)
        if (a.target == f.id && a.mode == AttackMode::Delay && overlaps(a, m.sent, base_due)) m.due += *a.delay;
      for (const auto& a : config_.attacks) {
        if (a.target != f.id || a.mode != AttackMode::Eavesdrop || !overlaps(a, m.sent, m.due)) continue;
        const bool exposed = f.medium == Medium::RF || (f.medium == Medium::FSO && a.on_axis.value_or(false));
        if (exposed) {
          log(EventKind::Eavesdropped, m.id, f.id, "", a.technique);
          ++result_.metrics.confidentiality_breaches;
        }
      }
      // Tampering applies even to a message that is then lost, so a rerouted
      // copy carries the altered content.
      for (const auto& a : config_.attacks) {
        if (a.target == f.id && a.mode == AttackMode::Tamper && overlaps(a, m.sent, m.due) && m.integrity) {
          m.integrity = false;
          log(EventKind::Tampered, m.id, f.id, "", a.technique);
        }
      }
      for (const auto& a : config_.attacks)
        if (a.target == f.id && a.mode == AttackMode::Drop && overlaps(a, m.sent, m.due)) m.dropped = true;
    }

    messages_.push_back(std::move(m));
    push(messages_.back().due, Action::Arrival, static_cast<int>(messages_.size() - 1));
  }

  void emit(const Component& from, PayloadClass payload, bool injected, int capture) {
    for (std::size_t i = 0; i < model_.flows.size(); ++i) {
      const DataFlow& f = model_.flows[i];
      if (f.source == from.id && f.payload == payload) send(static_cast<int>(i), payload, injected, capture, false);
    }
  }

  void start_capture(int index) {
    ++result_.metrics.commanded;
    for (std::size_t i = 0; i < model_.flows.size(); ++i)
      if (is_uplink_command(model_, model_.flows[i]))
        send(static_cast<int>(i), PayloadClass::ImageSchedule, false, index, false);
  }

  void inject(int attack_index) {
    const Attack& a = config_.attacks[attack_index];
    send(model_.flow_index(a.target), *a.inject_payload, true, -1, false);
  }

  void reroute(int message_index) {
    const Message original = messages_[message_index];
    const DataFlow& f = flow_of(original);
    log(EventKind::Rerouted, original.id, f.id, f.source);
    send(original.flow, original.payload, original.injected, original.capture, true, original.integrity);
  }

  void recover(int component_index) {
    const Component& c = model_.components[component_index];
    if (c.kind == ComponentKind::PropulsionControl) misaligned_[c.vehicle] = false;
    log(EventKind::FaultRecovered, "", "", c.id);
  }

  void arrive(int message_index) {
    const Message m = messages_[message_index];
    const DataFlow& f = flow_of(m);
    const int receiver_index = model_.component_index(f.dest);
    const Component& receiver = model_.components[receiver_index];

    if (m.dropped) {
      log(EventKind::Dropped, m.id, f.id, f.dest);
      ++tally(m).dropped;
      if (deployed(f.source, f, cm::kAlternatePaths) && params(f).alt_path)
        push(now_ + config_.reroute_timeout, Action::Reroute, message_index);
      return;
    }

    if (m.injected) {
      if (deployed(receiver.id, f, cm::kIntrusionDetection)) {
        log(EventKind::Detected, m.id, f.id, receiver.id);
        log(EventKind::Blocked, m.id, f.id, receiver.id);
        ++result_.metrics.detections;
        ++result_.metrics.blocked;
        ++tally(m).blocked;
        return;
      }
      if (deployed(receiver.id, f, cm::kLeastPrivilege) && !privileges_[receiver.kind].count(m.payload)) {
        log(EventKind::Blocked, m.id, f.id, receiver.id, "privilege");
        ++result_.metrics.blocked;
        ++tally(m).blocked;
        return;
      }
    } else if (!m.integrity && deployed(receiver.id, f, cm::kComsec)) {
      log(EventKind::Rejected, m.id, f.id, receiver.id);
      log(EventKind::Detected, m.id, f.id, receiver.id);
      ++result_.metrics.detections;
      ++tally(m).rejected;
      return;
    }

    log(EventKind::Delivered, m.id, f.id, receiver.id);
    ++tally(m).delivered;
    if (!m.integrity) ++result_.metrics.integrity_violations_accepted;
    if (m.injected || !m.integrity) execute_hostile(receiver_index, m);
    handle(receiver, m);
  }

  void execute_hostile(int component_index, const Message& m) {
    const Component& c = model_.components[component_index];
    const DataFlow& f = flow_of(m);
    ++result_.metrics.faults;
    const bool contained = deployed(c.id, f, cm::kSegmentation);
    const bool steering = m.payload == PayloadClass::ManeuverCommand ||
                          m.payload == PayloadClass::OrbitalManeuverSchedule;
    std::string detail;
    if (c.kind == ComponentKind::PropulsionControl && steering && !contained) {
      misaligned_[c.vehicle] = true;
      detail = "misaligned";
    }
    log(EventKind::FaultInjected, m.id, f.id, c.id, detail);
    if (deployed(c.id, f, cm::kFaultManagement)) push(now_ + config_.fault_recovery, Action::Recover, component_index);
  }

  void handle(const Component& c, const Message& m) {
    const DataFlow& f = flow_of(m);
    const bool legitimate = !m.injected && m.capture >= 0;
    using enum ComponentKind;
    using enum PayloadClass;

    if (c.kind == Camera && m.payload == ImageGeneration) {
      const bool degraded = misaligned_[c.vehicle];
      log(EventKind::Captured, m.id, f.id, c.id, degraded ? "degraded" : "");
      if (legitimate && captured_.insert(m.capture).second && degraded) ++result_.metrics.degraded_captures;
    } else if (c.kind == Storage && (m.payload == ImageGeneration || m.payload == ProcessedImages)) {
      log(EventKind::Stored, m.id, f.id, c.id);
    } else if (c.kind == ImageProcessing && m.payload == RawImages) {
      log(EventKind::Processed, m.id, f.id, c.id);
    } else if (c.kind == GroundStation && m.payload == ProcessedImages && legitimate) {
      if (delivered_.insert(m.capture).second) latency_sum_ += now_ - config_.schedule[m.capture].tick;
    }

    // Segmentation keeps adversary-originated work from leaving the component.
    if (m.injected && deployed(c.id, f, cm::kSegmentation)) return;
    for (auto out : reactions(c.kind, m.payload)) emit(c, out, m.injected, m.capture);
  }

  const ScenarioConfig& config_;
  const SystemModel& model_;
  std::map<ComponentKind, std::set<PayloadClass>> privileges_;
  std::map<std::string, bool> misaligned_;

  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  Tick now_ = 0;
  std::vector<Message> messages_;
  std::set<int> captured_;
  std::set<int> delivered_;
  std::int64_t latency_sum_ = 0;
  SimResult result_;
};

}  // namespace

SimResult run_simulation(const ScenarioConfig& config) {
  check_scenario(config);
  return Simulation(config).run();
}

SimResult replay(const ScenarioConfig& config) { return run_simulation(config); }

ScenarioConfig downlink_denial_scenario(bool alternate_path) {
  ScenarioConfig c;
  c.model = builtin_model("single-leo");
  c.model_ref = "builtin:single-leo";
  c.horizon = 100;
  for (int i = 0; i < 10; ++i) {
    std::string id = "capture-" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1);
    c.schedule.push_back({static_cast<Tick>(i * 5), id});
  }
  c.link_params["image_schedule"] = {2, std::nullopt};
  c.link_params["processed_images_downlink"] = {2, std::nullopt};
  if (alternate_path) {
    c.link_params["processed_images_downlink"].alt_path = AltPath{3, Medium::RF};
    c.deployments.insert({"image_processing", "CM0070"});
  }
  c.attacks.push_back({"DE-0002", AttackMode::Drop, "processed_images_downlink", 0, 100, {}, {}, {}});
  c.reroute_timeout = 2;
  c.fault_recovery = 5;
  c.seed = 7;
  return c;
}

}  // namespace secblocks
