#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace secblocks;
using namespace testing;

namespace {

ScenarioConfig ten_captures(const std::string& model = "single-leo") {
  ScenarioConfig c;
  c.model = builtin_model(model);
  c.model_ref = "builtin:" + model;
  c.horizon = 100;
  for (int i = 0; i < 10; ++i) c.schedule.push_back({i * 5, "capture-" + std::to_string(i)});
  c.link_params["image_schedule"] = {2, std::nullopt};
  return c;
}

std::size_t count(const SimResult& r, EventKind kind, const std::string& flow = "") {
  std::size_t n = 0;
  for (const auto& e : r.events) n += e.kind == kind && (flow.empty() || e.flow == flow);
  return n;
}

ErrorKind config_error(const ScenarioConfig& c) {
  try {
    run_simulation(c);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("scenario accepted");
  return ErrorKind::Syntax;
}

void check_conservation(const SimResult& r, const SystemModel& model) {
  CHECK(conservation_failures(r, model).empty());
}

}  // namespace

TEST_CASE("no-adversary baseline delivers everything") {
  const SimResult r = run_simulation(ten_captures());
  CHECK(r.metrics.commanded == 10);
  CHECK(r.metrics.captured == 10);
  CHECK(r.metrics.delivered == 10);
  CHECK(r.metrics.detections == 0);
  CHECK(r.metrics.integrity_violations_accepted == 0);
  // uplink 2, then four single-tick hops to the ground
  CHECK(r.metrics.mean_delivery_latency == Rational{6, 1});
}

TEST_CASE("downlink denial with and without alternate paths") {
  const SimResult denied = run_simulation(downlink_denial_scenario(false));
  CHECK(denied.metrics.delivered == 0);
  CHECK(count(denied, EventKind::Rerouted) == 0);

  const SimResult rerouted = run_simulation(downlink_denial_scenario(true));
  CHECK(rerouted.metrics.delivered == 10);
  CHECK(count(rerouted, EventKind::Rerouted) == 10);
  // 2 uplink + 3 internal hops + 2 primary transit + 2 timeout + 3 alternate
  CHECK(rerouted.metrics.mean_delivery_latency == Rational{12, 1});

  // Every downlink delivery is preceded by a Rerouted event for that message.
  std::map<std::string, std::string> origin;  // alternate copy -> original
  std::string last_rerouted;
  for (const auto& e : rerouted.events) {
    if (e.kind == EventKind::Rerouted) last_rerouted = e.message;
    if (e.kind == EventKind::Sent && e.detail == "alternate") origin[e.message] = last_rerouted;
    if (e.kind == EventKind::Delivered && e.flow == "processed_images_downlink") {
      REQUIRE(origin.count(e.message));
      CHECK_FALSE(origin[e.message].empty());
    }
  }
}

TEST_CASE("shipped scenario files match the builtin demonstration") {
  const auto read = [](const std::string& p) { return slurp(data_path("models/" + p)); };
  const ScenarioConfig plain = load_scenario(slurp(data_path("scenarios/downlink-denial.json")), read);
  const ScenarioConfig alt = load_scenario(slurp(data_path("scenarios/downlink-denial-cm0070.json")), read);
  CHECK(serialize_scenario(plain) == serialize_scenario(downlink_denial_scenario(false)));
  CHECK(serialize_scenario(alt) == serialize_scenario(downlink_denial_scenario(true)));
  CHECK(run_simulation(plain) == run_simulation(downlink_denial_scenario(false)));
}

TEST_CASE("uplink tamper is rejected under COMSEC") {
  ScenarioConfig c = ten_captures();
  c.deployments.insert({"payload_control", "CM0002"});
  c.attacks.push_back({"IA-0009", AttackMode::Tamper, "image_schedule", 5, 15, {}, {}, {}});
  const SimResult r = run_simulation(c);

  // Captures at 5 and 10 are in transit during the window; 0 lands at 2 and 15 starts after.
  std::set<std::string> in_window;
  for (const auto& e : r.events)
    if (e.kind == EventKind::Sent && e.flow == "image_schedule" && e.tick + 2 > 5 && e.tick < 15)
      in_window.insert(e.message);
  CHECK(in_window.size() == 2);
  CHECK(count(r, EventKind::Rejected, "image_schedule") == in_window.size());
  for (const auto& e : r.events)
    if (e.kind == EventKind::Delivered && e.flow == "image_schedule") CHECK_FALSE(in_window.count(e.message));
  CHECK(r.metrics.integrity_violations_accepted == 0);
  CHECK(r.metrics.delivered == 8);

  c.deployments.clear();
  const SimResult open = run_simulation(c);
  CHECK(open.metrics.integrity_violations_accepted == 2);
  CHECK(open.metrics.faults == 2);
}

TEST_CASE("eavesdropping depends on the medium") {
  ScenarioConfig c = ten_captures("leo-network");
  c.attacks.push_back({"IA-0009", AttackMode::Eavesdrop, "imaging_time_plan", 0, 100, {}, false, {}});
  CHECK(run_simulation(c).metrics.confidentiality_breaches == 0);
  c.attacks[0].on_axis = true;
  CHECK(run_simulation(c).metrics.confidentiality_breaches == 10);

  ScenarioConfig rf = ten_captures();
  rf.attacks.push_back({"IA-0009", AttackMode::Eavesdrop, "image_schedule", 0, 100, {}, {}, {}});
  CHECK(run_simulation(rf).metrics.confidentiality_breaches == 10);
  CHECK(run_simulation(rf).metrics.delivered == 10);
}

TEST_CASE("delay adds its ticks to transits that overlap the window") {
  ScenarioConfig c = ten_captures();
  c.attacks.push_back({"DE-0002", AttackMode::Delay, "processed_images_downlink", 0, 100, 4, {}, {}});
  const SimResult r = run_simulation(c);
  CHECK(r.metrics.delivered == 10);
  CHECK(r.metrics.mean_delivery_latency == Rational{10, 1});
}

TEST_CASE("injected commands and the onboard countermeasures") {
  ScenarioConfig c = ten_captures();
  c.attacks.push_back({"IA-0009", AttackMode::Inject, "maneuver_command", 0, 3, {}, {}, PayloadClass::ManeuverCommand});

  SUBCASE("undefended: propulsion misaligns and captures degrade") {
    const SimResult r = run_simulation(c);
    CHECK(r.metrics.faults == 3);
    CHECK(r.metrics.degraded_captures > 0);
  }
  SUBCASE("intrusion detection blocks every injection") {
    c.deployments.insert({"propulsion_control", "CM0032"});
    const SimResult r = run_simulation(c);
    CHECK(r.metrics.detections == 3);
    CHECK(r.metrics.blocked == 3);
    CHECK(r.metrics.faults == 0);
  }
  SUBCASE("least privilege admits maneuver commands to propulsion") {
    c.deployments.insert({"propulsion_control", "CM0039"});
    CHECK(run_simulation(c).metrics.blocked == 0);
    c.attacks[0].inject_payload = PayloadClass::RawImages;
    CHECK(run_simulation(c).metrics.blocked == 3);
  }
  SUBCASE("segmentation contains the fault") {
    c.deployments.insert({"propulsion_control", "CM0038"});
    const SimResult r = run_simulation(c);
    CHECK(r.metrics.faults == 3);
    CHECK(r.metrics.degraded_captures == 0);
  }
  SUBCASE("fault management recovers alignment") {
    c.fault_recovery = 5;
    c.deployments.insert({"propulsion_control", "CM0042"});
    const SimResult r = run_simulation(c);
    CHECK(count(r, EventKind::FaultRecovered) == 3);
    ScenarioConfig open = c;
    open.deployments.clear();
    CHECK(r.metrics.degraded_captures < run_simulation(open).metrics.degraded_captures);
  }
}

TEST_CASE("seed and horizon do not change a quiescent run") {
  ScenarioConfig a = ten_captures();
  a.seed = 1;
  ScenarioConfig b = a;
  b.seed = 2;
  CHECK(run_simulation(a).metrics == run_simulation(b).metrics);
  b.horizon = 400;
  CHECK(run_simulation(a).metrics == run_simulation(b).metrics);
  CHECK(result_json(run_simulation(a)) == result_json(replay(a)));
}

TEST_CASE("messages pending at the horizon are in flight") {
  ScenarioConfig c = ten_captures();
  c.horizon = 47;
  const SimResult r = run_simulation(c);
  CHECK_FALSE(r.in_flight.empty());
  check_conservation(r, c.model);
}

TEST_CASE("configuration errors") {
  ScenarioConfig c = ten_captures();
  SUBCASE("horizon") { c.horizon = 0; }
  SUBCASE("capture outside horizon") { c.schedule.push_back({100, "late"}); }
  SUBCASE("duplicate capture id") { c.schedule.push_back({1, "capture-0"}); }
  SUBCASE("unknown flow in link params") { c.link_params["nowhere"] = {}; }
  SUBCASE("zero latency") { c.link_params["image_schedule"].latency = 0; }
  SUBCASE("unknown deployment target") { c.deployments.insert({"nowhere", "CM0002"}); }
  SUBCASE("bad countermeasure id") { c.deployments.insert({"camera", "CM2"}); }
  SUBCASE("window past horizon") {
    c.attacks.push_back({"DE-0002", AttackMode::Drop, "processed_images_downlink", 0, 101, {}, {}, {}});
  }
  SUBCASE("empty window") {
    c.attacks.push_back({"DE-0002", AttackMode::Drop, "processed_images_downlink", 5, 5, {}, {}, {}});
  }
  SUBCASE("delay without ticks") {
    c.attacks.push_back({"DE-0002", AttackMode::Delay, "processed_images_downlink", 0, 5, {}, {}, {}});
  }
  SUBCASE("inject without payload") {
    c.attacks.push_back({"IA-0009", AttackMode::Inject, "image_schedule", 0, 5, {}, {}, {}});
  }
  SUBCASE("FSO eavesdrop without geometry") {
    c = ten_captures("leo-network");
    c.attacks.push_back({"IA-0009", AttackMode::Eavesdrop, "imaging_time_plan", 0, 5, {}, {}, {}});
  }
  CHECK(config_error(c) == ErrorKind::Config);
}

TEST_CASE("a model without the imaging workflow is unsupported") {
  ScenarioConfig c = ten_captures();
  c.link_params.clear();
  c.model.flows.erase(c.model.flows.begin());  // the uplink
  c.model.trust.clear();
  CHECK(config_error(c) == ErrorKind::UnsupportedTopology);
}

TEST_CASE("scenario file round trip") {
  Rng rng(51);
  for (int i = 0; i < 30; ++i) {
    const ScenarioConfig c = random_scenario(rng);
    const std::string text = serialize_scenario(c);
    const ScenarioConfig back = load_scenario(text, [](const std::string&) -> std::string { return ""; });
    CHECK(serialize_scenario(back) == text);
  }
}

TEST_CASE("scenario with an inline model and a relative model path") {
  ScenarioConfig c = ten_captures();
  c.model_ref.clear();
  const std::string inline_text = serialize_scenario(c);
  CHECK(run_simulation(load_scenario(inline_text, {})) == run_simulation(c));

  c.model_ref = "single.json";
  const std::string text = serialize_scenario(c);
  const auto loaded = load_scenario(text, [](const std::string& p) {
    CHECK(p == "single.json");
    return serialize_model(builtin_model("single-leo"));
  });
  CHECK(loaded.model == c.model);
}

TEST_CASE("event lines are compact JSON with empty fields omitted") {
  const Event e{3, EventKind::Dropped, "m4", "processed_images_downlink", "ground_station", ""};
  CHECK(event_json_line(e) ==
        R"({"tick":3,"kind":"Dropped","message":"m4","flow":"processed_images_downlink","component":"ground_station"})");
}

TEST_CASE("property: conservation over generated scenarios") {
  Rng rng(61);
  int dropped = 0, rejected = 0, blocked = 0, pending = 0;
  for (int i = 0; i < 150; ++i) {
    const ScenarioConfig c = random_scenario(rng);
    CAPTURE(serialize_scenario(c));
    const SimResult r = run_simulation(c);
    check_conservation(r, c.model);
    for (const auto& [id, t] : r.flows) {
      dropped += t.dropped > 0;
      rejected += t.rejected > 0;
      blocked += t.blocked > 0;
      pending += t.in_flight > 0;
    }
  }
  // Every term of the balance is exercised somewhere.
  CHECK(dropped > 0);
  CHECK(rejected > 0);
  CHECK(blocked > 0);
  CHECK(pending > 0);
}

TEST_CASE("property: enlarging a drop window never increases deliveries") {
  Rng rng(62);
  int strict = 0;
  for (int i = 0; i < 100; ++i) {
    ScenarioConfig small = random_scenario(rng);
    ScenarioConfig large = small;
    const auto [inner, outer] = nested_drops(rng, small);
    small.attacks.push_back(inner);
    large.attacks.push_back(outer);
    CAPTURE(serialize_scenario(large));
    const auto lost = run_simulation(large).metrics.delivered;
    const auto kept = run_simulation(small).metrics.delivered;
    CHECK(lost <= kept);
    strict += lost < kept;
  }
  // Guard against a vacuous generator.
  CHECK(strict > 0);
}

TEST_CASE("property: countermeasure dominance") {
  Rng rng(63);
  for (int i = 0; i < 100; ++i) {
    const ScenarioConfig base = random_scenario(rng);
    const SimMetrics before = run_simulation(base).metrics;
    CAPTURE(serialize_scenario(base));

    ScenarioConfig comsec = base;
    for (const auto& c : base.model.components) comsec.deployments.insert({c.id, "CM0002"});
    CHECK(run_simulation(comsec).metrics.integrity_violations_accepted <= before.integrity_violations_accepted);

    ScenarioConfig one = base;
    one.deployments.insert({base.model.components[between(rng, 0, 5)].id, "CM0002"});
    CHECK(run_simulation(one).metrics.integrity_violations_accepted <= before.integrity_violations_accepted);

    ScenarioConfig paths = base;
    for (const auto& f : base.model.flows) {
      auto& p = paths.link_params[f.id];
      if (!p.alt_path) p.alt_path = AltPath{between(rng, 1, 4), Medium::RF};
    }
    const SimMetrics with_alt = run_simulation(paths).metrics;
    for (const auto& c : base.model.components) paths.deployments.insert({c.id, "CM0070"});
    CHECK(run_simulation(paths).metrics.delivered >= with_alt.delivered);
  }
}

TEST_CASE("property: determinism and baseline soundness") {
  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    ScenarioConfig c = random_scenario(rng);
    CHECK(result_json(run_simulation(c)) == result_json(run_simulation(c)));

    c.attacks.clear();
    c.horizon = 400;
    const SimMetrics m = run_simulation(c).metrics;
    CAPTURE(serialize_scenario(c));
    CHECK(m.commanded == static_cast<std::int64_t>(c.schedule.size()));
    CHECK(m.captured == m.commanded);
    CHECK(m.delivered == m.captured);
    CHECK(m.detections == 0);
    CHECK(m.blocked == 0);
    CHECK(m.integrity_violations_accepted == 0);
    CHECK(m.confidentiality_breaches == 0);
    CHECK(m.faults == 0);
    CHECK(m.degraded_captures == 0);
  }
}
