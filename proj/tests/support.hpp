#pragma once

// Generators, golden rows and small helpers shared by the unit and
// acceptance binaries.

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "secblocks/cli.hpp"
#include "secblocks/linksim.hpp"
#include "secblocks/model.hpp"

namespace testing {

using namespace secblocks;

inline std::string data_path(const std::string& rel) { return std::string(SECBLOCKS_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline std::string squash(const std::string& s) {
  std::string out;
  bool space = false;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += ch;
  }
  return out;
}

// Cells of a Markdown table, header and separator skipped.
inline std::vector<std::vector<std::string>> table_rows(const std::string& md) {
  std::vector<std::vector<std::string>> rows;
  const auto lines = lines_of(md);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.size() < 2 || line.front() != '|') continue;
    std::vector<std::string> cells;
    std::size_t start = 1;
    for (std::size_t pos; (pos = line.find('|', start)) != std::string::npos; start = pos + 1)
      cells.push_back(squash(line.substr(start, pos - start)));
    rows.push_back(cells);
  }
  return rows;
}

using Row = std::vector<std::string>;

// Transcribed attack surface rows for the single satellite, in table order.
inline const std::vector<Row> kSingleLeoSurface = {
    {"Ground station", "Processed images", "Image service", "Image product", "Processed images"},
    {"Image processing", "Raw images", "Image service", "Processed images", "Processed images"},
    {"Payload control", "Image schedule", "Scheduling service", "Scheduled commands", "Image schedule"},
    {"Camera", "Image schedule command", "Image acquisition service", "Image data", "Image generation"},
    {"Storage", "Image data", "Data storage service", "Raw images", "Image generation"},
    {"Image processing", "Raw image data", "Image processing service", "Processed images", "Processed images"},
};

// Mothership onboard computer rows; the merged cells are spelled out.
inline const std::vector<Row> kMothershipSurface = {
    {"Orbit determination", "Signal from payload control", "Commands", "Acknowledgement", "Sectoring and altitude"},
    {"Sectoring altitude calculation", "Signal from payload control", "Commands", "Acknowledgement",
     "Processed images"},
    {"Maneuver calculation", "Signal from payload control", "Commands", "Acknowledgement", "Processed images"},
    {"Image processing", "Signal from payload control", "Image data", "Acknowledgement", "Processed images"},
    {"Storage", "Signal from payload control", "Image data", "Acknowledgement", "Processed images"},
};

inline const std::vector<std::string> kEoStatements = {
    "- **EO 1:** Attitude determination and control algorithm block shall implement onboard intrusion detection "
    "mechanisms:",
    "  - **EO 1.1:** to monitor unauthorized and/or malicious access attempts;",
    "- **EO 2:** Attitude determination and control algorithm block shall implement segregation:",
    "  - **EO 2.1:** to ensure that control algorithms are isolated from other system components to prevent "
    "cross-contamination of faults;",
    "  - **EO 2.2:** to provide multi-layered security for critical algorithms.",
    "- **EO 3:** Payload control block shall establish and maintain alternate communication paths:",
    "  - **EO 3.1:** to ensure data transmission continuity in the case of primary link failure;",
    "- **EO 4:** Propulsion control block shall feature robust fault management systems:",
    "  - **EO 4.1:** to detect, analyze, and promptly rectify propulsion system anomalies;",
    "  - **EO 4.2:** to support fallback operational modes that can be activated during fault conditions to "
    "maintain basic functionality.",
};

inline std::vector<Row> sorted(std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Generators

using Rng = std::mt19937_64;

template <typename T, std::size_t N>
T pick(Rng& rng, const T (&items)[N]) {
  return items[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

inline int between(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline LinkKind segment_link(const Vehicle& src, const Vehicle& dst) {
  if (src.id == dst.id) return LinkKind::Internal;
  if (src.role == VehicleRole::GroundSite) return LinkKind::Uplink;
  if (dst.role == VehicleRole::GroundSite) return LinkKind::Downlink;
  return LinkKind::Isl;
}

// A structurally valid model with up to `max_flows` flows. Ground-to-ground
// pairs are skipped, so the flow count can come out lower.
inline SystemModel random_model(Rng& rng, int max_flows) {
  SystemModel m;
  m.name = "generated";
  m.vehicles.push_back({"ground", "Ground", VehicleRole::GroundSite});
  const int space = between(rng, 1, 3);
  for (int v = 0; v < space; ++v)
    m.vehicles.push_back({"sv" + std::to_string(v), "Space vehicle " + std::to_string(v),
                          v == 0 && coin(rng) ? VehicleRole::Mothership : VehicleRole::Satellite});

  const int components = between(rng, 2, 8);
  for (int c = 0; c < components; ++c) {
    const Vehicle& v = m.vehicles[between(rng, 0, static_cast<int>(m.vehicles.size()) - 1)];
    m.components.push_back({"c" + std::to_string(c), "Component " + std::to_string(c), pick(rng, kAllComponentKinds),
                            v.id});
  }

  const int flows = between(rng, 0, max_flows);
  for (int i = 0; i < flows; ++i) {
    const int a = between(rng, 0, components - 1);
    int b = between(rng, 0, components - 2);
    if (b >= a) ++b;
    const Component& src = m.components[a];
    const Component& dst = m.components[b];
    const Vehicle& sv = *m.find_vehicle(src.vehicle);
    const Vehicle& dv = *m.find_vehicle(dst.vehicle);
    if (sv.role == VehicleRole::GroundSite && dv.role == VehicleRole::GroundSite && sv.id != dv.id) continue;
    DataFlow f;
    f.id = "f" + std::to_string(i);
    f.name = "Flow " + std::to_string(i);
    f.source = src.id;
    f.dest = dst.id;
    f.link = segment_link(sv, dv);
    f.payload = pick(rng, kAllPayloadClasses);
    f.medium = f.link == LinkKind::Isl && coin(rng) ? Medium::FSO : default_medium(f.link);
    m.flows.push_back(f);
  }

  const int trusts = between(rng, 0, 2);
  for (int t = 0; t < trusts; ++t) {
    TrustRelationship tr;
    tr.id = "t" + std::to_string(t);
    tr.description = "generated trust";
    for (const auto& c : m.components)
      if (coin(rng)) tr.members.push_back(c.id);
    if (tr.members.size() < 2) tr.members = {m.components[0].id, m.components[1].id};
    m.trust.push_back(tr);
  }
  return m;
}

// Link kinds that break the segment rule for this flow's endpoints.
inline std::vector<LinkKind> wrong_links(const SystemModel& m, const DataFlow& f) {
  const Vehicle& sv = *m.vehicle_of(f.source);
  const Vehicle& dv = *m.vehicle_of(f.dest);
  const LinkKind right = segment_link(sv, dv);
  std::vector<LinkKind> out;
  for (auto k : kAllLinkKinds)
    if (k != right) out.push_back(k);
  return out;
}

// A scenario on one of the builtin models with random latencies, attacks and
// deployments. Every attack window lies inside the horizon.
inline ScenarioConfig random_scenario(Rng& rng) {
  ScenarioConfig c;
  const bool network = coin(rng);
  c.model = builtin_model(network ? "leo-network" : "single-leo");
  c.model_ref = network ? "builtin:leo-network" : "builtin:single-leo";
  c.horizon = between(rng, 20, 120);
  c.seed = rng();
  c.reroute_timeout = between(rng, 0, 4);
  c.fault_recovery = between(rng, 1, 6);

  const int captures = between(rng, 0, 8);
  for (int i = 0; i < captures; ++i)
    c.schedule.push_back({between(rng, 0, static_cast<int>(c.horizon) - 1), "cap-" + std::to_string(i)});

  for (const auto& f : c.model.flows) {
    if (!coin(rng, 0.4)) continue;
    LinkParams p;
    p.latency = between(rng, 1, 5);
    if (coin(rng)) p.alt_path = AltPath{between(rng, 1, 6), coin(rng) ? Medium::RF : Medium::FSO};
    c.link_params[f.id] = p;
  }

  static constexpr const char* kCms[] = {"CM0002", "CM0032", "CM0038", "CM0039", "CM0042", "CM0070"};
  const int deployments = between(rng, 0, 6);
  for (int i = 0; i < deployments; ++i) {
    const bool on_flow = coin(rng, 0.3);
    const std::string target =
        on_flow ? c.model.flows[between(rng, 0, static_cast<int>(c.model.flows.size()) - 1)].id
                : c.model.components[between(rng, 0, static_cast<int>(c.model.components.size()) - 1)].id;
    c.deployments.insert({target, pick(rng, kCms)});
  }

  static constexpr AttackMode kModes[] = {AttackMode::Drop, AttackMode::Tamper, AttackMode::Delay, AttackMode::Inject,
                                          AttackMode::Eavesdrop};
  static constexpr const char* kTechniques[] = {"IA-0009", "IA-0006", "DE-0002"};
  const int attacks = between(rng, 0, 4);
  for (int i = 0; i < attacks; ++i) {
    Attack a;
    a.technique = pick(rng, kTechniques);
    a.mode = pick(rng, kModes);
    a.target = c.model.flows[between(rng, 0, static_cast<int>(c.model.flows.size()) - 1)].id;
    a.start = between(rng, 0, static_cast<int>(c.horizon) - 1);
    a.end = between(rng, static_cast<int>(a.start) + 1, static_cast<int>(c.horizon));
    if (a.mode == AttackMode::Delay) a.delay = between(rng, 1, 10);
    if (a.mode == AttackMode::Inject) a.inject_payload = pick(rng, kAllPayloadClasses);
    if (a.mode == AttackMode::Eavesdrop) a.on_axis = coin(rng);
    c.attacks.push_back(a);
    // Often pair an attack with the countermeasure aimed at it, so defended
    // paths are exercised as well as open ones.
    if (coin(rng)) {
      if (a.mode == AttackMode::Tamper) c.deployments.insert({a.target, "CM0002"});
      if (a.mode == AttackMode::Inject) c.deployments.insert({a.target, coin(rng) ? "CM0032" : "CM0039"});
      if (a.mode == AttackMode::Drop) {
        c.deployments.insert({a.target, "CM0070"});
        auto& p = c.link_params[a.target];
        if (!p.alt_path) p.alt_path = AltPath{between(rng, 1, 6), Medium::RF};
      }
    }
  }
  return c;
}

}  // namespace testing
