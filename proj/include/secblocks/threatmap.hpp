#pragma once

#include <string>
#include <vector>

#include "secblocks/catalog.hpp"
#include "secblocks/model.hpp"

namespace secblocks {

struct ThreatFinding {
  std::string technique;
  SubjectKind subject_kind = SubjectKind::Flow;
  std::string subject;
  int selector_index = 0;
  std::string rationale;

  bool operator==(const ThreatFinding&) const = default;
};

struct ThreatReport {
  std::string model_name;
  // Unique per (technique, subject); ordered by technique id, then subject
  // category (Flow, Component, TrustRelationship), then declaration order.
  std::vector<ThreatFinding> findings;

  bool operator==(const ThreatReport&) const = default;
};

ThreatReport enumerate_threats(const SystemModel& model, const Catalog& catalog);

// Lexicographically ordered, deduplicated technique ids.
std::vector<std::string> techniques_present(const ThreatReport& report);

// Display name of a finding's subject; the id when it does not resolve.
std::string subject_name(const SystemModel& model, SubjectKind kind, const std::string& id);

std::string threats_markdown(const ThreatReport& report, const Catalog& catalog);
std::string threats_json(const ThreatReport& report);

}  // namespace secblocks
