#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secblocks/model.hpp"

namespace secblocks {

enum class SubjectKind { Flow, Component, TrustRelationship };

std::string_view to_string(SubjectKind v);
std::optional<SubjectKind> parse_subject_kind(std::string_view s);

// A machine-checkable applicability rule. Absent constraints are vacuous.
// Flow and Component selectors must carry at least one constraint; a
// TrustRelationship selector may be bare and then matches every relationship.
struct Selector {
  SubjectKind target = SubjectKind::Flow;
  std::optional<std::vector<LinkKind>> link_kinds;
  std::optional<std::vector<PayloadClass>> payload_classes;
  std::optional<std::vector<ComponentKind>> component_kinds;
  std::optional<bool> crosses_vehicle_boundary;
  // "{subject}" is replaced by the matched subject's display name.
  std::string description;

  bool operator==(const Selector&) const = default;
};

struct Technique {
  std::string id;
  std::string name;
  std::string description;
  std::vector<Selector> selectors;

  bool operator==(const Technique&) const = default;
};

struct Countermeasure {
  std::string id;
  std::string name;
  std::string description;
  std::string action_phrase;
  std::vector<std::string> rationale_clauses;

  bool operator==(const Countermeasure&) const = default;
};

struct Catalog {
  std::vector<Technique> techniques;
  std::vector<Countermeasure> countermeasures;
  // Ordered: technique id -> countermeasure ids.
  std::vector<std::pair<std::string, std::vector<std::string>>> mappings;

  const Technique* find_technique(std::string_view id) const;
  const Countermeasure* find_countermeasure(std::string_view id) const;
  // Position in declaration order, or -1.
  int countermeasure_index(std::string_view id) const;
  // Empty when the technique has no mapping entry.
  const std::vector<std::string>& mapped(std::string_view technique_id) const;

  bool operator==(const Catalog&) const = default;
};

bool is_technique_id(std::string_view id);       // ^[A-Z]{2}-\d{4}$
bool is_countermeasure_id(std::string_view id);  // ^CM\d{4}$

/// Raises the load-time errors for an in-memory catalog: PatternViolation,
/// DuplicateId, EmptySelectors, InvalidSelector, DanglingMapping.
void check_catalog(const Catalog& catalog);

Catalog load_catalog(std::string_view text);
std::string serialize_catalog(const Catalog& catalog);

Catalog builtin_catalog();

// The subject is identified by category and id within `model`.
bool matches(const Selector& selector, const SystemModel& model, SubjectKind kind,
             std::string_view subject_id);

}  // namespace secblocks
