#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secblocks/catalog.hpp"
#include "secblocks/model.hpp"
#include "secblocks/threatmap.hpp"

namespace secblocks {

// Identifies the finding that motivated a countermeasure on a block.
struct FindingRef {
  std::string technique;
  SubjectKind subject_kind = SubjectKind::Flow;
  std::string subject;

  bool operator==(const FindingRef&) const = default;
};

struct SecureBlock {
  std::string component;
  std::string name;  // component display name, used as the shall subject
  std::vector<std::string> countermeasures;  // catalog declaration order
  std::vector<FindingRef> provenance;

  bool operator==(const SecureBlock&) const = default;
};

struct SecurityPlan {
  std::string model_name;
  std::vector<SecureBlock> blocks;  // component declaration order
  std::vector<ThreatFinding> unmapped;

  const SecureBlock* find_block(std::string_view component) const;
  bool operator==(const SecurityPlan&) const = default;
};

struct ShallClause {
  std::string label;  // "EO n.m"
  std::string text;

  bool operator==(const ShallClause&) const = default;
};

struct ShallStatement {
  std::string label;  // "EO n"
  std::string component;
  std::string countermeasure;
  std::string subject;
  std::string requirement;
  std::vector<ShallClause> clauses;

  bool operator==(const ShallStatement&) const = default;
};

struct ClauseSelection {
  std::string component;
  std::string countermeasure;
  std::vector<std::string> clauses;

  bool operator==(const ClauseSelection&) const = default;
};

// A curated subset of statements: which blocks, which countermeasures, in
// which order, and optionally which rationale clauses.
struct Profile {
  std::string name;
  std::vector<std::pair<std::string, std::vector<std::string>>> block_order;
  std::vector<ClauseSelection> clause_selection;

  const ClauseSelection* clauses_for(std::string_view component, std::string_view countermeasure) const;
  bool operator==(const Profile&) const = default;
};

/// Flow findings attach to both endpoints, trust findings to every member,
/// component findings to the component itself. Findings whose technique maps
/// to nothing resolvable end up in `unmapped`.
SecurityPlan derive_plan(const ThreatReport& report, const Catalog& catalog, const SystemModel& model);

/// Without a profile: one statement per (block, countermeasure) in plan
/// order. With a profile: the profile's blocks and countermeasures in its
/// order; a profile may name countermeasures the derivation did not attach.
/// Throws DanglingProfileReference when a profile entry does not resolve.
std::vector<ShallStatement> generate_shall(const SecurityPlan& plan, const Catalog& catalog,
                                           const Profile* profile = nullptr);

Profile builtin_profile();
Profile load_profile(std::string_view text);
std::string serialize_profile(const Profile& profile);

std::string plan_markdown(const SecurityPlan& plan, const Catalog& catalog);
std::string plan_json(const SecurityPlan& plan);

// Technique -> countermeasure principles for the techniques in `report`.
std::string principles_markdown(const ThreatReport& report, const Catalog& catalog);
std::string principles_json(const ThreatReport& report, const Catalog& catalog);

std::string shall_markdown(const std::vector<ShallStatement>& statements);
std::string shall_json(const std::vector<ShallStatement>& statements);

}  // namespace secblocks
