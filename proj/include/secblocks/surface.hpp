#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secblocks/model.hpp"

namespace secblocks {

// Which flow a label row reports in the "Related data flow" column.
enum class RelatedFlow {
  Inbound,   // the inbound flow that triggered the row
  Outbound,  // first outbound flow of the component carrying related_payload
  Vehicle,   // first flow touching the component's vehicle carrying related_payload
};

std::string_view to_string(RelatedFlow v);

/// One row of the service label table. A row applies either to every
/// component of `kind`, or (when `component_id` is set) to one component; id
/// rows shadow kind rows entirely. The input/processing/output strings may
/// contain "{inbound}" and "{related}", expanded to flow display names.
struct ServiceLabel {
  ComponentKind kind = ComponentKind::GroundStation;
  std::optional<std::string> component_id;
  std::string input;
  std::string processing;
  std::string output;
  std::optional<PayloadClass> inbound;  // absent: pairs with any inbound flow
  RelatedFlow related = RelatedFlow::Inbound;
  std::optional<PayloadClass> related_payload;

  bool operator==(const ServiceLabel&) const = default;
};

struct LabelTable {
  std::vector<ServiceLabel> rows;
  // Kinds deliberately left without rows; their components are reported as
  // coverage warnings instead of failing with MissingLabel.
  std::vector<ComponentKind> excluded_kinds;

  bool operator==(const LabelTable&) const = default;
};

struct SurfaceEntry {
  std::string component;
  std::string input;
  std::string processing;
  std::string output;
  std::string related_flow;

  bool operator==(const SurfaceEntry&) const = default;
};

struct SurfaceTable {
  std::vector<SurfaceEntry> entries;
  // UNLABELED_COMPONENT for excluded kinds, UNCOVERED_FLOW for every flow that
  // is not the related flow of any entry.
  std::vector<Violation> coverage;
};

LabelTable builtin_labels();
LabelTable load_labels(std::string_view text);
std::string serialize_labels(const LabelTable& labels);

/// Throws MissingLabel when a component has neither id rows, kind rows, nor
/// an excluded kind.
SurfaceTable enumerate_surfaces(const SystemModel& model, const LabelTable& labels);

// Keeps entries whose component lives on `vehicle_id`.
SurfaceTable restrict_to_vehicle(const SurfaceTable& table, const SystemModel& model,
                                 std::string_view vehicle_id);

std::string surface_markdown(const SurfaceTable& table, const SystemModel& model);
std::string surface_json(const SurfaceTable& table, const SystemModel& model);

}  // namespace secblocks
