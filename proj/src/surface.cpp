#include "secblocks/surface.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace secblocks {

std::string_view to_string(RelatedFlow v) {
  switch (v) {
    case RelatedFlow::Inbound: return "inbound";
    case RelatedFlow::Outbound: return "outbound";
    case RelatedFlow::Vehicle: return "vehicle";
  }
  return "?";
}

namespace {

std::optional<RelatedFlow> parse_related(std::string_view s) {
  if (s == "inbound") return RelatedFlow::Inbound;
  if (s == "outbound") return RelatedFlow::Outbound;
  if (s == "vehicle") return RelatedFlow::Vehicle;
  return std::nullopt;
}

ServiceLabel row(ComponentKind kind, std::string input, std::string processing, std::string output,
                 std::optional<PayloadClass> inbound, RelatedFlow related,
                 std::optional<PayloadClass> related_payload = std::nullopt) {
  ServiceLabel l;
  l.kind = kind;
  l.input = std::move(input);
  l.processing = std::move(processing);
  l.output = std::move(output);
  l.inbound = inbound;
  l.related = related;
  l.related_payload = related_payload;
  return l;
}

ServiceLabel for_component(ServiceLabel l, std::string id) {
  l.component_id = std::move(id);
  return l;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

std::string expand(std::string text, const DataFlow& inbound, const DataFlow& related) {
  replace_all(text, "{inbound}", inbound.name);
  replace_all(text, "{related}", related.name);
  return text;
}

const DataFlow* resolve_related(const ServiceLabel& r, const SystemModel& model,
                                const Component& c, const DataFlow& inbound) {
  switch (r.related) {
    case RelatedFlow::Inbound:
      return &inbound;
    case RelatedFlow::Outbound:
      for (const auto& f : model.flows)
        if (f.source == c.id && (!r.related_payload || f.payload == *r.related_payload)) return &f;
      return nullptr;
    case RelatedFlow::Vehicle:
      for (const auto& f : model.flows) {
        if (r.related_payload && f.payload != *r.related_payload) continue;
        const Component* src = model.find_component(f.source);
        const Component* dst = model.find_component(f.dest);
        if ((src && src->vehicle == c.vehicle) || (dst && dst->vehicle == c.vehicle)) return &f;
      }
      return nullptr;
  }
  return nullptr;
}

}  // namespace

LabelTable builtin_labels() {
  using enum ComponentKind;
  using enum PayloadClass;
  using enum RelatedFlow;
  const std::string signal = "Signal from payload control";
  const std::string ack = "Acknowledgement";

  LabelTable t;
  t.rows = {
      row(GroundStation, "Processed images", "Image service", "Image product", ProcessedImages, Inbound),
      row(ImageProcessing, "Raw images", "Image service", "Processed images", RawImages, Outbound, ProcessedImages),
      row(ImageProcessing, "Raw image data", "Image processing service", "Processed images", RawImages, Outbound,
          ProcessedImages),
      row(PayloadControl, "Image schedule", "Scheduling service", "Scheduled commands", ImageSchedule, Inbound),
      row(Camera, "Image schedule command", "Image acquisition service", "Image data", ImageGeneration, Inbound),
      row(Storage, "Image data", "Data storage service", "Raw images", ImageGeneration, Inbound),
      row(OrbitDetermination, signal, "Commands", ack, std::nullopt, Outbound, OrbitalElements),
      row(SectoringAltitudeCalculation, signal, "Commands", ack, std::nullopt, Vehicle, ProcessedImages),
      row(ManeuverCalculation, signal, "Commands", ack, std::nullopt, Vehicle, ProcessedImages),
      for_component(row(ImageProcessing, signal, "Image data", ack, std::nullopt, Vehicle, ProcessedImages),
                    "mothership_image_processing"),
      for_component(row(Storage, signal, "Image data", ack, std::nullopt, Vehicle, ProcessedImages),
                    "mothership_storage"),
  };
  t.excluded_kinds = {AdcsAlgorithm, PropulsionControl, SensorsActuators, OnboardComputer};
  return t;
}

SurfaceTable enumerate_surfaces(const SystemModel& model, const LabelTable& labels) {
  SurfaceTable out;
  std::set<std::string> covered;

  for (const auto& c : model.components) {
    std::vector<const ServiceLabel*> rows;
    for (const auto& r : labels.rows)
      if (r.component_id && *r.component_id == c.id) rows.push_back(&r);
    if (rows.empty())
      for (const auto& r : labels.rows)
        if (!r.component_id && r.kind == c.kind) rows.push_back(&r);

    if (rows.empty()) {
      const auto& ex = labels.excluded_kinds;
      if (std::find(ex.begin(), ex.end(), c.kind) == ex.end())
        throw Error(ErrorKind::MissingLabel, "no service label for component '" + c.id + "' of kind " +
                                                 std::string(to_string(c.kind)));
      out.coverage.push_back({"UNLABELED_COMPONENT", c.id,
                              "kind " + std::string(to_string(c.kind)) + " has no service label",
                              Severity::Warning});
      continue;
    }

    const DataFlow* first_inbound = nullptr;
    bool paired = false;
    for (const auto& f : model.flows) {
      if (f.dest != c.id) continue;
      if (!first_inbound) first_inbound = &f;
      for (const ServiceLabel* r : rows) {
        if (r->inbound && *r->inbound != f.payload) continue;
        const DataFlow* related = resolve_related(*r, model, c, f);
        if (!related) continue;
        out.entries.push_back({c.id, expand(r->input, f, *related), expand(r->processing, f, *related),
                               expand(r->output, f, *related), related->id});
        covered.insert(related->id);
        paired = true;
      }
    }
    if (first_inbound && !paired) {
      const ServiceLabel& fallback = *rows.front();
      out.entries.push_back({c.id, first_inbound->name, expand(fallback.processing, *first_inbound, *first_inbound),
                             expand(fallback.output, *first_inbound, *first_inbound), first_inbound->id});
      covered.insert(first_inbound->id);
    }
  }

  for (const auto& f : model.flows)
    if (!covered.count(f.id))
      out.coverage.push_back({"UNCOVERED_FLOW", f.id, "flow is not the related flow of any surface entry",
                              Severity::Warning});
  return out;
}

SurfaceTable restrict_to_vehicle(const SurfaceTable& table, const SystemModel& model,
                                 std::string_view vehicle_id) {
  SurfaceTable out;
  for (const auto& e : table.entries) {
    const Component* c = model.find_component(e.component);
    if (c && c->vehicle == vehicle_id) out.entries.push_back(e);
  }
  for (const auto& w : table.coverage) {
    const Component* c = model.find_component(w.subject);
    if (c && c->vehicle == vehicle_id) out.coverage.push_back(w);
  }
  return out;
}

namespace {

std::string component_name(const SystemModel& model, const std::string& id) {
  const Component* c = model.find_component(id);
  return c ? c->name : id;
}

std::string flow_name(const SystemModel& model, const std::string& id) {
  const DataFlow* f = model.find_flow(id);
  return f ? f->name : id;
}

}  // namespace

std::string surface_markdown(const SurfaceTable& table, const SystemModel& model) {
  std::ostringstream os;
  os << "| Component | Input | Processing | Output | Related data flow |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& e : table.entries)
    os << "| " << component_name(model, e.component) << " | " << e.input << " | " << e.processing << " | "
       << e.output << " | " << flow_name(model, e.related_flow) << " |\n";
  return os.str();
}

std::string surface_json(const SurfaceTable& table, const SystemModel& model) {
  using detail::Json;
  Json arr = Json::array();
  for (const auto& e : table.entries)
    arr.push_back({{"component", e.component},
                   {"component_name", component_name(model, e.component)},
                   {"input", e.input},
                   {"processing", e.processing},
                   {"output", e.output},
                   {"related_flow", e.related_flow},
                   {"related_flow_name", flow_name(model, e.related_flow)}});
  return detail::dump_json(arr);
}

// ---------------------------------------------------------------------------
// Label file format

LabelTable load_labels(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text);
  require_object(doc, "labels");
  LabelTable t;
  for (const auto& r : require_array(doc, "rows", "labels")) {
    ServiceLabel l;
    if (auto id = optional_string(r, "component", "label row")) l.component_id = *id;
    l.kind = parse_enum<ComponentKind>(parse_component_kind, require_string(r, "kind", "label row"),
                                       "component kind");
    l.input = require_string(r, "input", "label row");
    l.processing = require_string(r, "processing", "label row");
    l.output = require_string(r, "output", "label row");
    if (auto p = optional_string(r, "inbound", "label row"))
      l.inbound = parse_enum<PayloadClass>(parse_payload_class, *p, "payload class");
    l.related = parse_enum<RelatedFlow>(parse_related, require_string(r, "related", "label row"),
                                        "related flow designator");
    if (auto p = optional_string(r, "related_payload", "label row"))
      l.related_payload = parse_enum<PayloadClass>(parse_payload_class, *p, "payload class");
    t.rows.push_back(std::move(l));
  }
  if (doc.contains("excluded_kinds"))
    for (const auto& k : string_array(doc["excluded_kinds"], "excluded_kinds"))
      t.excluded_kinds.push_back(parse_enum<ComponentKind>(parse_component_kind, k, "component kind"));
  return t;
}

std::string serialize_labels(const LabelTable& labels) {
  using detail::Json;
  Json doc = Json::object();
  doc["rows"] = Json::array();
  for (const auto& r : labels.rows) {
    Json j = Json::object();
    j["kind"] = to_string(r.kind);
    if (r.component_id) j["component"] = *r.component_id;
    j["input"] = r.input;
    j["processing"] = r.processing;
    j["output"] = r.output;
    if (r.inbound) j["inbound"] = to_string(*r.inbound);
    j["related"] = to_string(r.related);
    if (r.related_payload) j["related_payload"] = to_string(*r.related_payload);
    doc["rows"].push_back(std::move(j));
  }
  doc["excluded_kinds"] = Json::array();
  for (auto k : labels.excluded_kinds) doc["excluded_kinds"].push_back(to_string(k));
  return detail::dump_json(doc);
}

}  // namespace secblocks
