#include "doctest.h"
#include "secblocks/surface.hpp"
#include "support.hpp"

using namespace secblocks;
using namespace testing;

namespace {

bool has_entry(const SurfaceTable& t, const SurfaceEntry& e) {
  for (const auto& x : t.entries)
    if (x == e) return true;
  return false;
}

}  // namespace

TEST_CASE("single-leo surface reproduces the six transcribed rows") {
  const SystemModel m = builtin_model("single-leo");
  const std::string md = surface_markdown(enumerate_surfaces(m, builtin_labels()), m);
  CHECK(lines_of(md)[0] == "| Component | Input | Processing | Output | Related data flow |");
  CHECK(sorted(table_rows(md)) == sorted(kSingleLeoSurface));
}

TEST_CASE("single-leo entry examples") {
  const SystemModel m = builtin_model("single-leo");
  const SurfaceTable t = enumerate_surfaces(m, builtin_labels());
  CHECK(has_entry(t, {"payload_control", "Image schedule", "Scheduling service", "Scheduled commands", "image_schedule"}));
  CHECK(has_entry(t, {"storage", "Image data", "Data storage service", "Raw images", "image_generation"}));
}

TEST_CASE("mothership subset reproduces the five transcribed rows") {
  const SystemModel m = builtin_model("leo-network");
  const SurfaceTable t = restrict_to_vehicle(enumerate_surfaces(m, builtin_labels()), m, "mothership");
  REQUIRE(t.entries.size() == 5);
  for (const auto& e : t.entries) {
    CHECK(e.input == "Signal from payload control");
    CHECK(e.output == "Acknowledgement");
  }
  CHECK(table_rows(surface_markdown(t, m)) == kMothershipSurface);
  CHECK(t.entries[0].related_flow == "sectoring_and_altitude");
}

TEST_CASE("zero flows give zero entries") {
  SystemModel m = builtin_model("single-leo");
  m.flows.clear();
  CHECK(enumerate_surfaces(m, builtin_labels()).entries.empty());
}

TEST_CASE("label lookups") {
  const LabelTable labels = builtin_labels();
  bool camera = false;
  for (const auto& r : labels.rows)
    if (r.kind == ComponentKind::Camera && !r.component_id) camera = r.processing == "Image acquisition service";
  CHECK(camera);
}

TEST_CASE("a kind with no rows and no exclusion is MissingLabel") {
  LabelTable labels = builtin_labels();
  labels.excluded_kinds.clear();
  try {
    enumerate_surfaces(builtin_model("single-leo"), labels);
    FAIL("expected MissingLabel");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingLabel);
  }
}

TEST_CASE("labels file equals the builtin and round-trips") {
  const LabelTable labels = builtin_labels();
  CHECK(load_labels(serialize_labels(labels)) == labels);
  CHECK(slurp(data_path("labels/builtin.labels.json")) == serialize_labels(labels));
}

TEST_CASE("json rendering is deterministic") {
  const SystemModel m = builtin_model("leo-network");
  CHECK(surface_json(enumerate_surfaces(m, builtin_labels()), m) ==
        surface_json(enumerate_surfaces(m, builtin_labels()), m));
}

TEST_CASE("property: every flow is covered or reported") {
  Rng rng(21);
  const LabelTable labels = builtin_labels();
  for (int i = 0; i < 150; ++i) {
    const SystemModel m = random_model(rng, 12);
    CAPTURE(serialize_model(m));
    const SurfaceTable t = enumerate_surfaces(m, labels);
    for (const auto& f : m.flows) {
      bool related = false;
      for (const auto& e : t.entries) related = related || e.related_flow == f.id;
      bool reported = false;
      for (const auto& v : t.coverage) reported = reported || (v.code == "UNCOVERED_FLOW" && v.subject == f.id);
      CAPTURE(f.id);
      CHECK(related != reported);
    }
    for (const auto& e : t.entries) CHECK(m.find_component(e.component));
    CHECK(surface_json(t, m) == surface_json(enumerate_surfaces(m, labels), m));
  }
}
