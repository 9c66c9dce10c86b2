#include "doctest.h"
#include "secblocks/catalog.hpp"
#include "support.hpp"

using namespace secblocks;
using namespace testing;

namespace {

ErrorKind load_error(const Catalog& c) {
  try {
    load_catalog(serialize_catalog(c));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("catalog loaded");
  return ErrorKind::Syntax;
}

}  // namespace

TEST_CASE("builtin catalog round-trips") {
  const Catalog c = builtin_catalog();
  const std::string once = serialize_catalog(c);
  CHECK(load_catalog(once) == c);
  CHECK(serialize_catalog(load_catalog(once)) == once);
  CHECK(slurp(data_path("catalog/builtin.catalog.json")) == once);
}

TEST_CASE("catalog load-time errors") {
  Catalog c = builtin_catalog();
  SUBCASE("technique id pattern") {
    c.techniques[0].id = "IA-9";
    c.mappings[0].first = "IA-9";
    CHECK(load_error(c) == ErrorKind::PatternViolation);
  }
  SUBCASE("countermeasure id pattern") {
    c.countermeasures[0].id = "CM2";
    CHECK(load_error(c) == ErrorKind::PatternViolation);
  }
  SUBCASE("mapping to a missing countermeasure") {
    c.mappings[2].second = {"CM9999"};
    CHECK(load_error(c) == ErrorKind::DanglingMapping);
  }
  SUBCASE("technique without mapping") {
    c.mappings.pop_back();
    CHECK(load_error(c) == ErrorKind::DanglingMapping);
  }
  SUBCASE("technique without selectors") {
    c.techniques[2].selectors.clear();
    CHECK(load_error(c) == ErrorKind::EmptySelectors);
  }
  SUBCASE("flow selector without constraints") {
    c.techniques[2].selectors[0].link_kinds.reset();
    CHECK(load_error(c) == ErrorKind::InvalidSelector);
  }
  SUBCASE("duplicate technique") {
    c.techniques.push_back(c.techniques[0]);
    CHECK(load_error(c) == ErrorKind::DuplicateId);
  }
}

TEST_CASE("id patterns") {
  CHECK(is_technique_id("IA-0009"));
  CHECK_FALSE(is_technique_id("IA-9"));
  CHECK_FALSE(is_technique_id("ia-0009"));
  CHECK(is_countermeasure_id("CM0070"));
  CHECK_FALSE(is_countermeasure_id("CM070"));
}

TEST_CASE("selector examples") {
  const Catalog c = builtin_catalog();
  const SystemModel m = builtin_model("single-leo");
  const Selector& ia9_flow = c.find_technique("IA-0009")->selectors[0];
  CHECK(matches(ia9_flow, m, SubjectKind::Flow, "image_schedule"));

  const Selector& downlink = c.find_technique("DE-0002")->selectors[0];
  for (const auto& f : m.flows)
    if (f.link == LinkKind::Internal) CHECK_FALSE(matches(downlink, m, SubjectKind::Flow, f.id));

  // Exhaustive over builtin components: only the three payload kinds match.
  const Selector& payload = c.find_technique("IA-0006")->selectors[0];
  for (std::string name : {"single-leo", "leo-network"}) {
    const SystemModel mm = builtin_model(name);
    for (const auto& comp : mm.components) {
      const bool expected = comp.kind == ComponentKind::Camera || comp.kind == ComponentKind::Storage ||
                            comp.kind == ComponentKind::ImageProcessing;
      CAPTURE(comp.id);
      CHECK(matches(payload, mm, SubjectKind::Component, comp.id) == expected);
    }
  }
  CHECK_FALSE(matches(payload, m, SubjectKind::Component, "payload_control"));
  CHECK_FALSE(matches(payload, m, SubjectKind::Flow, "camera"));
}

TEST_CASE("mapping closure on the builtin") {
  const Catalog c = builtin_catalog();
  for (const auto& t : c.techniques) {
    CAPTURE(t.id);
    REQUIRE_FALSE(c.mapped(t.id).empty());
    for (const auto& cm : c.mapped(t.id)) CHECK(c.find_countermeasure(cm));
  }
  CHECK(c.mapped("IA-0006") == std::vector<std::string>{"CM0032", "CM0038", "CM0039"});
}

TEST_CASE("malformed catalog document") {
  try {
    load_catalog("[1, 2]");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
  }
}
