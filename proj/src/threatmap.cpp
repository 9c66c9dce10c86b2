#include "secblocks/threatmap.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json_util.hpp"

namespace secblocks {

std::string subject_name(const SystemModel& model, SubjectKind kind, const std::string& id) {
  switch (kind) {
    case SubjectKind::Flow:
      if (const DataFlow* f = model.find_flow(id)) return f->name;
      break;
    case SubjectKind::Component:
      if (const Component* c = model.find_component(id)) return c->name;
      break;
    case SubjectKind::TrustRelationship:
      break;  // trust relationships are named by id
  }
  return id;
}

namespace {

std::vector<std::string> subject_ids(const SystemModel& model, SubjectKind kind) {
  std::vector<std::string> ids;
  switch (kind) {
    case SubjectKind::Flow:
      for (const auto& f : model.flows) ids.push_back(f.id);
      break;
    case SubjectKind::Component:
      for (const auto& c : model.components) ids.push_back(c.id);
      break;
    case SubjectKind::TrustRelationship:
      for (const auto& t : model.trust) ids.push_back(t.id);
      break;
  }
  return ids;
}

std::string instantiate(std::string text, const std::string& name) {
  const std::string key = "{subject}";
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + name.size()))
    text.replace(pos, key.size(), name);
  return text;
}

}  // namespace

ThreatReport enumerate_threats(const SystemModel& model, const Catalog& catalog) {
  // (technique, category, declaration index) -> finding; selectors are walked
  // in order so the first match per key carries the lowest selector index.
  std::map<std::tuple<std::string, int, int>, ThreatFinding> found;

  for (const auto& technique : catalog.techniques) {
    for (std::size_t si = 0; si < technique.selectors.size(); ++si) {
      const Selector& sel = technique.selectors[si];
      const auto ids = subject_ids(model, sel.target);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!matches(sel, model, sel.target, ids[i])) continue;
        auto key = std::make_tuple(technique.id, static_cast<int>(sel.target), static_cast<int>(i));
        if (found.count(key)) continue;
        found.emplace(key, ThreatFinding{technique.id, sel.target, ids[i], static_cast<int>(si),
                                         instantiate(sel.description, subject_name(model, sel.target, ids[i]))});
      }
    }
  }

  ThreatReport report;
  report.model_name = model.name;
  for (auto& [key, finding] : found) report.findings.push_back(std::move(finding));
  return report;
}

std::vector<std::string> techniques_present(const ThreatReport& report) {
  std::set<std::string> ids;
  for (const auto& f : report.findings) ids.insert(f.technique);
  return {ids.begin(), ids.end()};
}

std::string threats_markdown(const ThreatReport& report, const Catalog& catalog) {
  std::ostringstream os;
  os << "| Technique | Name | Subject kind | Subject | Rationale |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& f : report.findings) {
    const Technique* t = catalog.find_technique(f.technique);
    os << "| " << f.technique << " | " << (t ? t->name : "") << " | " << to_string(f.subject_kind) << " | "
       << f.subject << " | " << f.rationale << " |\n";
  }
  return os.str();
}

std::string threats_json(const ThreatReport& report) {
  using detail::Json;
  Json doc = Json::object();
  doc["model"] = report.model_name;
  doc["findings"] = Json::array();
  for (const auto& f : report.findings)
    doc["findings"].push_back({{"technique", f.technique},
                               {"subject_kind", to_string(f.subject_kind)},
                               {"subject", f.subject},
                               {"selector_index", f.selector_index},
                               {"rationale", f.rationale}});
  return detail::dump_json(doc);
}

}  // namespace secblocks
