#include "secblocks/blocks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json_util.hpp"

namespace secblocks {

const SecureBlock* SecurityPlan::find_block(std::string_view component) const {
  for (const auto& b : blocks)
    if (b.component == component) return &b;
  return nullptr;
}

const ClauseSelection* Profile::clauses_for(std::string_view component, std::string_view countermeasure) const {
  for (const auto& c : clause_selection)
    if (c.component == component && c.countermeasure == countermeasure) return &c;
  return nullptr;
}

namespace {

std::vector<std::string> endpoints(const ThreatFinding& f, const SystemModel& model) {
  switch (f.subject_kind) {
    case SubjectKind::Component:
      return {f.subject};
    case SubjectKind::Flow:
      if (const DataFlow* flow = model.find_flow(f.subject)) return {flow->source, flow->dest};
      return {};
    case SubjectKind::TrustRelationship:
      if (const TrustRelationship* t = model.find_trust(f.subject)) return t->members;
      return {};
  }
  return {};
}

template <typename T>
void push_unique(std::vector<T>& v, const T& item) {
  if (std::find(v.begin(), v.end(), item) == v.end()) v.push_back(item);
}

}  // namespace

SecurityPlan derive_plan(const ThreatReport& report, const Catalog& catalog, const SystemModel& model) {
  SecurityPlan plan;
  plan.model_name = report.model_name;

  std::map<int, SecureBlock> by_index;
  for (const auto& finding : report.findings) {
    std::vector<std::string> cms;
    for (const auto& cm : catalog.mapped(finding.technique))
      if (catalog.find_countermeasure(cm)) cms.push_back(cm);
    if (cms.empty()) {
      plan.unmapped.push_back(finding);
      continue;
    }
    const FindingRef ref{finding.technique, finding.subject_kind, finding.subject};
    for (const auto& component : endpoints(finding, model)) {
      const int index = model.component_index(component);
      if (index < 0) continue;
      SecureBlock& block = by_index[index];
      block.component = component;
      block.name = model.components[index].name;
      for (const auto& cm : cms) push_unique(block.countermeasures, cm);
      push_unique(block.provenance, ref);
    }
  }

  for (auto& [index, block] : by_index) {
    std::sort(block.countermeasures.begin(), block.countermeasures.end(),
              [&](const std::string& a, const std::string& b) {
                return catalog.countermeasure_index(a) < catalog.countermeasure_index(b);
              });
    plan.blocks.push_back(std::move(block));
  }
  return plan;
}

std::vector<ShallStatement> generate_shall(const SecurityPlan& plan, const Catalog& catalog,
                                           const Profile* profile) {
  struct Item {
    const SecureBlock* block;
    const Countermeasure* cm;
    std::vector<std::string> clauses;
  };
  std::vector<Item> items;

  if (!profile) {
    for (const auto& block : plan.blocks) {
      for (const auto& id : block.countermeasures) {
        const Countermeasure* cm = catalog.find_countermeasure(id);
        if (!cm) throw Error(ErrorKind::DanglingMapping, "plan names unknown countermeasure '" + id + "'");
        items.push_back({&block, cm, cm->rationale_clauses});
      }
    }
  } else {
    for (const auto& sel : profile->clause_selection) {
      const bool listed = std::any_of(profile->block_order.begin(), profile->block_order.end(), [&](const auto& e) {
        return e.first == sel.component &&
               std::find(e.second.begin(), e.second.end(), sel.countermeasure) != e.second.end();
      });
      if (!listed)
        throw Error(ErrorKind::DanglingProfileReference, "profile '" + profile->name + "' selects clauses for (" +
                                                             sel.component + ", " + sel.countermeasure +
                                                             ") which is not in its block order");
    }
    for (const auto& [component, cms] : profile->block_order) {
      const SecureBlock* block = plan.find_block(component);
      if (!block)
        throw Error(ErrorKind::DanglingProfileReference,
                    "profile '" + profile->name + "' names component '" + component + "' with no secure block");
      for (const auto& id : cms) {
        const Countermeasure* cm = catalog.find_countermeasure(id);
        if (!cm)
          throw Error(ErrorKind::DanglingProfileReference,
                      "profile '" + profile->name + "' names unknown countermeasure '" + id + "'");
        const ClauseSelection* chosen = profile->clauses_for(component, id);
        items.push_back({block, cm, chosen ? chosen->clauses : cm->rationale_clauses});
      }
    }
  }

  std::vector<ShallStatement> out;
  out.reserve(items.size());
  for (std::size_t n = 0; n < items.size(); ++n) {
    const Item& item = items[n];
    ShallStatement s;
    s.label = "EO " + std::to_string(n + 1);
    s.component = item.block->component;
    s.countermeasure = item.cm->id;
    s.subject = item.block->name;
    s.requirement = item.block->name + " block shall " + item.cm->action_phrase;
    for (std::size_t m = 0; m < item.clauses.size(); ++m)
      s.clauses.push_back({s.label + "." + std::to_string(m + 1), item.clauses[m]});
    out.push_back(std::move(s));
  }
  return out;
}

Profile builtin_profile() {
  Profile p;
  p.name = "paper-eo";
  p.block_order = {
      {"adcs", {"CM0032", "CM0038"}},
      {"payload_control", {"CM0070"}},
      {"propulsion_control", {"CM0042"}},
  };
  p.clause_selection = {
      {"adcs", "CM0032", {"to monitor unauthorized and/or malicious access attempts;"}},
      {"adcs", "CM0038",
       {"to ensure that control algorithms are isolated from other system components to prevent "
        "cross-contamination of faults;",
        "to provide multi-layered security for critical algorithms."}},
      {"payload_control", "CM0070", {"to ensure data transmission continuity in the case of primary link failure;"}},
      {"propulsion_control", "CM0042",
       {"to detect, analyze, and promptly rectify propulsion system anomalies;",
        "to support fallback operational modes that can be activated during fault conditions to maintain basic "
        "functionality."}},
  };
  return p;
}

Profile load_profile(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text);
  require_object(doc, "profile");
  Profile p;
  p.name = require_string(doc, "name", "profile");
  for (const auto& b : require_array(doc, "blocks", "profile"))
    p.block_order.emplace_back(require_string(b, "component", "profile block"),
                               string_array(require(b, "countermeasures", "profile block"), "countermeasures"));
  if (doc.contains("clauses"))
    for (const auto& c : require_array(doc, "clauses", "profile"))
      p.clause_selection.push_back({require_string(c, "component", "profile clauses"),
                                    require_string(c, "countermeasure", "profile clauses"),
                                    string_array(require(c, "texts", "profile clauses"), "texts")});
  return p;
}

std::string serialize_profile(const Profile& profile) {
  using detail::Json;
  Json doc = Json::object();
  doc["name"] = profile.name;
  doc["blocks"] = Json::array();
  for (const auto& [component, cms] : profile.block_order)
    doc["blocks"].push_back({{"component", component}, {"countermeasures", cms}});
  doc["clauses"] = Json::array();
  for (const auto& c : profile.clause_selection)
    doc["clauses"].push_back({{"component", c.component}, {"countermeasure", c.countermeasure}, {"texts", c.clauses}});
  return detail::dump_json(doc);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string ref_text(const FindingRef& r) {
  return r.technique + " " + std::string(to_string(r.subject_kind)) + " " + r.subject;
}

detail::Json finding_json(const ThreatFinding& f) {
  return {{"technique", f.technique},
          {"subject_kind", to_string(f.subject_kind)},
          {"subject", f.subject},
          {"selector_index", f.selector_index},
          {"rationale", f.rationale}};
}

}  // namespace

std::string plan_markdown(const SecurityPlan& plan, const Catalog& catalog) {
  std::ostringstream os;
  os << "| Block | Component | Countermeasures | Provenance |\n";
  os << "|---|---|---|---|\n";
  for (const auto& b : plan.blocks) {
    std::vector<std::string> cms;
    for (const auto& id : b.countermeasures) {
      const Countermeasure* cm = catalog.find_countermeasure(id);
      cms.push_back(cm ? id + " " + cm->name : id);
    }
    std::vector<std::string> refs;
    for (const auto& r : b.provenance) refs.push_back(ref_text(r));
    os << "| " << b.name << " | " << b.component << " | " << join(cms, "; ") << " | " << join(refs, "; ") << " |\n";
  }
  if (!plan.unmapped.empty()) {
    os << "\nUnmapped findings:\n\n";
    for (const auto& f : plan.unmapped)
      os << "- " << f.technique << " " << to_string(f.subject_kind) << " " << f.subject << "\n";
  }
  return os.str();
}

std::string plan_json(const SecurityPlan& plan) {
  using detail::Json;
  Json doc = Json::object();
  doc["model"] = plan.model_name;
  doc["blocks"] = Json::array();
  for (const auto& b : plan.blocks) {
    Json prov = Json::array();
    for (const auto& r : b.provenance)
      prov.push_back({{"technique", r.technique}, {"subject_kind", to_string(r.subject_kind)}, {"subject", r.subject}});
    doc["blocks"].push_back(
        {{"component", b.component}, {"name", b.name}, {"countermeasures", b.countermeasures}, {"provenance", prov}});
  }
  doc["unmapped"] = Json::array();
  for (const auto& f : plan.unmapped) doc["unmapped"].push_back(finding_json(f));
  return detail::dump_json(doc);
}

std::string principles_markdown(const ThreatReport& report, const Catalog& catalog) {
  std::ostringstream os;
  os << "| Technique | Countermeasures |\n";
  os << "|---|---|\n";
  for (const auto& id : techniques_present(report)) {
    const Technique* t = catalog.find_technique(id);
    std::vector<std::string> cms;
    for (const auto& cm_id : catalog.mapped(id)) {
      const Countermeasure* cm = catalog.find_countermeasure(cm_id);
      cms.push_back(cm ? cm->name + " (" + cm_id + ")" : cm_id);
    }
    os << "| " << id << (t ? " " + t->name : "") << " | " << join(cms, "; ") << " |\n";
  }
  return os.str();
}

std::string principles_json(const ThreatReport& report, const Catalog& catalog) {
  using detail::Json;
  Json arr = Json::array();
  for (const auto& id : techniques_present(report)) arr.push_back({{"technique", id}, {"countermeasures", catalog.mapped(id)}});
  return detail::dump_json(arr);
}

std::string shall_markdown(const std::vector<ShallStatement>& statements) {
  std::ostringstream os;
  for (const auto& s : statements) {
    os << "- **" << s.label << ":** " << s.requirement << ":\n";
    for (const auto& c : s.clauses) os << "  - **" << c.label << ":** " << c.text << "\n";
  }
  return os.str();
}

std::string shall_json(const std::vector<ShallStatement>& statements) {
  using detail::Json;
  Json arr = Json::array();
  for (const auto& s : statements) {
    Json clauses = Json::array();
    for (const auto& c : s.clauses) clauses.push_back({{"label", c.label}, {"text", c.text}});
    arr.push_back({{"label", s.label},
                   {"subject", s.subject},
                   {"requirement", s.requirement},
                   {"clauses", clauses},
                   {"component", s.component},
                   {"countermeasure", s.countermeasure}});
  }
  return detail::dump_json(arr);
}

}  // namespace secblocks
