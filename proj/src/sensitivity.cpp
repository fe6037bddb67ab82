#include "dpdpgov/sensitivity.hpp"

#include <algorithm>

namespace dpdpgov::sensitivity {

std::vector<ComplianceTuple> match_tuples(const std::vector<ComplianceTuple>& repository,
                                          const std::string& domain,
                                          const std::string& principal) {
  std::string dk = domain_match_key(domain);
  std::string pk = principal_match_key(principal);
  std::vector<ComplianceTuple> matches;
  for (const auto& t : repository) {
    if (domain_match_key(t.domain) == dk && principal_match_key(t.data_principal) == pk)
      matches.push_back(t);
  }
  return matches;
}

SensitivityFinding assess_sensitivity(const std::vector<ComplianceTuple>& matches,
                                      const std::vector<std::string>& requested_attributes,
                                      const store::DatasetMetadata& metadata) {
  for (const auto& attr : requested_attributes) {
    if (!metadata.find_column(attr))
      throw std::runtime_error("attribute not present in dataset metadata: " + attr);
  }

  SensitivityFinding finding;
  if (matches.empty()) {
    finding.level = SensitivityLevel::Low;
    finding.defaulted = true;
    finding.rationale =
        "No compliance tuple matches this (domain, principal); the data is classified "
        "Low by default and minimal safeguards apply.";
    return finding;
  }

  finding.matched = matches;
  finding.level = SensitivityLevel::Low;
  for (const auto& t : matches)
    finding.level = std::max(finding.level, t.sensitivity);

  for (const auto& t : matches) {
    finding.rationale += "[" + t.data_principal + " / " + t.domain + "] ";
    for (std::size_t i = 0; i < t.rules.size(); ++i) {
      const RuleClause& r = t.rules[i];
      if (i) finding.rationale += "; ";
      finding.rationale += to_string(r.modality) + " " + to_string(r.action);
      if (!r.condition.empty()) finding.rationale += ": " + r.condition;
      if (!r.citation.empty()) finding.rationale += " (" + r.citation + ")";
    }
    finding.rationale += ". Receiving entities: ";
    for (std::size_t i = 0; i < t.receiving_entities.size(); ++i) {
      if (i) finding.rationale += ", ";
      finding.rationale += t.receiving_entities[i];
    }
    finding.rationale += ". ";
  }
  return finding;
}

SensitivityFinding classify(const std::vector<ComplianceTuple>& repository,
                            const std::string& domain, const std::string& principal,
                            const std::vector<std::string>& requested_attributes,
                            const store::DatasetMetadata& metadata,
                            const ClassifierPort& external) {
  auto matches = match_tuples(repository, domain, principal);
  SensitivityFinding fallback = assess_sensitivity(matches, requested_attributes, metadata);
  if (!external) return fallback;

  try {
    SensitivityFinding proposed = external({domain, principal, requested_attributes});
    // HITL gate: external findings count only when every cited tuple was
    // validated by a human reviewer
    bool gated = !proposed.matched.empty() &&
                 std::all_of(proposed.matched.begin(), proposed.matched.end(),
                             [](const ComplianceTuple& t) { return t.validated; });
    if (gated) return proposed;
  } catch (const std::exception&) {
    // fall through to the rule-based assessment
  }
  return fallback;
}

}  // namespace dpdpgov::sensitivity
