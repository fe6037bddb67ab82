#pragma once

// Sensitivity resolution: matches Compliance Repository tuples on
// (domain, principal) and applies the default-low exception when nothing
// matches. An external classifier can be registered behind a port; its
// findings are only accepted when backed by validated tuples.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpdpgov/core.hpp"
#include "dpdpgov/data_store.hpp"

namespace dpdpgov::sensitivity {

struct SensitivityFinding {
  SensitivityLevel level = SensitivityLevel::Low;
  std::vector<ComplianceTuple> matched;
  std::string rationale;
  bool defaulted = false;  // true iff matched is empty
};

// Case-insensitive match on canonicalized (domain, principal) after
// alias-map normalization; returns all matches.
std::vector<ComplianceTuple> match_tuples(const std::vector<ComplianceTuple>& repository,
                                          const std::string& domain,
                                          const std::string& principal);

// Empty matches -> Low with defaulted=true (unlisted combinations trigger
// minimal safeguards); otherwise the max sensitivity over matched tuples,
// with a rationale concatenating each tuple's rules and citations.
SensitivityFinding assess_sensitivity(const std::vector<ComplianceTuple>& matches,
                                      const std::vector<std::string>& requested_attributes,
                                      const store::DatasetMetadata& metadata);

struct ClassifierContext {
  std::string domain;
  std::string principal;
  std::vector<std::string> requested_attributes;
};

// Process-boundary-friendly port for an external sensitivity classifier.
// May throw; failures fall back to assess_sensitivity.
using ClassifierPort = std::function<SensitivityFinding(const ClassifierContext&)>;

SensitivityFinding classify(const std::vector<ComplianceTuple>& repository,
                            const std::string& domain, const std::string& principal,
                            const std::vector<std::string>& requested_attributes,
                            const store::DatasetMetadata& metadata,
                            const ClassifierPort& external = nullptr);

}  // namespace dpdpgov::sensitivity
