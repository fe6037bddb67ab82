#pragma once

// Trust x Sensitivity policy matrix: total over all 9 pairs, linted for
// monotone protection on load.

#include <map>
#include <string>

#include "dpdpgov/core.hpp"

namespace dpdpgov::policy {

struct PolicyMatrix {
  std::map<std::pair<TrustLevel, SensitivityLevel>, Strategy> entries;
  std::string source;  // policy file reference, empty for the built-in default

  bool total() const { return entries.size() == 9; }
};

// Built-in default matrix; passes lint_monotone by construction.
PolicyMatrix default_policy();

// Policy file format, one line per cell:
//   <trust>;<sensitivity>;<name>;<Identifier action>;<QuasiIdentifier action>;<SensitiveValue action>
// '#' begins a comment. Missing cells and non-monotone matrices are rejected.
PolicyMatrix parse_policy(const std::string& content);
std::string serialize_policy(const PolicyMatrix& matrix);
PolicyMatrix load_policy_file(const std::string& path);
void save_policy_file(const PolicyMatrix& matrix, const std::string& path);

// Raising sensitivity (fixed trust) or lowering trust (fixed sensitivity)
// must never weaken any attribute class action. Returns an empty string
// when the matrix passes, otherwise the first violation.
std::string lint_monotone(const PolicyMatrix& matrix);

const Strategy& select_strategy(const PolicyMatrix& matrix, TrustLevel trust,
                                SensitivityLevel sensitivity);

}  // namespace dpdpgov::policy
