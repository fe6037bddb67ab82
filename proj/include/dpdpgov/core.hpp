#pragma once

// Shared domain vocabulary for the governance engine. Every symbol used by
// the pipeline (trust/sensitivity ordinals, compliance tuples, strategies,
// audit entries) lives here. All values are immutable after construction.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpdpgov {

// ---------------------------------------------------------------------------
// Ordinal levels
// ---------------------------------------------------------------------------

enum class TrustLevel : int { Low = 0, Moderate = 1, High = 2 };
enum class SensitivityLevel : int { Low = 0, Moderate = 1, High = 2 };

std::string to_string(TrustLevel t);
std::string to_string(SensitivityLevel s);
TrustLevel trust_from_string(const std::string& s);
SensitivityLevel sensitivity_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Requests
// ---------------------------------------------------------------------------

struct AccessRequest {
  std::string email;
  std::string purpose;
  std::vector<std::string> requested_attributes;
  std::string source_file;

  // email non-empty with exactly one '@'; attributes non-empty, no dups.
  // Returns an error message, or empty string when valid.
  std::string validate() const;
};

enum class EmailClass : int { Personal = 0, Organizational = 2 };
enum class PurposeClass : int { ExternalUse = 0, SelfUse = 1, OrganizationalUse = 2 };

std::string to_string(EmailClass c);
std::string to_string(PurposeClass c);

struct RequestProfile {
  EmailClass email_class = EmailClass::Personal;
  std::string email;
  PurposeClass intent = PurposeClass::ExternalUse;
  bool intent_low_confidence = false;  // purpose matched no keyword
  std::vector<std::pair<std::string, std::string>> data_type;  // (column, kind)
  std::string access_purpose;
};

// ---------------------------------------------------------------------------
// Compliance rules
// ---------------------------------------------------------------------------

enum class Modality { MustNot, OnlyIf, May, Must };
enum class RuleAction { Collect, Process, Share, Erase };

std::string to_string(Modality m);
std::string to_string(RuleAction a);
Modality modality_from_string(const std::string& s);
RuleAction rule_action_from_string(const std::string& s);

struct RuleClause {
  Modality modality = Modality::May;
  RuleAction action = RuleAction::Share;
  std::string condition;  // may be empty only for May/Must
  std::string citation;   // e.g. "Sec 7(f-g)"
  bool flagged_for_review = false;

  bool operator==(const RuleClause&) const = default;
};

struct ComplianceTuple {
  std::string data_principal;   // canonical principal name
  std::string domain;           // canonical domain name
  std::vector<RuleClause> rules;
  std::vector<std::string> receiving_entities;
  SensitivityLevel sensitivity = SensitivityLevel::Moderate;
  bool validated = false;

  bool operator==(const ComplianceTuple&) const = default;
};

// ---------------------------------------------------------------------------
// Anonymization actions and strategies
// ---------------------------------------------------------------------------

enum class ActionKind {
  NoOp,
  MaskPartial,         // fraction in (0,1)
  MaskFull,
  GeneralizeNumeric,   // bin_count >= 2
  GeneralizeCategory,  // optional hierarchy reference
  Pseudonymize,
  Encrypt,
  Suppress,
};

struct AnonymizationAction {
  ActionKind kind = ActionKind::NoOp;
  double fraction = 0.5;       // MaskPartial
  int bin_count = 4;           // GeneralizeNumeric
  std::string hierarchy_ref;   // GeneralizeCategory

  static AnonymizationAction no_op() { return {}; }
  static AnonymizationAction mask_partial(double p);
  static AnonymizationAction mask_full() { return {ActionKind::MaskFull}; }
  static AnonymizationAction generalize_numeric(int bins);
  static AnonymizationAction generalize_category(std::string hierarchy = "");
  static AnonymizationAction pseudonymize() { return {ActionKind::Pseudonymize}; }
  static AnonymizationAction encrypt() { return {ActionKind::Encrypt}; }
  static AnonymizationAction suppress() { return {ActionKind::Suppress}; }

  bool operator==(const AnonymizationAction&) const = default;
};

// Protection strength order used by the policy lint:
// NoOp < Generalize* < MaskPartial < Pseudonymize <= MaskFull <= Encrypt <= Suppress
int action_strength(const AnonymizationAction& a);

std::string to_string(const AnonymizationAction& a);
AnonymizationAction action_from_string(const std::string& s);

enum class AttributeClass { Identifier, QuasiIdentifier, SensitiveValue };

std::string to_string(AttributeClass c);
AttributeClass attribute_class_from_string(const std::string& s);

struct Strategy {
  std::string name;
  std::map<AttributeClass, AnonymizationAction> actions;  // total over 3 classes
  std::string rationale;

  bool total() const;
  const AnonymizationAction& action_for(AttributeClass c) const;

  bool operator==(const Strategy&) const = default;
};

// ---------------------------------------------------------------------------
// Evaluation context records
// ---------------------------------------------------------------------------

struct DataProfile {
  std::string domain;
  std::string owner;  // data principal
  SensitivityLevel sensitivity = SensitivityLevel::Low;
  TrustLevel trust = TrustLevel::Low;
  std::vector<ComplianceTuple> matched_tuples;
};

struct AuditEntry {
  std::int64_t row_index = 0;
  std::string column;
  std::string original;
  std::string transformed;
  AnonymizationAction action;
  double distance = 0.0;  // in [0,1]; NoOp => original == transformed, 0
  std::string justification;
};

// ---------------------------------------------------------------------------
// Canonicalization (Table 2 principals / Table 3 domains, alias-mapped,
// matched case-insensitively after trimming)
// ---------------------------------------------------------------------------

// Canonical display form used in metadata and reports, e.g.
// "Finance_Banking" -> "Finance & Banking"; "Child" -> "Child (<18 years)".
std::string canonical_domain_display(const std::string& raw);
std::string canonical_principal(const std::string& raw);

// Canonical matching key: alias map folds display variants onto the
// short domain names (Finance & Banking -> finance, etc.), lowercased.
std::string domain_match_key(const std::string& raw);
std::string principal_match_key(const std::string& raw);

// The ten canonical domain names.
const std::vector<std::string>& canonical_domains();

}  // namespace dpdpgov
