#include "dpdpgov/core.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov {

using text::to_lower;
using text::trim;

// ---------------------------------------------------------------------------
// Enum <-> string
// ---------------------------------------------------------------------------

std::string to_string(TrustLevel t) {
  switch (t) {
    case TrustLevel::Low: return "Low";
    case TrustLevel::Moderate: return "Moderate";
    case TrustLevel::High: return "High";
  }
  throw std::logic_error("bad TrustLevel");
}

std::string to_string(SensitivityLevel s) {
  switch (s) {
    case SensitivityLevel::Low: return "Low";
    case SensitivityLevel::Moderate: return "Moderate";
    case SensitivityLevel::High: return "High";
  }
  throw std::logic_error("bad SensitivityLevel");
}

TrustLevel trust_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "low") return TrustLevel::Low;
  if (k == "moderate") return TrustLevel::Moderate;
  if (k == "high") return TrustLevel::High;
  throw std::invalid_argument("unknown trust level: " + s);
}

SensitivityLevel sensitivity_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "low") return SensitivityLevel::Low;
  if (k == "moderate") return SensitivityLevel::Moderate;
  if (k == "high") return SensitivityLevel::High;
  throw std::invalid_argument("unknown sensitivity level: " + s);
}

std::string to_string(EmailClass c) {
  return c == EmailClass::Personal ? "Personal" : "Organizational";
}

std::string to_string(PurposeClass c) {
  switch (c) {
    case PurposeClass::ExternalUse: return "ExternalUse";
    case PurposeClass::SelfUse: return "SelfUse";
    case PurposeClass::OrganizationalUse: return "OrganizationalUse";
  }
  throw std::logic_error("bad PurposeClass");
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::MustNot: return "MustNot";
    case Modality::OnlyIf: return "OnlyIf";
    case Modality::May: return "May";
    case Modality::Must: return "Must";
  }
  throw std::logic_error("bad Modality");
}

std::string to_string(RuleAction a) {
  switch (a) {
    case RuleAction::Collect: return "Collect";
    case RuleAction::Process: return "Process";
    case RuleAction::Share: return "Share";
    case RuleAction::Erase: return "Erase";
  }
  throw std::logic_error("bad RuleAction");
}

Modality modality_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "mustnot") return Modality::MustNot;
  if (k == "onlyif") return Modality::OnlyIf;
  if (k == "may") return Modality::May;
  if (k == "must") return Modality::Must;
  throw std::invalid_argument("unknown modality: " + s);
}

RuleAction rule_action_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "collect") return RuleAction::Collect;
  if (k == "process") return RuleAction::Process;
  if (k == "share") return RuleAction::Share;
  if (k == "erase") return RuleAction::Erase;
  throw std::invalid_argument("unknown rule action: " + s);
}

std::string to_string(AttributeClass c) {
  switch (c) {
    case AttributeClass::Identifier: return "Identifier";
    case AttributeClass::QuasiIdentifier: return "QuasiIdentifier";
    case AttributeClass::SensitiveValue: return "SensitiveValue";
  }
  throw std::logic_error("bad AttributeClass");
}

AttributeClass attribute_class_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "identifier") return AttributeClass::Identifier;
  if (k == "quasiidentifier" || k == "quasi-identifier") return AttributeClass::QuasiIdentifier;
  if (k == "sensitivevalue" || k == "sensitive-value") return AttributeClass::SensitiveValue;
  throw std::invalid_argument("unknown attribute class: " + s);
}

// ---------------------------------------------------------------------------
// AccessRequest
// ---------------------------------------------------------------------------

std::string AccessRequest::validate() const {
  if (email.empty()) return "email is empty";
  if (std::count(email.begin(), email.end(), '@') != 1)
    return "email must contain exactly one '@': " + email;
  if (requested_attributes.empty()) return "no requested attributes";
  std::set<std::string> seen;
  for (const auto& a : requested_attributes) {
    if (!seen.insert(a).second) return "duplicate requested attribute: " + a;
  }
  if (source_file.empty()) return "source file is empty";
  return {};
}

// ---------------------------------------------------------------------------
// AnonymizationAction
// ---------------------------------------------------------------------------

AnonymizationAction AnonymizationAction::mask_partial(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("MaskPartial fraction must be in (0,1)");
  AnonymizationAction a{ActionKind::MaskPartial};
  a.fraction = p;
  return a;
}

AnonymizationAction AnonymizationAction::generalize_numeric(int bins) {
  if (bins < 2) throw std::invalid_argument("GeneralizeNumeric bin_count must be >= 2");
  AnonymizationAction a{ActionKind::GeneralizeNumeric};
  a.bin_count = bins;
  return a;
}

AnonymizationAction AnonymizationAction::generalize_category(std::string hierarchy) {
  AnonymizationAction a{ActionKind::GeneralizeCategory};
  a.hierarchy_ref = std::move(hierarchy);
  return a;
}

int action_strength(const AnonymizationAction& a) {
  switch (a.kind) {
    case ActionKind::NoOp: return 0;
    case ActionKind::GeneralizeNumeric:
    case ActionKind::GeneralizeCategory: return 1;
    case ActionKind::MaskPartial: return 2;
    case ActionKind::Pseudonymize: return 3;
    case ActionKind::MaskFull: return 4;
    case ActionKind::Encrypt: return 5;
    case ActionKind::Suppress: return 6;
  }
  throw std::logic_error("bad ActionKind");
}

std::string to_string(const AnonymizationAction& a) {
  switch (a.kind) {
    case ActionKind::NoOp: return "NoOp";
    case ActionKind::MaskPartial: return "MaskPartial(" + text::format_number(a.fraction) + ")";
    case ActionKind::MaskFull: return "MaskFull";
    case ActionKind::GeneralizeNumeric:
      return "GeneralizeNumeric(" + std::to_string(a.bin_count) + ")";
    case ActionKind::GeneralizeCategory:
      return a.hierarchy_ref.empty() ? "GeneralizeCategory"
                                     : "GeneralizeCategory(" + a.hierarchy_ref + ")";
    case ActionKind::Pseudonymize: return "Pseudonymize";
    case ActionKind::Encrypt: return "Encrypt";
    case ActionKind::Suppress: return "Suppress";
  }
  throw std::logic_error("bad ActionKind");
}

AnonymizationAction action_from_string(const std::string& s) {
  std::string v = trim(s);
  std::string arg;
  std::size_t open = v.find('(');
  if (open != std::string::npos && v.back() == ')') {
    arg = v.substr(open + 1, v.size() - open - 2);
    v = v.substr(0, open);
  }
  std::string k = to_lower(v);
  if (k == "noop") return AnonymizationAction::no_op();
  if (k == "maskpartial") return AnonymizationAction::mask_partial(std::stod(arg));
  if (k == "maskfull") return AnonymizationAction::mask_full();
  if (k == "generalizenumeric") return AnonymizationAction::generalize_numeric(std::stoi(arg));
  if (k == "generalizecategory") return AnonymizationAction::generalize_category(arg);
  if (k == "pseudonymize") return AnonymizationAction::pseudonymize();
  if (k == "encrypt") return AnonymizationAction::encrypt();
  if (k == "suppress") return AnonymizationAction::suppress();
  throw std::invalid_argument("unknown anonymization action: " + s);
}

// ---------------------------------------------------------------------------
// Strategy
// ---------------------------------------------------------------------------

bool Strategy::total() const {
  return actions.count(AttributeClass::Identifier) &&
         actions.count(AttributeClass::QuasiIdentifier) &&
         actions.count(AttributeClass::SensitiveValue);
}

const AnonymizationAction& Strategy::action_for(AttributeClass c) const {
  auto it = actions.find(c);
  if (it == actions.end())
    throw std::logic_error("strategy '" + name + "' missing action for " + to_string(c));
  return it->second;
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

namespace {

struct DomainEntry {
  const char* canonical;  // Table-3-style short name
  const char* display;    // form used in metadata and tuples
  std::vector<const char*> aliases;
};

const std::vector<DomainEntry>& domain_table() {
  static const std::vector<DomainEntry> table = {
      {"E-commerce", "E-commerce", {"ecommerce", "e_commerce", "e commerce"}},
      {"Healthcare", "Healthcare", {"health", "medical"}},
      {"Social Media", "Social Media", {"social_media", "socialmedia"}},
      {"Education", "Education", {}},
      {"Telecom", "Telecom", {"telecommunications"}},
      {"Finance", "Finance & Banking",
       {"finance_banking", "finance banking", "finance & banking", "banking"}},
      {"Startups", "Startups and IT Services",
       {"startups and it services", "startups_it", "it services", "startup"}},
      {"Travel", "Travel", {"tourism"}},
      {"Employment", "Employment & HR Tech",
       {"employment_hr", "employment & hr tech", "hr tech", "hr"}},
      {"Government", "Government Services",
       {"government services", "government_services", "govt"}},
  };
  return table;
}

std::string fold(const std::string& s) {
  // lowercase, underscores treated as spaces, trimmed
  std::string t = to_lower(trim(s));
  std::replace(t.begin(), t.end(), '_', ' ');
  return t;
}

const DomainEntry* lookup_domain(const std::string& raw) {
  std::string key = fold(raw);
  for (const auto& e : domain_table()) {
    if (fold(e.canonical) == key || fold(e.display) == key) return &e;
    for (const char* a : e.aliases)
      if (fold(a) == key) return &e;
  }
  return nullptr;
}

struct PrincipalEntry {
  const char* canonical;  // Table-2 string
  std::vector<const char*> aliases;
};

const std::vector<PrincipalEntry>& principal_table() {
  static const std::vector<PrincipalEntry> table = {
      {"Adult Individual", {"adult", "individual", "adult_individual"}},
      {"Child (<18 years)", {"child", "minor", "child (under 18 years)"}},
      {"Person with Disability (via guardian)",
       {"person with disability", "disability", "disabled person"}},
      {"Hindu Undivided Family (HUF)", {"huf", "hindu undivided family"}},
      {"Company/Firm", {"company", "firm", "company firm"}},
      {"Association or Body of Individuals", {"association", "body of individuals"}},
      {"State", {"government", "state government"}},
      {"Artificial Juristic Person (e.g., Trust, NGO)",
       {"artificial juristic person", "trust", "ngo"}},
  };
  return table;
}

const PrincipalEntry* lookup_principal(const std::string& raw) {
  std::string key = fold(raw);
  for (const auto& e : principal_table()) {
    if (fold(e.canonical) == key) return &e;
    for (const char* a : e.aliases)
      if (fold(a) == key) return &e;
  }
  return nullptr;
}

}  // namespace

std::string canonical_domain_display(const std::string& raw) {
  const DomainEntry* e = lookup_domain(raw);
  return e ? e->display : trim(raw);
}

std::string canonical_principal(const std::string& raw) {
  const PrincipalEntry* e = lookup_principal(raw);
  return e ? e->canonical : trim(raw);
}

std::string domain_match_key(const std::string& raw) {
  const DomainEntry* e = lookup_domain(raw);
  return e ? fold(e->canonical) : fold(raw);
}

std::string principal_match_key(const std::string& raw) {
  const PrincipalEntry* e = lookup_principal(raw);
  return e ? fold(e->canonical) : fold(raw);
}

const std::vector<std::string>& canonical_domains() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : domain_table()) v.push_back(e.canonical);
    return v;
  }();
  return names;
}

}  // namespace dpdpgov
