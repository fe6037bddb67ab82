#include "dpdpgov/policy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::policy {

using text::trim;

namespace {

Strategy make_strategy(const std::string& name, AnonymizationAction id_action,
                       AnonymizationAction qi_action, AnonymizationAction sv_action,
                       TrustLevel t, SensitivityLevel s) {
  Strategy st;
  st.name = name;
  st.actions[AttributeClass::Identifier] = id_action;
  st.actions[AttributeClass::QuasiIdentifier] = qi_action;
  st.actions[AttributeClass::SensitiveValue] = sv_action;
  st.rationale = "strategy '" + name + "' selected for trust=" + to_string(t) +
                 ", sensitivity=" + to_string(s);
  return st;
}

const std::vector<TrustLevel> kTrust = {TrustLevel::Low, TrustLevel::Moderate, TrustLevel::High};
const std::vector<SensitivityLevel> kSens = {SensitivityLevel::Low, SensitivityLevel::Moderate,
                                             SensitivityLevel::High};

}  // namespace

PolicyMatrix default_policy() {
  using A = AnonymizationAction;
  PolicyMatrix m;
  auto put = [&](TrustLevel t, SensitivityLevel s, const std::string& name, A id, A qi, A sv) {
    m.entries[{t, s}] = make_strategy(name, id, qi, sv, t, s);
  };
  // Fixed cells: (High,Low) raw sharing; (Moderate,High) partial masking;
  // (Low,High) full protection. The remaining six are a monotone
  // configuration fill and can be overridden via a policy file.
  put(TrustLevel::High, SensitivityLevel::Low, "Raw", A::no_op(), A::no_op(), A::no_op());
  put(TrustLevel::Moderate, SensitivityLevel::Low, "Raw", A::no_op(), A::no_op(), A::no_op());
  put(TrustLevel::Low, SensitivityLevel::Low, "Generalize", A::no_op(), A::generalize_numeric(4),
      A::no_op());
  put(TrustLevel::High, SensitivityLevel::Moderate, "Generalize", A::no_op(),
      A::generalize_numeric(4), A::no_op());
  put(TrustLevel::Moderate, SensitivityLevel::Moderate, "PartialMask", A::pseudonymize(),
      A::generalize_numeric(4), A::mask_partial(0.5));
  put(TrustLevel::Low, SensitivityLevel::Moderate, "PartialMask", A::pseudonymize(),
      A::generalize_numeric(4), A::mask_partial(0.5));
  put(TrustLevel::High, SensitivityLevel::High, "PartialMask", A::pseudonymize(),
      A::generalize_numeric(4), A::mask_partial(0.5));
  put(TrustLevel::Moderate, SensitivityLevel::High, "PartialMask", A::pseudonymize(),
      A::generalize_numeric(4), A::mask_partial(0.5));
  put(TrustLevel::Low, SensitivityLevel::High, "FullProtect", A::pseudonymize(), A::mask_full(),
      A::mask_full());

  std::string lint = lint_monotone(m);
  if (!lint.empty()) throw std::logic_error("default policy fails lint: " + lint);
  return m;
}

std::string lint_monotone(const PolicyMatrix& matrix) {
  auto strength = [&](TrustLevel t, SensitivityLevel s, AttributeClass c) {
    return action_strength(matrix.entries.at({t, s}).action_for(c));
  };
  static const AttributeClass classes[] = {AttributeClass::Identifier,
                                           AttributeClass::QuasiIdentifier,
                                           AttributeClass::SensitiveValue};
  for (TrustLevel t : kTrust) {
    for (std::size_t i = 0; i + 1 < kSens.size(); ++i) {
      for (AttributeClass c : classes) {
        if (strength(t, kSens[i + 1], c) < strength(t, kSens[i], c))
          return "raising sensitivity weakens " + to_string(c) + " at trust=" + to_string(t) +
                 " between sensitivity=" + to_string(kSens[i]) + " and " + to_string(kSens[i + 1]);
      }
    }
  }
  for (SensitivityLevel s : kSens) {
    for (std::size_t i = 0; i + 1 < kTrust.size(); ++i) {
      for (AttributeClass c : classes) {
        if (strength(kTrust[i], s, c) < strength(kTrust[i + 1], s, c))
          return "lowering trust weakens " + to_string(c) + " at sensitivity=" + to_string(s) +
                 " between trust=" + to_string(kTrust[i + 1]) + " and " + to_string(kTrust[i]);
      }
    }
  }
  return {};
}

PolicyMatrix parse_policy(const std::string& content) {
  PolicyMatrix m;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = text::split(t, ';');
    if (fields.size() != 6)
      throw std::runtime_error("policy line " + std::to_string(lineno) +
                               ": expected 6 ';' fields");
    TrustLevel trust = trust_from_string(fields[0]);
    SensitivityLevel sens = sensitivity_from_string(fields[1]);
    Strategy st = make_strategy(trim(fields[2]), action_from_string(fields[3]),
                                action_from_string(fields[4]), action_from_string(fields[5]),
                                trust, sens);
    if (!m.entries.emplace(std::make_pair(trust, sens), std::move(st)).second)
      throw std::runtime_error("policy line " + std::to_string(lineno) + ": duplicate cell (" +
                               to_string(trust) + ", " + to_string(sens) + ")");
  }

  std::vector<std::string> missing;
  for (TrustLevel t : kTrust)
    for (SensitivityLevel s : kSens)
      if (!m.entries.count({t, s}))
        missing.push_back("(" + to_string(t) + ", " + to_string(s) + ")");
  if (!missing.empty())
    throw std::runtime_error("policy matrix is partial; missing cells: " +
                             text::join(missing, ", "));

  std::string lint = lint_monotone(m);
  if (!lint.empty()) throw std::runtime_error("policy matrix is not monotone: " + lint);
  return m;
}

std::string serialize_policy(const PolicyMatrix& matrix) {
  std::string out;
  for (TrustLevel t : kTrust) {
    for (SensitivityLevel s : kSens) {
      const Strategy& st = matrix.entries.at({t, s});
      out += to_string(t) + ";" + to_string(s) + ";" + st.name + ";" +
             to_string(st.action_for(AttributeClass::Identifier)) + ";" +
             to_string(st.action_for(AttributeClass::QuasiIdentifier)) + ";" +
             to_string(st.action_for(AttributeClass::SensitiveValue)) + "\n";
    }
  }
  return out;
}

PolicyMatrix load_policy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open policy file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  PolicyMatrix m = parse_policy(buf.str());
  m.source = path;
  return m;
}

void save_policy_file(const PolicyMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write policy file: " + path);
  out << serialize_policy(matrix);
}

const Strategy& select_strategy(const PolicyMatrix& matrix, TrustLevel trust,
                                SensitivityLevel sensitivity) {
  auto it = matrix.entries.find({trust, sensitivity});
  if (it == matrix.entries.end())
    throw std::logic_error("policy matrix missing cell (" + to_string(trust) + ", " +
                           to_string(sensitivity) + ")");
  return it->second;
}

}  // namespace dpdpgov::policy
