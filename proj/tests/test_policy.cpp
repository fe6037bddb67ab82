#include <doctest.h>

#include "dpdpgov/policy.hpp"

using namespace dpdpgov;
using namespace dpdpgov::policy;

TEST_CASE("default policy is total and lints clean") {
  PolicyMatrix m = default_policy();
  CHECK(m.total());
  CHECK(lint_monotone(m).empty());
}

TEST_CASE("default policy anchor cells") {
  PolicyMatrix m = default_policy();

  const Strategy& raw = select_strategy(m, TrustLevel::High, SensitivityLevel::Low);
  CHECK(raw.name == "Raw");
  for (auto c : {AttributeClass::Identifier, AttributeClass::QuasiIdentifier,
                 AttributeClass::SensitiveValue})
    CHECK(raw.action_for(c).kind == ActionKind::NoOp);

  const Strategy& partial = select_strategy(m, TrustLevel::Moderate, SensitivityLevel::High);
  CHECK(partial.name == "PartialMask");
  CHECK(partial.action_for(AttributeClass::SensitiveValue).kind == ActionKind::MaskPartial);
  CHECK(partial.action_for(AttributeClass::SensitiveValue).fraction == doctest::Approx(0.5));
  CHECK(partial.action_for(AttributeClass::Identifier).kind == ActionKind::Pseudonymize);

  const Strategy& full = select_strategy(m, TrustLevel::Low, SensitivityLevel::High);
  CHECK(full.name == "FullProtect");
  CHECK(full.action_for(AttributeClass::QuasiIdentifier).kind == ActionKind::MaskFull);
  CHECK(full.action_for(AttributeClass::SensitiveValue).kind == ActionKind::MaskFull);
}

TEST_CASE("every cell has a rationale naming its pair") {
  PolicyMatrix m = default_policy();
  for (auto t : {TrustLevel::Low, TrustLevel::Moderate, TrustLevel::High})
    for (auto s : {SensitivityLevel::Low, SensitivityLevel::Moderate, SensitivityLevel::High}) {
      const Strategy& st = select_strategy(m, t, s);
      CHECK(st.rationale.find(to_string(t)) != std::string::npos);
      CHECK(st.rationale.find(to_string(s)) != std::string::npos);
    }
}

TEST_CASE("policy file round-trip") {
  PolicyMatrix m = default_policy();
  std::string text = serialize_policy(m);
  PolicyMatrix back = parse_policy(text);
  CHECK(back.total());
  for (const auto& [key, strategy] : m.entries) {
    const Strategy& other = back.entries.at(key);
    CHECK(other.name == strategy.name);
    CHECK(other.actions == strategy.actions);
  }
}

TEST_CASE("parse rejects incomplete matrices naming the missing cells") {
  std::string one_line = "High;Low;Raw;NoOp;NoOp;NoOp\n";
  try {
    parse_policy(one_line);
    FAIL("expected rejection");
  } catch (const std::exception& e) {
    std::string msg = e.what();
    CHECK(msg.find("(Low, Low)") != std::string::npos);
    CHECK(msg.find("(Moderate, High)") != std::string::npos);
  }
}

TEST_CASE("parse rejects duplicate cells") {
  std::string text = serialize_policy(default_policy());
  text += "High;Low;Raw;NoOp;NoOp;NoOp\n";
  CHECK_THROWS(parse_policy(text));
}

TEST_CASE("lint rejects protection that weakens as sensitivity rises") {
  PolicyMatrix m = default_policy();
  // Strong action at Moderate sensitivity, weak at High: monotone violation.
  Strategy& high = m.entries.at({TrustLevel::Moderate, SensitivityLevel::High});
  high.actions[AttributeClass::SensitiveValue] = AnonymizationAction::no_op();
  std::string violation = lint_monotone(m);
  CHECK_FALSE(violation.empty());
  CHECK_THROWS(parse_policy(serialize_policy(m)));
}

TEST_CASE("lint rejects protection that weakens as trust drops") {
  PolicyMatrix m = default_policy();
  Strategy& low_trust = m.entries.at({TrustLevel::Low, SensitivityLevel::Moderate});
  low_trust.actions[AttributeClass::Identifier] = AnonymizationAction::no_op();
  low_trust.actions[AttributeClass::QuasiIdentifier] = AnonymizationAction::no_op();
  low_trust.actions[AttributeClass::SensitiveValue] = AnonymizationAction::no_op();
  CHECK_FALSE(lint_monotone(m).empty());
}

TEST_CASE("select_strategy on a partial matrix throws") {
  PolicyMatrix m;
  CHECK_THROWS(select_strategy(m, TrustLevel::Low, SensitivityLevel::Low));
}
