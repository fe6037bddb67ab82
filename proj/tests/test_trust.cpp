#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "dpdpgov/trust.hpp"

using namespace dpdpgov;
using namespace dpdpgov::trust;

namespace {

store::DatasetMetadata simple_meta() {
  store::DatasetMetadata meta;
  meta.dataset_id = "Healthcare_Adult_Records.csv";
  meta.domain = "Healthcare";
  meta.owner = "Adult Individual";
  meta.columns.push_back({"age", store::ColumnKind::Numeric, AttributeClass::QuasiIdentifier});
  return meta;
}

}  // namespace

TEST_CASE("request interpretation classifies email and purpose") {
  auto meta = simple_meta();
  AccessRequest req{"person_1@iiitb.ac.in", "Self Use", {"age"}, meta.dataset_id};
  auto profile = interpret_request(req, meta);
  CHECK(profile.email_class == EmailClass::Organizational);
  CHECK(profile.intent == PurposeClass::SelfUse);
  CHECK_FALSE(profile.intent_low_confidence);
  REQUIRE(profile.data_type.size() == 1);
  CHECK(profile.data_type[0].first == "age");

  req.email = "person_1@gmail.com";
  req.purpose = "Organisational Use";
  profile = interpret_request(req, meta);
  CHECK(profile.email_class == EmailClass::Personal);
  CHECK(profile.intent == PurposeClass::OrganizationalUse);
}

TEST_CASE("unmatched purposes default to external use, flagged") {
  auto meta = simple_meta();
  AccessRequest req{"x@corp.com", "weekend hackathon", {"age"}, meta.dataset_id};
  auto profile = interpret_request(req, meta);
  CHECK(profile.intent == PurposeClass::ExternalUse);
  CHECK(profile.intent_low_confidence);
}

TEST_CASE("trust oracle anchors and full grid") {
  // floor((email + purpose) / 2)
  CHECK(oracle_trust({EmailClass::Organizational, PurposeClass::SelfUse}) == TrustLevel::Moderate);
  CHECK(oracle_trust({EmailClass::Personal, PurposeClass::OrganizationalUse}) ==
        TrustLevel::Moderate);
  CHECK(oracle_trust({EmailClass::Personal, PurposeClass::ExternalUse}) == TrustLevel::Low);
  CHECK(oracle_trust({EmailClass::Personal, PurposeClass::SelfUse}) == TrustLevel::Low);
  CHECK(oracle_trust({EmailClass::Organizational, PurposeClass::ExternalUse}) ==
        TrustLevel::Moderate);
  CHECK(oracle_trust({EmailClass::Organizational, PurposeClass::OrganizationalUse}) ==
        TrustLevel::High);
}

TEST_CASE("synthesized data matches the oracle except for the perturbed share") {
  const int n = 500;
  const double noise = 0.1;
  auto rows = synthesize_training_data(n, noise, 42);
  REQUIRE(rows.size() == n);
  int disagreements = 0;
  for (const auto& r : rows) {
    REQUIRE(r.features.size() == 4);
    TrustFeatures f{static_cast<EmailClass>(static_cast<int>(r.features[0])),
                    static_cast<PurposeClass>(static_cast<int>(r.features[1]))};
    if (r.label != static_cast<int>(oracle_trust(f))) ++disagreements;
    CHECK(r.features[2] >= 0.0);
    CHECK(r.features[2] <= 1.0);
  }
  // perturbation moves labels by +-1 clamped, so it can land back on the
  // oracle value only at the clamp; count must not exceed the perturbed share
  int perturbed = static_cast<int>(std::lround(noise * n));
  CHECK(disagreements <= perturbed);
  CHECK(disagreements >= perturbed / 2);  // most perturbations actually move the label
}

TEST_CASE("synthesized data is seed-deterministic") {
  auto a = synthesize_training_data(200, 0.05, 9);
  auto b = synthesize_training_data(200, 0.05, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].features == b[i].features);
    CHECK(a[i].label == b[i].label);
  }
}

TEST_CASE("synthesize rejects undersized requests") {
  CHECK_THROWS(synthesize_training_data(50, 0.0, 1));
}

TEST_CASE("noise-feature distribution is roughly uniform") {
  auto rows = synthesize_training_data(2000, 0.0, 4);
  int buckets[4] = {0, 0, 0, 0};
  for (const auto& r : rows) {
    int b = std::min(3, static_cast<int>(r.features[2] * 4));
    buckets[b]++;
  }
  for (int b : buckets) {
    CHECK(b > 2000 / 4 - 150);
    CHECK(b < 2000 / 4 + 150);
  }
}

TEST_CASE("forest training reaches the accuracy bars") {
  auto noisy = synthesize_training_data(600, 0.02, 7);
  auto trained = train_trust_model(noisy, 25, 5, 7);
  CHECK(trained.cv_accuracy >= 0.95);

  auto clean = synthesize_training_data(600, 0.0, 7);
  auto perfect = train_trust_model(clean, 25, 5, 7);
  CHECK(perfect.cv_accuracy == 1.0);

  // the final model agrees with the oracle across the whole grid
  for (auto e : {EmailClass::Personal, EmailClass::Organizational})
    for (auto p : {PurposeClass::ExternalUse, PurposeClass::SelfUse,
                   PurposeClass::OrganizationalUse}) {
      TrustFeatures f{e, p};
      CHECK(score_trust(perfect.model, f) == oracle_trust(f));
    }
}

TEST_CASE("training rejects degenerate inputs") {
  std::vector<LabeledRow> same_label(100, LabeledRow{{0, 0, 0.5, 0.5}, 1});
  CHECK_THROWS(train_trust_model(same_label, 5, 5, 1));

  auto tiny = synthesize_training_data(100, 0.0, 1);
  tiny.resize(20);
  CHECK_THROWS(train_trust_model(tiny, 5, 5, 1));  // rows < 10 * folds
}

TEST_CASE("model serialization round-trips and preserves predictions") {
  auto rows = synthesize_training_data(200, 0.02, 13);
  auto trained = train_trust_model(rows, 10, 5, 13);
  auto back = parse_model(serialize_model(trained.model));
  CHECK(back.trees.size() == trained.model.trees.size());
  CHECK(back.seed == trained.model.seed);
  CHECK(serialize_model(back) == serialize_model(trained.model));
  for (auto e : {EmailClass::Personal, EmailClass::Organizational})
    for (auto p : {PurposeClass::ExternalUse, PurposeClass::SelfUse,
                   PurposeClass::OrganizationalUse}) {
      TrustFeatures f{e, p};
      CHECK(score_trust(back, f) == score_trust(trained.model, f));
    }
}

TEST_CASE("interpreter config loads from files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path();
  auto freemail = dir / "freemail.txt";
  auto purposes = dir / "purposes.txt";
  {
    std::ofstream f(freemail);
    f << "# comment\nexample.net\n";
    std::ofstream p(purposes);
    p << "research=SelfUse\ncommercial=OrganizationalUse\n";
  }
  auto cfg = InterpreterConfig::load(freemail.string(), purposes.string());
  auto meta = simple_meta();
  AccessRequest req{"a@example.net", "research project", {"age"}, meta.dataset_id};
  auto profile = interpret_request(req, meta, cfg);
  CHECK(profile.email_class == EmailClass::Personal);
  CHECK(profile.intent == PurposeClass::SelfUse);
  fs::remove(freemail);
  fs::remove(purposes);
}
