#pragma once

// KYU trust scoring: request interpretation, a deterministic trust oracle,
// and a random-forest classifier trained on synthesized data that must
// agree with the oracle on clean inputs.

#include <cstdint>
#include <string>
#include <vector>

#include "dpdpgov/core.hpp"
#include "dpdpgov/data_store.hpp"

namespace dpdpgov::trust {

struct TrustFeatures {
  EmailClass email_class = EmailClass::Personal;        // Personal=0, Organizational=2
  PurposeClass purpose_class = PurposeClass::ExternalUse;  // External=0, Self=1, Org=2
};

struct InterpreterConfig {
  std::vector<std::string> freemail_domains = {"gmail.com", "yahoo.com", "hotmail.com",
                                               "outlook.com"};
  // keyword -> purpose class; first match wins, scanned in listed order
  std::vector<std::pair<std::string, PurposeClass>> purpose_keywords = {
      {"organisational", PurposeClass::OrganizationalUse},
      {"organizational", PurposeClass::OrganizationalUse},
      {"self", PurposeClass::SelfUse},
      {"external", PurposeClass::ExternalUse},
      {"third party", PurposeClass::ExternalUse},
      {"marketing", PurposeClass::ExternalUse},
  };

  static InterpreterConfig load(const std::string& freemail_path,
                                const std::string& purpose_path);
};

RequestProfile interpret_request(const AccessRequest& request,
                                 const store::DatasetMetadata& metadata,
                                 const InterpreterConfig& config = {});

TrustFeatures features_of(const RequestProfile& profile);

// floor((email_code + purpose_code) / 2); satisfies both anchor examples:
// (Organizational, SelfUse) -> Moderate, (Personal, OrganizationalUse) -> Moderate.
TrustLevel oracle_trust(const TrustFeatures& features);

// ---------------------------------------------------------------------------
// Random forest
// ---------------------------------------------------------------------------

struct LabeledRow {
  std::vector<double> features;  // [email_code, purpose_code, noise1, noise2]
  int label = 0;                 // TrustLevel code
};

// Uniform sampling over the 2x3 feature grid plus two irrelevant noise
// features; labels from the oracle, then a noise_rate fraction perturbed
// by +-1 level (clamped).
std::vector<LabeledRow> synthesize_training_data(int n, double noise_rate, std::uint64_t seed);

struct TreeNode {
  int feature = -1;        // -1 for leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int label = 0;           // valid for leaves
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  int predict(const std::vector<double>& x) const;
};

struct TrustModel {
  std::vector<DecisionTree> trees;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracies;
  double cv_accuracy = 0.0;

  int predict(const std::vector<double>& x) const;  // majority vote
};

struct TrainResult {
  TrustModel model;
  double cv_accuracy = 0.0;
};

// Bootstrap per tree, Gini splits, sqrt(F) feature subsampling. Reports the
// mean k-fold cross-validation accuracy of forests trained per fold, then
// trains the returned model on all rows.
TrainResult train_trust_model(const std::vector<LabeledRow>& rows, int tree_count, int folds,
                              std::uint64_t seed);

TrustLevel score_trust(const TrustModel& model, const TrustFeatures& features);

// Text artifact with exact round-trip.
std::string serialize_model(const TrustModel& model);
TrustModel parse_model(const std::string& content);
void save_model_file(const TrustModel& model, const std::string& path);
TrustModel load_model_file(const std::string& path);

}  // namespace dpdpgov::trust
