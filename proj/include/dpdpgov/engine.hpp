#pragma once

// End-to-end request evaluation: interpret -> trust -> mapper -> sensitivity
// -> strategy -> apply -> report, over immutable repositories.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpdpgov/anonymizer.hpp"
#include "dpdpgov/audit.hpp"
#include "dpdpgov/clustering.hpp"
#include "dpdpgov/compliance.hpp"
#include "dpdpgov/core.hpp"
#include "dpdpgov/data_store.hpp"
#include "dpdpgov/policy.hpp"
#include "dpdpgov/sensitivity.hpp"
#include "dpdpgov/trust.hpp"

namespace dpdpgov::engine {

// Stage-tagged failure, surfaced by the CLI as "stage: message".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct EvaluationOutcome {
  AccessRequest request;
  RequestProfile profile;
  DataProfile data_profile;
  sensitivity::SensitivityFinding finding;
  Strategy strategy;
  store::TableSlice original;
  anonymizer::TransformResult result;
  std::string report;
};

// Request file: either the four-field text block (Email / Purpose /
// Requested Attributes / Source File) or the equivalent JSON object.
AccessRequest parse_request(const std::string& content);
AccessRequest load_request_file(const std::string& path);

class Engine {
 public:
  store::DataStore& data_store() { return store_; }
  const store::DataStore& data_store() const { return store_; }

  void set_repository(std::vector<ComplianceTuple> tuples) { repository_ = std::move(tuples); }
  const std::vector<ComplianceTuple>& repository() const { return repository_; }

  void set_policy(policy::PolicyMatrix matrix) { policy_ = std::move(matrix); }
  const policy::PolicyMatrix& policy() const { return policy_; }

  void set_cluster_model(clustering::ClusterModel model) { cluster_model_ = std::move(model); }
  void set_trust_model(trust::TrustModel model) { trust_model_ = std::move(model); }
  void set_interpreter_config(trust::InterpreterConfig config) { interp_ = std::move(config); }
  void set_key(std::string key) { anon_config_.key = std::move(key); }
  void set_classifier(sensitivity::ClassifierPort port) { classifier_ = std::move(port); }

  anonymizer::AnonymizerConfig& anonymizer_config() { return anon_config_; }

  EvaluationOutcome evaluate(const AccessRequest& request) const;

  struct DomainScore {
    std::string domain;
    double mean_score = 0.0;
    int count = 0;
  };
  // Mean Anonymisation Score per domain over a batch of evaluated requests.
  static std::vector<DomainScore> domain_scores(const std::vector<EvaluationOutcome>& batch);

 private:
  store::DataStore store_;
  std::vector<ComplianceTuple> repository_;
  policy::PolicyMatrix policy_ = policy::default_policy();
  std::optional<clustering::ClusterModel> cluster_model_;
  std::optional<trust::TrustModel> trust_model_;
  trust::InterpreterConfig interp_;
  anonymizer::AnonymizerConfig anon_config_{"dpdpgov-default-key", {}};
  sensitivity::ClassifierPort classifier_;
};

}  // namespace dpdpgov::engine
