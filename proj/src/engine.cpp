#include "dpdpgov/engine.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::engine {

using text::to_lower;
using text::trim;

// ---------------------------------------------------------------------------
// Request parsing
// ---------------------------------------------------------------------------

AccessRequest parse_request(const std::string& content) {
  AccessRequest req;
  std::string head = trim(content);
  if (!head.empty() && head[0] == '{') {
    nlohmann::json j = nlohmann::json::parse(content);
    req.email = j.at("email").get<std::string>();
    req.purpose = j.at("purpose").get<std::string>();
    req.requested_attributes = j.at("requested_attributes").get<std::vector<std::string>>();
    req.source_file = j.at("source_file").get<std::string>();
    return req;
  }

  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("malformed request line (want 'Field: value'): " + line);
    std::string key = to_lower(trim(t.substr(0, colon)));
    std::string value = trim(t.substr(colon + 1));
    if (key == "email") {
      req.email = value;
    } else if (key == "purpose") {
      req.purpose = value;
    } else if (key == "requested attributes") {
      for (const auto& a : text::split(value, ','))
        if (!trim(a).empty()) req.requested_attributes.push_back(trim(a));
    } else if (key == "source file") {
      req.source_file = value;
    } else {
      throw std::runtime_error("unknown request field: " + key);
    }
  }
  return req;
}

AccessRequest load_request_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open request file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_request(buf.str());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

EvaluationOutcome Engine::evaluate(const AccessRequest& request) const {
  EvaluationOutcome out;
  out.request = request;

  {
    std::string err = request.validate();
    if (!err.empty()) throw StageError("interpret", err);
  }

  const store::DatasetMetadata* meta = store_.find(request.source_file);
  if (!meta) throw StageError("mapper", "dataset not ingested: " + request.source_file);

  // domain/owner come from the metadata repository; the cluster model is
  // consulted only when the recorded domain is not a recognized one
  out.data_profile.domain = meta->domain;
  out.data_profile.owner = meta->owner;
  {
    const auto& canon = canonical_domains();
    bool recognized = std::any_of(canon.begin(), canon.end(), [&](const std::string& d) {
      return domain_match_key(d) == domain_match_key(meta->domain);
    });
    if (!recognized && cluster_model_) {
      std::string doc = meta->name;
      for (const auto& c : meta->columns) doc += " " + c.name;
      try {
        auto match = clustering::identify_domain(doc, *cluster_model_);
        if (!match.low_confidence) out.data_profile.domain = match.domain;
      } catch (const std::exception&) {
        // keep the metadata domain when the document shares no vocabulary
      }
    }
  }

  try {
    out.profile = trust::interpret_request(request, *meta, interp_);
  } catch (const std::exception& e) {
    throw StageError("interpret", e.what());
  }

  {
    trust::TrustFeatures features = trust::features_of(out.profile);
    out.data_profile.trust = trust_model_ ? trust::score_trust(*trust_model_, features)
                                          : trust::oracle_trust(features);
  }

  try {
    out.finding = sensitivity::classify(repository_, out.data_profile.domain,
                                        out.data_profile.owner, request.requested_attributes,
                                        *meta, classifier_);
    out.data_profile.sensitivity = out.finding.level;
    out.data_profile.matched_tuples = out.finding.matched;
  } catch (const std::exception& e) {
    throw StageError("sensitivity", e.what());
  }

  try {
    out.strategy = policy::select_strategy(policy_, out.data_profile.trust, out.finding.level);
  } catch (const std::exception& e) {
    throw StageError("strategy", e.what());
  }

  try {
    auto query = store_.build_query(request, *meta);
    out.original = store_.fetch(query);
    std::string justification = out.finding.defaulted
                                    ? out.finding.rationale
                                    : out.finding.rationale + " Strategy: " + out.strategy.rationale;
    out.result = anonymizer::apply_strategy(out.original, out.strategy, *meta, anon_config_,
                                            justification);
  } catch (const std::exception& e) {
    throw StageError("apply", e.what());
  }

  try {
    audit::ReportInputs inputs;
    inputs.request = request;
    inputs.profile = out.data_profile;
    inputs.finding = out.finding;
    inputs.strategy = out.strategy;
    inputs.result = &out.result;
    out.report = audit::render_report(inputs);
  } catch (const std::exception& e) {
    throw StageError("report", e.what());
  }

  return out;
}

std::vector<Engine::DomainScore> Engine::domain_scores(
    const std::vector<EvaluationOutcome>& batch) {
  if (batch.empty()) throw std::runtime_error("domain_scores: empty batch");
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& e : batch) {
    auto& [sum, n] = acc[e.data_profile.domain];
    sum += e.result.score;
    ++n;
  }
  std::vector<DomainScore> out;
  for (const auto& [domain, sn] : acc)
    out.push_back({domain, sn.first / sn.second, sn.second});
  return out;
}

}  // namespace dpdpgov::engine
