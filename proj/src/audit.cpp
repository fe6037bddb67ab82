#include "dpdpgov/audit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dpdpgov::audit {

using nlohmann::json;

namespace {

std::string score4(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

json entry_to_json(const AuditEntry& e) {
  return json{{"row", e.row_index},
              {"column", e.column},
              {"original", e.original},
              {"transformed", e.transformed},
              {"action", to_string(e.action)},
              {"distance", e.distance},
              {"justification", e.justification}};
}

AuditEntry entry_from_json(const json& j) {
  AuditEntry e;
  e.row_index = j.at("row").get<std::int64_t>();
  e.column = j.at("column").get<std::string>();
  e.original = j.at("original").get<std::string>();
  e.transformed = j.at("transformed").get<std::string>();
  e.action = action_from_string(j.at("action").get<std::string>());
  e.distance = j.at("distance").get<double>();
  e.justification = j.at("justification").get<std::string>();
  return e;
}

}  // namespace

std::string render_report(const ReportInputs& in) {
  if (!in.result) throw std::invalid_argument("render_report: missing transform result");
  const auto& result = *in.result;

  std::ostringstream out;
  out << "=== Context-Aware Anonymization and Compliance Justification ===\n\n";

  out << "WHO\n";
  out << "  Requester: " << in.request.email << "\n";
  out << "  Trust level (KYU score): " << to_string(in.profile.trust) << "\n\n";

  out << "WHY\n";
  out << "  Stated purpose: " << in.request.purpose << "\n\n";

  out << "WHICH\n";
  out << "  Dataset: " << in.request.source_file << "\n";
  out << "  Domain: " << in.profile.domain << "\n";
  out << "  Data owner: " << in.profile.owner << "\n";
  out << "  Requested attributes: ";
  for (std::size_t i = 0; i < in.request.requested_attributes.size(); ++i) {
    if (i) out << ", ";
    out << in.request.requested_attributes[i];
  }
  out << "\n\n";

  out << "SENSITIVITY\n";
  out << "  Level: " << to_string(in.finding.level) << "\n";
  if (in.finding.defaulted) {
    out << "  Basis: no matching compliance tuple; classified Low by the default rule\n";
  } else {
    out << "  Basis: " << in.finding.matched.size() << " matching compliance tuple(s)\n";
    for (const auto& t : in.finding.matched) {
      for (const auto& r : t.rules) {
        out << "    - " << to_string(r.modality) << " " << to_string(r.action);
        if (!r.condition.empty()) out << ": " << r.condition;
        if (!r.citation.empty()) out << " [" << r.citation << "]";
        out << "\n";
      }
      out << "      Receiving entities: ";
      for (std::size_t i = 0; i < t.receiving_entities.size(); ++i) {
        if (i) out << ", ";
        out << t.receiving_entities[i];
      }
      out << "\n";
    }
  }
  out << "\n";

  out << "STRATEGY\n";
  out << "  Name: " << in.strategy.name << "\n";
  out << "  Rationale: " << in.strategy.rationale << "\n";
  for (AttributeClass c : {AttributeClass::Identifier, AttributeClass::QuasiIdentifier,
                           AttributeClass::SensitiveValue})
    out << "  " << to_string(c) << " -> " << to_string(in.strategy.action_for(c)) << "\n";
  out << "\n";

  out << "ANONYMISATION SCORE\n";
  out << "  " << score4(result.score);
  if (result.score == 0.0) out << " (No Anonymisation)";
  else if (result.score >= 1.0) out << " (Full Anonymisation)";
  else out << " (Partial Anonymisation)";
  out << "\n\n";

  out << "TRANSFORMATION LOG (first entries; full log in the machine-readable section)\n";
  std::size_t shown = 0;
  for (const auto& e : result.audit) {
    if (e.original == e.transformed) continue;
    out << "  row " << e.row_index << " " << e.column << ": " << e.original << " -> "
        << e.transformed << " [" << to_string(e.action) << ", D=" << e.distance << "]\n";
    if (++shown >= 10) break;
  }
  if (shown == 0) out << "  (no cells changed)\n";
  out << "\n";

  json machine;
  machine["request"] = {{"email", in.request.email},
                        {"purpose", in.request.purpose},
                        {"requested_attributes", in.request.requested_attributes},
                        {"source_file", in.request.source_file}};
  machine["profile"] = {{"domain", in.profile.domain},
                        {"owner", in.profile.owner},
                        {"trust", to_string(in.profile.trust)},
                        {"sensitivity", to_string(in.profile.sensitivity)}};
  machine["finding"] = {{"level", to_string(in.finding.level)},
                        {"defaulted", in.finding.defaulted},
                        {"rationale", in.finding.rationale}};
  json tuples = json::array();
  for (const auto& t : in.finding.matched) {
    json rules = json::array();
    for (const auto& r : t.rules)
      rules.push_back({{"modality", to_string(r.modality)},
                       {"action", to_string(r.action)},
                       {"condition", r.condition},
                       {"citation", r.citation}});
    tuples.push_back({{"principal", t.data_principal},
                      {"domain", t.domain},
                      {"rules", rules},
                      {"receiving_entities", t.receiving_entities},
                      {"sensitivity", to_string(t.sensitivity)},
                      {"validated", t.validated}});
  }
  machine["finding"]["tuples"] = tuples;
  machine["strategy"] = {{"name", in.strategy.name},
                         {"rationale", in.strategy.rationale},
                         {"actions",
                          {{"Identifier", to_string(in.strategy.action_for(AttributeClass::Identifier))},
                           {"QuasiIdentifier",
                            to_string(in.strategy.action_for(AttributeClass::QuasiIdentifier))},
                           {"SensitiveValue",
                            to_string(in.strategy.action_for(AttributeClass::SensitiveValue))}}}};
  machine["score"] = score4(result.score);
  json log = json::array();
  for (const auto& e : result.audit) log.push_back(entry_to_json(e));
  machine["log"] = log;

  out << "=== MACHINE-READABLE ===\n" << machine.dump(2) << "\n";
  return out.str();
}

TraceVerdict verify_trace(const store::TableSlice& original,
                          const anonymizer::TransformResult& result) {
  TraceVerdict verdict;

  const std::size_t cells = original.rows.size() * original.columns.size();
  if (result.audit.size() != cells) {
    verdict.pass = false;
    verdict.message = "audit entry count " + std::to_string(result.audit.size()) +
                      " does not cover all " + std::to_string(cells) + " cells";
    return verdict;
  }

  // replay transformed values onto a copy of the original
  store::TableSlice replayed = original;
  double distance_sum = 0.0;
  for (const auto& e : result.audit) {
    auto col = std::find(original.columns.begin(), original.columns.end(), e.column);
    if (col == original.columns.end() ||
        e.row_index < 0 || static_cast<std::size_t>(e.row_index) >= original.rows.size()) {
      verdict.pass = false;
      verdict.row = e.row_index;
      verdict.column = e.column;
      verdict.message = "audit entry addresses a cell outside the slice";
      return verdict;
    }
    std::size_t j = static_cast<std::size_t>(col - original.columns.begin());
    store::Cell& cell = replayed.rows[static_cast<std::size_t>(e.row_index)][j];
    if (cell.text != e.original) {
      verdict.pass = false;
      verdict.row = e.row_index;
      verdict.column = e.column;
      verdict.message = "audit original does not match the source cell";
      return verdict;
    }
    cell.text = e.transformed;
    distance_sum += e.distance;
  }

  for (std::size_t i = 0; i < replayed.rows.size(); ++i) {
    for (std::size_t j = 0; j < replayed.columns.size(); ++j) {
      if (replayed.rows[i][j].text != result.slice.rows[i][j].text) {
        verdict.pass = false;
        verdict.row = static_cast<std::int64_t>(i);
        verdict.column = replayed.columns[j];
        verdict.message = "replayed cell diverges from the anonymized slice";
        return verdict;
      }
    }
  }

  const double recomputed = cells > 0 ? distance_sum / static_cast<double>(cells) : 0.0;
  if (std::abs(recomputed - result.score) > 1e-12) {
    verdict.pass = false;
    verdict.message = "recomputed score " + std::to_string(recomputed) +
                      " differs from reported score " + std::to_string(result.score);
    return verdict;
  }

  verdict.message = "trace verified";
  return verdict;
}

std::string serialize_audit(const std::vector<AuditEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += entry_to_json(e).dump() + "\n";
  return out;
}

std::vector<AuditEntry> parse_audit(const std::string& content) {
  std::vector<AuditEntry> entries;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    entries.push_back(entry_from_json(json::parse(line)));
  }
  return entries;
}

void save_audit_file(const std::vector<AuditEntry>& entries, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write audit file: " + path);
  out << serialize_audit(entries);
}

std::vector<AuditEntry> load_audit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open audit file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_audit(buf.str());
}

}  // namespace dpdpgov::audit
