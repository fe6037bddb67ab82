#pragma once

// Compliance justification report rendering and traceability verification.

#include <optional>
#include <string>
#include <vector>

#include "dpdpgov/anonymizer.hpp"
#include "dpdpgov/core.hpp"
#include "dpdpgov/sensitivity.hpp"

namespace dpdpgov::audit {

struct ReportInputs {
  AccessRequest request;
  DataProfile profile;
  sensitivity::SensitivityFinding finding;
  Strategy strategy;
  const anonymizer::TransformResult* result = nullptr;
};

// Human-readable report plus a machine-readable JSON section carrying the
// same data (including the full field-level transformation log).
std::string render_report(const ReportInputs& inputs);

struct TraceVerdict {
  bool pass = true;
  std::optional<std::int64_t> row;
  std::optional<std::string> column;
  std::string message;
};

// Replays the audit entries onto the original slice and compares the result
// bit-exactly with the anonymized slice; recomputes the score from the
// entries (mismatch beyond 1e-12 fails).
TraceVerdict verify_trace(const store::TableSlice& original,
                          const anonymizer::TransformResult& result);

// Audit log as NDJSON, one entry per line; exact round-trip.
std::string serialize_audit(const std::vector<AuditEntry>& entries);
std::vector<AuditEntry> parse_audit(const std::string& content);
void save_audit_file(const std::vector<AuditEntry>& entries, const std::string& path);
std::vector<AuditEntry> load_audit_file(const std::string& path);

}  // namespace dpdpgov::audit
