#pragma once

// Cell-level anonymization transforms, per-action distance functions, and
// the normalized Anonymisation Score: the mean of D(original, anonymized)
// over all N*M cells of a slice.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpdpgov/core.hpp"
#include "dpdpgov/data_store.hpp"

namespace dpdpgov::anonymizer {

// Context a distance function needs about the column the cell came from.
struct ColumnContext {
  store::ColumnKind kind = store::ColumnKind::Text;
  bool has_range = false;
  double min = 0.0;
  double max = 0.0;                 // numeric range over the slice column
  int category_count = 1;          // distinct non-null values in the column
  int collapsed_leaves = 1;        // leaves merged into the generalized class
};

// Prefix masking: the first ceil(p * L) characters become '*'; p = 1 masks
// everything. Punctuation counts toward L.
std::string mask_value(const std::string& value, double p);

// Equal-width bins over [min, max]; rendered "[a,b)", top bin closed "[a,b]".
std::string generalize_numeric(double value, int bin_count, double min, double max);

// Deterministic keyed token: "pid_" + 16 hex chars of an HMAC-SHA256 over
// the canonical text rendering.
std::string pseudonymize(const std::string& value, const std::string& key);

// Reversible keyed substitution over the text rendering ("enc_" + hex).
// Distance 1; no security strength claimed.
std::string encrypt_value(const std::string& value, const std::string& key);
std::string decrypt_value(const std::string& token, const std::string& key);

// Per-action distance in [0,1]:
//   NoOp -> 0; MaskPartial -> masked chars / L;
//   MaskFull / Pseudonymize / Encrypt / Suppress -> 1;
//   GeneralizeNumeric -> min(1, bin_width / range);
//   GeneralizeCategory -> 1 - 1/c with c collapsed leaf categories.
// Throws on an action/value mismatch.
double cell_distance(const std::string& original, const std::string& transformed,
                     const AnonymizationAction& action, const ColumnContext& ctx);

struct TransformResult {
  store::TableSlice slice;          // anonymized
  std::vector<AuditEntry> audit;    // one entry per cell, (row, column) order
  double score = 0.0;               // mean cell distance over N*M cells
};

struct AnonymizerConfig {
  std::string key;  // pseudonymization / encryption key
  // optional per-column generalization hierarchies: column -> (leaf -> parent)
  std::map<std::string, std::map<std::string, std::string>> hierarchies;
};

// Transforms every cell per its column's attribute-class action. Generalize
// actions adapt to the column kind (numeric bins for Numeric columns,
// category collapse otherwise). Null cells pass through with distance 0.
TransformResult apply_strategy(const store::TableSlice& slice, const Strategy& strategy,
                               const store::DatasetMetadata& metadata,
                               const AnonymizerConfig& config,
                               const std::string& justification = "");

// Independent of apply_strategy's bookkeeping: recomputes the score by
// walking all N*M (original, anonymized) cell pairs.
double recompute_score(const store::TableSlice& original, const store::TableSlice& anonymized,
                       const Strategy& strategy, const store::DatasetMetadata& metadata,
                       const AnonymizerConfig& config);

// Writes a slice back out as CSV (RFC-4180 quoting), mirroring column order.
std::string slice_to_csv(const store::TableSlice& slice);

}  // namespace dpdpgov::anonymizer
