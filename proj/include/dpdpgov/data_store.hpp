#pragma once

// CSV ingestion, the Metadata Repository, and relational selection queries.
// Datasets are read-only after ingestion.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpdpgov/core.hpp"

namespace dpdpgov::store {

enum class ColumnKind { Numeric, Categorical, Text, IdentifierLike };

std::string to_string(ColumnKind k);
ColumnKind column_kind_from_string(const std::string& s);

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::Text;
  AttributeClass attr_class = AttributeClass::QuasiIdentifier;
};

struct DatasetMetadata {
  std::string dataset_id;  // the source filename as given in requests
  std::string domain;      // canonical display form
  std::string owner;       // canonical principal
  std::string name;
  std::vector<ColumnMeta> columns;

  const ColumnMeta* find_column(const std::string& name) const;
};

// A cell keeps the original text rendering bit-exactly; numeric columns
// additionally carry the parsed value.
struct Cell {
  bool null = false;
  std::string text;
  double number = 0.0;
  bool numeric = false;
};

struct TableSlice {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;  // each row has exactly |columns| cells

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return columns.size(); }
};

struct SelectionQuery {
  std::string dataset_id;
  std::vector<std::string> columns;  // requested order
};

// Optional sidecar overriding filename-derived metadata and column classes.
struct MetadataSidecar {
  std::optional<std::string> domain;
  std::optional<std::string> owner;
  std::optional<std::string> name;
  std::map<std::string, AttributeClass> column_classes;
  std::map<std::string, ColumnKind> column_kinds;

  static MetadataSidecar load(const std::string& path);  // JSON document
};

class DataStore {
 public:
  // Parses the CSV (RFC-4180 quoting, first row header, >= 1 data row),
  // derives metadata from the `<Domain...>_<Owner>_<Name>.csv` filename
  // convention (sidecar wins when present) and infers column kinds.
  const DatasetMetadata& ingest_csv(const std::string& path,
                                    const std::optional<MetadataSidecar>& sidecar = {});

  const DatasetMetadata* find(const std::string& dataset_id) const;
  const DatasetMetadata& metadata(const std::string& dataset_id) const;
  std::vector<std::string> dataset_ids() const;

  SelectionQuery build_query(const AccessRequest& request, const DatasetMetadata& meta) const;
  TableSlice fetch(const SelectionQuery& query) const;

 private:
  struct Dataset {
    DatasetMetadata meta;
    TableSlice table;  // full table in ingestion order
  };
  std::map<std::string, Dataset> datasets_;
};

// Exposed for tests: raw RFC-4180 parse of a CSV stream into rows of fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

}  // namespace dpdpgov::store
