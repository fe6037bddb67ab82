#include "dpdpgov/data_store.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::store {

namespace fs = std::filesystem;
using text::to_lower;
using text::trim;

std::string to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::Numeric: return "Numeric";
    case ColumnKind::Categorical: return "Categorical";
    case ColumnKind::Text: return "Text";
    case ColumnKind::IdentifierLike: return "Identifier-like";
  }
  throw std::logic_error("bad ColumnKind");
}

ColumnKind column_kind_from_string(const std::string& s) {
  std::string k = to_lower(trim(s));
  if (k == "numeric") return ColumnKind::Numeric;
  if (k == "categorical") return ColumnKind::Categorical;
  if (k == "text") return ColumnKind::Text;
  if (k == "identifier-like" || k == "identifierlike" || k == "identifier")
    return ColumnKind::IdentifierLike;
  throw std::invalid_argument("unknown column kind: " + s);
}

const ColumnMeta* DatasetMetadata::find_column(const std::string& col) const {
  for (const auto& c : columns)
    if (c.name == col) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// CSV parsing
// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field += c;  // stray quote mid-field, keep verbatim
        }
        break;
      case ',': end_field(); break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n': end_row(); break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

namespace {

bool parse_number(const std::string& s, double& out) {
  std::string t = trim(s);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

bool identifier_like_name(const std::string& name) {
  // identifier gazetteer: *ID / *_id suffixes plus common direct identifiers
  std::string low = to_lower(name);
  static const char* suffixes[] = {"id", "_id"};
  for (const char* suf : suffixes) {
    std::size_t n = std::char_traits<char>::length(suf);
    if (low.size() > n && low.compare(low.size() - n, n, suf) == 0) return true;
  }
  static const char* names[] = {"email", "name", "phone", "mobile", "ssn",
                                "aadhaar", "pan", "passport", "account_number"};
  for (const char* g : names)
    if (low == g) return true;
  return false;
}

ColumnKind infer_kind(const std::string& name, const std::vector<Cell>& cells) {
  if (identifier_like_name(name)) return ColumnKind::IdentifierLike;
  bool all_numeric = true;
  std::set<std::string> distinct;
  std::size_t non_null = 0;
  for (const auto& c : cells) {
    if (c.null) continue;
    ++non_null;
    if (!c.numeric) all_numeric = false;
    if (distinct.size() <= 24) distinct.insert(c.text);
  }
  if (non_null > 0 && all_numeric) return ColumnKind::Numeric;
  // low cardinality relative to row count
  if (non_null > 0 && distinct.size() <= 24 &&
      distinct.size() * 2 <= std::max<std::size_t>(non_null, 2))
    return ColumnKind::Categorical;
  return ColumnKind::Text;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sidecar
// ---------------------------------------------------------------------------

MetadataSidecar MetadataSidecar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sidecar: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  MetadataSidecar sc;
  if (j.contains("domain")) sc.domain = j["domain"].get<std::string>();
  if (j.contains("owner")) sc.owner = j["owner"].get<std::string>();
  if (j.contains("name")) sc.name = j["name"].get<std::string>();
  if (j.contains("columns")) {
    for (auto& [col, spec] : j["columns"].items()) {
      if (spec.contains("class"))
        sc.column_classes[col] = attribute_class_from_string(spec["class"].get<std::string>());
      if (spec.contains("kind"))
        sc.column_kinds[col] = column_kind_from_string(spec["kind"].get<std::string>());
    }
  }
  return sc;
}

// ---------------------------------------------------------------------------
// DataStore
// ---------------------------------------------------------------------------

const DatasetMetadata& DataStore::ingest_csv(const std::string& path,
                                             const std::optional<MetadataSidecar>& sidecar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto raw = parse_csv(buf.str());
  if (raw.size() < 2)
    throw std::runtime_error("ingestion error: " + path + " needs a header and at least one data row");

  const auto& header = raw.front();
  for (std::size_t r = 1; r < raw.size(); ++r) {
    if (raw[r].size() != header.size())
      throw std::runtime_error("ingestion error: ragged row " + std::to_string(r + 1) + " in " + path +
                               " (" + std::to_string(raw[r].size()) + " fields, expected " +
                               std::to_string(header.size()) + ")");
  }

  std::string filename = fs::path(path).filename().string();
  std::string stem = fs::path(path).stem().string();

  // filename convention parsed right-to-left: last token name, second-last
  // owner, remaining tokens joined with '_' form the domain
  std::string domain, owner, name;
  auto tokens = text::split(stem, '_');
  bool have_convention = tokens.size() >= 3;
  if (have_convention) {
    name = tokens.back();
    owner = tokens[tokens.size() - 2];
    tokens.resize(tokens.size() - 2);
    domain = text::join(tokens, "_");
  }

  MetadataSidecar sc = sidecar.value_or(MetadataSidecar{});
  if (!sidecar && !have_convention)
    throw std::runtime_error("metadata error: filename '" + filename +
                             "' has fewer than 3 tokens and no sidecar was given");
  if (sc.domain) domain = *sc.domain;
  if (sc.owner) owner = *sc.owner;
  if (sc.name) name = *sc.name;
  if (domain.empty() || owner.empty() || name.empty())
    throw std::runtime_error("metadata error: domain/owner/name unresolved for " + filename);

  DatasetMetadata meta;
  meta.dataset_id = filename;
  meta.domain = canonical_domain_display(domain);
  meta.owner = canonical_principal(owner);
  meta.name = name;

  TableSlice table;
  table.columns = header;
  {
    std::set<std::string> seen;
    for (const auto& h : header) {
      if (h.empty() || !seen.insert(h).second)
        throw std::runtime_error("ingestion error: empty or duplicate column name in " + path);
    }
  }
  for (std::size_t r = 1; r < raw.size(); ++r) {
    std::vector<Cell> row;
    row.reserve(header.size());
    for (const auto& f : raw[r]) {
      Cell c;
      c.text = f;
      if (trim(f).empty() && f.find('"') == std::string::npos) {
        c.null = f.empty();  // only a fully empty field is the null marker
      }
      double v;
      if (!c.null && parse_number(f, v)) {
        c.numeric = true;
        c.number = v;
      }
      row.push_back(std::move(c));
    }
    table.rows.push_back(std::move(row));
  }

  for (std::size_t j = 0; j < header.size(); ++j) {
    std::vector<Cell> col;
    col.reserve(table.rows.size());
    for (const auto& row : table.rows) col.push_back(row[j]);
    ColumnMeta cm;
    cm.name = header[j];
    cm.kind = infer_kind(header[j], col);
    if (auto it = sc.column_kinds.find(header[j]); it != sc.column_kinds.end()) cm.kind = it->second;
    cm.attr_class = cm.kind == ColumnKind::IdentifierLike ? AttributeClass::Identifier
                                                          : AttributeClass::QuasiIdentifier;
    if (auto it = sc.column_classes.find(header[j]); it != sc.column_classes.end())
      cm.attr_class = it->second;
    meta.columns.push_back(std::move(cm));
  }

  auto [it, _] = datasets_.insert_or_assign(meta.dataset_id, Dataset{meta, std::move(table)});
  return it->second.meta;
}

const DatasetMetadata* DataStore::find(const std::string& dataset_id) const {
  auto it = datasets_.find(dataset_id);
  return it == datasets_.end() ? nullptr : &it->second.meta;
}

const DatasetMetadata& DataStore::metadata(const std::string& dataset_id) const {
  const DatasetMetadata* m = find(dataset_id);
  if (!m) throw std::runtime_error("unknown dataset: " + dataset_id);
  return *m;
}

std::vector<std::string> DataStore::dataset_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : datasets_) ids.push_back(id);
  return ids;
}

SelectionQuery DataStore::build_query(const AccessRequest& request,
                                      const DatasetMetadata& meta) const {
  std::vector<std::string> missing;
  for (const auto& a : request.requested_attributes)
    if (!meta.find_column(a)) missing.push_back(a);
  if (!missing.empty())
    throw std::runtime_error("unknown attributes in " + meta.dataset_id + ": " +
                             text::join(missing, ", "));
  return SelectionQuery{meta.dataset_id, request.requested_attributes};
}

TableSlice DataStore::fetch(const SelectionQuery& query) const {
  auto it = datasets_.find(query.dataset_id);
  if (it == datasets_.end())
    throw std::runtime_error("stale reference: dataset " + query.dataset_id +
                             " is no longer ingested");
  const TableSlice& full = it->second.table;

  std::vector<std::size_t> idx;
  idx.reserve(query.columns.size());
  for (const auto& col : query.columns) {
    auto pos = std::find(full.columns.begin(), full.columns.end(), col);
    if (pos == full.columns.end())
      throw std::runtime_error("query references unknown column: " + col);
    idx.push_back(static_cast<std::size_t>(pos - full.columns.begin()));
  }

  TableSlice slice;
  slice.columns = query.columns;
  slice.rows.reserve(full.rows.size());
  for (const auto& row : full.rows) {
    std::vector<Cell> out;
    out.reserve(idx.size());
    for (std::size_t j : idx) out.push_back(row[j]);
    slice.rows.push_back(std::move(out));
  }
  return slice;
}

}  // namespace dpdpgov::store
