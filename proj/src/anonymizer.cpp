#include "dpdpgov/anonymizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include <openssl/hmac.h>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::anonymizer {

using store::Cell;
using store::ColumnKind;
using store::TableSlice;

// ---------------------------------------------------------------------------
// Primitive transforms
// ---------------------------------------------------------------------------

std::string mask_value(const std::string& value, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("mask fraction must be in (0,1]");
  const std::size_t len = value.size();
  if (len == 0) return value;
  auto masked = static_cast<std::size_t>(std::ceil(p * static_cast<double>(len)));
  masked = std::min(masked, len);
  std::string out(masked, '*');
  out += value.substr(masked);
  return out;
}

std::string generalize_numeric(double value, int bin_count, double min, double max) {
  if (bin_count < 2) throw std::invalid_argument("bin_count must be >= 2");
  const double range = max - min;
  if (!(range > 0.0)) throw std::invalid_argument("degenerate column range");
  const double width = range / bin_count;
  int bin = static_cast<int>(std::floor((value - min) / width));
  bin = std::clamp(bin, 0, bin_count - 1);
  const double lo = min + bin * width;
  const double hi = bin + 1 == bin_count ? max : min + (bin + 1) * width;
  const bool top = bin + 1 == bin_count;
  return "[" + text::format_number(lo) + "," + text::format_number(hi) + (top ? "]" : ")");
}

namespace {

std::string hex_encode(const unsigned char* data, std::size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (std::size_t i = 0; i < len; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xF];
  }
  return out;
}

}  // namespace

std::string pseudonymize(const std::string& value, const std::string& key) {
  if (key.empty()) throw std::invalid_argument("pseudonymization key not loaded");
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(value.data()), value.size(), digest, &digest_len);
  return "pid_" + hex_encode(digest, 8);  // 16 hex chars
}

std::string encrypt_value(const std::string& value, const std::string& key) {
  if (key.empty()) throw std::invalid_argument("encryption key not loaded");
  std::string bytes = value;
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<char>(bytes[i] ^ key[i % key.size()]);
  return "enc_" + hex_encode(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
}

std::string decrypt_value(const std::string& token, const std::string& key) {
  if (key.empty()) throw std::invalid_argument("encryption key not loaded");
  if (token.rfind("enc_", 0) != 0 || token.size() % 2 != 0)
    throw std::invalid_argument("not an encrypted token: " + token);
  std::string hex = token.substr(4);
  std::string bytes;
  bytes.reserve(hex.size() / 2);
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("bad hex in token: " + token);
  };
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
    bytes += static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1]));
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<char>(bytes[i] ^ key[i % key.size()]);
  return bytes;
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

double cell_distance(const std::string& original, const std::string& transformed,
                     const AnonymizationAction& action, const ColumnContext& ctx) {
  switch (action.kind) {
    case ActionKind::NoOp:
      if (original != transformed)
        throw std::logic_error("NoOp changed a cell: '" + original + "' -> '" + transformed + "'");
      return 0.0;
    case ActionKind::MaskPartial: {
      if (original.empty()) return 0.0;
      if (transformed.size() != original.size())
        throw std::logic_error("MaskPartial changed cell length: '" + original + "' -> '" +
                               transformed + "'");
      auto masked =
          static_cast<double>(std::count(transformed.begin(), transformed.end(), '*') -
                              std::count(original.begin(), original.end(), '*'));
      return std::clamp(masked / static_cast<double>(original.size()), 0.0, 1.0);
    }
    case ActionKind::MaskFull:
    case ActionKind::Pseudonymize:
    case ActionKind::Encrypt:
    case ActionKind::Suppress:
      return 1.0;
    case ActionKind::GeneralizeNumeric: {
      if (!ctx.has_range) return 0.0;  // degenerate column, value unchanged
      const double range = ctx.max - ctx.min;
      if (!(range > 0.0)) return 0.0;
      return std::min(1.0, (range / action.bin_count) / range);
    }
    case ActionKind::GeneralizeCategory: {
      const int c = std::max(1, ctx.collapsed_leaves);
      return 1.0 - 1.0 / c;
    }
  }
  throw std::logic_error("bad ActionKind");
}

// ---------------------------------------------------------------------------
// apply_strategy
// ---------------------------------------------------------------------------

namespace {

struct ResolvedColumn {
  AnonymizationAction action;  // adapted to the column kind
  ColumnContext ctx;
  const std::map<std::string, std::string>* hierarchy = nullptr;
};

ColumnContext column_context(const TableSlice& slice, std::size_t col, ColumnKind kind) {
  ColumnContext ctx;
  ctx.kind = kind;
  bool first = true;
  std::set<std::string> distinct;
  for (const auto& row : slice.rows) {
    const Cell& cell = row[col];
    if (cell.null) continue;
    distinct.insert(cell.text);
    if (cell.numeric) {
      if (first) {
        ctx.min = ctx.max = cell.number;
        first = false;
      } else {
        ctx.min = std::min(ctx.min, cell.number);
        ctx.max = std::max(ctx.max, cell.number);
      }
    }
  }
  ctx.has_range = !first && ctx.max > ctx.min;
  ctx.category_count = std::max<int>(1, static_cast<int>(distinct.size()));
  ctx.collapsed_leaves = ctx.category_count;  // wildcard collapse default
  return ctx;
}

AnonymizationAction adapt_generalize(const AnonymizationAction& action, ColumnKind kind) {
  // generalization picks bins for numeric columns, category collapse otherwise
  if (action.kind == ActionKind::GeneralizeNumeric && kind != ColumnKind::Numeric)
    return AnonymizationAction::generalize_category(action.hierarchy_ref);
  if (action.kind == ActionKind::GeneralizeCategory && kind == ColumnKind::Numeric)
    return AnonymizationAction::generalize_numeric(4);
  return action;
}

}  // namespace

TransformResult apply_strategy(const TableSlice& slice, const Strategy& strategy,
                               const store::DatasetMetadata& metadata,
                               const AnonymizerConfig& config, const std::string& justification) {
  if (!strategy.total())
    throw std::runtime_error("strategy '" + strategy.name + "' is not total over attribute classes");

  std::vector<ResolvedColumn> resolved;
  resolved.reserve(slice.columns.size());
  for (std::size_t j = 0; j < slice.columns.size(); ++j) {
    const store::ColumnMeta* meta = metadata.find_column(slice.columns[j]);
    if (!meta)
      throw std::runtime_error("configuration error: column '" + slice.columns[j] +
                               "' has no metadata entry");
    ResolvedColumn rc;
    rc.action = adapt_generalize(strategy.action_for(meta->attr_class), meta->kind);
    rc.ctx = column_context(slice, j, meta->kind);
    auto h = config.hierarchies.find(slice.columns[j]);
    if (h != config.hierarchies.end()) rc.hierarchy = &h->second;
    resolved.push_back(std::move(rc));
  }

  TransformResult result;
  result.slice.columns = slice.columns;
  result.slice.rows.reserve(slice.rows.size());
  double distance_sum = 0.0;

  for (std::size_t i = 0; i < slice.rows.size(); ++i) {
    std::vector<Cell> out_row;
    out_row.reserve(slice.columns.size());
    for (std::size_t j = 0; j < slice.columns.size(); ++j) {
      const Cell& cell = slice.rows[i][j];
      const ResolvedColumn& rc = resolved[j];

      AuditEntry entry;
      entry.row_index = static_cast<std::int64_t>(i);
      entry.column = slice.columns[j];
      entry.original = cell.text;
      entry.action = rc.action;
      entry.justification = justification;

      Cell out = cell;
      double d = 0.0;
      ColumnContext ctx = rc.ctx;

      if (cell.null || rc.action.kind == ActionKind::NoOp) {
        // nulls pass through untouched
      } else {
        switch (rc.action.kind) {
          case ActionKind::MaskPartial:
            out.text = mask_value(cell.text, rc.action.fraction);
            break;
          case ActionKind::MaskFull:
            out.text = std::string(cell.text.size(), '*');
            break;
          case ActionKind::GeneralizeNumeric:
            if (cell.numeric && ctx.has_range)
              out.text = generalize_numeric(cell.number, rc.action.bin_count, ctx.min, ctx.max);
            break;  // degenerate range: value unchanged, distance 0
          case ActionKind::GeneralizeCategory:
            if (rc.hierarchy) {
              auto it = rc.hierarchy->find(cell.text);
              if (it != rc.hierarchy->end()) {
                out.text = it->second;
                int leaves = 0;
                for (const auto& [leaf, parent] : *rc.hierarchy)
                  if (parent == it->second) ++leaves;
                ctx.collapsed_leaves = std::max(1, leaves);
              } else {
                out.text = "*";
              }
            } else {
              out.text = "*";
            }
            break;
          case ActionKind::Pseudonymize:
            out.text = pseudonymize(cell.text, config.key);
            break;
          case ActionKind::Encrypt:
            out.text = encrypt_value(cell.text, config.key);
            break;
          case ActionKind::Suppress:
            out.text = "";
            out.null = true;
            break;
          default:
            break;
        }
        if (out.text != cell.text) {
          out.numeric = false;
          out.number = 0.0;
        }
        d = cell_distance(cell.text, out.text, rc.action, ctx);
      }

      entry.transformed = out.text;
      entry.distance = d;
      distance_sum += d;
      result.audit.push_back(std::move(entry));
      out_row.push_back(std::move(out));
    }
    result.slice.rows.push_back(std::move(out_row));
  }

  const double cells =
      static_cast<double>(slice.rows.size()) * static_cast<double>(slice.columns.size());
  result.score = cells > 0 ? distance_sum / cells : 0.0;
  return result;
}

double recompute_score(const TableSlice& original, const TableSlice& anonymized,
                       const Strategy& strategy, const store::DatasetMetadata& metadata,
                       const AnonymizerConfig& config) {
  if (original.columns != anonymized.columns || original.rows.size() != anonymized.rows.size())
    throw std::runtime_error("recompute_score: slice shapes differ");

  double sum = 0.0;
  for (std::size_t j = 0; j < original.columns.size(); ++j) {
    const store::ColumnMeta* meta = metadata.find_column(original.columns[j]);
    if (!meta) throw std::runtime_error("recompute_score: no metadata for " + original.columns[j]);
    AnonymizationAction action = adapt_generalize(strategy.action_for(meta->attr_class), meta->kind);
    ColumnContext ctx = column_context(original, j, meta->kind);
    auto h = config.hierarchies.find(original.columns[j]);
    for (std::size_t i = 0; i < original.rows.size(); ++i) {
      const Cell& o = original.rows[i][j];
      const Cell& a = anonymized.rows[i][j];
      if (o.null || action.kind == ActionKind::NoOp) continue;
      ColumnContext cctx = ctx;
      if (action.kind == ActionKind::GeneralizeCategory && h != config.hierarchies.end()) {
        int leaves = 0;
        for (const auto& [leaf, parent] : h->second)
          if (parent == a.text) ++leaves;
        if (leaves > 0) cctx.collapsed_leaves = leaves;
      }
      if (action.kind == ActionKind::GeneralizeNumeric && (!o.numeric || !ctx.has_range))
        continue;  // degenerate column: unchanged, distance 0
      sum += cell_distance(o.text, a.text, action, cctx);
    }
  }
  const double cells =
      static_cast<double>(original.rows.size()) * static_cast<double>(original.columns.size());
  return cells > 0 ? sum / cells : 0.0;
}

std::string slice_to_csv(const TableSlice& slice) {
  auto field = [](const std::string& v) {
    if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  };
  std::string out;
  for (std::size_t j = 0; j < slice.columns.size(); ++j) {
    if (j) out += ',';
    out += field(slice.columns[j]);
  }
  out += '\n';
  for (const auto& row : slice.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += field(row[j].text);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dpdpgov::anonymizer
