#pragma once

// Five-stage pipeline turning regulation plain text into the Compliance
// Repository of machine-interpretable tuples:
//   extract_text -> segment_sections -> recognize_entities -> extract_rules
//   -> construct_tuples
// All stages are deterministic, gazetteer-driven functions.

#include <string>
#include <vector>

#include "dpdpgov/core.hpp"

namespace dpdpgov::compliance {

enum class SectionTheme { Consent, UserRights, FiduciaryObligations, CrossBorderTransfer, Other };

std::string to_string(SectionTheme t);

struct SectionUnit {
  SectionTheme theme = SectionTheme::Other;
  std::string heading;
  std::string body;
  std::size_t span_start = 0;  // character offsets into the normalized source
  std::size_t span_end = 0;
};

enum class EntityKind { DataCategory, Role, Jurisdiction, Action };

std::string to_string(EntityKind k);

struct EntityMention {
  EntityKind kind = EntityKind::DataCategory;
  std::string surface;
  std::string canonical;
  std::size_t offset = 0;  // into the section body
};

// Gazetteers for the NER stage and for tuple annotation. Closed canonical
// inventories; surfaces are matched longest-first, case-insensitively, on
// word boundaries.
struct Gazetteers {
  struct Entry {
    std::string canonical;
    std::vector<std::string> surfaces;
  };
  std::vector<Entry> data_categories;
  std::vector<Entry> roles;
  std::vector<Entry> jurisdictions;
  std::vector<Entry> actions;
  // used by construct_tuples, not by recognize_entities
  std::vector<Entry> principals;
  std::vector<Entry> domains;
  std::vector<Entry> receivers;

  static Gazetteers defaults();
};

// Collapses line breaks inside paragraphs to single spaces; paragraph
// boundaries (blank lines) are preserved. No other edits.
std::string extract_text(const std::string& source);

// Splits on heading lines ("Section <n>", "Chapter <n>", "<n>." at paragraph
// start); theme assigned by keyword vote. Heading-free text yields a single
// Other unit.
std::vector<SectionUnit> segment_sections(const std::string& text);

std::vector<EntityMention> recognize_entities(const SectionUnit& section, const Gazetteers& gaz);

std::vector<RuleClause> extract_rules(const SectionUnit& section,
                                      const std::vector<EntityMention>& mentions);

struct CurationEntry {
  std::string section_heading;
  std::vector<RuleClause> rules;
  std::string reason;  // which annotation could not be resolved
};

struct TupleConstruction {
  std::vector<ComplianceTuple> tuples;
  std::vector<CurationEntry> curation_queue;
};

TupleConstruction construct_tuples(const SectionUnit& section,
                                   const std::vector<RuleClause>& rules,
                                   const Gazetteers& gaz);

// Runs the full pipeline over one regulation document.
TupleConstruction run_pipeline(const std::string& source, const Gazetteers& gaz);

// ---------------------------------------------------------------------------
// Repository file format
//   tuple := principal ';' domain ';' rule ('|' rule)* ';' receiver
//            (',' receiver)* ';' sensitivity ';' validated
//   rule  := modality ':' action ':' condition ':' citation
// '#' begins a comment line; blank lines are skipped. Serialization of a
// parsed file reproduces its record lines byte-exactly.
// ---------------------------------------------------------------------------

std::string serialize_tuple(const ComplianceTuple& t);
ComplianceTuple parse_tuple(const std::string& line);

std::vector<ComplianceTuple> parse_repository(const std::string& content);
std::string serialize_repository(const std::vector<ComplianceTuple>& tuples);

std::vector<ComplianceTuple> load_repository_file(const std::string& path);
void save_repository_file(const std::vector<ComplianceTuple>& tuples, const std::string& path);

}  // namespace dpdpgov::compliance
