#include "dpdpgov/compliance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::compliance {

using text::find_ci;
using text::to_lower;
using text::trim;

std::string to_string(SectionTheme t) {
  switch (t) {
    case SectionTheme::Consent: return "Consent";
    case SectionTheme::UserRights: return "UserRights";
    case SectionTheme::FiduciaryObligations: return "FiduciaryObligations";
    case SectionTheme::CrossBorderTransfer: return "CrossBorderTransfer";
    case SectionTheme::Other: return "Other";
  }
  throw std::logic_error("bad SectionTheme");
}

std::string to_string(EntityKind k) {
  switch (k) {
    case EntityKind::DataCategory: return "DataCategory";
    case EntityKind::Role: return "Role";
    case EntityKind::Jurisdiction: return "Jurisdiction";
    case EntityKind::Action: return "Action";
  }
  throw std::logic_error("bad EntityKind");
}

// ---------------------------------------------------------------------------
// Gazetteers
// ---------------------------------------------------------------------------

Gazetteers Gazetteers::defaults() {
  Gazetteers g;
  g.data_categories = {
      {"personal", {"personal data", "personal"}},
      {"sensitive", {"sensitive personal data", "sensitive data", "sensitive"}},
      {"anonymized", {"anonymized data", "anonymised data", "anonymized", "anonymised"}},
  };
  g.roles = {
      {"Data Principal", {"data principal", "data principals"}},
      {"Data Fiduciary", {"data fiduciary", "data fiduciaries"}},
      {"Consent Manager", {"consent manager", "consent managers"}},
  };
  g.jurisdictions = {
      {"India", {"india"}},
      {"foreign territory", {"foreign territory", "foreign territories", "outside india"}},
  };
  g.actions = {
      {"collection", {"collection", "collected", "collects", "collect"}},
      {"processing", {"processing", "processed", "processes", "process"}},
      {"sharing", {"sharing", "shared", "shares", "share"}},
      {"erasure", {"erasure", "erased", "erases", "erase", "deletion", "deleted"}},
  };
  g.principals = {
      {"Adult Individual", {"adult individual", "adult individuals", "adult"}},
      {"Child (<18 years)", {"child", "children", "minor", "minors"}},
      {"Person with Disability (via guardian)",
       {"person with disability", "persons with disability", "persons with disabilities"}},
      {"Hindu Undivided Family (HUF)", {"hindu undivided family", "huf"}},
      {"Company/Firm", {"company", "companies", "firm", "firms"}},
      {"Association or Body of Individuals",
       {"association of individuals", "body of individuals", "association"}},
      {"State", {"the state", "state agencies"}},
      {"Artificial Juristic Person (e.g., Trust, NGO)",
       {"artificial juristic person", "juristic person", "ngo"}},
  };
  g.domains = {
      {"Healthcare", {"healthcare", "health care", "medical", "hospital", "hospitals"}},
      {"Finance & Banking", {"finance", "banking", "financial", "bank", "banks"}},
      {"Education", {"education", "educational", "school", "schools"}},
      {"E-commerce", {"e-commerce", "ecommerce", "online retail"}},
      {"Social Media", {"social media"}},
      {"Telecom", {"telecom", "telecommunication", "telecommunications"}},
      {"Government Services", {"government services", "government service", "public services"}},
      {"Employment & HR Tech", {"employment", "employer", "employers", "payroll"}},
      {"Startups and IT Services", {"startups", "startup", "it services"}},
      {"Travel", {"travel", "tourism"}},
  };
  g.receivers = {
      {"Doctors", {"doctors", "doctor", "physicians"}},
      {"Insurers", {"insurers", "insurer", "insurance companies"}},
      {"Guardian", {"guardian", "guardians"}},
      {"Emergency Services", {"emergency services"}},
      {"Tax Authorities", {"tax authorities", "tax authority"}},
      {"Legal Entities", {"legal entities", "legal entity"}},
      {"Internal Company Departments", {"internal company departments", "internal departments"}},
      {"Internal Teams", {"internal teams", "internal team"}},
      {"Government Departments", {"government departments", "government department", "departments"}},
      {"Contractors", {"contractors", "contractor"}},
      {"Legal Authorities", {"legal authorities", "legal authority"}},
      {"Government Schemes", {"government schemes", "government scheme"}},
      {"RBI", {"rbi", "reserve bank"}},
      {"Credit Bureaus", {"credit bureaus", "credit bureau"}},
      {"Banks", {"banks"}},
  };
  return g;
}

// ---------------------------------------------------------------------------
// extract_text
// ---------------------------------------------------------------------------

std::string extract_text(const std::string& source) {
  // validate UTF-8 well-formedness (byte-level continuation check)
  for (std::size_t i = 0; i < source.size();) {
    unsigned char c = source[i];
    int extra = c < 0x80 ? 0 : (c >> 5) == 0x6 ? 1 : (c >> 4) == 0xE ? 2 : (c >> 3) == 0x1E ? 3 : -1;
    if (extra < 0) throw std::runtime_error("decode error: invalid UTF-8 at byte " + std::to_string(i));
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= source.size() || (static_cast<unsigned char>(source[i + k]) >> 6) != 0x2)
        throw std::runtime_error("decode error: truncated UTF-8 sequence at byte " + std::to_string(i));
    }
    i += extra + 1;
  }

  // split into paragraphs on blank lines, join lines within a paragraph
  std::vector<std::string> paragraphs;
  std::string para;
  std::istringstream in(source);
  std::string line;
  auto flush = [&] {
    if (!trim(para).empty()) paragraphs.push_back(trim(para));
    para.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
    } else {
      if (!para.empty()) para += ' ';
      para += trim(line);
    }
  }
  flush();

  std::string out;
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    if (i) out += "\n\n";
    out += paragraphs[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// segment_sections
// ---------------------------------------------------------------------------

namespace {

bool is_heading_paragraph(const std::string& para) {
  static const std::regex heading_re(R"(^(Section\s+\d+|Chapter\s+\d+|\d+\.)\s*)",
                                     std::regex::icase);
  return std::regex_search(para, heading_re, std::regex_constants::match_continuous);
}

SectionTheme vote_theme(const std::string& body) {
  std::string low = to_lower(body);
  auto count = [&](std::initializer_list<const char*> keys) {
    int n = 0;
    for (const char* k : keys) {
      std::size_t pos = 0;
      while ((pos = low.find(k, pos)) != std::string::npos) {
        ++n;
        pos += std::char_traits<char>::length(k);
      }
    }
    return n;
  };
  struct Vote {
    SectionTheme theme;
    int n;
  };
  std::vector<Vote> votes = {
      {SectionTheme::Consent, count({"consent"})},
      {SectionTheme::UserRights, count({"right ", "rights"})},
      {SectionTheme::FiduciaryObligations, count({"fiduciary", "obligation"})},
      {SectionTheme::CrossBorderTransfer, count({"outside india", "territory", "cross-border"})},
  };
  SectionTheme best = SectionTheme::Other;
  int best_n = 0;
  for (const auto& v : votes) {
    if (v.n > best_n) {
      best = v.theme;
      best_n = v.n;
    }
  }
  return best;
}

struct Paragraph {
  std::string text;
  std::size_t start;
  std::size_t end;
};

std::vector<Paragraph> split_paragraphs(const std::string& text) {
  std::vector<Paragraph> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t sep = text.find("\n\n", pos);
    std::size_t end = sep == std::string::npos ? text.size() : sep;
    out.push_back({text.substr(pos, end - pos), pos, end});
    pos = sep == std::string::npos ? text.size() : sep + 2;
  }
  return out;
}

}  // namespace

std::vector<SectionUnit> segment_sections(const std::string& text) {
  if (trim(text).empty()) throw std::runtime_error("segment_sections: empty text");
  auto paras = split_paragraphs(text);

  // section boundaries at heading paragraphs; leading non-heading text forms
  // its own Other-themed unit
  std::vector<SectionUnit> units;
  SectionUnit current;
  bool open = false;
  auto close = [&](std::size_t end) {
    if (!open) return;
    current.span_end = end;
    current.body = text.substr(current.span_start, current.span_end - current.span_start);
    current.theme = vote_theme(current.body);
    units.push_back(current);
    open = false;
  };

  for (const auto& p : paras) {
    if (is_heading_paragraph(p.text)) {
      close(p.start > 2 ? p.start - 2 : p.start);
      current = SectionUnit{};
      current.heading = p.text.substr(0, p.text.find(". ") == std::string::npos
                                             ? p.text.size()
                                             : p.text.find(". "));
      current.span_start = p.start;
      open = true;
    } else if (!open) {
      current = SectionUnit{};
      current.heading = "";
      current.span_start = p.start;
      open = true;
    }
  }
  close(text.size());

  if (units.empty()) {
    SectionUnit whole;
    whole.heading = "";
    whole.body = text;
    whole.span_start = 0;
    whole.span_end = text.size();
    whole.theme = SectionTheme::Other;
    units.push_back(whole);
  }
  return units;
}

// ---------------------------------------------------------------------------
// recognize_entities
// ---------------------------------------------------------------------------

namespace {

bool word_boundary(const std::string& s, std::size_t pos, std::size_t len) {
  auto alnum = [&](std::size_t i) {
    return i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_');
  };
  bool left_ok = pos == 0 || !alnum(pos - 1);
  bool right_ok = !alnum(pos + len);
  return left_ok && right_ok;
}

struct Match {
  std::size_t offset;
  std::size_t length;
  std::string canonical;
};

// longest-match, case-insensitive scan over one gazetteer group
std::vector<Match> scan_gazetteer(const std::string& body,
                                  const std::vector<Gazetteers::Entry>& entries) {
  std::vector<Match> matches;
  std::size_t pos = 0;
  while (pos < body.size()) {
    Match best{0, 0, ""};
    for (const auto& e : entries) {
      for (const auto& surf : e.surfaces) {
        if (surf.size() <= best.length) continue;
        if (text::starts_with_ci(std::string_view(body).substr(pos), surf) &&
            word_boundary(body, pos, surf.size())) {
          best = {pos, surf.size(), e.canonical};
        }
      }
    }
    if (best.length > 0) {
      matches.push_back(best);
      pos += best.length;
    } else {
      ++pos;
    }
  }
  return matches;
}

}  // namespace

std::vector<EntityMention> recognize_entities(const SectionUnit& section, const Gazetteers& gaz) {
  // joint longest-match scan: groups compete, so "Data Fiduciary" (role)
  // shadows a bare "data" (category) at the same position
  const std::string& body = section.body;
  std::vector<std::pair<EntityKind, const std::vector<Gazetteers::Entry>*>> groups = {
      {EntityKind::DataCategory, &gaz.data_categories},
      {EntityKind::Role, &gaz.roles},
      {EntityKind::Jurisdiction, &gaz.jurisdictions},
      {EntityKind::Action, &gaz.actions},
  };
  std::vector<EntityMention> mentions;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t best_len = 0;
    EntityKind best_kind = EntityKind::DataCategory;
    std::string best_canonical;
    for (const auto& [kind, entries] : groups) {
      for (const auto& e : *entries) {
        for (const auto& surf : e.surfaces) {
          if (surf.size() <= best_len) continue;
          if (text::starts_with_ci(std::string_view(body).substr(pos), surf) &&
              word_boundary(body, pos, surf.size())) {
            best_len = surf.size();
            best_kind = kind;
            best_canonical = e.canonical;
          }
        }
      }
    }
    if (best_len > 0) {
      EntityMention em;
      em.kind = best_kind;
      em.surface = body.substr(pos, best_len);
      em.canonical = best_canonical;
      em.offset = pos;
      mentions.push_back(std::move(em));
      pos += best_len;
    } else {
      ++pos;
    }
  }
  return mentions;
}

// ---------------------------------------------------------------------------
// extract_rules
// ---------------------------------------------------------------------------

namespace {

struct Sentence {
  std::string text;
  std::size_t offset;  // into section body
};

std::vector<Sentence> split_sentences(const std::string& body) {
  std::vector<Sentence> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '.' || c == '!' || c == '?') {
      // don't break on decimal points or clause refs like "7(f)."
      if (c == '.' && i + 1 < body.size() && std::isdigit(static_cast<unsigned char>(body[i + 1])))
        continue;
      std::string s = trim(body.substr(start, i + 1 - start));
      if (!s.empty()) out.push_back({s, start});
      start = i + 1;
    }
  }
  std::string rest = trim(body.substr(start));
  if (!rest.empty()) out.push_back({rest, start});
  return out;
}

struct Trigger {
  Modality modality;
  std::size_t pos;     // position in sentence
  std::size_t length;  // trigger length
};

std::optional<Trigger> find_trigger(const std::string& sentence) {
  struct Pat {
    const char* key;
    Modality modality;
    bool anchored;  // must appear at sentence start
  };
  // precedence: negations first, then conditionals, then plain obligations
  static const Pat patterns[] = {
      {"shall not", Modality::MustNot, false}, {"must not", Modality::MustNot, false},
      {"no ", Modality::MustNot, true},        {"only with", Modality::OnlyIf, false},
      {"only if", Modality::OnlyIf, false},    {"unless", Modality::OnlyIf, false},
      {"shall", Modality::Must, false},        {"must", Modality::Must, false},
      {"may", Modality::May, false},
  };
  for (const auto& p : patterns) {
    std::size_t pos = p.anchored ? (text::starts_with_ci(sentence, p.key) ? 0 : std::string::npos)
                                 : find_ci(sentence, p.key);
    if (pos == std::string::npos) continue;
    std::size_t len = std::char_traits<char>::length(p.key);
    if (!p.anchored && !word_boundary(sentence, pos, len)) continue;
    return Trigger{p.modality, pos, len};
  }
  return std::nullopt;
}

std::string strip_clause(std::string s) {
  // trailing sentence punctuation is not part of the condition
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?' || s.back() == ','))
    s.pop_back();
  return trim(s);
}

std::vector<std::pair<std::string, std::size_t>> find_citations(const std::string& body) {
  static const std::regex cite_re(R"(Sec(?:tion)?\s+\d+(\([^)]*\))?)");
  std::vector<std::pair<std::string, std::size_t>> out;
  auto begin = std::sregex_iterator(body.begin(), body.end(), cite_re);
  for (auto it = begin; it != std::sregex_iterator(); ++it)
    out.emplace_back(it->str(), static_cast<std::size_t>(it->position()));
  return out;
}

}  // namespace

std::vector<RuleClause> extract_rules(const SectionUnit& section,
                                      const std::vector<EntityMention>& mentions) {
  std::vector<RuleClause> rules;
  auto citations = find_citations(section.body);

  for (const auto& sent : split_sentences(section.body)) {
    auto trig = find_trigger(sent.text);
    if (!trig) continue;

    RuleClause rule;
    rule.modality = trig->modality;
    rule.condition = strip_clause(sent.text.substr(trig->pos + trig->length));

    if (rule.condition.empty() &&
        (rule.modality == Modality::MustNot || rule.modality == Modality::OnlyIf)) {
      rule.modality = Modality::May;
      rule.flagged_for_review = true;
    }

    // action: nearest Action mention inside this sentence, default Share
    rule.action = RuleAction::Share;
    std::size_t sent_begin = sent.offset;
    std::size_t sent_end = sent.offset + sent.text.size();
    std::size_t trigger_abs = sent.offset + trig->pos;
    std::size_t best_dist = std::string::npos;
    for (const auto& m : mentions) {
      if (m.kind != EntityKind::Action) continue;
      if (m.offset < sent_begin || m.offset >= sent_end) continue;
      std::size_t d = m.offset > trigger_abs ? m.offset - trigger_abs : trigger_abs - m.offset;
      if (d < best_dist) {
        best_dist = d;
        if (m.canonical == "collection") rule.action = RuleAction::Collect;
        else if (m.canonical == "processing") rule.action = RuleAction::Process;
        else if (m.canonical == "sharing") rule.action = RuleAction::Share;
        else if (m.canonical == "erasure") rule.action = RuleAction::Erase;
      }
    }

    // citation: nearest "Sec <n>(...)" pattern in the section, else heading
    if (!citations.empty()) {
      std::size_t best = std::string::npos;
      for (const auto& [cite, off] : citations) {
        std::size_t d = off > trigger_abs ? off - trigger_abs : trigger_abs - off;
        if (d < best) {
          best = d;
          rule.citation = cite;
        }
      }
    } else {
      rule.citation = section.heading;
    }

    rules.push_back(std::move(rule));
  }
  return rules;
}

// ---------------------------------------------------------------------------
// construct_tuples
// ---------------------------------------------------------------------------

namespace {

SensitivityLevel default_sensitivity(const std::string& principal, const std::string& domain) {
  // High for health, finance, or child data; Moderate otherwise
  std::string dk = domain_match_key(domain);
  if (dk == "healthcare" || dk == "finance") return SensitivityLevel::High;
  if (principal_match_key(principal) == principal_match_key("Child (<18 years)"))
    return SensitivityLevel::High;
  return SensitivityLevel::Moderate;
}

}  // namespace

TupleConstruction construct_tuples(const SectionUnit& section,
                                   const std::vector<RuleClause>& rules,
                                   const Gazetteers& gaz) {
  TupleConstruction out;
  if (rules.empty()) return out;

  auto principal_matches = scan_gazetteer(section.body, gaz.principals);
  auto domain_matches = scan_gazetteer(section.body, gaz.domains);
  auto receiver_matches = scan_gazetteer(section.body, gaz.receivers);

  std::vector<std::string> principals;
  for (const auto& m : principal_matches)
    if (std::find(principals.begin(), principals.end(), m.canonical) == principals.end())
      principals.push_back(m.canonical);

  std::string domain = domain_matches.empty() ? "" : domain_matches.front().canonical;

  std::vector<std::string> receivers;
  for (const auto& m : receiver_matches)
    if (std::find(receivers.begin(), receivers.end(), m.canonical) == receivers.end())
      receivers.push_back(m.canonical);

  if (principals.empty() || domain.empty() || receivers.empty()) {
    std::string reason;
    if (principals.empty()) reason = "no data principal resolved";
    else if (domain.empty()) reason = "no domain resolved";
    else reason = "no receiving entity resolved";
    out.curation_queue.push_back({section.heading, rules, reason});
    return out;
  }

  for (const auto& principal : principals) {
    ComplianceTuple t;
    t.data_principal = principal;
    t.domain = domain;
    t.rules = rules;
    t.receiving_entities = receivers;
    t.sensitivity = default_sensitivity(principal, domain);
    t.validated = false;
    out.tuples.push_back(std::move(t));
  }
  return out;
}

TupleConstruction run_pipeline(const std::string& source, const Gazetteers& gaz) {
  TupleConstruction all;
  std::string normalized = extract_text(source);
  if (trim(normalized).empty()) return all;
  for (const auto& section : segment_sections(normalized)) {
    auto mentions = recognize_entities(section, gaz);
    auto rules = extract_rules(section, mentions);
    auto built = construct_tuples(section, rules, gaz);
    all.tuples.insert(all.tuples.end(), built.tuples.begin(), built.tuples.end());
    all.curation_queue.insert(all.curation_queue.end(), built.curation_queue.begin(),
                              built.curation_queue.end());
  }
  return all;
}

// ---------------------------------------------------------------------------
// Repository format
// ---------------------------------------------------------------------------

namespace {

void check_field(const std::string& value, const char* field, const char* banned) {
  if (value.find_first_of(banned) != std::string::npos)
    throw std::invalid_argument(std::string("repository field '") + field +
                                "' contains a reserved separator: " + value);
}

}  // namespace

std::string serialize_tuple(const ComplianceTuple& t) {
  if (t.data_principal.empty() || t.domain.empty())
    throw std::invalid_argument("tuple principal/domain must be non-empty");
  if (t.rules.empty()) throw std::invalid_argument("tuple rules must be non-empty");
  if (t.receiving_entities.empty())
    throw std::invalid_argument("tuple receiving_entities must be non-empty");
  check_field(t.data_principal, "principal", ";");
  check_field(t.domain, "domain", ";");

  std::string out = t.data_principal + ";" + t.domain + ";";
  for (std::size_t i = 0; i < t.rules.size(); ++i) {
    const RuleClause& r = t.rules[i];
    check_field(r.condition, "condition", ";:|");
    check_field(r.citation, "citation", ";:|");
    if (i) out += "|";
    out += to_string(r.modality) + ":" + to_string(r.action) + ":" + r.condition + ":" + r.citation;
  }
  out += ";";
  for (std::size_t i = 0; i < t.receiving_entities.size(); ++i) {
    check_field(t.receiving_entities[i], "receiver", ";,");
    if (i) out += ",";
    out += t.receiving_entities[i];
  }
  out += ";" + to_string(t.sensitivity) + ";" + (t.validated ? "true" : "false");
  return out;
}

ComplianceTuple parse_tuple(const std::string& line) {
  auto fields = text::split(line, ';');
  if (fields.size() != 6)
    throw std::runtime_error("malformed tuple record (expected 6 ';' fields): " + line);

  ComplianceTuple t;
  t.data_principal = fields[0];
  t.domain = fields[1];
  if (t.data_principal.empty() || t.domain.empty())
    throw std::runtime_error("tuple principal/domain must be non-empty: " + line);

  for (const auto& rule_str : text::split(fields[2], '|')) {
    auto parts = text::split(rule_str, ':');
    if (parts.size() != 4)
      throw std::runtime_error("malformed rule (expected 4 ':' fields): " + rule_str);
    RuleClause r;
    r.modality = modality_from_string(parts[0]);
    r.action = rule_action_from_string(parts[1]);
    r.condition = parts[2];
    r.citation = parts[3];
    if (r.condition.empty() && (r.modality == Modality::MustNot || r.modality == Modality::OnlyIf))
      throw std::runtime_error("condition may be empty only for May/Must: " + rule_str);
    t.rules.push_back(std::move(r));
  }
  if (t.rules.empty()) throw std::runtime_error("tuple has no rules: " + line);

  t.receiving_entities = text::split(fields[3], ',');
  for (const auto& r : t.receiving_entities)
    if (r.empty()) throw std::runtime_error("empty receiving entity: " + line);

  t.sensitivity = sensitivity_from_string(fields[4]);
  std::string v = to_lower(trim(fields[5]));
  if (v != "true" && v != "false") throw std::runtime_error("bad validated flag: " + line);
  t.validated = v == "true";
  return t;
}

std::vector<ComplianceTuple> parse_repository(const std::string& content) {
  std::vector<ComplianceTuple> tuples;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      tuples.push_back(parse_tuple(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("repository parse error at line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return tuples;
}

std::string serialize_repository(const std::vector<ComplianceTuple>& tuples) {
  std::string out;
  for (const auto& t : tuples) out += serialize_tuple(t) + "\n";
  return out;
}

std::vector<ComplianceTuple> load_repository_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open repository file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_repository(buf.str());
}

void save_repository_file(const std::vector<ComplianceTuple>& tuples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write repository file: " + path);
  out << serialize_repository(tuples);
}

}  // namespace dpdpgov::compliance
