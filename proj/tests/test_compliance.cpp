#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dpdpgov/compliance.hpp"

using namespace dpdpgov;
using namespace dpdpgov::compliance;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("extract_text joins wrapped lines but keeps paragraphs") {
  std::string out = extract_text("line one\nline two\n\nnext para\n");
  CHECK(out.find("line one line two") != std::string::npos);
  CHECK(out.find("\n\nnext para") != std::string::npos);
}

TEST_CASE("extract_text rejects invalid UTF-8") {
  std::string bad = "ok so far \xFF\xFE broken";
  CHECK_THROWS(extract_text(bad));
}

TEST_CASE("segmentation splits on heading lines and assigns themes") {
  std::string text =
      "Section 6 Consent\n\nConsent must be free and informed.\n\n"
      "Section 16 Transfer outside India\n\nCross-border transfer is restricted.\n";
  auto sections = segment_sections(extract_text(text));
  REQUIRE(sections.size() == 2);
  CHECK(sections[0].heading == "Section 6 Consent");
  CHECK(sections[0].theme == SectionTheme::Consent);
  CHECK(sections[1].theme == SectionTheme::CrossBorderTransfer);
  CHECK(sections[0].span_start < sections[0].span_end);
  CHECK(sections[0].span_end <= sections[1].span_start);
}

TEST_CASE("heading-free text yields a single Other unit") {
  auto sections = segment_sections("no headings at all, just prose.");
  REQUIRE(sections.size() == 1);
  CHECK(sections[0].theme == SectionTheme::Other);
}

TEST_CASE("entity recognition prefers the longest surface, case-insensitive") {
  Gazetteers gaz;
  gaz.data_categories = {{"personal data", {"personal data", "data"}}};
  gaz.roles = {{"Data Fiduciary", {"data fiduciary", "fiduciary"}}};
  SectionUnit s;
  s.body = "The Data Fiduciary shall protect Personal Data.";
  auto mentions = recognize_entities(s, gaz);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].canonical == "Data Fiduciary");
  CHECK(mentions[0].kind == EntityKind::Role);
  CHECK(mentions[1].canonical == "personal data");
  CHECK(mentions[1].offset == s.body.find("Personal Data"));
}

TEST_CASE("rule extraction modality triggers") {
  Gazetteers gaz = Gazetteers::defaults();
  SectionUnit s;
  s.heading = "Section 7";
  s.body =
      "Health records shall not be shared for advertising. "
      "Data may be shared only with explicit consent under Sec 7(a). "
      "The fiduciary must erase data after withdrawal. "
      "Aggregates may be processed for research.";
  auto rules = extract_rules(s, recognize_entities(s, gaz));
  REQUIRE(rules.size() == 4);
  CHECK(rules[0].modality == Modality::MustNot);
  CHECK(rules[0].action == RuleAction::Share);
  CHECK(rules[1].modality == Modality::OnlyIf);
  CHECK(rules[1].condition.find("explicit consent") != std::string::npos);
  CHECK(rules[1].citation == "Sec 7(a)");
  CHECK(rules[2].modality == Modality::Must);
  CHECK(rules[2].action == RuleAction::Erase);
  CHECK(rules[3].modality == Modality::May);
  CHECK(rules[3].action == RuleAction::Process);
}

TEST_CASE("conditional modalities without a condition are downgraded and flagged") {
  Gazetteers gaz = Gazetteers::defaults();
  SectionUnit s;
  s.heading = "Section 99";
  s.body = "Records may be shared only with.";
  auto rules = extract_rules(s, recognize_entities(s, gaz));
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].modality == Modality::May);
  CHECK(rules[0].flagged_for_review);
}

TEST_CASE("citation falls back to the section heading") {
  Gazetteers gaz = Gazetteers::defaults();
  SectionUnit s;
  s.heading = "Section 12";
  s.body = "Data must be erased on request.";
  auto rules = extract_rules(s, recognize_entities(s, gaz));
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].citation == "Section 12");
}

TEST_CASE("tuple construction routes unresolved sections to the curation queue") {
  Gazetteers gaz = Gazetteers::defaults();
  SectionUnit s;
  s.heading = "Section 3";
  s.body = "Data of adult individuals in the healthcare domain may be shared with doctors.";
  auto rules = extract_rules(s, recognize_entities(s, gaz));
  auto built = construct_tuples(s, rules, gaz);
  REQUIRE(built.tuples.size() == 1);
  CHECK(built.tuples[0].data_principal == "Adult Individual");
  CHECK(built.tuples[0].domain == "Healthcare");
  CHECK(built.tuples[0].receiving_entities == std::vector<std::string>{"Doctors"});
  CHECK(built.tuples[0].sensitivity == SensitivityLevel::High);  // healthcare default
  CHECK_FALSE(built.tuples[0].validated);

  SectionUnit vague;
  vague.heading = "Section 4";
  vague.body = "Information may be processed.";
  auto vague_rules = extract_rules(vague, recognize_entities(vague, gaz));
  auto queued = construct_tuples(vague, vague_rules, gaz);
  CHECK(queued.tuples.empty());
  REQUIRE(queued.curation_queue.size() == 1);
  CHECK_FALSE(queued.curation_queue[0].reason.empty());
}

TEST_CASE("tuple line round-trip") {
  ComplianceTuple t;
  t.data_principal = "Adult Individual";
  t.domain = "Healthcare";
  t.rules = {{Modality::OnlyIf, RuleAction::Share, "explicit consent", "Sec 7(f-g)", false},
             {Modality::MustNot, RuleAction::Share, "for advertising", "Sec 9(1)", false}};
  t.receiving_entities = {"Doctors", "Insurers"};
  t.sensitivity = SensitivityLevel::High;
  t.validated = true;
  CHECK(parse_tuple(serialize_tuple(t)) == t);
}

TEST_CASE("tuple fields may not contain reserved separators") {
  ComplianceTuple t;
  t.data_principal = "Adult;Individual";
  t.domain = "Healthcare";
  t.rules = {{Modality::May, RuleAction::Share, "", "Sec 1", false}};
  t.receiving_entities = {"Doctors"};
  CHECK_THROWS(serialize_tuple(t));
}

TEST_CASE("repository parse errors name the offending line") {
  try {
    parse_repository("Adult Individual;Healthcare;May:Share::Sec 1;Doctors;High\n");
    FAIL("expected rejection");  // missing the validated field
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("shipped repository loads 20 tuples and round-trips byte-exactly") {
  std::string path = std::string(DPDPGOV_DATA_DIR) + "/compliance_repository.txt";
  std::string content = read_file(path);
  auto tuples = parse_repository(content);
  CHECK(tuples.size() == 20);
  for (const auto& t : tuples) CHECK(t.validated);

  // serialize(parse(file)) equals the file with comments and blanks stripped
  std::string expected;
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    expected += line + "\n";
  }
  CHECK(serialize_repository(tuples) == expected);

  // parse(serialize(x)) == x
  CHECK(parse_repository(serialize_repository(tuples)) == tuples);
}

TEST_CASE("full pipeline extracts the healthcare consent tuple from the excerpt") {
  std::string source = read_file(std::string(DPDPGOV_DATA_DIR) + "/dpdp_excerpt.txt");
  auto built = run_pipeline(source, Gazetteers::defaults());
  REQUIRE(built.tuples.size() >= 1);
  bool found = false;
  for (const auto& t : built.tuples) {
    if (t.domain != "Healthcare") continue;
    found = true;
    CHECK(t.data_principal == "Adult Individual");
    REQUIRE(t.rules.size() >= 1);
    CHECK(t.rules[0].modality == Modality::OnlyIf);
    CHECK(t.rules[0].action == RuleAction::Share);
    CHECK(t.rules[0].condition == "explicit consent");
    CHECK(t.receiving_entities == std::vector<std::string>{"Doctors", "Insurers"});
    CHECK(t.sensitivity == SensitivityLevel::High);
  }
  CHECK(found);
}
