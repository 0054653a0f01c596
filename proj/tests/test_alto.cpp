// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "ocreval/corpus.hpp"
#include "ocreval/error.hpp"

using namespace ocreval;

namespace {

std::filesystem::path alto_fixture(std::string_view name) {
  return std::filesystem::path(OCREVAL_FIXTURES) / "alto" / name;
}

}  // namespace

TEST(Alto, ParsesHandWrittenFixture) {
  Diagnostics diag;
  const auto lines = parse_alto(alto_fixture("two_pages.xml"), {}, &diag);
  ASSERT_EQ(lines.size(), 6u);

  const std::vector<std::string> texts{"Sámi girji", "boađe gir-", "čállit šaddat",
                                       "åarjelsaemien gïele", "ŋ ja ž", "Áhkku"};
  const std::vector<std::size_t> indices{0, 1, 2, 0, 1, 2};
  for (std::size_t k = 0; k < lines.size(); ++k) {
    EXPECT_EQ(lines[k].text, texts[k]);
    EXPECT_EQ(lines[k].line_index, indices[k]);
    EXPECT_EQ(lines[k].split, Split::GT);
  }
  EXPECT_EQ(lines[0].id, "two_pages/P1/P1_L1");
  EXPECT_EQ(lines[0].page_id, "two_pages/P1");
  EXPECT_EQ(lines[3].page_id, "two_pages/P2");

  EXPECT_EQ(lines[0].bbox, (BBox{100, 200, 800, 40}));
  EXPECT_EQ(lines[1].bbox, (BBox{100, 250, 800, 40}));
  EXPECT_EQ(lines[2].bbox, (BBox{100.5, 300, 640.25, 38}));
  EXPECT_EQ(lines[3].bbox, (BBox{90, 180, 700, 42}));
  EXPECT_FALSE(lines[4].bbox);  // zero width
  EXPECT_FALSE(lines[5].bbox);  // no geometry

  // The empty TextLine and the degenerate box are both reported.
  ASSERT_EQ(diag.warnings.size(), 2u);
  EXPECT_NE(diag.warnings[0].find("P1_EMPTY"), std::string::npos);
  EXPECT_NE(diag.warnings[1].find("P2_L2"), std::string::npos);
}

TEST(Alto, HyphenationCanBeDropped) {
  AltoOptions opts;
  opts.keep_hyphenation = false;
  opts.language = "sme";
  const auto lines = parse_alto(alto_fixture("two_pages.xml"), opts);
  EXPECT_EQ(lines[1].text, "boađe gir");
  EXPECT_EQ(lines[1].language, "sme");
}

TEST(Alto, MalformedFixtureRaisesPositionedError) {
  try {
    parse_alto(alto_fixture("malformed.xml"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("malformed.xml"), std::string::npos);
  }
}

TEST(Alto, InMemoryDocuments) {
  const auto lines = parse_alto_string(
      R"(<alto><Layout><Page><TextLine><String CONTENT="a"/></TextLine>)"
      R"(<TextLine><String CONTENT="b"/><String CONTENT="c"/></TextLine></Page></Layout></alto>)",
      "mem");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].id, "mem/page0/line0");
  EXPECT_EQ(lines[1].text, "b c");
  EXPECT_THROW(parse_alto_string("<alto><Layout>", "mem"), ParseError);
}

TEST(Alto, LinesOutsidePagesShareAnImplicitPage) {
  const auto lines = parse_alto_string(
      R"(<alto><TextBlock><TextLine><String CONTENT="x"/></TextLine>)"
      R"(<TextLine><String CONTENT="y"/></TextLine></TextBlock></alto>)",
      "loose");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].page_id, "loose/page0");
  EXPECT_EQ(lines[1].line_index, 1u);
}

TEST(Alto, ComposesDecomposedContent) {
  const auto lines =
      parse_alto_string("<alto><Page><TextLine><String CONTENT=\"a\xCC\x81\"/></TextLine></Page></alto>", "nfc");
  EXPECT_EQ(lines.at(0).text, "á");
}
