// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "nlohmann/json.hpp"
#include "ocreval/cli.hpp"
#include "ocreval/report.hpp"
#include "support/temp_dir.hpp"

namespace cli = ocreval::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_pairs(const testenv::TempDir& dir) {
  dir.write("gt/a.gt.txt", "Sámi girji\n");
  dir.write("gt/b.gt.txt", "boađe deike\n");
  dir.write("gt/c.gt.txt", "ŋ ja ž\n");
  dir.write("hyp/a.txt", "Sami girji\n");
  dir.write("hyp/b.txt", "boađe deike\n");
  dir.write("hyp/c.txt", "ŋ ja ž\n");
}

}  // namespace

TEST(Cli, UsageErrors) {
  auto r = run({});
  EXPECT_EQ(r.code, cli::kExitUsage);
  r = run({"eval"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--gt"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = run({"eval", "--gt", "x", "--hyp", "y", "--bogus"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  r = run({"eval", "--gt", "x", "--hyp", "y", "--format", "xml"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, EvalJsonHappyPath) {
  testenv::TempDir dir;
  write_pairs(dir);
  const auto r = run({"eval", "--gt", (dir / "gt").string(), "--hyp", (dir / "hyp").string(), "--charset",
                      "all-sami-special", "--format", "json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto report = ocreval::report_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(report.pair_count, 3u);
  EXPECT_DOUBLE_EQ(report.overall().cer, 1.0 / 27.0);
  EXPECT_DOUBLE_EQ(report.overall().wer, 1.0 / 7.0);
  ASSERT_EQ(report.error_table.size(), 1u);
  EXPECT_EQ(report.error_table[0].segment.ref_str, "á");
  EXPECT_FALSE(report.created);
}

TEST(Cli, EvalIsDeterministic) {
  testenv::TempDir dir;
  write_pairs(dir);
  const std::vector<std::string> args{"eval", "--gt", (dir / "gt").string(), "--hyp", (dir / "hyp").string(),
                                      "--format", "md", "--jobs", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, EvalGroupsByStemPrefix) {
  testenv::TempDir dir;
  dir.write("gt/sme_1.gt.txt", "boađe");
  dir.write("gt/sma_1.gt.txt", "gïele");
  dir.write("hyp/sme_1.txt", "boade");
  dir.write("hyp/sma_1.txt", "gïele");
  const auto r = run({"eval", "--gt", (dir / "gt").string(), "--hyp", (dir / "hyp").string(), "--lang-field",
                      "stem-prefix", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("hyp,sme,0.2,"), std::string::npos);
  EXPECT_NE(r.out.find("hyp,sma,0,"), std::string::npos);
}

TEST(Cli, MissingInputIsADataError) {
  testenv::TempDir dir;
  const auto r = run({"eval", "--gt", (dir / "none").string(), "--hyp", (dir / "none").string()});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("none"), std::string::npos);
}

TEST(Cli, ErrorsTable) {
  testenv::TempDir dir;
  write_pairs(dir);
  const auto r = run({"errors", "--gt", (dir / "gt").string(), "--hyp", (dir / "hyp").string(), "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out, "ref,hyp,n_e,n_m,n_c\r\ná,a,1,1,1\r\n");
}

TEST(Cli, SelectAndReport) {
  testenv::TempDir dir;
  write_pairs(dir);
  const std::string gt = (dir / "gt").string();
  ASSERT_EQ(run({"eval", "--gt", gt, "--hyp", (dir / "hyp").string(), "--model", "a", "--out",
                 (dir / "a.json").string()})
                .code,
            cli::kExitOk);
  ASSERT_EQ(run({"eval", "--gt", gt, "--hyp", gt, "--model", "b", "--out", (dir / "b.json").string()}).code,
            cli::kExitOk);
  auto r = run({"select", "--reports", (dir / "a.json").string(), (dir / "b.json").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out, "b\n");

  r = run({"report", "--reports", (dir / "a.json").string(), (dir / "b.json").string(), "--baseline", "a"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("| Metric | Group | b | a |"), std::string::npos);

  r = run({"select", "--reports", (dir / "a.json").string(), (dir / "a.json").string()});
  EXPECT_EQ(r.code, cli::kExitData);
}

TEST(Cli, IngestAlto) {
  testenv::TempDir dir;
  const auto alto = std::filesystem::path(OCREVAL_FIXTURES) / "alto" / "two_pages.xml";
  const auto r = run({"ingest-alto", alto.string(), "--lang", "sme", "--split", "test", "--out",
                      (dir / "m.jsonl").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto m = ocreval::read_manifest(dir / "m.jsonl");
  ASSERT_EQ(m.entries.size(), 6u);
  EXPECT_EQ(m.entries[0].language, "sme");
  EXPECT_EQ(m.entries[0].split, ocreval::Split::Test);
  EXPECT_NE(r.err.find("P1_EMPTY"), std::string::npos);

  const auto bad = std::filesystem::path(OCREVAL_FIXTURES) / "alto" / "malformed.xml";
  EXPECT_EQ(run({"ingest-alto", bad.string()}).code, cli::kExitData);
}

TEST(Cli, SynthThenEval) {
  testenv::TempDir dir;
  dir.write("cfg.toml", "fonts = [\"" + testenv::font("DejaVuSans.ttf").string() + "\"]\nseed = 3\n");
  dir.write("lines.txt", "Sámi girji\nboađe deike\nčállit šaddat\n");
  auto r = run({"synth", "--config", (dir / "cfg.toml").string(), "--input", (dir / "lines.txt").string(),
                "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto summary = nlohmann::json::parse(r.out);
  EXPECT_GE(summary["written"].get<int>(), 3);

  const std::string out_dir = (dir / "out").string();
  r = run({"eval", "--gt", out_dir, "--hyp", out_dir});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto report = ocreval::report_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(report.overall().cer, 0.0);
  EXPECT_EQ(report.overall().wer, 0.0);
  EXPECT_EQ(report.overall().f1, 1.0);
}
