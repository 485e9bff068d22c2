#include "biasshift/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "biasshift/report.hpp"
#include "biasshift/score_table.hpp"
#include "oracles.hpp"

namespace biasshift {
namespace {

namespace fs = std::filesystem;
using testing::HasSubstr;

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

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("biasshift_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string normal_table(const std::string& name, double mean_a, double mean_b, unsigned seed) {
    const ScoreTable t(SplitTag::Kind::val, {"smiling", "bald"},
                       {oracle::normal_draws(2000, mean_a, 1.0, seed),
                        oracle::normal_draws(2000, mean_b, 1.0, seed + 1)});
    write_score_table(t, dir_ / name);
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, FourSampleFixture) {
  const auto ref = write("ref.csv", "sample_id,a\nr1,-1\nr2,-1\nr3,1\nr4,1\n");
  const auto gen = write("gen.csv", "sample_id,a\ng1,-1\ng2,1\ng3,1\ng4,1\n");
  const auto r = run({"analyze", "--ref", ref, "--gen", gen, "--out", path("rep.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_report(fs::path(path("rep.json")), ReportFormat::json);
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].p_ref, 0.5);
  EXPECT_EQ(rep.records[0].p_gen, 0.75);
  EXPECT_EQ(rep.records[0].bias_shift, 0.25);
  EXPECT_EQ(rep.abs.overall, 0.25);
  EXPECT_EQ(rep.metadata.seed, 0u);
  EXPECT_EQ(rep.metadata.replicates, 100u);
  EXPECT_EQ(rep.metadata.reference_split, "val");
  EXPECT_THAT(r.out, HasSubstr("ABS overall 25.00%"));
}

TEST_F(CliTest, SelfComparison) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto r = run({"analyze", "--ref", ref, "--gen", ref, "--format", "csv", "--out",
                      path("rep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_report(fs::path(path("rep.csv")), ReportFormat::csv);
  for (const auto& rec : rep.records) EXPECT_EQ(rec.bias_shift, 0.0);
  EXPECT_EQ(rep.records[0].category, Category::spectrum);
  EXPECT_EQ(rep.records[1].category, Category::non_spectrum);
}

TEST_F(CliTest, ReportToStdout) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto r = run({"analyze", "--ref", ref, "--gen", ref, "--replicates", "0"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  EXPECT_EQ(read_report(in, ReportFormat::json).records.size(), 2u);
  EXPECT_THAT(r.err, HasSubstr("ABS overall 0.00%"));
}

TEST_F(CliTest, MissingAttributeIsMismatch) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto gen = write("gen.csv", "sample_id,smiling\na,0.1\nb,0.2\n");
  const auto r = run({"analyze", "--ref", ref, "--gen", gen});
  EXPECT_EQ(r.code, 3);
  EXPECT_THAT(r.err, HasSubstr("bald"));
}

TEST_F(CliTest, UnknownThresholdAttributeIsMismatch) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  EXPECT_EQ(run({"analyze", "--ref", ref, "--gen", ref, "--threshold", "young=0.5"}).code, 3);
}

TEST_F(CliTest, MalformedInputIsInputError) {
  const auto ref = write("ref.csv", "sample_id,a\nr1,0.5\nr2,NaN\n");
  const auto r = run({"analyze", "--ref", ref, "--gen", ref});
  EXPECT_EQ(r.code, 2);
  EXPECT_THAT(r.err, HasSubstr("ref.csv"));
  EXPECT_THAT(r.err, HasSubstr("row 2"));
  EXPECT_EQ(run({"analyze", "--ref", path("missing.csv"), "--gen", ref}).code, 2);
  EXPECT_EQ(run({"analyze", "--ref", ref}).code, 2);
  EXPECT_EQ(run({"analyze", "--ref", ref, "--gen", ref, "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"analyze", "--ref", ref, "--gen", ref, "--threshold", "a"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, ThresholdOverridesRecorded) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto gen = normal_table("gen.csv", 0.2, 3.2, 5);
  const auto r = run({"analyze", "--ref", ref, "--gen", gen, "--threshold", "bald=3",
                      "--default-threshold", "0.25", "--out", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_report(fs::path(path("r.json")), ReportFormat::json);
  EXPECT_EQ(rep.records[0].threshold, 0.25);
  EXPECT_EQ(rep.records[1].threshold, 3.0);
  EXPECT_EQ(rep.records[1].category, Category::spectrum);
  EXPECT_EQ(rep.metadata.threshold_overrides.at("bald"), 3.0);
  EXPECT_EQ(rep.metadata.default_threshold, 0.25);
}

TEST_F(CliTest, AnalyzeIsByteIdentical) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto gen = normal_table("gen.csv", 0.2, 3.2, 5);
  for (const char* fmt : {"json", "csv"}) {
    ASSERT_EQ(run({"analyze", "--ref", ref, "--gen", gen, "--format", fmt, "--seed", "9", "--out",
                   path("a")})
                  .code,
              0);
    ASSERT_EQ(run({"analyze", "--ref", ref, "--gen", gen, "--format", fmt, "--seed", "9", "--out",
                   path("b")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("a")), slurp(path("b")));
  }
}

TEST_F(CliTest, DensityOutputs) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  const auto r = run({"analyze", "--ref", ref, "--gen", ref, "--out", path("r.json"),
                      "--densities", path("d.csv"), "--svg", path("d.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("d.csv")).rfind("attribute,split,x,density\n", 0), 0u);
  EXPECT_THAT(slurp(path("d.svg")), HasSubstr("<svg"));
}

TEST_F(CliTest, Categorize) {
  const auto ref = normal_table("ref.csv", 0.5, 3.0, 1);
  const auto r = run({"categorize", "--ref", ref});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("attribute,threshold,bandwidth,boundary_density,category\n"));
  EXPECT_THAT(r.out, HasSubstr(",spectrum\n"));
  EXPECT_THAT(r.out, HasSubstr(",non_spectrum\n"));
  const auto j = run({"categorize", "--ref", ref, "--format", "json", "--cat-threshold", "0.5"});
  ASSERT_EQ(j.code, 0);
  EXPECT_THAT(j.out, Not(HasSubstr("\"spectrum\"")));
}

TEST_F(CliTest, SamplingError) {
  std::string text = "sample_id,a\n";
  for (int i = 0; i < 2000; ++i) text += "s" + std::to_string(i) + (i % 2 ? ",1\n" : ",-1\n");
  const auto ref = write("ref.csv", text);
  const auto r = run({"sampling-error", "--ref", ref, "--sizes", "100,2000", "--replicates", "20",
                      "--out", path("c1.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(run({"sampling-error", "--ref", ref, "--sizes", "100,2000", "--replicates", "20",
                 "--out", path("c2.csv")})
                .code,
            0);
  const auto curve = slurp(path("c1.csv"));
  EXPECT_EQ(curve, slurp(path("c2.csv")));
  EXPECT_THAT(curve, HasSubstr("\n2000,0,0\n"));
  const auto over = run({"sampling-error", "--ref", ref, "--sizes", "2001"});
  EXPECT_EQ(over.code, 2);
  EXPECT_THAT(over.err, HasSubstr("exceeds"));
}

TEST_F(CliTest, SimulateScenarioFile) {
  const auto scn = write("s.scn",
                         "label = null\ndelta = 0\n1,0.5,1\n---\n"
                         "label = std\ndelta = 0.5\n1,0,1\n");
  const auto r = run({"simulate", "--scenario", scn, "--n", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("\nnull,0,0,"));
  EXPECT_THAT(r.out, HasSubstr(",0.19146246127401"));
  EXPECT_THAT(r.err, HasSubstr("2 of 2 scenarios"));

  EXPECT_EQ(run({"simulate", "--scenario", write("bad.scn", "label = x\n0.5,0,1\n")}).code, 2);
  EXPECT_EQ(run({"simulate"}).code, 2);
  EXPECT_EQ(run({"simulate", "--builtin", "fig1", "--scenario", scn}).code, 2);
  EXPECT_EQ(run({"simulate", "--builtin", "nope"}).code, 2);
}

TEST_F(CliTest, SimulateFig1) {
  const auto r = run({"simulate", "--builtin", "fig1", "--n", "50000", "--out", path("f.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("contrast >= 10x: yes"));
  EXPECT_THAT(r.out, HasSubstr("emd within 10% of delta: yes"));
  ASSERT_EQ(run({"simulate", "--builtin", "fig1", "--n", "50000", "--out", path("g.csv")}).code, 0);
  EXPECT_EQ(slurp(path("f.csv")), slurp(path("g.csv")));
}

TEST_F(CliTest, HelpListsFlagsWithDefaults) {
  const auto analyze = run({"analyze", "--help"});
  EXPECT_EQ(analyze.code, 0);
  for (const char* flag : {"--ref", "--gen", "--out", "--format", "--threshold",
                           "--default-threshold", "--cat-threshold", "--seed", "--replicates"}) {
    EXPECT_THAT(analyze.out, HasSubstr(flag));
  }
  EXPECT_THAT(analyze.out, HasSubstr("0.01"));
  EXPECT_THAT(analyze.out, HasSubstr("100"));
  EXPECT_THAT(analyze.out, HasSubstr("json"));

  const auto sampling = run({"sampling-error", "--help"});
  EXPECT_THAT(sampling.out, HasSubstr("--sizes"));
  EXPECT_THAT(sampling.out, HasSubstr("100"));
  const auto simulate = run({"simulate", "--help"});
  EXPECT_THAT(simulate.out, HasSubstr("1000000"));
  EXPECT_THAT(run({"--help"}).out, HasSubstr("sampling-error"));
  EXPECT_EQ(run({"--version"}).out, "0.1.0\n");
}

TEST_F(CliTest, UnwritableOutput) {
  const auto ref = normal_table("ref.csv", 0.0, 3.0, 1);
  EXPECT_EQ(run({"analyze", "--ref", ref, "--gen", ref, "--out", "/nonexistent/dir/r.json"}).code,
            2);
}

}  // namespace
}  // namespace biasshift
