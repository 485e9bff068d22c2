#include "biasshift/score_table.hpp"

#include <random>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "biasshift/error.hpp"

namespace biasshift {
namespace {

using testing::HasSubstr;

ScoreTable parse(const std::string& text, SplitTag split = SplitTag::Kind::val) {
  std::istringstream in(text);
  return read_score_table(in, split, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(ScoreTable, MinimalFile) {
  const auto t = parse("sample_id,smiling\na,0.5\n");
  EXPECT_EQ(t.cols(), 1u);
  EXPECT_EQ(t.rows(), 1u);
  EXPECT_EQ(t.attributes(), std::vector<std::string>{"smiling"});
  EXPECT_EQ(t.at(0, 0), 0.5);
  ASSERT_TRUE(t.sample_ids().has_value());
  EXPECT_EQ(t.sample_ids()->front(), "a");
}

TEST(ScoreTable, HeaderOrderPreserved) {
  const auto t = parse("sample_id,z,a,m\nx,1,2,3\ny,4,5,6e-1\n");
  EXPECT_EQ(t.attributes(), (std::vector<std::string>{"z", "a", "m"}));
  EXPECT_EQ(t.find("a"), 1u);
  EXPECT_EQ(t.at(1, 2), 0.6);
  EXPECT_FALSE(t.find("missing").has_value());
}

TEST(ScoreTable, CrlfQuotedIdsAndScientific) {
  const auto t = parse("sample_id,a\r\n\"img,1.png\",1.5E+2\r\n\"say \"\"hi\"\"\",-2e-3\r\n");
  EXPECT_EQ((*t.sample_ids())[0], "img,1.png");
  EXPECT_EQ((*t.sample_ids())[1], "say \"hi\"");
  EXPECT_EQ(t.at(0, 0), 150.0);
  EXPECT_EQ(t.at(1, 0), -0.002);
}

TEST(ScoreTable, EmptyIdsBecomeAbsent) {
  const auto t = parse("sample_id,a\n,1\n,2\n");
  EXPECT_FALSE(t.sample_ids().has_value());
}

TEST(ScoreTable, NanCellNamesRowAndColumn) {
  const auto msg = error_of("sample_id,a,b\nr1,1,2\nr2,3,NaN\n");
  EXPECT_THAT(msg, HasSubstr("row 2"));
  EXPECT_THAT(msg, HasSubstr("column 3 ('b')"));
  EXPECT_THAT(msg, HasSubstr("non-finite"));
}

TEST(ScoreTable, InfinityRejected) {
  EXPECT_THAT(error_of("sample_id,a\nr1,inf\n"), HasSubstr("non-finite"));
  EXPECT_THAT(error_of("sample_id,a\nr1,-Infinity\n"), HasSubstr("row 1"));
}

TEST(ScoreTable, NonNumericCell) {
  const auto msg = error_of("sample_id,a\nr1,0.1\nr2,abc\n");
  EXPECT_THAT(msg, HasSubstr("non-numeric"));
  EXPECT_THAT(msg, HasSubstr("row 2"));
  EXPECT_THAT(msg, HasSubstr("test.csv:3"));
}

TEST(ScoreTable, MissingScoreIsMalformed) {
  EXPECT_THAT(error_of("sample_id,a,b\nr1,0.1,\n"), HasSubstr("non-numeric"));
}

TEST(ScoreTable, RaggedRow) {
  EXPECT_THAT(error_of("sample_id,a,b\nr1,1,2\nr2,3\n"), HasSubstr("ragged"));
  EXPECT_THAT(error_of("sample_id,a\nr1,1,2\n"), HasSubstr("ragged"));
}

TEST(ScoreTable, MalformedHeader) {
  EXPECT_THAT(error_of("id,a\nr1,1\n"), HasSubstr("sample_id"));
  EXPECT_THAT(error_of("sample_id\nr1\n"), HasSubstr("no attribute"));
  EXPECT_THAT(error_of("sample_id,a,a\nr1,1,2\n"), HasSubstr("duplicate"));
  EXPECT_THAT(error_of("sample_id,a,\nr1,1,2\n"), HasSubstr("empty attribute"));
}

TEST(ScoreTable, EmptyTable) {
  EXPECT_THAT(error_of(""), HasSubstr("empty"));
  EXPECT_THAT(error_of("sample_id,a\n"), HasSubstr("no data rows"));
}

TEST(ScoreTable, PartiallyMissingIdsRejected) {
  EXPECT_THAT(error_of("sample_id,a\nx,1\n,2\n"), HasSubstr("empty sample_id"));
}

TEST(ScoreTable, ConstructorValidates) {
  EXPECT_THROW(ScoreTable(SplitTag::Kind::gen, {"a"}, {{1.0, NAN}}), InputError);
  EXPECT_THROW(ScoreTable(SplitTag::Kind::gen, {"a", "b"}, {{1.0}, {1.0, 2.0}}), InputError);
  EXPECT_THROW(ScoreTable(SplitTag::Kind::gen, {"a"}, {{1.0}}, std::vector<std::string>{"x", "y"}),
               InputError);
  EXPECT_THROW(ScoreTable(SplitTag::Kind::gen, {"a"}, {{}}), InputError);
}

TEST(ScoreTable, RowCountMatchesSource) {
  std::string text = "sample_id,a,b\n";
  for (int i = 0; i < 1234; ++i) text += "s" + std::to_string(i) + "," + std::to_string(i) + ",0\n";
  text += "\n\n";  // trailing blank lines are not rows
  EXPECT_EQ(parse(text).rows(), 1234u);
}

// load(write(T)) == T for randomly generated tables, including ids that need
// quoting and values that need all 17 significant digits.
TEST(ScoreTable, RoundTripProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const int cols = dim(gen);
    const int rows = dim(gen) * 7;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns(cols);
    for (int j = 0; j < cols; ++j) names.push_back("attr_" + std::to_string(j) + (j % 2 ? " x" : ""));
    for (auto& c : columns) {
      for (int i = 0; i < rows; ++i) c.push_back(value(gen) * std::pow(10.0, (i % 9) - 4));
    }
    std::optional<std::vector<std::string>> ids;
    if (trial % 2 == 0) {
      ids.emplace();
      for (int i = 0; i < rows; ++i) ids->push_back("img \"" + std::to_string(i) + "\",png");
    }
    const SplitTag split = trial % 3 == 0 ? SplitTag::custom("holdout") : SplitTag::Kind::gen;
    const ScoreTable original(split, names, columns, ids);

    std::stringstream buffer;
    write_score_table(original, buffer);
    const auto loaded = read_score_table(buffer, split);
    EXPECT_EQ(loaded, original) << "trial " << trial;
  }
}

TEST(ScoreTable, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "biasshift_table_roundtrip.csv";
  const ScoreTable t(SplitTag::Kind::train, {"smiling", "young"}, {{0.1, -2.5}, {3.0, 1e-300}},
                     std::vector<std::string>{"a", "b"});
  write_score_table(t, path);
  EXPECT_EQ(load_score_table(path, SplitTag::Kind::train), t);
  std::filesystem::remove(path);
  EXPECT_THROW(load_score_table(path, SplitTag::Kind::train), InputError);
}

TEST(SplitTag, ParseAndName) {
  EXPECT_EQ(SplitTag::parse("val").kind(), SplitTag::Kind::val);
  EXPECT_EQ(SplitTag::parse("train").name(), "train");
  EXPECT_EQ(SplitTag::parse("holdout").kind(), SplitTag::Kind::custom);
  EXPECT_EQ(SplitTag::parse("holdout").name(), "holdout");
}

TEST(DecisionRule, UniformWithOverrides) {
  const auto rule = DecisionRule::uniform({"a", "b"}, 0.0, {{"b", 1.5}});
  EXPECT_EQ(rule.threshold("a"), 0.0);
  EXPECT_EQ(rule.threshold("b"), 1.5);
  EXPECT_THROW(rule.threshold("c"), MismatchError);
  EXPECT_THROW(DecisionRule::uniform({"a"}, 0.0, {{"zzz", 1.0}}), MismatchError);
  EXPECT_THROW(DecisionRule({{"a", INFINITY}}), InputError);
}

}  // namespace
}  // namespace biasshift
