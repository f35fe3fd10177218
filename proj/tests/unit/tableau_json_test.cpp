#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cfree/catalog.hpp"
#include "cfree/errors.hpp"
#include "cfree/tableau_json.hpp"

namespace cfree {
namespace {

void expect_same(const CFTableau& a, const CFTableau& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.stages, b.stages);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.beta_hat, b.beta_hat);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.embedded_order, b.embedded_order);
  EXPECT_EQ(a.fsal, b.fsal);
  EXPECT_EQ(a.reuse, b.reuse);
  EXPECT_EQ(a.printed_decimal, b.printed_decimal);
}

TEST(TableauJson, CatalogRoundTripIsLossless) {
  for (const auto& t : catalog()) expect_same(read_tableau_json(write_tableau_json(t)), t);
}

TEST(TableauJson, RandomCoefficientsRoundTrip) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  auto t = find_tableau("cf43");
  for (int trial = 0; trial < 50; ++trial) {
    for (auto& block : t.alpha) {
      for (auto& row : block) {
        for (std::size_t k = 0; k < row.size(); ++k) {
          if (row[k] != 0.0) row[k] = mantissa(gen) * std::pow(10.0, exponent(gen));
        }
      }
    }
    t.reuse.clear();
    expect_same(read_tableau_json(write_tableau_json(t, -1)), t);
  }
}

TEST(TableauJson, AcceptsNumbersAndSBlockAlpha) {
  const std::string text = R"({"name": "euler2", "s": 2,
    "alpha": [[], [[0.5, 0]]], "beta": [[0, 1]], "beta_hat": [],
    "order_p": 2, "order_phat": 0, "fsal": false, "reuse_map": []})";
  const auto t = read_tableau_json(text);
  EXPECT_EQ(t.stages, 2);
  EXPECT_EQ(t.alpha[1][0][0], 0.5);
  EXPECT_FALSE(t.is_pair());
}

TEST(TableauJson, SyntaxErrorReportsOffset) {
  try {
    read_tableau_json(R"({"name": "x", "s": 2,, })");
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
}

TEST(TableauJson, BadCoefficientIsInputError) {
  auto text = write_tableau_json(find_tableau("cf4"));
  const auto pos = text.find("\"0.5\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 5, "\"half\"");
  EXPECT_THROW(read_tableau_json(text), InputError);
}

TEST(TableauJson, StructuralProblemsSurface) {
  auto text = write_tableau_json(find_tableau("cf4"));
  text.replace(text.find("\"s\": 4"), 6, "\"s\": 5");
  EXPECT_THROW(read_tableau_json(text), Error);
}

TEST(TableauJson, PerturbedTableauStillLoads) {
  auto t = find_tableau("cf4");
  t.beta[0][0] += 1e-3;
  EXPECT_NO_THROW(read_tableau_json(write_tableau_json(t)));
}

TEST(TableauJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "cfree_json_test_cf32a.json";
  save_tableau_file(find_tableau("cf32a"), path);
  expect_same(load_tableau_file(path), find_tableau("cf32a"));
  std::filesystem::remove(path);
  EXPECT_THROW(load_tableau_file(path), InputError);
}

TEST(TableauJson, RowRefs) {
  EXPECT_EQ(parse_row_ref("stage3.1"), (RowRef{Part::Stage, 3, 1}));
  EXPECT_EQ(parse_row_ref("y.2"), (RowRef{Part::Update, 0, 2}));
  EXPECT_EQ(parse_row_ref("yhat.1"), (RowRef{Part::Embedded, 0, 1}));
  EXPECT_THROW(parse_row_ref("stage.1"), InputError);
  EXPECT_THROW(parse_row_ref("z.1"), InputError);
}

TEST(TableauJson, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
}

}  // namespace
}  // namespace cfree
