#include <gtest/gtest.h>

#include <cmath>

#include "cfree/catalog.hpp"
#include "cfree/errors.hpp"
#include "cfree/order_conditions.hpp"

namespace cfree {
namespace {

double max_abs(const std::vector<Residual>& rs, int up_to = 4) {
  double m = 0.0;
  for (const auto& r : rs) {
    if (r.order <= up_to) m = std::max(m, std::abs(r.value));
  }
  return m;
}

double residual(const std::vector<Residual>& rs, const std::string& label) {
  for (const auto& r : rs) {
    if (r.label == label) return r.value;
  }
  ADD_FAILURE() << "no condition " << label;
  return NAN;
}

TEST(Classical, Cf4IsClassicalRk4) {
  const auto rs = check_classical(principal_method(reduce(find_tableau("cf4"))), 4);
  EXPECT_EQ(rs.size(), 8u);
  EXPECT_LT(max_abs(rs), 1e-14);
}

TEST(Classical, Cf32aPrincipalOrderThree) {
  const auto rs = check_classical(principal_method(reduce(find_tableau("cf32a"))), 3);
  EXPECT_EQ(rs.size(), 4u);
  EXPECT_LT(max_abs(rs), 1e-14);
}

TEST(Classical, Cf32aEmbeddedOrderTwo) {
  const auto rs = check_classical(embedded_method(reduce(find_tableau("cf32a"))), 2);
  EXPECT_EQ(rs.size(), 2u);
  EXPECT_LT(max_abs(rs), 1e-14);
}

TEST(Classical, UpToOutOfRange) {
  const auto m = principal_method(reduce(find_tableau("cf4")));
  EXPECT_THROW(check_classical(m, 0), DomainError);
  EXPECT_THROW(check_classical(m, 5), DomainError);
}

TEST(Classical, HandComputedResidual) {
  // Explicit Euler (b = 1, c = 0): b.c - 1/2 = -1/2, b.c^2 - 1/3 = -1/3.
  ClassicalMethod euler{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)};
  const auto rs = check_classical(euler, 3);
  EXPECT_DOUBLE_EQ(residual(rs, "sum(b) = 1"), 0.0);
  EXPECT_DOUBLE_EQ(residual(rs, "b.c = 1/2"), -0.5);
  EXPECT_DOUBLE_EQ(residual(rs, "b.c^2 = 1/3"), -1.0 / 3);
}

TEST(NonClassical, Cf4TwoExponentialConditions) {
  const auto rs = check_nonclassical(find_tableau("cf4"));
  ASSERT_EQ(rs.size(), 4u);
  EXPECT_LT(max_abs(rs), 1e-14);
}

TEST(NonClassical, Cf32aTwoExponentialOrderThree) {
  const auto rs = check_nonclassical(find_tableau("cf32a"));
  EXPECT_LT(std::abs(residual(rs, "beta1.c + sum(beta2)/2 = 1/3")), 1e-14);
}

TEST(NonClassical, RequiresTwoRows) {
  EXPECT_THROW(check_nonclassical(find_tableau("cf32a"), Part::Embedded), UnsupportedShapeError);
  auto t = find_tableau("cf4");
  t.beta.push_back(std::vector<double>(4, 0.0));
  EXPECT_THROW(check_nonclassical(t), UnsupportedShapeError);
}

TEST(Certify, NotesConditionFourAsEmpirical) {
  const auto report = certify(find_tableau("cf4"), Part::Update, 1e-13);
  EXPECT_EQ(report.certified_order, 4);
  bool noted = false;
  for (const auto& n : report.notes) noted = noted || n.find("verified empirically only") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Certify, PerturbationNamesViolatedCondition) {
  auto t = find_tableau("cf4");
  t.beta[0][1] += 1e-3;
  const auto report = certify(t, Part::Update, certification_tolerance(t));
  EXPECT_EQ(report.certified_order, 0);
  const auto bad = report.violated(1e-13);
  ASSERT_FALSE(bad.empty());
  EXPECT_EQ(bad.front(), "sum(b) = 1");
}

TEST(Certify, SingleExponentialUpdateCappedAtTwo) {
  const auto report = certify(find_tableau("cf32a"), Part::Embedded, 1e-13);
  EXPECT_EQ(report.certified_order, 2);
}

TEST(Certify, ToleranceFollowsCoefficientKind) {
  EXPECT_EQ(certification_tolerance(find_tableau("cf43")), 1e-13);
  EXPECT_EQ(certification_tolerance(find_tableau("cf43_decimal")), 1e-8);
}

// Classical order claimed by each exact tableau, at the exact threshold.
TEST(CatalogProperties, ExactTableauxCertifyClaimedOrder) {
  for (const char* name : {"cf4", "cf32a", "cf32b", "cf43"}) {
    const auto t = find_tableau(name);
    const auto report = certify(t, Part::Update, 1e-13);
    EXPECT_EQ(report.certified_order, t.order) << name;
    if (t.is_pair()) EXPECT_EQ(certify(t, Part::Embedded, 1e-13).certified_order, t.embedded_order) << name;
  }
}

// Classical conditions of every tableau at the looser decimal level; the
// printed decimals of cf43_v2 only reach about 3e-7.
TEST(CatalogProperties, ClassicalOrderWithinPrintedPrecision) {
  for (const auto& t : catalog()) {
    const double tol = t.printed_decimal ? 1e-6 : 1e-13;
    EXPECT_LT(max_abs(check_classical(principal_method(reduce(t)), t.order)), tol) << t.name;
    if (t.is_pair()) {
      EXPECT_LT(max_abs(check_classical(embedded_method(reduce(t)), t.embedded_order)), tol) << t.name;
    }
  }
}

TEST(CatalogProperties, EmbeddedFailsAnOrderPCondition) {
  for (const auto& t : catalog()) {
    if (!t.is_pair()) continue;
    const auto m = embedded_method(reduce(t));
    double worst = 0.0;
    for (const auto& r : check_classical(m, t.order)) {
      if (r.order == t.order) worst = std::max(worst, std::abs(r.value));
    }
    if (t.order >= 3 && t.beta_hat.size() == 2) {
      for (const auto& r : check_nonclassical(t, Part::Embedded)) {
        if (r.order == t.order) worst = std::max(worst, std::abs(r.value));
      }
    }
    EXPECT_GT(worst, 1e-3) << t.name;
  }
}

TEST(CatalogProperties, NonClassicalConditions) {
  for (const auto& t : catalog()) {
    const double tol = t.printed_decimal ? 1e-6 : 1e-13;
    EXPECT_LT(max_abs(check_nonclassical(t), t.order), tol) << t.name;
    if (t.is_pair() && t.beta_hat.size() == 2) {
      EXPECT_LT(max_abs(check_nonclassical(t, Part::Embedded), t.embedded_order), tol) << t.name;
    }
  }
}

}  // namespace
}  // namespace cfree
