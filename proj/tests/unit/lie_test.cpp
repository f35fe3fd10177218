#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cfree/errors.hpp"
#include "cfree/lie/gl2.hpp"
#include "cfree/lie/se3.hpp"
#include "cfree/lie/so3.hpp"
#include "series_exp.hpp"

namespace cfree {
namespace {

using testing::plain_series_exp;
using testing::series_exp;

Eigen::Vector3d random_ball(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Eigen::Vector3d v(u(gen), u(gen), u(gen));
    if (v.norm() <= 1.0) return radius * v;
  }
}

Eigen::Matrix4d se3_matrix(const Se3Algebra& a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat(a.xi);
  m.topRightCorner<3, 1>() = a.u;
  return m;
}

TEST(Hat, MatchesDisplayAndCross) {
  const Eigen::Matrix3d m = hat({1.0, 2.0, 3.0});
  Eigen::Matrix3d want;
  want << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  EXPECT_EQ(m, want);
  EXPECT_EQ(hat(Eigen::Vector3d::Zero()), Eigen::Matrix3d::Zero());
  EXPECT_EQ(hat({1, 0, 0}) * Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1));
}

TEST(Hat, VeeInverts) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d v = random_ball(gen, 5.0);
    EXPECT_EQ(vee(hat(v)), v);
    const Eigen::Vector3d w = random_ball(gen, 1.0);
    EXPECT_LT((hat(v) * w - v.cross(w)).norm(), 1e-15);
  }
  Eigen::Matrix3d bad = hat({1, 2, 3});
  bad(0, 1) += 1e-6;
  EXPECT_THROW(vee(bad), DomainError);
}

TEST(So3Exp, QuarterTurnAndIdentity) {
  const Eigen::Matrix3d r = so3_exp({0.0, 0.0, std::numbers::pi / 2});
  EXPECT_LT((r * Eigen::Vector3d(1, 0, 0) - Eigen::Vector3d(0, 1, 0)).norm(), 1e-14);
  EXPECT_EQ(so3_exp(Eigen::Vector3d::Zero()), Eigen::Matrix3d::Identity());
}

TEST(So3Exp, TwelveTermSeries) {
  const Eigen::Vector3d v(0.3, -0.2, 0.1);
  EXPECT_LT((so3_exp(v) - plain_series_exp(hat(v), 12)).norm(), 1e-12);
}

TEST(So3Exp, SeriesOracleOnRandomInputs) {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d v = random_ball(gen, 2.0);
    const Eigen::Matrix3d r = so3_exp(v);
    EXPECT_LT((r - series_exp(hat(v))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).norm(), 1e-14);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
  }
}

TEST(So3Exp, SmallAngleBranch) {
  for (double scale : {1e-3, 1.01e-4, 0.99e-4, 1e-6, 1e-9}) {
    const Eigen::Vector3d v = scale * Eigen::Vector3d(0.6, -0.8, 0.0);
    EXPECT_LT((so3_exp(v) - plain_series_exp(hat(v), 8)).norm(), 4e-16) << scale;
  }
}

TEST(Gl2Exp, ZeroAndDiagonal) {
  EXPECT_EQ(gl2_exp(Eigen::Matrix2d::Zero()), Eigen::Matrix2d::Identity());
  const Eigen::Matrix2d e = gl2_exp(Eigen::Vector2d(0.7, -1.3).asDiagonal());
  EXPECT_NEAR(e(0, 0), std::exp(0.7), 1e-15);
  EXPECT_NEAR(e(1, 1), std::exp(-1.3), 1e-15);
  EXPECT_NEAR(e(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(e(1, 0), 0.0, 1e-15);
}

TEST(Gl2Exp, RotationGenerator) {
  for (double t = -2.0; t <= 2.0; t += 0.125) {
    Eigen::Matrix2d a;
    a << 0, t, -t, 0;
    Eigen::Matrix2d rot;
    rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    EXPECT_LT((gl2_exp(a) - rot).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((gl2_exp(a) - plain_series_exp(a, 40)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Gl2Exp, SeriesOracleOnRandomInputs) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Eigen::Matrix2d a;
    a << u(gen), u(gen), u(gen), u(gen);
    a *= 2.0 / std::max(1.0, a.norm());
    EXPECT_LT((gl2_exp(a) - series_exp(a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gl2Exp, NearDoubleEigenvalue) {
  // Traceless part with B^2 = q I for q straddling the series switch.
  for (double q : {1e-3, 2e-6, 1e-6, 5e-7, 0.0, -5e-7, -1e-6, -2e-6, -1e-3}) {
    Eigen::Matrix2d a;
    a << 0.3, 1.0, q, 0.3;
    EXPECT_LT((gl2_exp(a) - series_exp(a)).cwiseAbs().maxCoeff(), 1e-14) << q;
  }
}

TEST(Gl2Exp, StiffFrozenMatricesStayBounded) {
  // Van der Pol matrices with mu = 60 on the slow branch (|x| > 1).
  for (double x : {1.5, 2.0, -1.8}) {
    Eigen::Matrix2d a;
    a << 0, 1, -1, 60 * (1 - x * x);
    for (double h : {1e-3, 1e-2, 1e-1, 1.0}) {
      EXPECT_LE(gl2_exp(h * a).norm(), std::sqrt(2.0) * (1 + 2 * h)) << x << " " << h;
    }
  }
}

TEST(Se3Exp, PureTranslation) {
  const Se3Group g = se3_exp({Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 2, 3)});
  EXPECT_EQ(g.g, Eigen::Matrix3d::Identity());
  EXPECT_EQ(g.u, Eigen::Vector3d(1, 2, 3));
}

TEST(Se3Exp, HalfTurnMatchesHomogeneousSeries) {
  const Se3Algebra a{Eigen::Vector3d(0, 0, std::numbers::pi), Eigen::Vector3d(1, 0, 0)};
  const Se3Group g = se3_exp(a);
  const Eigen::MatrixXd m = series_exp(se3_matrix(a));
  EXPECT_LT((g.g - m.topLeftCorner(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((g.u - m.topRightCorner(3, 1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Se3Exp, SeriesOracleOnRandomInputs) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 1000; ++i) {
    const Se3Algebra a{random_ball(gen, 2.0), random_ball(gen, 2.0)};
    const Se3Group g = se3_exp(a);
    const Eigen::MatrixXd m = series_exp(se3_matrix(a));
    EXPECT_LT((g.g - m.topLeftCorner(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((g.u - m.topRightCorner(3, 1)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Se3Exp, SmallAngleBranch) {
  for (double scale : {1.01e-4, 0.99e-4, 1e-7}) {
    const Se3Algebra a{scale * Eigen::Vector3d(0.0, 0.6, 0.8), Eigen::Vector3d(0.3, -1.0, 2.0)};
    const Se3Group g = se3_exp(a);
    const Eigen::MatrixXd m = plain_series_exp(se3_matrix(a), 12);
    EXPECT_LT((g.u - m.topRightCorner(3, 1)).norm(), 1e-15) << scale;
  }
}

TEST(Se3Exp, OneParameterSubgroup) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 100; ++i) {
    const Se3Algebra a{random_ball(gen, 1.0), random_ball(gen, 1.0)};
    const Se3Group twice = se3_exp({2.0 * a.xi, 2.0 * a.u});
    const Se3Group sq = se3_exp(a) * se3_exp(a);
    EXPECT_LT((twice.g - sq.g).norm(), 1e-12);
    EXPECT_LT((twice.u - sq.u).norm(), 1e-12);
  }
}

TEST(Se3Group, ProductAndInverse) {
  std::mt19937_64 gen(6);
  const Se3Group a = se3_exp({random_ball(gen, 1.5), random_ball(gen, 1.5)});
  const Se3Group b = se3_exp({random_ball(gen, 1.5), random_ball(gen, 1.5)});
  const Se3Group ab = a * b;
  EXPECT_LT((ab.g - a.g * b.g).norm(), 1e-15);
  EXPECT_LT((ab.u - (a.g * b.u + a.u)).norm(), 1e-15);
  const Se3Group e = a * inverse(a);
  EXPECT_LT((e.g - Eigen::Matrix3d::Identity()).norm(), 1e-14);
  EXPECT_LT(e.u.norm(), 1e-14);
}

TEST(Se3Algebra, BracketAntisymmetricAndMatchesFormula) {
  const Se3Algebra a{{1, 2, 3}, {0.5, -1, 2}};
  const Se3Algebra b{{-1, 0, 2}, {3, 1, -1}};
  const Se3Algebra ab = bracket(a, b), ba = bracket(b, a);
  EXPECT_EQ(ab.xi, -ba.xi);
  EXPECT_EQ(ab.u, -ba.u);
  EXPECT_EQ(ab.xi, a.xi.cross(b.xi));
  EXPECT_EQ(ab.u, a.xi.cross(b.u) - b.xi.cross(a.u));
}

TEST(Coadjoint, IdentityAndFormula) {
  const CoadjointPoint m{{0.1, 0.2, 0.3}, {0, 0, 1}};
  const CoadjointPoint same = coadjoint_act(Se3Group::identity(), m);
  EXPECT_EQ(same.mu, m.mu);
  EXPECT_EQ(same.beta, m.beta);
  const Se3Group g{so3_exp({0.2, -0.1, 0.4}), {1, 2, 3}};
  const CoadjointPoint r = coadjoint_act(g, m);
  EXPECT_LT((r.mu - g.g.transpose() * (m.mu - g.u.cross(m.beta))).norm(), 1e-15);
  EXPECT_LT((r.beta - g.g.transpose() * m.beta).norm(), 1e-15);
}

TEST(Coadjoint, IsARightAction) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    const Se3Group a = se3_exp({random_ball(gen, 2), random_ball(gen, 2)});
    const Se3Group b = se3_exp({random_ball(gen, 2), random_ball(gen, 2)});
    const CoadjointPoint m{random_ball(gen, 2), random_ball(gen, 2)};
    const CoadjointPoint lhs = coadjoint_act(a * b, m);
    const CoadjointPoint rhs = coadjoint_act(b, coadjoint_act(a, m));
    EXPECT_LT((lhs.mu - rhs.mu).norm(), 1e-13);
    EXPECT_LT((lhs.beta - rhs.beta).norm(), 1e-13);
  }
}

TEST(Coadjoint, CasimirsInvariant) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 200; ++i) {
    const Se3Group g = se3_exp({random_ball(gen, 2), random_ball(gen, 2)});
    const CoadjointPoint m{random_ball(gen, 2), random_ball(gen, 2)};
    const CoadjointPoint r = coadjoint_act(g, m);
    EXPECT_NEAR(r.beta.squaredNorm(), m.beta.squaredNorm(), 1e-12);
    EXPECT_NEAR(r.mu.dot(r.beta), m.mu.dot(m.beta), 1e-12);
  }
}

TEST(Coadjoint, InfinitesimalExample) {
  const CoadjointPoint r = coadjoint_infinitesimal({{0, 0, 1}, {0, 0, 0}}, {{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(r.mu, Eigen::Vector3d(0, -1, 0));
  EXPECT_EQ(r.beta, Eigen::Vector3d(1, 0, 0));
  const CoadjointPoint z = coadjoint_infinitesimal({}, {{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(z.mu, Eigen::Vector3d::Zero());
  EXPECT_EQ(z.beta, Eigen::Vector3d::Zero());
}

// Generic axioms of the three actions.
template <class Action>
class ActionAxioms : public ::testing::Test {};

struct SphereCase {
  using Action = SphereAction;
  static Eigen::Vector3d algebra(std::mt19937_64& g) { return random_ball(g, 1.0); }
  static Eigen::Vector3d point(std::mt19937_64& g) { return random_ball(g, 1.0).normalized(); }
  static Eigen::Vector3d scale(double s, const Eigen::Vector3d& u) { return s * u; }
  static Eigen::VectorXd flat(const Eigen::Vector3d& p) { return p; }
  static constexpr bool right = false;
};
struct PlaneCase {
  using Action = PlaneLinearAction;
  static Eigen::Matrix2d algebra(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::Matrix2d a;
    a << u(g), u(g), u(g), u(g);
    return a;
  }
  static Eigen::Vector2d point(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(g), u(g)};
  }
  static Eigen::Matrix2d scale(double s, const Eigen::Matrix2d& u) { return s * u; }
  static Eigen::VectorXd flat(const Eigen::Vector2d& p) { return p; }
  static constexpr bool right = false;
};
struct CoadjointCase {
  using Action = CoadjointAction;
  static Se3Algebra algebra(std::mt19937_64& g) { return {random_ball(g, 0.6), random_ball(g, 0.6)}; }
  static CoadjointPoint point(std::mt19937_64& g) { return {random_ball(g, 1.0), random_ball(g, 1.0)}; }
  static Se3Algebra scale(double s, const Se3Algebra& u) { return {s * u.xi, s * u.u}; }
  static Eigen::VectorXd flat(const CoadjointPoint& p) {
    Eigen::VectorXd v(6);
    v << p.mu, p.beta;
    return v;
  }
  static constexpr bool right = true;
};

using Cases = ::testing::Types<SphereCase, PlaneCase, CoadjointCase>;
TYPED_TEST_SUITE(ActionAxioms, Cases);

TYPED_TEST(ActionAxioms, ExpOfZeroIsIdentity) {
  typename TypeParam::Action action;
  std::mt19937_64 gen(10);
  for (int i = 0; i < 50; ++i) {
    const auto p = TypeParam::point(gen);
    const auto q = action.act(action.exp(action.algebra_zero()), p);
    EXPECT_LT(action.ambient_distance(p, q), 1e-15);
  }
}

TYPED_TEST(ActionAxioms, OneParameterSubgroup) {
  typename TypeParam::Action action;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> st(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto u = TypeParam::algebra(gen);
    const auto p = TypeParam::point(gen);
    const double s = st(gen), t = st(gen);
    const auto lhs = action.act(action.exp(TypeParam::scale(s + t, u)), p);
    const auto rhs = action.act(action.exp(TypeParam::scale(s, u)), action.act(action.exp(TypeParam::scale(t, u)), p));
    EXPECT_LT(action.ambient_distance(lhs, rhs), 1e-12);
  }
}

TYPED_TEST(ActionAxioms, InfinitesimalMatchesCentralDifference) {
  typename TypeParam::Action action;
  std::mt19937_64 gen(12);
  const double t = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const auto u = TypeParam::algebra(gen);
    const auto p = TypeParam::point(gen);
    const Eigen::VectorXd fd = (TypeParam::flat(action.act(action.exp(TypeParam::scale(t, u)), p)) -
                                TypeParam::flat(action.act(action.exp(TypeParam::scale(-t, u)), p))) /
                               (2 * t);
    EXPECT_LT((fd - TypeParam::flat(action.infinitesimal(u, p))).norm(), 1e-8);
  }
}

TYPED_TEST(ActionAxioms, ZeroAlgebraGivesZeroTangent) {
  typename TypeParam::Action action;
  std::mt19937_64 gen(13);
  const auto p = TypeParam::point(gen);
  EXPECT_EQ(TypeParam::flat(action.infinitesimal(action.algebra_zero(), p)).norm(), 0.0);
}

TEST(SphereAction, PreservesNorm) {
  SphereAction action;
  std::mt19937_64 gen(14);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d p = random_ball(gen, 1.0).normalized();
    const Eigen::Vector3d q = action.act(action.exp(random_ball(gen, 2.0)), p);
    EXPECT_LT(std::abs(q.norm() - p.norm()), 1e-13);
  }
}

}  // namespace
}  // namespace cfree
