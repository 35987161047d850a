#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vecmass/error.hpp"
#include "vecmass/tetrad.hpp"

using namespace vecmass;

namespace {

ThreeVelocity random_velocity(std::mt19937_64& rng, double max_speed) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, max_speed);
  Vec3 d{n(rng), n(rng), n(rng)};
  return ThreeVelocity(u(rng) / norm(d) * d);
}

}  // namespace

TEST(MinkowskiDot, HandEvaluatedPairs) {
  EXPECT_EQ(minkowski_dot({1, 0, 0, 0}, {1, 0, 0, 0}), 1.0);
  EXPECT_EQ(minkowski_dot({1, 1, 0, 0}, {1, 1, 0, 0}), 0.0);
  EXPECT_EQ(minkowski_dot({1.25, 0.75, 0, 0}, {0.75, 1.25, 0, 0}), 0.0);
  EXPECT_EQ(minkowski_dot({2, 1, 1, 1}, {3, 1, 2, 3}), 6.0 - 1.0 - 2.0 - 3.0);
}

TEST(MinkowskiDot, MetricDotMatchesForPhysicalSignature) {
  const FourVector a{0.3, -1.2, 2.0, 0.5}, b{1.1, 0.4, -0.7, 2.2};
  EXPECT_DOUBLE_EQ(metric_dot(a, b, kMinkowski), minkowski_dot(a, b));
}

TEST(ThreeVelocity, RejectsSuperluminalAndNonFinite) {
  EXPECT_NO_THROW(ThreeVelocity(0.99, 0.0, 0.0));
  for (const Vec3 v : {Vec3{1.0, 0.0, 0.0}, Vec3{0.8, 0.8, 0.0}, Vec3{double(NAN), 0.0, 0.0}, Vec3{double(INFINITY), 0, 0}}) {
    try {
      ThreeVelocity b(v);
      FAIL() << "accepted |beta| >= 1";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::velocity_out_of_range);
    }
  }
}

TEST(ThreeVelocity, Gamma) {
  EXPECT_DOUBLE_EQ(ThreeVelocity(0.6, 0.0, 0.0).gamma(), 1.25);
  EXPECT_DOUBLE_EQ(ThreeVelocity(0.0, 0.0, 0.8).gamma(), 1.0 / 0.6);
  EXPECT_EQ(ThreeVelocity().gamma(), 1.0);
}

TEST(AntisymMatrix, ZeroVelocityGivesZero) {
  const Mat3 b = antisym_matrix(ThreeVelocity());
  for (const auto& row : b) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }
}

TEST(AntisymMatrix, AxisVelocityPattern) {
  const ThreeVelocity beta(0.6, 0.0, 0.0);
  const Mat3 b = antisym_matrix(beta);
  EXPECT_EQ(b[0][1], 0.0);
  EXPECT_EQ(b[0][2], 0.0);
  EXPECT_EQ(b[1][2], 0.6);
  EXPECT_EQ(b[2][1], -0.6);
  const Mat3 b2 = antisym_squared(beta);
  const Mat3 expect{{{0.0, 0.0, 0.0}, {0.0, -0.36, 0.0}, {0.0, 0.0, -0.36}}};
  EXPECT_LT(max_abs_difference(b2, expect), 1e-15);
  EXPECT_LT(max_abs_difference(multiply(b, b), expect), 1e-15);
}

TEST(AntisymMatrix, SquareMatchesProductForRandomVelocities) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const ThreeVelocity beta = random_velocity(rng, 0.99);
    const Mat3 b = antisym_matrix(beta);
    const Mat3 bt = transpose(b);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) EXPECT_EQ(b[r][c] + bt[r][c], 0.0);
    }
    EXPECT_LT(max_abs_difference(multiply(b, b), antisym_squared(beta)), 1e-15);
  }
}

TEST(LMatrix, KnownValues) {
  EXPECT_EQ(max_abs_difference(l_matrix(ThreeVelocity()), identity3()), 0.0);
  const Mat3 l = l_matrix(ThreeVelocity(0.6, 0.0, 0.0));
  EXPECT_NEAR(l[0][0], 1.25, 1e-15);
  EXPECT_NEAR(l[1][1], 1.0, 1e-15);
  EXPECT_NEAR(l[2][2], 1.0, 1e-15);
  EXPECT_NEAR(1.25 * 1.25 / 2.25, 0.6944444444444444, 1e-15);
}

TEST(LMatrix, SymmetricWithEigenvaluesGammaOneOne) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ThreeVelocity beta = random_velocity(rng, 0.99);
    const Mat3 l = l_matrix(beta);
    EXPECT_LT(max_abs_difference(l, transpose(l)), 1e-15);
    const Vec3 b = beta.vector();
    if (norm(b) < 1e-6) continue;
    const Vec3 along = (1.0 / norm(b)) * b;
    const Vec3 la = multiply(l, along);
    EXPECT_LT(norm(la - beta.gamma() * along), 1e-12 * beta.gamma());
    // Any vector orthogonal to beta is left unchanged.
    Vec3 perp = std::abs(along.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    perp = perp - dot(perp, along) * along;
    EXPECT_LT(norm(multiply(l, perp) - perp), 1e-12);
  }
}

TEST(LMatrix, TwoFormsAgree) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const ThreeVelocity beta = random_velocity(rng, 0.99);
    EXPECT_LT(max_abs_difference(l_matrix(beta), l_matrix_via_antisym(beta)), 1e-12);
  }
}

TEST(BoostMatrix, IdentityAtRest) {
  EXPECT_EQ(max_abs_difference(boost_matrix(ThreeVelocity()).entries(), identity4()), 0.0);
}

TEST(BoostMatrix, AxisBoostEntries) {
  const BoostMatrix b = boost_matrix(ThreeVelocity(0.6, 0.0, 0.0));
  const Mat4 expect{{{1.25, 0.75, 0, 0}, {0.75, 1.25, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  EXPECT_LT(max_abs_difference(b.entries(), expect), 1e-15);
  EXPECT_EQ(b.velocity(), ThreeVelocity(0.6, 0.0, 0.0));
}

TEST(BoostMatrix, RepeatedCollinearBoostComposesVelocities) {
  const double u = add_collinear_speeds(0.6, 0.6);
  EXPECT_NEAR(u, 1.2 / 1.36, 1e-15);
  EXPECT_NEAR(u, 0.88235294117647056, 1e-15);
  const Mat4 b = boost_matrix(ThreeVelocity(0.6, 0.0, 0.0)).entries();
  EXPECT_LT(max_abs_difference(multiply(b, b), boost_matrix(ThreeVelocity(u, 0.0, 0.0)).entries()), 1e-12);
}

TEST(BoostMatrix, GroupPropertiesOverRandomVelocities) {
  std::mt19937_64 rng(17);
  const Mat4 eta = diagonal(kMinkowski);
  for (int i = 0; i < 1000; ++i) {
    const ThreeVelocity beta = random_velocity(rng, 0.99);
    const Mat4 l = boost_matrix(beta).entries();
    EXPECT_LT(max_abs_difference(multiply(transpose(l), multiply(eta, l)), eta), 1e-10);
    EXPECT_NEAR(determinant(l), 1.0, 1e-10);
    EXPECT_LT(max_abs_difference(multiply(boost_matrix(-beta).entries(), l), identity4()), 1e-10);
  }
}

TEST(BoostMatrix, WrongMetricBreaksLorentzCondition) {
  const Mat4 l = boost_matrix(ThreeVelocity(0.5, 0.2, 0.0)).entries();
  const Mat4 euclid = diagonal(MetricSignature{{1.0, 1.0, 1.0, 1.0}});
  EXPECT_GT(max_abs_difference(multiply(transpose(l), multiply(euclid, l)), euclid), 0.1);
}

TEST(Determinant, PivotedEliminationOnKnownMatrix) {
  const Mat4 m{{{0, 2, 0, 0}, {3, 0, 0, 0}, {0, 0, 4, 1}, {0, 0, 2, 1}}};
  EXPECT_NEAR(determinant(m), -12.0, 1e-12);
}

TEST(ApplyBoost, Examples) {
  const FourVector v{0.3, -2.0, 1.0, 0.5};
  EXPECT_EQ(apply_boost(boost_matrix(ThreeVelocity()), v), v);
  const BoostMatrix b = boost_matrix(ThreeVelocity(0.6, 0.0, 0.0));
  const FourVector a = apply_boost(b, {1, 0, 0, 0});
  EXPECT_NEAR(a.t, 1.25, 1e-15);
  EXPECT_NEAR(a.x, 0.75, 1e-15);
  const FourVector n = apply_boost(b, {1, 1, 0, 0});
  EXPECT_NEAR(n.t, 2.0, 1e-15);
  EXPECT_NEAR(n.x, 2.0, 1e-15);
  EXPECT_NEAR(minkowski_dot(n, n), 0.0, 1e-14);
}

TEST(ApplyBoost, PreservesInnerProducts) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const BoostMatrix b = boost_matrix(random_velocity(rng, 0.99));
    const FourVector x{u(rng), u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng), u(rng)};
    EXPECT_NEAR(minkowski_dot(apply_boost(b, x), apply_boost(b, y)), minkowski_dot(x, y), 1e-9);
  }
}
