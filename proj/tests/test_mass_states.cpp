#include <gtest/gtest.h>

#include <random>

#include "vecmass/error.hpp"
#include "vecmass/mass_states.hpp"

using namespace vecmass;

namespace {

void expect_four(const FourVector& v, const FourVector& e, double tol) {
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(v[a], e[a], tol) << "component " << a;
}

}  // namespace

TEST(RestMassState, RequiresPositiveFiniteMass) {
  for (double m : {0.0, -1.0, double(NAN), double(INFINITY)}) {
    try {
      RestMassState s(m, {});
      FAIL() << "accepted m = " << m;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
      EXPECT_EQ(e.module(), "mass_states");
    }
  }
  EXPECT_THROW(RestMassState(1.0, {NAN, 0, 0}), Error);
  EXPECT_NO_THROW(RestMassState(1e-9, {100.0, 0, 0}));
}

TEST(BoostState, AxisExample) {
  const BoostedMassState s = boost_state(RestMassState(1.0, {1.0, 0.0, 0.0}), ThreeVelocity(0.6, 0.0, 0.0));
  EXPECT_NEAR(s.energy, 1.25, 1e-15);
  expect_four(s.P, {1.25, 0.75, 0, 0}, 1e-15);
  expect_four(s.V, {0.75, 1.25, 0, 0}, 1e-15);
  expect_four(s.K, {2.0, 2.0, 0, 0}, 1e-15);
  const MassShellReport r = mass_shell(s);
  EXPECT_NEAR(r.p2, 1.0, 1e-14);
  EXPECT_NEAR(r.v2, -1.0, 1e-14);
  EXPECT_NEAR(r.pv, 0.0, 1e-14);
  EXPECT_NEAR(r.M2, 0.0, 1e-14);
  EXPECT_FALSE(r.negative_M2);
}

TEST(BoostState, TransverseVectorMassIsUnchanged) {
  const BoostedMassState s = boost_state(RestMassState(2.0, {0.0, 1.0, 0.0}), ThreeVelocity(0.6, 0.0, 0.0));
  expect_four(s.P, {2.5, 1.5, 0, 0}, 1e-15);
  expect_four(s.V, {0.0, 0.0, 1.0, 0.0}, 1e-15);
}

TEST(BoostState, RestFrameIsExact) {
  const RestMassState r(3.5, {0.25, -1.5, 2.0});
  const BoostedMassState s = boost_state(r, ThreeVelocity());
  EXPECT_EQ(s.P, (FourVector{3.5, 0, 0, 0}));
  EXPECT_EQ(s.V, (FourVector{0.0, 0.25, -1.5, 2.0}));
  EXPECT_EQ(s.K, r.four_mass());
}

TEST(BoostState, EqualsBoostOfRestFourMass) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 b{0.55 * u(rng), 0.55 * u(rng), 0.55 * u(rng)};
    const RestMassState r(1.0 + 4.0 * std::abs(u(rng)), {3 * u(rng), 3 * u(rng), 3 * u(rng)});
    const BoostedMassState s = boost_state(r, ThreeVelocity(b));
    expect_four(s.K, apply_boost(boost_matrix(ThreeVelocity(b)), r.four_mass()), 1e-12);
  }
}

TEST(MassShell, InvariantsAfterRandomBoosts) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Vec3 d{n(rng), n(rng), n(rng)};
    d = (1.0 / norm(d)) * d;
    Vec3 e{n(rng), n(rng), n(rng)};
    e = (5.0 * u(rng) / norm(e)) * e;
    const RestMassState r(5.0 * u(rng) + 1e-6, e);
    const MassShellReport rep = mass_shell(boost_state(r, ThreeVelocity(0.99 * u(rng) * d)));
    EXPECT_NEAR(rep.p2, r.m() * r.m(), 1e-9);
    EXPECT_NEAR(rep.v2, -norm2(r.k()), 1e-9);
    EXPECT_NEAR(rep.pv, 0.0, 1e-9);
    EXPECT_EQ(rep.negative_M2, norm2(r.k()) > r.m() * r.m());
  }
}

TEST(MassShell, NegativeM2IsAllowed) {
  const BoostedMassState s = boost_state(RestMassState(1.0, {0.0, 2.0, 0.0}), ThreeVelocity(0.0, 0.0, 0.3));
  const MassShellReport r = mass_shell(s);
  EXPECT_TRUE(r.negative_M2);
  EXPECT_NEAR(r.M2, -3.0, 1e-12);
}

TEST(MassShell, ToleranceSwitchesToRelativeAboveHundred) {
  EXPECT_TRUE(within_shell_tolerance(4.0 + 5e-11, 4.0));
  EXPECT_FALSE(within_shell_tolerance(4.0 + 5e-10, 4.0));
  EXPECT_TRUE(within_shell_tolerance(1e6 + 5e-7, 1e6));
  EXPECT_FALSE(within_shell_tolerance(1e6 + 5e-6, 1e6));
}

TEST(BoostState, UEqualsPDotVOverE) {
  const BoostedMassState s = boost_state(RestMassState(2.0, {0.3, -0.4, 1.1}), ThreeVelocity(0.2, 0.5, -0.3));
  EXPECT_NEAR(s.V.t, dot(s.P.spatial(), s.V.spatial()) / s.energy, 1e-12);
}

TEST(GeneratorProjection, ContractsWithDeclaredClass) {
  const BoostedMassState s = boost_state(RestMassState(1.0, {1.0, 0.0, 0.0}), ThreeVelocity(0.6, 0.0, 0.0));
  EXPECT_NEAR(generator_projection(s, {1, 0, 0, 0}, DirectionClass::timelike), 2.0, 1e-15);
  EXPECT_NEAR(generator_projection(s, {0, 1, 0, 0}, DirectionClass::spacelike), -2.0, 1e-15);
  EXPECT_NEAR(generator_projection(s, {2, 1, 0, 0}, DirectionClass::timelike), 2.0, 1e-15);
}

TEST(GeneratorProjection, MismatchedClassThrows) {
  const BoostedMassState s = boost_state(RestMassState(1.0, {}), ThreeVelocity());
  for (const auto& [dir, cls] : {std::pair{FourVector{0, 1, 0, 0}, DirectionClass::timelike},
                                 std::pair{FourVector{1, 1, 0, 0}, DirectionClass::timelike},
                                 std::pair{FourVector{1, 0, 0, 0}, DirectionClass::spacelike},
                                 std::pair{FourVector{1, 1, 0, 0}, DirectionClass::spacelike}}) {
    try {
      generator_projection(s, dir, cls);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::direction_class_mismatch);
    }
  }
}

TEST(StateJson, RoundTripRecomputesDerivedFields) {
  const BoostedMassState s = boost_state(RestMassState(1.7, {0.1, -0.2, 3.0}), ThreeVelocity(0.1, 0.2, -0.7));
  const BoostedMassState back = state_from_json(state_to_json(s));
  EXPECT_EQ(back.rest.m(), s.rest.m());
  EXPECT_EQ(back.rest.k(), s.rest.k());
  EXPECT_EQ(back.beta, s.beta);
  EXPECT_EQ(back.K, s.K);

  const BoostedMassState t =
      state_from_json(R"({"m": 1, "k": [1, 0, 0], "beta": [0.6, 0, 0], "E": 99, "K": [0, 0, 0, 0]})");
  EXPECT_NEAR(t.energy, 1.25, 1e-15);
  EXPECT_NEAR(t.K.t, 2.0, 1e-15);
}

TEST(StateJson, MalformedInputIsRejected) {
  EXPECT_THROW(state_from_json("not json"), Error);
  EXPECT_THROW(state_from_json(R"({"k": [0, 0, 0]})"), Error);
  EXPECT_THROW(state_from_json(R"({"m": 1, "k": [0, 0]})"), Error);
  EXPECT_THROW(state_from_json(R"({"m": 0})"), Error);
  try {
    state_from_json(R"({"m": 1, "beta": [1.5, 0, 0]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::velocity_out_of_range);
  }
}
