#pragma once

#include <string>

#include "vecmass/tetrad.hpp"

namespace vecmass {

/// Inertial state at rest: scalar-mass m > 0 and vector-mass k (any finite size).
/// The rest four-mass vector is {m, k}.
class RestMassState {
 public:
  RestMassState(double m, const Vec3& k);

  double m() const { return m_; }
  const Vec3& k() const { return k_; }
  double vector_mass_squared() const { return norm2(k_); }
  FourVector four_mass() const { return FourVector::from(m_, k_); }

 private:
  double m_;
  Vec3 k_;
};

/// A rest state boosted to velocity beta. Derived quantities are computed once
/// at construction and are never set independently.
struct BoostedMassState {
  RestMassState rest;
  ThreeVelocity beta;
  double energy;  // gamma * m
  FourVector P;   // (E, beta E)
  FourVector V;   // (beta . L k, L k)
  FourVector K;   // P + V
};

BoostedMassState boost_state(const RestMassState& rest, const ThreeVelocity& beta);

struct MassShellReport {
  double p2;
  double v2;
  double pv;
  double m2;
  double mtilde2;
  double M2;
  /// Set when |k| > m; such states are allowed.
  bool negative_M2;
};

MassShellReport mass_shell(const BoostedMassState& state);

/// Absolute 1e-10 for |expected| <= 100, relative 1e-12 beyond.
bool within_shell_tolerance(double value, double expected);

enum class DirectionClass { timelike, spacelike };

/// Contraction of a translation direction with K. Throws direction_class_mismatch
/// when the sign of direction.direction disagrees with the declared class.
double generator_projection(const BoostedMassState& state, const FourVector& direction, DirectionClass declared);

/// {"m": m, "k": [kx, ky, kz], "beta": [bx, by, bz]}. Derived fields are not stored.
std::string state_to_json(const BoostedMassState& state);
/// Parses the schema above and recomputes every derived quantity.
BoostedMassState state_from_json(const std::string& text);

}  // namespace vecmass
