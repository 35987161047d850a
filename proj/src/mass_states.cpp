#include "vecmass/mass_states.hpp"

#include <cmath>

#include "json.hpp"
#include "vecmass/error.hpp"

namespace vecmass {

namespace {

constexpr const char* kModule = "mass_states";

Vec3 vec3_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorKind::invalid_argument, kModule, std::string("field '") + field + "' must be an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorKind::invalid_argument, kModule, std::string("field '") + field + "' must hold numbers");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace

RestMassState::RestMassState(double m, const Vec3& k) : m_(m), k_(k) {
  if (!std::isfinite(m) || !(m > 0.0)) {
    throw Error(ErrorKind::invalid_argument, kModule, "scalar-mass must be finite and strictly positive");
  }
  if (!is_finite(k)) throw Error(ErrorKind::invalid_argument, kModule, "vector-mass must be finite");
}

BoostedMassState boost_state(const RestMassState& rest, const ThreeVelocity& beta) {
  const double energy = beta.gamma() * rest.m();
  const Vec3 lk = multiply(l_matrix(beta), rest.k());
  const FourVector P = FourVector::from(energy, energy * beta.vector());
  const FourVector V = FourVector::from(dot(beta.vector(), lk), lk);
  return BoostedMassState{rest, beta, energy, P, V, P + V};
}

MassShellReport mass_shell(const BoostedMassState& state) {
  MassShellReport r{};
  r.p2 = minkowski_dot(state.P, state.P);
  r.v2 = minkowski_dot(state.V, state.V);
  r.pv = minkowski_dot(state.P, state.V);
  r.m2 = state.rest.m() * state.rest.m();
  r.mtilde2 = state.rest.vector_mass_squared();
  r.M2 = r.m2 - r.mtilde2;
  r.negative_M2 = r.M2 < 0.0;
  return r;
}

bool within_shell_tolerance(double value, double expected) {
  const double scale = std::abs(expected);
  const double tol = scale <= 100.0 ? 1e-10 : 1e-12 * scale;
  return std::abs(value - expected) <= tol;
}

double generator_projection(const BoostedMassState& state, const FourVector& direction, DirectionClass declared) {
  if (!is_finite(direction)) throw Error(ErrorKind::invalid_argument, kModule, "direction must be finite");
  const double norm = minkowski_dot(direction, direction);
  const bool ok = declared == DirectionClass::timelike ? norm > 0.0 : norm < 0.0;
  if (!ok) {
    throw Error(ErrorKind::direction_class_mismatch, kModule,
                declared == DirectionClass::timelike ? "direction declared timelike but t.t <= 0"
                                                     : "direction declared spacelike but s.s >= 0");
  }
  return minkowski_dot(direction, state.K);
}

std::string state_to_json(const BoostedMassState& state) {
  const Vec3& k = state.rest.k();
  const Vec3& b = state.beta.vector();
  nlohmann::json j;
  j["m"] = state.rest.m();
  j["k"] = {k.x, k.y, k.z};
  j["beta"] = {b.x, b.y, b.z};
  return j.dump();
}

BoostedMassState state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, kModule, std::string("malformed state JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m") || !j["m"].is_number()) {
    throw Error(ErrorKind::invalid_argument, kModule, "state JSON needs a numeric 'm'");
  }
  const Vec3 k = j.contains("k") ? vec3_from_json(j["k"], "k") : Vec3{};
  const Vec3 beta = j.contains("beta") ? vec3_from_json(j["beta"], "beta") : Vec3{};
  return boost_state(RestMassState(j["m"].get<double>(), k), ThreeVelocity(beta));
}

}  // namespace vecmass
