#pragma once

// Flat Minkowski algebra in a local orthonormal frame (identity tetrad),
// natural units, signature (+, -, -, -).

#include <array>
#include <cmath>

namespace vecmass {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline bool is_finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

/// Contravariant components (t, x, y, z).
struct FourVector {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr FourVector from(double time, const Vec3& space) { return {time, space.x, space.y, space.z}; }
  constexpr Vec3 spatial() const { return {x, y, z}; }

  constexpr double& operator[](int i) { return i == 0 ? t : (i == 1 ? x : (i == 2 ? y : z)); }
  constexpr double operator[](int i) const { return i == 0 ? t : (i == 1 ? x : (i == 2 ? y : z)); }
};

constexpr FourVector operator+(const FourVector& a, const FourVector& b) {
  return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr FourVector operator-(const FourVector& a, const FourVector& b) {
  return {a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr FourVector operator-(const FourVector& a) { return {-a.t, -a.x, -a.y, -a.z}; }
constexpr FourVector operator*(double s, const FourVector& a) { return {s * a.t, s * a.x, s * a.y, s * a.z}; }
constexpr bool operator==(const FourVector& a, const FourVector& b) {
  return a.t == b.t && a.x == b.x && a.y == b.y && a.z == b.z;
}

bool is_finite(const FourVector& v);

/// Diagonal metric. Only `kMinkowski` is physical; other values exist so the
/// invariant suite can be run against a deliberately broken metric.
struct MetricSignature {
  std::array<double, 4> diag;
};

inline constexpr MetricSignature kMinkowski{{1.0, -1.0, -1.0, -1.0}};

double metric_dot(const FourVector& a, const FourVector& b, const MetricSignature& metric);

/// a.t*b.t - a.x*b.x - a.y*b.y - a.z*b.z
constexpr double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat4 = std::array<std::array<double, 4>, 4>;

Mat3 identity3();
Mat4 identity4();
Vec3 multiply(const Mat3& m, const Vec3& v);
Mat3 multiply(const Mat3& a, const Mat3& b);
Mat4 multiply(const Mat4& a, const Mat4& b);
Mat3 transpose(const Mat3& m);
Mat4 transpose(const Mat4& m);
Mat4 diagonal(const MetricSignature& metric);
double determinant(const Mat4& m);
double max_abs_difference(const Mat3& a, const Mat3& b);
double max_abs_difference(const Mat4& a, const Mat4& b);

/// Particle three-velocity with |beta| < 1 enforced at construction.
class ThreeVelocity {
 public:
  ThreeVelocity() = default;
  /// Throws Error(velocity_out_of_range) unless the components are finite and |beta| < 1.
  explicit ThreeVelocity(const Vec3& beta);
  ThreeVelocity(double bx, double by, double bz) : ThreeVelocity(Vec3{bx, by, bz}) {}

  const Vec3& vector() const { return beta_; }
  double speed_squared() const { return norm2(beta_); }
  double speed() const { return std::sqrt(norm2(beta_)); }
  /// 1/sqrt(1 - |beta|^2). Precision degrades once 1 - |beta| approaches 1e-8.
  double gamma() const { return 1.0 / std::sqrt(1.0 - norm2(beta_)); }

  ThreeVelocity operator-() const { return ThreeVelocity(-beta_); }
  friend bool operator==(const ThreeVelocity& a, const ThreeVelocity& b) { return a.beta_ == b.beta_; }

 private:
  Vec3 beta_{};
};

/// Antisymmetric matrix B with rows (0, bz, -by), (-bz, 0, bx), (by, -bx, 0).
Mat3 antisym_matrix(const ThreeVelocity& beta);
/// B^2 evaluated as beta beta^T - |beta|^2 I.
Mat3 antisym_squared(const ThreeVelocity& beta);
/// L = I + gamma^2/(1+gamma) beta beta^T.
Mat3 l_matrix(const ThreeVelocity& beta);
/// L through the alternative form gamma I + gamma^2/(1+gamma) B^2.
Mat3 l_matrix_via_antisym(const ThreeVelocity& beta);

class BoostMatrix {
 public:
  BoostMatrix(const Mat4& entries, const ThreeVelocity& beta) : entries_(entries), beta_(beta) {}

  const Mat4& entries() const { return entries_; }
  const ThreeVelocity& velocity() const { return beta_; }
  double operator()(int row, int col) const { return entries_[row][col]; }

 private:
  Mat4 entries_;
  ThreeVelocity beta_;
};

/// Pure boost: gamma in the corner, gamma*beta on the first row and column,
/// gamma I + gamma^2/(1+gamma) B^2 in the spatial block.
BoostMatrix boost_matrix(const ThreeVelocity& beta);

FourVector apply_boost(const BoostMatrix& boost, const FourVector& v);

/// Collinear relativistic velocity addition, used to cross-check repeated boosts.
double add_collinear_speeds(double u, double v);

}  // namespace vecmass
