#include "vecmass/tetrad.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "vecmass/error.hpp"

namespace vecmass {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::velocity_out_of_range: return "velocity-out-of-range";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::direction_class_mismatch: return "direction-class-mismatch";
    case ErrorKind::resolution_error: return "resolution-error";
    case ErrorKind::lightlike_singularity: return "lightlike-singularity";
    case ErrorKind::time_ordering: return "time-ordering";
    case ErrorKind::velocity_mismatch: return "velocity-mismatch";
    case ErrorKind::occupancy_overflow: return "occupancy-overflow";
    case ErrorKind::spacelike_segment: return "spacelike-segment";
    case ErrorKind::no_timelike_path: return "no-timelike-path";
  }
  return "unknown";
}

bool is_finite(const FourVector& v) {
  return std::isfinite(v.t) && std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

double metric_dot(const FourVector& a, const FourVector& b, const MetricSignature& metric) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += metric.diag[i] * a[i] * b[i];
  return sum;
}

Mat3 identity3() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 identity4() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Vec3 multiply(const Mat3& m, const Vec3& v) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v.x + m[i][1] * v.y + m[i][2] * v.z;
  return out;
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Mat4 multiply(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Mat3 transpose(const Mat3& m) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = m[j][i];
  return out;
}

Mat4 transpose(const Mat4& m) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m[j][i];
  return out;
}

Mat4 diagonal(const MetricSignature& metric) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i) out[i][i] = metric.diag[i];
  return out;
}

double determinant(const Mat4& m) {
  // Gaussian elimination with partial pivoting.
  Mat4 a = m;
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

double max_abs_difference(const Mat3& a, const Mat3& b) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

double max_abs_difference(const Mat4& a, const Mat4& b) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

ThreeVelocity::ThreeVelocity(const Vec3& beta) : beta_(beta) {
  if (!is_finite(beta)) {
    throw Error(ErrorKind::velocity_out_of_range, "tetrad_algebra", "velocity components must be finite");
  }
  if (norm2(beta) >= 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "|beta| = %.17g must be strictly below 1", norm(beta));
    throw Error(ErrorKind::velocity_out_of_range, "tetrad_algebra", buf);
  }
}

Mat3 antisym_matrix(const ThreeVelocity& beta) {
  const Vec3& b = beta.vector();
  return Mat3{{{0.0, b.z, -b.y}, {-b.z, 0.0, b.x}, {b.y, -b.x, 0.0}}};
}

Mat3 antisym_squared(const ThreeVelocity& beta) {
  const Vec3& b = beta.vector();
  const double b2 = norm2(b);
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = b[i] * b[j] - (i == j ? b2 : 0.0);
  return out;
}

Mat3 l_matrix(const ThreeVelocity& beta) {
  const Vec3& b = beta.vector();
  const double g = beta.gamma();
  const double c = g * g / (1.0 + g);
  Mat3 out = identity3();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] += c * b[i] * b[j];
  return out;
}

Mat3 l_matrix_via_antisym(const ThreeVelocity& beta) {
  const double g = beta.gamma();
  const double c = g * g / (1.0 + g);
  const Mat3 b2 = antisym_squared(beta);
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = (i == j ? g : 0.0) + c * b2[i][j];
  return out;
}

BoostMatrix boost_matrix(const ThreeVelocity& beta) {
  const Vec3& b = beta.vector();
  const double g = beta.gamma();
  const Mat3 spatial = l_matrix_via_antisym(beta);
  Mat4 m{};
  m[0][0] = g;
  for (int i = 0; i < 3; ++i) {
    m[0][i + 1] = g * b[i];
    m[i + 1][0] = g * b[i];
    for (int j = 0; j < 3; ++j) m[i + 1][j + 1] = spatial[i][j];
  }
  return BoostMatrix(m, beta);
}

FourVector apply_boost(const BoostMatrix& boost, const FourVector& v) {
  FourVector out;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += boost(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double add_collinear_speeds(double u, double v) { return (u + v) / (1.0 + u * v); }

}  // namespace vecmass
