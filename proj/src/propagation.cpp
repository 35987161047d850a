#include "vecmass/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>
#include <vector>

#include "vecmass/error.hpp"

namespace vecmass {

namespace {

constexpr const char* kModule = "propagation";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared integrand of t_beta_element and the velocity-ball quadrature.
Complex t_beta_raw(double m, const Vec3& beta, double gamma, double dtau, const Vec3& dxi, double epsilon) {
  const double energy = gamma * m;
  const double phase = -energy * (dtau - dot(beta, dxi));
  return unit_phase(phase) * (nascent_delta3(dxi - dtau * beta, epsilon) / (kTwoPi * gamma));
}

void require_epsilon(const RegularizationParams& reg) {
  if (!(reg.epsilon > 0.0) || !std::isfinite(reg.epsilon)) {
    throw Error(ErrorKind::invalid_argument, kModule, "regularization width epsilon must be positive");
  }
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::timelike: return "timelike";
    case Regime::lightlike: return "lightlike";
    case Regime::spacelike: return "spacelike";
  }
  return "unknown";
}

double nascent_delta3(const Vec3& x, double epsilon) {
  const double norm = 1.0 / std::pow(std::sqrt(kTwoPi) * epsilon, 3);
  return norm * std::exp(-norm2(x) / (2.0 * epsilon * epsilon));
}

Complex unit_phase(double theta) {
  const double a = std::abs(theta);
  const double s = std::sin(a);
  return {std::cos(a), theta < 0.0 ? -s : s};
}

Complex t_beta_element(double m, const ThreeVelocity& beta, double dtau, const Vec3& dxi,
                       const RegularizationParams& reg) {
  if (!(dtau > 0.0)) throw Error(ErrorKind::time_ordering, kModule, "dtau must be positive");
  if (m == 0.0 || !std::isfinite(m)) throw Error(ErrorKind::invalid_argument, kModule, "m must be finite and nonzero");
  require_epsilon(reg);
  return t_beta_raw(m, beta.vector(), beta.gamma(), dtau, dxi, reg.epsilon);
}

void validate_query(const KernelQuery& q) {
  if (!std::isfinite(q.m) || !std::isfinite(q.dtau) || !is_finite(q.dxi)) {
    throw Error(ErrorKind::invalid_argument, kModule, "kernel query must be finite");
  }
  if (!(q.dtau > 0.0)) throw Error(ErrorKind::time_ordering, kModule, "dtau must be positive (time-ordered slices)");
}

Regime classify(double dtau, const Vec3& dxi) {
  const double r = norm(dxi);
  if (r < dtau) return Regime::timelike;
  if (r > dtau) return Regime::spacelike;
  return Regime::lightlike;
}

double interval_proper_time(double dtau, const Vec3& dxi) {
  const double r = norm(dxi);
  return std::sqrt((dtau - r) * (dtau + r));
}

KernelValue transition_kernel(const KernelQuery& q) {
  validate_query(q);
  const Regime regime = classify(q.dtau, q.dxi);
  if (regime == Regime::spacelike) return {Complex(0.0, 0.0), regime, 0.0};
  if (regime == Regime::lightlike) {
    throw Error(ErrorKind::lightlike_singularity, kModule, "displacement is on the light cone; 1/dtau_bar diverges");
  }
  const double tau_bar = interval_proper_time(q.dtau, q.dxi);
  return {unit_phase(-q.m * tau_bar) / (kTwoPi * tau_bar), regime, tau_bar};
}

KernelValue mass_conjugate_kernel(const KernelQuery& q) {
  KernelQuery flipped = q;
  flipped.m = -q.m;
  return transition_kernel(flipped);
}

Complex transition_kernel_numeric(const KernelQuery& q, const RegularizationParams& reg, int workers) {
  validate_query(q);
  require_epsilon(reg);
  if (q.m == 0.0) throw Error(ErrorKind::invalid_argument, kModule, "m must be nonzero");
  const double ratio = norm(q.dxi) / q.dtau;
  if (ratio > 0.9 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_argument, kModule, "numeric kernel needs |dxi|/dtau <= 0.9");
  }
  const double step = reg.beta_step > 0.0 ? reg.beta_step : reg.epsilon / (5.0 * q.dtau);
  if (!(step * q.dtau < reg.epsilon / 4.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "beta step %.6g gives displacement cells %.6g, need < epsilon/4 = %.6g", step,
                  step * q.dtau, reg.epsilon / 4.0);
    throw Error(ErrorKind::resolution_error, kModule, buf);
  }

  // Lattice cells are centered at (j + 1/2) step on every axis.
  const Vec3 center = (1.0 / q.dtau) * q.dxi;
  const double window = 10.0 * reg.epsilon / q.dtau;
  std::array<long, 3> lo{}, hi{};
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<long>(std::floor(std::max(center[i] - window, -1.0) / step - 0.5));
    hi[i] = static_cast<long>(std::ceil(std::min(center[i] + window, 1.0) / step - 0.5));
  }
  const long rows = hi[0] - lo[0] + 1;
  const int nworkers = std::clamp<long>(workers, 1, rows);
  std::vector<Complex> partial(nworkers);

  auto sweep = [&](int w) {
    const long begin = lo[0] + rows * w / nworkers;
    const long end = lo[0] + rows * (w + 1) / nworkers;
    Complex sum = 0.0;
    for (long a = begin; a < end; ++a) {
      const double bx = (a + 0.5) * step;
      for (long b = lo[1]; b <= hi[1]; ++b) {
        const double by = (b + 0.5) * step;
        for (long c = lo[2]; c <= hi[2]; ++c) {
          const Vec3 beta{bx, by, (c + 0.5) * step};
          const double b2 = norm2(beta);
          if (b2 >= 1.0) continue;
          const double gamma = 1.0 / std::sqrt(1.0 - b2);
          sum += (gamma * gamma) * t_beta_raw(q.m, beta, gamma, q.dtau, q.dxi, reg.epsilon);
        }
      }
    }
    partial[w] = sum;
  };

  if (nworkers == 1) {
    sweep(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(sweep, w);
    for (auto& t : pool) t.join();
  }
  Complex total = 0.0;
  for (const Complex& p : partial) total += p;
  return total * (step * step * step);
}

OccupancyLabel::OccupancyLabel(int n) : n_(n) {
  if (n != 0 && n != 1) throw Error(ErrorKind::occupancy_overflow, kModule, "occupancy label must be 0 or 1");
}

Complex particle_element(const ParticleCoefficients& c, double m, const ThreeVelocity& beta, double dtau,
                         const Vec3& dxi, const RegularizationParams& reg, OccupancyLabel input) {
  if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "particle mass must be positive");
  if (input.n() == 1 && c.a_plus != Complex(0.0)) {
    throw Error(ErrorKind::occupancy_overflow, kModule, "cannot create a particle on an occupied label");
  }
  return c.a_plus * t_beta_element(m, beta, dtau, dxi, reg) + c.b_minus * t_beta_element(-m, beta, dtau, dxi, reg);
}

Complex antiparticle_element(const ParticleCoefficients& c, double m, const ThreeVelocity& beta, double dtau,
                             const Vec3& dxi, const RegularizationParams& reg, OccupancyLabel input) {
  if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "particle mass must be positive");
  if (input.n() == 1 && c.a_minus() != Complex(0.0)) {
    throw Error(ErrorKind::occupancy_overflow, kModule, "cannot create an antiparticle on an occupied label");
  }
  return c.a_minus() * t_beta_element(-m, beta, dtau, dxi, reg) + c.b_plus() * t_beta_element(m, beta, dtau, dxi, reg);
}

Complex s_element(double tau, const BoostedMassState& bra, const BoostedMassState& ket,
                  const RegularizationParams& reg) {
  if (!(bra.beta == ket.beta)) {
    throw Error(ErrorKind::velocity_mismatch, kModule, "S element is defined for states sharing one velocity");
  }
  require_epsilon(reg);
  const Vec3& beta = bra.beta.vector();
  const double dE = bra.energy - ket.energy;
  const Vec3 dV = bra.V.spatial() - ket.V.spatial();
  return unit_phase(-tau * (dE + dot(beta, dV))) * (nascent_delta3(dV + dE * beta, reg.epsilon) / kTwoPi);
}

std::string kernel_csv_header() { return "m,dtau,dxi1,dxi2,dxi3,regime,proper_time,re,im"; }

std::string kernel_csv_row(const KernelQuery& q, const KernelValue& v) {
  char buf[384];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g", q.m, q.dtau, q.dxi.x, q.dxi.y,
                q.dxi.z, std::string(to_string(v.regime)).c_str(), v.proper_time, v.amplitude.real(),
                v.amplitude.imag());
  return buf;
}

}  // namespace vecmass
