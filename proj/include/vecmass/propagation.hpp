#pragma once

#include <string>

#include "vecmass/mass_states.hpp"
#include "vecmass/wavefunctions.hpp"

namespace vecmass {

/// Gaussian nascent delta of width epsilon. `beta_step` is the Cartesian cell
/// size of the velocity-ball quadrature; zero selects epsilon / (5 dtau) per query.
struct RegularizationParams {
  double epsilon = 0.02;
  double beta_step = 0.0;
};

/// Product of three Gaussians exp(-x^2 / 2 eps^2) / (sqrt(2 pi) eps).
double nascent_delta3(const Vec3& x, double epsilon);

/// cos|theta| + i sign(theta) sin|theta|, so unit_phase(-t) == conj(unit_phase(t)) bitwise.
Complex unit_phase(double theta);

/// exp(-i E (dtau - beta.dxi)) / (2 pi gamma) * delta_eps^3(dxi - beta dtau), E = gamma m.
/// Negative m selects the mass-conjugated branch.
Complex t_beta_element(double m, const ThreeVelocity& beta, double dtau, const Vec3& dxi,
                       const RegularizationParams& reg);

enum class Regime { timelike, lightlike, spacelike };

std::string_view to_string(Regime regime);

struct KernelQuery {
  double m = 1.0;  // signed
  double dtau = 1.0;
  Vec3 dxi{};
};

struct KernelValue {
  Complex amplitude;
  Regime regime;
  /// Proper time of the displacement; zero outside the light cone.
  double proper_time;
};

/// Throws time_ordering unless dtau > 0 and the query is finite.
void validate_query(const KernelQuery& q);

Regime classify(double dtau, const Vec3& dxi);

/// dtau sqrt(1 - |dxi/dtau|^2), evaluated as sqrt((dtau - r)(dtau + r)).
double interval_proper_time(double dtau, const Vec3& dxi);

/// Closed-form causal kernel exp(-i m dtau_bar) / (2 pi dtau_bar) inside the
/// light cone and exactly zero outside. The light cone itself throws
/// lightlike_singularity since 1/dtau_bar diverges there.
KernelValue transition_kernel(const KernelQuery& q);

/// transition_kernel with m -> -m.
KernelValue mass_conjugate_kernel(const KernelQuery& q);

/// Velocity-ball integral of gamma^2 t_beta_element over |beta| < 1 on a uniform
/// Cartesian lattice. Only cells within 10 delta widths of the causal velocity
/// dxi/dtau are visited; the Gaussian is below exp(-50) outside that window.
/// Requires |dxi|/dtau <= 0.9. Throws resolution_error if beta_step * dtau >= eps/4.
/// Partial sums are reduced in a fixed order, so the result depends only on
/// `workers`, never on thread timing.
Complex transition_kernel_numeric(const KernelQuery& q, const RegularizationParams& reg, int workers = 1);

/// Two-level occupancy label: 0 is the vacuum, 1 a single particle.
class OccupancyLabel {
 public:
  explicit OccupancyLabel(int n = 0);
  int n() const { return n_; }

 private:
  int n_;
};

struct ParticleCoefficients {
  Complex a_plus{1.0, 0.0};
  Complex b_minus{0.0, 0.0};

  Complex a_minus() const { return std::conj(a_plus); }
  Complex b_plus() const { return std::conj(b_minus); }
};

/// a+ t(m) + b- t(-m). Creation (a+ != 0) on an occupied label throws occupancy_overflow.
Complex particle_element(const ParticleCoefficients& c, double m, const ThreeVelocity& beta, double dtau,
                         const Vec3& dxi, const RegularizationParams& reg, OccupancyLabel input = OccupancyLabel(0));

/// Mass-conjugated operator a- t(-m) + b+ t(m).
Complex antiparticle_element(const ParticleCoefficients& c, double m, const ThreeVelocity& beta, double dtau,
                             const Vec3& dxi, const RegularizationParams& reg,
                             OccupancyLabel input = OccupancyLabel(0));

/// Spatial inner product of two inertial states sharing a velocity, at time tau:
/// exp(-i tau (dE + beta.dV)) / (2 pi) * delta_eps^3(dV + beta dE), differences bra - ket.
Complex s_element(double tau, const BoostedMassState& bra, const BoostedMassState& ket,
                  const RegularizationParams& reg);

/// "m,dtau,dxi1,dxi2,dxi3,regime,proper_time,re,im"
std::string kernel_csv_header();
std::string kernel_csv_row(const KernelQuery& q, const KernelValue& v);

}  // namespace vecmass
