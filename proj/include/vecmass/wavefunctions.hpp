#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "vecmass/mass_states.hpp"

namespace vecmass {

using Complex = std::complex<double>;

/// 1/(2 pi)^2, shared by every eigenstate wavefunction including the negative-energy branch.
inline constexpr double kPlaneWaveNorm = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

/// Local time and position |tau, xi>.
struct SpacetimePoint {
  double tau = 0.0;
  Vec3 xi{};

  FourVector as_four_vector() const { return FourVector::from(tau, xi); }
  static SpacetimePoint from(const FourVector& v) { return {v.t, v.spatial()}; }
};

enum class EnergySign { positive = 1, negative = -1 };

struct PlaneWaveState {
  BoostedMassState state;
  EnergySign sign = EnergySign::positive;

  /// K = P + V, or Kbar = -P + V for the negative-energy branch.
  FourVector four_mass() const;
};

class SuperpositionState {
 public:
  /// Throws invalid_argument when both coefficients vanish.
  SuperpositionState(Complex a, Complex b, const BoostedMassState& state);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  const BoostedMassState& state() const { return state_; }

 private:
  Complex a_;
  Complex b_;
  BoostedMassState state_;
};

/// exp(-i (m tau - k.xi)) / (2 pi)^2
Complex evaluate_rest_wave(double m, const Vec3& k, const SpacetimePoint& p);

/// exp(-i K_a xi^a) / (2 pi)^2 with K chosen by the energy sign.
Complex evaluate_plane_wave(const PlaneWaveState& w, const SpacetimePoint& p);

/// A exp(-i K_a xi^a) + B exp(-i Kbar_a xi^a), both terms carrying 1/(2 pi)^2.
Complex evaluate_general_solution(const SuperpositionState& s, const SpacetimePoint& p);

/// (K_a K^a phi - M^2 phi)(p) with K_a = i d_a discretized by 3-point central
/// differences of step h in all four coordinates. Vanishes as O(h^2).
Complex kg_residual(const SuperpositionState& s, const SpacetimePoint& p, double h);

/// Central-difference estimate of i d_a phi / phi, which recovers the covariant
/// components K_a = (K^0, -K^1, -K^2, -K^3) of a plane wave.
std::array<Complex, 4> covariant_eigenvalues(const PlaneWaveState& w, const SpacetimePoint& p, double h);

/// Midpoint-rule integral of conj(phi1) phi2 over [-L, L]^4. The integrand is a
/// product of one-dimensional phases, so the 4-D sum is evaluated as the product
/// of four 1-D midpoint sums. Throws resolution_error if the step under-resolves
/// either wave or their beat.
Complex box_overlap(const PlaneWaveState& w1, const PlaneWaveState& w2, double box_half_width, double quadrature_step);

/// Number of midpoint cells used by box_overlap along each axis.
int box_cells(double box_half_width, double quadrature_step);

/// Gaussian superpositions of rest waves: amplitude exp(-(k - k0)^2 / (4 sigma^2))
/// per axis, so |amplitude|^2 has standard deviation sigma.
struct WavepacketSpec {
  Vec3 center_k{};
  Vec3 sigma_k{1.0, 1.0, 1.0};
  double center_m = 5.0;
  double sigma_m = 0.5;
  /// Sampling box [-half_width, half_width] for each position axis and for tau.
  /// Zero selects 8 position-space standard deviations of the widest packet.
  double half_width = 0.0;
  /// Zero selects 1/(8 max sigma).
  double step = 0.0;
};

struct MomentReport {
  std::array<double, 3> delta_xi{};
  std::array<double, 3> delta_k{};
  double delta_tau = 0.0;
  double delta_m = 0.0;
  std::array<double, 3> product_xi_k{};
  double product_tau_m = 0.0;
  /// Largest fraction of |phi|^2 found outside the sampling box.
  double leakage = 0.0;
  double half_width = 0.0;
  double step = 0.0;
};

/// Validates the widths and grid, filling in automatic values.
WavepacketSpec resolve_grid(const WavepacketSpec& spec);

/// Standard deviations of |phi|^2 marginals for the position packet (tau = 0)
/// and for the tau packet at xi = 0, together with the spectral widths.
MomentReport wavepacket_moments(const WavepacketSpec& spec);

/// Reported product bound that is recorded alongside the measured products.
/// Gaussian packets sit at 1/2, so it is informational only.
inline constexpr double kReferenceUncertaintyBound = 1.0;

std::string moments_to_json(const MomentReport& report);

struct GridSample {
  SpacetimePoint point;
  Complex value;
};

/// Packet values along each coordinate axis through the origin.
std::vector<GridSample> packet_axis_samples(const WavepacketSpec& spec);

/// CSV with header tau,xi1,xi2,xi3,re,im.
void write_grid_csv(std::ostream& out, std::span<const GridSample> samples);

}  // namespace vecmass
