#pragma once

#include <cstdint>
#include <vector>

#include "vecmass/error.hpp"
#include "vecmass/propagation.hpp"
#include "vecmass/wavefunctions.hpp"

namespace vecmass {

/// Slice times tau_0 < ... < tau_N in D spatial dimensions. `half_width` and
/// `step` describe the per-vertex quadrature grid; zero selects automatic values.
struct SliceGrid {
  std::vector<double> times;
  int dim = 1;
  double half_width = 0.0;
  double step = 0.0;

  static SliceGrid uniform(double t0, double t1, int slices, int dim = 1);
  int slices() const { return static_cast<int>(times.size()) - 1; }
  bool is_uniform(double rel_tol = 1e-12) const;
};

/// Throws invalid_argument unless times increase strictly, dim is 1..3 and step >= 0.
void validate_grid(const SliceGrid& grid);

/// Vertices of a polygonal worldline. Spatial components at index >= dim must be zero.
struct PiecewisePath {
  int dim = 1;
  std::vector<SpacetimePoint> vertices;
};

/// Domain error pinned to one segment of a path.
class SegmentError : public Error {
 public:
  SegmentError(ErrorKind kind, std::size_t segment, const std::string& what);
  std::size_t segment() const noexcept { return segment_; }

 private:
  std::size_t segment_;
};

/// dtau sqrt(1 - |dxi/dtau|^2). Throws time_ordering for dtau <= 0 and
/// spacelike_segment for |dxi| >= dtau.
double proper_time_segment(double dtau, const Vec3& dxi);

struct ActionReport {
  std::vector<double> segment_proper_times;
  double total_proper_time = 0.0;
  double action = 0.0;  // -m * total
  Complex phase;        // exp(i action)
};

ActionReport path_action(const PiecewisePath& path, double m);

struct StationaryResult {
  std::vector<SpacetimePoint> interior;
  double total_proper_time = 0.0;
  int iterations = 0;
};

/// Interior vertices maximizing total proper time, found by Newton ascent
/// from a deliberately bent starting path. Throws no_timelike_path when the
/// endpoints are not timelike separated.
StationaryResult stationary_intermediate(const SpacetimePoint& start, const SpacetimePoint& end,
                                         const std::vector<double>& interior_times, int dim = 1);

enum class ComposeMode {
  /// Each vertex is integrated along xi* + exp(i pi/4) t, t real, around the
  /// stationary path. The damped kernel is continued analytically.
  steepest_descent,
  /// Each vertex is integrated over a real box around the stationary path with
  /// the causal (Heaviside) kernel.
  real_axis,
};

enum class NormalizationRule { calibrated, explicit_constants };

struct ComposeConfig {
  NormalizationRule normalization = NormalizationRule::calibrated;
  /// One constant per interior slice when normalization is explicit_constants.
  std::vector<Complex> constants;
  double damping = 1e-3;
  double calibration_damping = 1e-3;
  ComposeMode mode = ComposeMode::steepest_descent;
  /// Smooth window on the outer fifth of a real-axis box.
  bool taper = false;
  SliceGrid grid;
  int workers = 1;
};

struct ComposeResult {
  Complex amplitude;
  Complex direct;  // closed-form kernel between the endpoints
  /// arg(amplitude / direct) and |amplitude / direct|.
  double phase_error = 0.0;
  double modulus_ratio = 0.0;
  Complex calibration{1.0, 0.0};
  double half_width = 0.0;
  double step = 0.0;
  int points_per_axis = 0;
};

/// Time-ordered product of damped kernels exp(-i (m - i damping) dtau_bar) / (2 pi dtau_bar)
/// integrated over every interior slice.
ComposeResult compose_kernels(double m, const SpacetimePoint& start, const SpacetimePoint& end,
                              const ComposeConfig& config);

/// Phase of compose at damping d and 2d, extrapolated linearly to zero damping.
double compose_phase_extrapolated(double m, const SpacetimePoint& start, const SpacetimePoint& end,
                                  const ComposeConfig& config);

/// Leading-order Gaussian value of the calibrated per-slice constant for
/// uniform slices of width dtau_s: pi dtau_s (m / (pi dtau_s))^(D/2) exp(-i pi D / 4).
Complex stationary_phase_constant(double m, double slice_dtau, int dim);

struct McStatistics {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double rejected_fraction = 0.0;
  double direct_proper_time = 0.0;
  double max_proper_time = 0.0;
  double mean_proper_time = 0.0;
  double max_action = 0.0;  // -m * max
  /// Counts over [0, direct] in equal bins; the last bin is closed.
  std::vector<std::uint64_t> histogram;
  std::vector<double> totals;  // accepted samples, worker order
};

/// Uniform proposals for the interior vertices in the bounding box of the
/// causal diamond of each slice, rejected unless every segment is timelike.
/// Worker w draws from mt19937_64 seeded with (seed, w) over a fixed share of
/// the proposals, and results are merged in worker order.
McStatistics sample_paths_mc(const SpacetimePoint& start, const SpacetimePoint& end, const SliceGrid& grid, double m,
                             std::uint64_t seed, std::uint64_t n_samples, int workers = 1, int bins = 50);

}  // namespace vecmass
