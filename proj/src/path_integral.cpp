#include "vecmass/path_integral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <thread>

namespace vecmass {

namespace {

constexpr const char* kModule = "path_integral";
constexpr double kPi = std::numbers::pi;

std::string describe(const char* fmt, double a, double b) {
  char buf[200];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::invalid_argument, kModule, "spatial dimension must be 1, 2 or 3");
}

void require_embedded(const SpacetimePoint& p, int dim) {
  if (!std::isfinite(p.tau) || !is_finite(p.xi)) throw Error(ErrorKind::invalid_argument, kModule, "non-finite vertex");
  for (int i = dim; i < 3; ++i) {
    if (p.xi[i] != 0.0) {
      throw Error(ErrorKind::invalid_argument, kModule, "vertex has a nonzero component beyond the spatial dimension");
    }
  }
}

bool timelike_pair(const SpacetimePoint& a, const SpacetimePoint& b) {
  const double dtau = b.tau - a.tau;
  return dtau > 0.0 && norm(b.xi - a.xi) < dtau;
}

void require_timelike_endpoints(const SpacetimePoint& a, const SpacetimePoint& b) {
  if (!timelike_pair(a, b)) {
    throw Error(ErrorKind::no_timelike_path, kModule, "endpoints are not future-timelike separated");
  }
}

// Interior times must lie strictly between the endpoints, strictly increasing.
void require_interior_times(const std::vector<double>& times, double t0, double t1) {
  double prev = t0;
  for (double t : times) {
    if (!(t > prev) || !(t < t1)) {
      throw Error(ErrorKind::invalid_argument, kModule, "interior slice times must increase strictly inside (t0, t1)");
    }
    prev = t;
  }
}

SpacetimePoint lerp(const SpacetimePoint& a, const SpacetimePoint& b, double tau) {
  const double s = (tau - a.tau) / (b.tau - a.tau);
  return {tau, a.xi + s * (b.xi - a.xi)};
}

double total_proper_time(const std::vector<SpacetimePoint>& v) {
  double total = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    const Vec3 d = v[j].xi - v[j - 1].xi;
    const double dtau = v[j].tau - v[j - 1].tau;
    const double r = norm(d);
    if (!(r < dtau)) return -1.0;
    total += std::sqrt((dtau - r) * (dtau + r));
  }
  return total;
}

// ---- kernel composition -------------------------------------------------

using CVec = std::array<Complex, 3>;

Complex damped_kernel(double m, double damping, double dtau, const CVec& dxi, int dim, ComposeMode mode) {
  Complex r2 = 0.0;
  for (int i = 0; i < dim; ++i) r2 += dxi[i] * dxi[i];
  const Complex s = dtau * dtau - r2;
  if (mode == ComposeMode::real_axis && !(s.real() > 0.0)) return 0.0;
  const Complex tau_bar = std::sqrt(s);
  return std::exp(Complex(0.0, -1.0) * Complex(m, -damping) * tau_bar) / (2.0 * kPi * tau_bar);
}

double taper_weight(double u, double half_width) {
  const double a = std::abs(u);
  const double inner = 0.8 * half_width;
  if (a <= inner) return 1.0;
  if (a >= half_width) return 0.0;
  const double s = (a - inner) / (half_width - inner);
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  return f(1.0 - s) / (f(1.0 - s) + f(s));
}

struct Lattice {
  int dim;
  int n;  // points per axis
  double half_width;
  double step;
  std::vector<std::array<double, 3>> offsets;
  std::vector<double> weights;  // real part of the per-point measure
  std::vector<char> on_edge;
};

Lattice make_lattice(int dim, int n, double half_width, double step, bool taper) {
  Lattice lat{dim, n, half_width, step, {}, {}, {}};
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= static_cast<std::size_t>(n);
  lat.offsets.resize(count);
  lat.weights.resize(count);
  lat.on_edge.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t rem = p;
    double w = 1.0;
    bool edge = false;
    std::array<double, 3> o{};
    for (int i = 0; i < dim; ++i) {
      const int idx = static_cast<int>(rem % n);
      rem /= n;
      o[i] = -half_width + (idx + 0.5) * step;
      if (taper) w *= taper_weight(o[i], half_width);
      edge = edge || idx == 0 || idx == n - 1;
    }
    lat.offsets[p] = o;
    lat.weights[p] = w;
    lat.on_edge[p] = edge;
  }
  return lat;
}

void check_edges(const std::vector<Complex>& v, const Lattice& lat, int stage) {
  double peak = 0.0, edge = 0.0;
  for (std::size_t p = 0; p < v.size(); ++p) {
    const double a = std::abs(v[p]);
    peak = std::max(peak, a);
    if (lat.on_edge[p]) edge = std::max(edge, a);
  }
  if (peak > 0.0 && edge > 1e-10 * peak) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "integrand at slice %d is not contained in the grid (edge/peak = %.3g > 1e-10)",
                  stage, edge / peak);
    throw Error(ErrorKind::resolution_error, kModule, buf);
  }
}

struct GridChoice {
  double half_width;
  double step;
};

// Curvature of the proper-time phase m dtau_bar in the displacement of one segment:
// m / dtau_bar transverse and m dtau^2 / dtau_bar^3 along the motion.
GridChoice choose_grid(double m, const std::vector<SpacetimePoint>& path, const SliceGrid& grid, ComposeMode mode) {
  std::vector<double> c_hi;
  for (std::size_t j = 1; j < path.size(); ++j) {
    const double dtau = path[j].tau - path[j - 1].tau;
    const double tb = interval_proper_time(dtau, path[j].xi - path[j - 1].xi);
    c_hi.push_back(m * dtau * dtau / (tb * tb * tb));
  }
  double c_max = 0.0;
  for (std::size_t j = 1; j < c_hi.size(); ++j) c_max = std::max(c_max, c_hi[j - 1] + c_hi[j]);

  GridChoice g{grid.half_width, grid.step};
  if (mode == ComposeMode::real_axis && (g.half_width <= 0.0 || g.step <= 0.0)) {
    throw Error(ErrorKind::invalid_argument, kModule, "real-axis composition needs an explicit half-width and step");
  }
  if (g.half_width <= 0.0) {
    // The partial products widen like the kernel over the whole span. On the
    // rotated contour |exp(-i m dtau_bar)| = exp(m Im dtau_bar); grow the box
    // until that falls below 1e-16.
    const double span = path.back().tau - path.front().tau;
    const Complex rot = std::polar(1.0, kPi / 4.0);
    auto decay = [&](double L) { return m * std::sqrt(Complex(span * span) - (rot * L) * (rot * L)).imag(); };
    g.half_width = 4.0 * std::sqrt(span / m);
    while (decay(g.half_width) > std::log(1e-16)) g.half_width *= 1.25;
  }
  if (g.step <= 0.0) g.step = 0.25 / std::sqrt(c_max);
  if (g.step * std::sqrt(c_max) > 0.5) {
    throw Error(ErrorKind::resolution_error, kModule,
                describe("step %.6g under-resolves the stationary region (step*sqrt(curvature) = %.3g > 0.5)", g.step,
                         g.step * std::sqrt(c_max)));
  }
  return g;
}

Complex compose_raw(double m, double damping, const std::vector<SpacetimePoint>& path, int dim,
                    const ComposeConfig& cfg, GridChoice* used) {
  const GridChoice g = choose_grid(m, path, cfg.grid, cfg.mode);
  const int n = std::max(1, static_cast<int>(std::lround(2.0 * g.half_width / g.step)));
  const double step = 2.0 * g.half_width / n;
  const bool sd = cfg.mode == ComposeMode::steepest_descent;
  const Lattice lat = make_lattice(dim, n, g.half_width, step, cfg.taper && !sd);
  const std::size_t P = lat.offsets.size();
  const std::size_t interior = path.size() - 2;
  const double cost = static_cast<double>(P) * static_cast<double>(P) * static_cast<double>(interior - 1) + 2.0 * P;
  if (cost > 2e9) {
    throw Error(ErrorKind::resolution_error, kModule,
                describe("grid of %.0f points per slice is too large (%.3g kernel evaluations)", double(P), cost));
  }
  if (used) *used = {g.half_width, step};

  const Complex rot = sd ? std::polar(1.0, kPi / 4.0) : Complex(1.0, 0.0);
  Complex measure = 1.0;
  for (int i = 0; i < dim; ++i) measure *= rot * step;

  auto vertex = [&](std::size_t slice, std::size_t p) {
    CVec z{};
    for (int i = 0; i < dim; ++i) z[i] = path[slice].xi[i] + rot * lat.offsets[p][i];
    return z;
  };
  auto fixed = [&](std::size_t slice) {
    CVec z{};
    for (int i = 0; i < dim; ++i) z[i] = path[slice].xi[i];
    return z;
  };
  auto diff = [&](const CVec& a, const CVec& b) {
    CVec d{};
    for (int i = 0; i < dim; ++i) d[i] = a[i] - b[i];
    return d;
  };

  std::vector<Complex> v(P);
  {
    const double dtau = path[1].tau - path[0].tau;
    const CVec z0 = fixed(0);
    for (std::size_t p = 0; p < P; ++p) {
      v[p] = damped_kernel(m, damping, dtau, diff(vertex(1, p), z0), dim, cfg.mode) * lat.weights[p] * measure;
    }
  }
  if (sd) check_edges(v, lat, 1);

  const int workers = std::max(1, cfg.workers);
  for (std::size_t k = 2; k <= interior; ++k) {
    const double dtau = path[k].tau - path[k - 1].tau;
    std::vector<Complex> next(P);
    auto sweep = [&](int w) {
      const std::size_t lo = P * w / workers, hi = P * (w + 1) / workers;
      for (std::size_t q = lo; q < hi; ++q) {
        const CVec zq = vertex(k, q);
        Complex sum = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
          sum += v[p] * damped_kernel(m, damping, dtau, diff(zq, vertex(k - 1, p)), dim, cfg.mode);
        }
        next[q] = sum * lat.weights[q] * measure;
      }
    };
    if (workers == 1) {
      sweep(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(sweep, w);
      for (auto& t : pool) t.join();
    }
    v.swap(next);
    if (sd) check_edges(v, lat, static_cast<int>(k));
  }

  const double dtau = path.back().tau - path[interior].tau;
  const CVec zN = fixed(path.size() - 1);
  std::vector<Complex> last(P);
  for (std::size_t p = 0; p < P; ++p) {
    last[p] = v[p] * damped_kernel(m, damping, dtau, diff(zN, vertex(interior, p)), dim, cfg.mode);
  }
  if (sd) check_edges(last, lat, static_cast<int>(interior));
  Complex total = 0.0;
  for (const Complex& c : last) total += c;
  return total;
}

std::vector<SpacetimePoint> stationary_path(const SpacetimePoint& a, const SpacetimePoint& b,
                                            const std::vector<double>& interior, int dim) {
  const StationaryResult s = stationary_intermediate(a, b, interior, dim);
  std::vector<SpacetimePoint> path;
  path.push_back(a);
  path.insert(path.end(), s.interior.begin(), s.interior.end());
  path.push_back(b);
  return path;
}

}  // namespace

// ---- grids and paths ----------------------------------------------------

SliceGrid SliceGrid::uniform(double t0, double t1, int slices, int dim) {
  if (slices < 1) throw Error(ErrorKind::invalid_argument, kModule, "need at least one slice");
  SliceGrid g;
  g.dim = dim;
  for (int i = 0; i <= slices; ++i) g.times.push_back(i == slices ? t1 : t0 + (t1 - t0) * i / slices);
  validate_grid(g);
  return g;
}

bool SliceGrid::is_uniform(double rel_tol) const {
  if (times.size() < 3) return true;
  const double ref = times[1] - times[0];
  for (std::size_t i = 2; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - ref) > rel_tol * std::abs(ref)) return false;
  }
  return true;
}

void validate_grid(const SliceGrid& grid) {
  require_dim(grid.dim);
  if (grid.times.size() < 2) throw Error(ErrorKind::invalid_argument, kModule, "slice grid needs at least two times");
  for (std::size_t i = 1; i < grid.times.size(); ++i) {
    if (!(grid.times[i] > grid.times[i - 1])) {
      throw Error(ErrorKind::invalid_argument, kModule, "slice times must increase strictly");
    }
  }
  if (!(grid.step >= 0.0) || !(grid.half_width >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, kModule, "grid step and half-width must be non-negative");
  }
}

SegmentError::SegmentError(ErrorKind kind, std::size_t segment, const std::string& what)
    : Error(kind, kModule, "segment " + std::to_string(segment) + ": " + what), segment_(segment) {}

double proper_time_segment(double dtau, const Vec3& dxi) {
  if (!std::isfinite(dtau) || !is_finite(dxi)) throw Error(ErrorKind::invalid_argument, kModule, "non-finite segment");
  if (!(dtau > 0.0)) throw Error(ErrorKind::time_ordering, kModule, "segment dtau must be positive");
  const double r = norm(dxi);
  if (!(r < dtau)) {
    throw Error(ErrorKind::spacelike_segment, kModule, describe("|dxi| = %.17g >= dtau = %.17g", r, dtau));
  }
  return std::sqrt((dtau - r) * (dtau + r));
}

ActionReport path_action(const PiecewisePath& path, double m) {
  require_dim(path.dim);
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::invalid_argument, kModule, "m must be positive");
  if (path.vertices.size() < 2) throw Error(ErrorKind::invalid_argument, kModule, "a path needs two vertices");
  for (const auto& v : path.vertices) require_embedded(v, path.dim);
  ActionReport r;
  for (std::size_t j = 1; j < path.vertices.size(); ++j) {
    const double dtau = path.vertices[j].tau - path.vertices[j - 1].tau;
    try {
      r.segment_proper_times.push_back(proper_time_segment(dtau, path.vertices[j].xi - path.vertices[j - 1].xi));
    } catch (const Error& e) {
      throw SegmentError(e.kind(), j - 1, e.what());
    }
    r.total_proper_time += r.segment_proper_times.back();
  }
  r.action = -m * r.total_proper_time;
  r.phase = unit_phase(r.action);
  return r;
}

StationaryResult stationary_intermediate(const SpacetimePoint& start, const SpacetimePoint& end,
                                         const std::vector<double>& interior_times, int dim) {
  require_dim(dim);
  require_embedded(start, dim);
  require_embedded(end, dim);
  require_timelike_endpoints(start, end);
  require_interior_times(interior_times, start.tau, end.tau);

  const int n = static_cast<int>(interior_times.size());
  std::vector<SpacetimePoint> path{start};
  for (double t : interior_times) path.push_back(lerp(start, end, t));
  path.push_back(end);
  StationaryResult result;
  if (n == 0) {
    result.total_proper_time = total_proper_time(path);
    return result;
  }

  // Bend the initial path so the ascent has work to do.
  double gap = end.tau - start.tau;
  for (std::size_t j = 1; j < path.size(); ++j) gap = std::min(gap, path[j].tau - path[j - 1].tau);
  for (double amp = 0.25 * gap;; amp *= 0.5) {
    std::vector<SpacetimePoint> trial = path;
    for (int i = 0; i < n; ++i) trial[i + 1].xi[0] += (i % 2 == 0 ? amp : -amp);
    if (total_proper_time(trial) > 0.0) {
      path = trial;
      break;
    }
    if (amp < 1e-12 * gap) break;
  }

  const int size = n * dim;
  double f = total_proper_time(path);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(size);
    Eigen::MatrixXd negH = Eigen::MatrixXd::Zero(size, size);
    for (int j = 1; j <= n + 1; ++j) {
      const Vec3 d = path[j].xi - path[j - 1].xi;
      const double tb = interval_proper_time(path[j].tau - path[j - 1].tau, d);
      // d tau_bar / d(dxi) = -dxi / tau_bar; minus its Hessian is (I + d d^T / tau_bar^2) / tau_bar.
      Eigen::MatrixXd block(dim, dim);
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) block(a, b) = ((a == b ? 1.0 : 0.0) + d[a] * d[b] / (tb * tb)) / tb;
      }
      const int hi = j - 1, lo = j - 2;  // interior indices of the segment's end and start
      for (int a = 0; a < dim; ++a) {
        if (hi < n) g(hi * dim + a) -= d[a] / tb;
        if (lo >= 0) g(lo * dim + a) += d[a] / tb;
      }
      if (hi < n) negH.block(hi * dim, hi * dim, dim, dim) += block;
      if (lo >= 0) negH.block(lo * dim, lo * dim, dim, dim) += block;
      if (hi < n && lo >= 0) {
        negH.block(hi * dim, lo * dim, dim, dim) -= block;
        negH.block(lo * dim, hi * dim, dim, dim) -= block;
      }
    }
    result.iterations = iter + 1;
    if (g.lpNorm<Eigen::Infinity>() < 1e-15) break;
    const Eigen::VectorXd delta = negH.ldlt().solve(g);
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-12) {
      std::vector<SpacetimePoint> trial = path;
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < dim; ++a) trial[i + 1].xi[a] += alpha * delta(i * dim + a);
      }
      const double ft = total_proper_time(trial);
      if (ft >= f) {
        path = trial;
        f = ft;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved || delta.lpNorm<Eigen::Infinity>() * alpha < 1e-16) break;
  }

  result.interior.assign(path.begin() + 1, path.end() - 1);
  result.total_proper_time = f;
  return result;
}

ComposeResult compose_kernels(double m, const SpacetimePoint& start, const SpacetimePoint& end,
                              const ComposeConfig& config) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::invalid_argument, kModule, "m must be positive");
  if (!(config.damping > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "damping must be positive");
  const SliceGrid& grid = config.grid;
  validate_grid(grid);
  const int dim = grid.dim;
  require_embedded(start, dim);
  require_embedded(end, dim);
  require_timelike_endpoints(start, end);
  const int N = grid.slices();
  if (N < 2) throw Error(ErrorKind::invalid_argument, kModule, "composition needs at least two slices");
  const double tol = 1e-12 * std::max(1.0, std::abs(end.tau - start.tau));
  if (std::abs(grid.times.front() - start.tau) > tol || std::abs(grid.times.back() - end.tau) > tol) {
    throw Error(ErrorKind::invalid_argument, kModule, "grid times must begin and end at the endpoint times");
  }

  const std::vector<double> interior(grid.times.begin() + 1, grid.times.end() - 1);
  const std::vector<SpacetimePoint> path = stationary_path(start, end, interior, dim);

  ComposeResult out;
  GridChoice used{};
  const Complex raw = compose_raw(m, config.damping, path, dim, config, &used);

  Complex norm = 1.0;
  if (config.normalization == NormalizationRule::calibrated) {
    if (!grid.is_uniform()) {
      throw Error(ErrorKind::invalid_argument, kModule,
                  "calibrated normalization needs uniform slices; pass explicit constants otherwise");
    }
    if (!(config.calibration_damping > 0.0)) {
      throw Error(ErrorKind::invalid_argument, kModule, "calibration damping must be positive");
    }
    const double ds = grid.times[1] - grid.times[0];
    const std::vector<SpacetimePoint> rest{{0.0, {}}, {ds, {}}, {2.0 * ds, {}}};
    ComposeConfig cal = config;
    cal.grid.times = {0.0, ds, 2.0 * ds};
    const Complex two = compose_raw(m, config.calibration_damping, rest, dim, cal, nullptr);
    const Complex target = transition_kernel({m, 2.0 * ds, {}}).amplitude;
    out.calibration = target / two;
    norm = std::pow(out.calibration, N - 1);
  } else {
    if (static_cast<int>(config.constants.size()) != N - 1) {
      throw Error(ErrorKind::invalid_argument, kModule, "explicit normalization needs one constant per interior slice");
    }
    for (const Complex& c : config.constants) norm *= c;
  }

  out.amplitude = norm * raw;
  out.direct = transition_kernel({m, end.tau - start.tau, end.xi - start.xi}).amplitude;
  const Complex ratio = out.amplitude / out.direct;
  out.phase_error = std::arg(ratio);
  out.modulus_ratio = std::abs(ratio);
  out.half_width = used.half_width;
  out.step = used.step;
  out.points_per_axis = static_cast<int>(std::lround(2.0 * used.half_width / used.step));
  return out;
}

double compose_phase_extrapolated(double m, const SpacetimePoint& start, const SpacetimePoint& end,
                                  const ComposeConfig& config) {
  ComposeConfig doubled = config;
  doubled.damping = 2.0 * config.damping;
  const double p1 = compose_kernels(m, start, end, config).phase_error;
  const double p2 = compose_kernels(m, start, end, doubled).phase_error;
  return 2.0 * p1 - p2;
}

Complex stationary_phase_constant(double m, double slice_dtau, int dim) {
  require_dim(dim);
  const double modulus = kPi * slice_dtau * std::pow(m / (kPi * slice_dtau), 0.5 * dim);
  return std::polar(modulus, -kPi * dim / 4.0);
}

// ---- Monte Carlo --------------------------------------------------------

McStatistics sample_paths_mc(const SpacetimePoint& start, const SpacetimePoint& end, const SliceGrid& grid, double m,
                             std::uint64_t seed, std::uint64_t n_samples, int workers, int bins) {
  validate_grid(grid);
  const int dim = grid.dim;
  require_embedded(start, dim);
  require_embedded(end, dim);
  require_timelike_endpoints(start, end);
  if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "m must be positive");
  if (bins < 1) throw Error(ErrorKind::invalid_argument, kModule, "histogram needs at least one bin");
  const std::vector<double> interior(grid.times.begin() + 1, grid.times.end() - 1);
  require_interior_times(interior, start.tau, end.tau);

  // Bounding box of the causal diamond at each interior time.
  struct Box {
    std::array<double, 3> lo{}, hi{};
  };
  std::vector<Box> boxes;
  for (double t : interior) {
    Box b;
    const double r0 = t - start.tau, r1 = end.tau - t;
    for (int a = 0; a < dim; ++a) {
      b.lo[a] = std::max(start.xi[a] - r0, end.xi[a] - r1);
      b.hi[a] = std::min(start.xi[a] + r0, end.xi[a] + r1);
    }
    boxes.push_back(b);
  }

  const int nworkers = std::max(1, workers);
  std::vector<std::vector<double>> accepted(nworkers);
  auto run = [&](int w) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(w)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t lo = n_samples * w / nworkers, hi = n_samples * (w + 1) / nworkers;
    std::vector<SpacetimePoint> path(interior.size() + 2);
    path.front() = start;
    path.back() = end;
    for (std::uint64_t s = lo; s < hi; ++s) {
      for (std::size_t i = 0; i < interior.size(); ++i) {
        path[i + 1].tau = interior[i];
        for (int a = 0; a < dim; ++a) {
          path[i + 1].xi[a] = boxes[i].lo[a] + (boxes[i].hi[a] - boxes[i].lo[a]) * unit(rng);
        }
      }
      const double total = total_proper_time(path);
      if (total > 0.0) accepted[w].push_back(total);
    }
  };
  if (nworkers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  McStatistics st;
  st.proposals = n_samples;
  st.direct_proper_time = proper_time_segment(end.tau - start.tau, end.xi - start.xi);
  st.histogram.assign(bins, 0);
  for (const auto& chunk : accepted) st.totals.insert(st.totals.end(), chunk.begin(), chunk.end());
  st.accepted = st.totals.size();
  st.rejected_fraction = n_samples ? 1.0 - static_cast<double>(st.accepted) / static_cast<double>(n_samples) : 0.0;
  double sum = 0.0;
  for (double t : st.totals) {
    st.max_proper_time = std::max(st.max_proper_time, t);
    sum += t;
    const int bin = std::min(bins - 1, static_cast<int>(t / st.direct_proper_time * bins));
    ++st.histogram[std::max(0, bin)];
  }
  st.mean_proper_time = st.accepted ? sum / static_cast<double>(st.accepted) : 0.0;
  st.max_action = -m * st.max_proper_time;
  return st;
}

}  // namespace vecmass
