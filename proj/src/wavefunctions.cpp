#include "vecmass/wavefunctions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "vecmass/error.hpp"

namespace vecmass {

namespace {

constexpr const char* kModule = "wavefunctions";

/// exp(-i K_a xi^a) / (2 pi)^2 for a contravariant K.
Complex plane_wave_phase(const FourVector& K, const SpacetimePoint& p) {
  const double phase = -(K.t * p.tau - dot(K.spatial(), p.xi));
  return std::polar(kPlaneWaveNorm, phase);
}

SpacetimePoint shifted(const SpacetimePoint& p, int axis, double delta) {
  SpacetimePoint q = p;
  if (axis == 0) {
    q.tau += delta;
  } else {
    q.xi[axis - 1] += delta;
  }
  return q;
}

/// h * sum_j exp(i omega x_j) over the midpoint grid of [-L, L] with n cells.
Complex midpoint_phase_sum(double omega, double half_width, int cells) {
  const double h = 2.0 * half_width / cells;
  Complex sum = 0.0;
  for (int j = 0; j < cells; ++j) {
    const double x = -half_width + (j + 0.5) * h;
    sum += std::polar(1.0, omega * x);
  }
  return sum * h;
}

struct Marginal {
  double mean = 0.0;
  double stddev = 0.0;
};

Marginal moments_of(std::span<const double> x, std::span<const double> weight) {
  double w = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w += weight[i];
    m1 += weight[i] * x[i];
  }
  const double mean = m1 / w;
  double m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m2 += weight[i] * (x[i] - mean) * (x[i] - mean);
  return {mean, std::sqrt(m2 / w)};
}

struct PacketAxis {
  double spectral_width = 0.0;
  double position_width = 0.0;
  double leakage = 0.0;
};

/// One conjugate pair. `wave(c, x)` is the rest wave at spectral value c and
/// sampling coordinate x; the packet is sum_c a(c) wave(c, x) dc.
template <class Wave>
PacketAxis measure_axis(double center, double sigma, double half_width, double step, Wave wave) {
  // Spectral grid: center +- 8 sigma, fine enough that periodic images of the
  // packet fall far outside the extended sampling box.
  const double spectral_half = 8.0 * sigma;
  const double dk = std::min(sigma / 8.0, std::numbers::pi / (4.0 * half_width));
  const int nk = static_cast<int>(std::ceil(2.0 * spectral_half / dk));
  const double hk = 2.0 * spectral_half / nk;
  std::vector<double> ks(nk), amp(nk), power(nk);
  for (int j = 0; j < nk; ++j) {
    ks[j] = center - spectral_half + (j + 0.5) * hk;
    const double u = ks[j] - center;
    amp[j] = std::exp(-u * u / (4.0 * sigma * sigma));
    power[j] = amp[j] * amp[j];
  }

  // Position grid over the doubled box; the outer half measures leakage.
  const double outer = 2.0 * half_width;
  const int nx = static_cast<int>(std::lround(2.0 * outer / step));
  const double hx = 2.0 * outer / nx;
  std::vector<double> xs_in, rho_in;
  double total = 0.0;
  double inside = 0.0;
  for (int l = 0; l < nx; ++l) {
    const double x = -outer + (l + 0.5) * hx;
    Complex phi = 0.0;
    for (int j = 0; j < nk; ++j) phi += amp[j] * wave(ks[j], x);
    phi *= hk;
    const double rho = std::norm(phi);
    total += rho;
    if (std::abs(x) <= half_width) {
      inside += rho;
      xs_in.push_back(x);
      rho_in.push_back(rho);
    }
  }

  PacketAxis out;
  out.leakage = (total - inside) / total;
  out.spectral_width = moments_of(ks, power).stddev;
  out.position_width = moments_of(xs_in, rho_in).stddev;
  return out;
}

}  // namespace

FourVector PlaneWaveState::four_mass() const {
  return sign == EnergySign::positive ? state.P + state.V : state.V - state.P;
}

SuperpositionState::SuperpositionState(Complex a, Complex b, const BoostedMassState& state)
    : a_(a), b_(b), state_(state) {
  if (a == Complex(0.0) && b == Complex(0.0)) {
    throw Error(ErrorKind::invalid_argument, kModule, "at least one of A, B must be nonzero");
  }
}

Complex evaluate_rest_wave(double m, const Vec3& k, const SpacetimePoint& p) {
  return plane_wave_phase(FourVector::from(m, k), p);
}

Complex evaluate_plane_wave(const PlaneWaveState& w, const SpacetimePoint& p) {
  return plane_wave_phase(w.four_mass(), p);
}

Complex evaluate_general_solution(const SuperpositionState& s, const SpacetimePoint& p) {
  Complex value = 0.0;
  if (s.a() != Complex(0.0)) value += s.a() * evaluate_plane_wave({s.state(), EnergySign::positive}, p);
  if (s.b() != Complex(0.0)) value += s.b() * evaluate_plane_wave({s.state(), EnergySign::negative}, p);
  return value;
}

Complex kg_residual(const SuperpositionState& s, const SpacetimePoint& p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "finite-difference step must be positive");
  const Complex center = evaluate_general_solution(s, p);
  const double inv_h2 = 1.0 / (h * h);
  // K_a K^a = -(d_tau^2 - laplacian)
  Complex operator_value = 0.0;
  for (int axis = 0; axis < 4; ++axis) {
    const Complex second = (evaluate_general_solution(s, shifted(p, axis, h)) - 2.0 * center +
                            evaluate_general_solution(s, shifted(p, axis, -h))) *
                           inv_h2;
    operator_value += axis == 0 ? -second : second;
  }
  const MassShellReport shell = mass_shell(s.state());
  return operator_value - shell.M2 * center;
}

std::array<Complex, 4> covariant_eigenvalues(const PlaneWaveState& w, const SpacetimePoint& p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "finite-difference step must be positive");
  const Complex center = evaluate_plane_wave(w, p);
  std::array<Complex, 4> out{};
  for (int axis = 0; axis < 4; ++axis) {
    const Complex derivative =
        (evaluate_plane_wave(w, shifted(p, axis, h)) - evaluate_plane_wave(w, shifted(p, axis, -h))) / (2.0 * h);
    out[axis] = Complex(0.0, 1.0) * derivative / center;
  }
  return out;
}

int box_cells(double box_half_width, double quadrature_step) {
  return std::max(1, static_cast<int>(std::lround(2.0 * box_half_width / quadrature_step)));
}

Complex box_overlap(const PlaneWaveState& w1, const PlaneWaveState& w2, double box_half_width, double quadrature_step) {
  if (!(box_half_width > 0.0) || !(quadrature_step > 0.0) || !std::isfinite(box_half_width)) {
    throw Error(ErrorKind::invalid_argument, kModule, "box half-width and quadrature step must be positive");
  }
  const FourVector k1 = w1.four_mass();
  const FourVector k2 = w2.four_mass();
  const FourVector beat = k1 - k2;
  const int cells = box_cells(box_half_width, quadrature_step);
  const double h = 2.0 * box_half_width / cells;

  double fastest = 0.0;
  for (int a = 0; a < 4; ++a) fastest = std::max({fastest, std::abs(k1[a]), std::abs(k2[a]), std::abs(beat[a])});
  if (fastest * h > std::numbers::pi / 2.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "step %.6g under-resolves frequency %.6g (need step*omega <= pi/2)", h, fastest);
    throw Error(ErrorKind::resolution_error, kModule, buf);
  }

  // conj(phi1) phi2 = exp(i (K1 - K2)_a xi^a) / (2 pi)^4
  Complex product = midpoint_phase_sum(beat.t, box_half_width, cells);
  for (int a = 1; a < 4; ++a) product *= midpoint_phase_sum(-beat[a], box_half_width, cells);
  return product * (kPlaneWaveNorm * kPlaneWaveNorm);
}

WavepacketSpec resolve_grid(const WavepacketSpec& spec) {
  double widest = spec.sigma_m;
  double narrowest = spec.sigma_m;
  const bool ok_m = std::isfinite(spec.sigma_m) && spec.sigma_m > 0.0;
  bool ok_k = true;
  for (int i = 0; i < 3; ++i) {
    ok_k = ok_k && std::isfinite(spec.sigma_k[i]) && spec.sigma_k[i] > 0.0;
    widest = std::max(widest, spec.sigma_k[i]);
    narrowest = std::min(narrowest, spec.sigma_k[i]);
  }
  if (!ok_m || !ok_k) throw Error(ErrorKind::invalid_argument, kModule, "packet widths must be strictly positive");
  if (!std::isfinite(spec.center_m) || spec.center_m - 8.0 * spec.sigma_m <= 0.0) {
    throw Error(ErrorKind::invalid_argument, kModule,
                "scalar-mass packet must stay positive: need center_m > 8 sigma_m");
  }
  if (!is_finite(spec.center_k)) throw Error(ErrorKind::invalid_argument, kModule, "center_k must be finite");

  WavepacketSpec out = spec;
  if (out.half_width <= 0.0) out.half_width = 8.0 / (2.0 * narrowest);
  if (out.step <= 0.0) out.step = 1.0 / (8.0 * widest);
  if (!(out.step < 1.0 / (4.0 * widest))) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "grid step %.6g must be below 1/(4 max sigma) = %.6g", out.step, 1.0 / (4.0 * widest));
    throw Error(ErrorKind::resolution_error, kModule, buf);
  }
  return out;
}

MomentReport wavepacket_moments(const WavepacketSpec& input) {
  const WavepacketSpec spec = resolve_grid(input);
  MomentReport report;
  report.half_width = spec.half_width;
  report.step = spec.step;

  for (int i = 0; i < 3; ++i) {
    const PacketAxis axis =
        measure_axis(spec.center_k[i], spec.sigma_k[i], spec.half_width, spec.step, [&](double k, double x) {
          Vec3 kv{};
          kv[i] = k;
          SpacetimePoint p;
          p.xi[i] = x;
          return evaluate_rest_wave(spec.center_m, kv, p);
        });
    report.delta_k[i] = axis.spectral_width;
    report.delta_xi[i] = axis.position_width;
    report.product_xi_k[i] = axis.spectral_width * axis.position_width;
    report.leakage = std::max(report.leakage, axis.leakage);
  }

  const PacketAxis tau_axis = measure_axis(spec.center_m, spec.sigma_m, spec.half_width, spec.step,
                                           [&](double m, double tau) {
                                             return evaluate_rest_wave(m, spec.center_k, SpacetimePoint{tau, {}});
                                           });
  report.delta_m = tau_axis.spectral_width;
  report.delta_tau = tau_axis.position_width;
  report.product_tau_m = report.delta_m * report.delta_tau;
  report.leakage = std::max(report.leakage, tau_axis.leakage);

  if (report.leakage > 1e-6) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "packet leaks %.3g of its norm outside the sampling box (limit 1e-6)",
                  report.leakage);
    throw Error(ErrorKind::resolution_error, kModule, buf);
  }
  return report;
}

std::string moments_to_json(const MomentReport& r) {
  nlohmann::json j;
  j["delta_xi"] = r.delta_xi;
  j["delta_k"] = r.delta_k;
  j["product_xi_k"] = r.product_xi_k;
  j["delta_tau"] = r.delta_tau;
  j["delta_m"] = r.delta_m;
  j["product_tau_m"] = r.product_tau_m;
  j["leakage"] = r.leakage;
  j["grid"] = {{"half_width", r.half_width}, {"step", r.step}};
  std::array<bool, 3> meets{};
  for (int i = 0; i < 3; ++i) meets[i] = r.product_xi_k[i] > kReferenceUncertaintyBound;
  j["reference_bound"] = {{"value", kReferenceUncertaintyBound},
                          {"xi_k_exceeds", meets},
                          {"tau_m_exceeds", r.product_tau_m > kReferenceUncertaintyBound},
                          {"note", "standard deviations of |phi|^2 marginals; Gaussian packets attain 1/2"}};
  return j.dump(2);
}

std::vector<GridSample> packet_axis_samples(const WavepacketSpec& input) {
  const WavepacketSpec spec = resolve_grid(input);
  const int n = static_cast<int>(std::lround(2.0 * spec.half_width / spec.step));
  const double h = 2.0 * spec.half_width / n;
  std::vector<GridSample> out;

  auto spectral = [](double center, double sigma, auto&& term) {
    const double half = 8.0 * sigma;
    const int nk = 256;
    const double hk = 2.0 * half / nk;
    Complex sum = 0.0;
    for (int j = 0; j < nk; ++j) {
      const double c = center - half + (j + 0.5) * hk;
      const double u = c - center;
      sum += std::exp(-u * u / (4.0 * sigma * sigma)) * term(c);
    }
    return sum * hk;
  };

  for (int axis = 0; axis < 4; ++axis) {
    for (int l = 0; l < n; ++l) {
      const double x = -spec.half_width + (l + 0.5) * h;
      SpacetimePoint p;
      Complex value;
      if (axis == 0) {
        p.tau = x;
        value = spectral(spec.center_m, spec.sigma_m,
                         [&](double m) { return evaluate_rest_wave(m, spec.center_k, p); });
      } else {
        const int i = axis - 1;
        p.xi[i] = x;
        value = spectral(spec.center_k[i], spec.sigma_k[i], [&](double k) {
          Vec3 kv{};
          kv[i] = k;
          return evaluate_rest_wave(spec.center_m, kv, p);
        });
      }
      out.push_back({p, value});
    }
  }
  return out;
}

void write_grid_csv(std::ostream& out, std::span<const GridSample> samples) {
  out << "tau,xi1,xi2,xi3,re,im\n";
  char buf[256];
  for (const GridSample& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.point.tau, s.point.xi.x, s.point.xi.y,
                  s.point.xi.z, s.value.real(), s.value.imag());
    out << buf;
  }
}

}  // namespace vecmass
