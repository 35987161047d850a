#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vecmass/invariant_suite.hpp"
#include "vecmass/mass_states.hpp"
#include "vecmass/path_integral.hpp"
#include "vecmass/propagation.hpp"
#include "vecmass/wavefunctions.hpp"

namespace vecmass::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON writer that prints every float with 17 significant digits. Non-finite
// values become null.
void dump17(const json& j, std::string& out, int level) {
  const std::string pad(2 * level, ' ');
  const std::string inner(2 * (level + 1), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump17(it.value(), out, level + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (j.empty()) {
        out += "[]";
      } else if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump17(j[i], out, level + 1);
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ",\n";
          out += inner;
          dump17(j[i], out, level + 1);
        }
        out += "\n" + pad + "]";
      }
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? num(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string to_text(const json& j) {
  std::string s;
  dump17(j, s, 0);
  return s + "\n";
}

json cplx(Complex c) { return json::array({c.real(), c.imag()}); }
json vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json four(const FourVector& v) { return json::array({v.t, v.x, v.y, v.z}); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError(flag + ": empty value in '" + text + "'");
    const std::string token = item.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(v)) {
      throw UsageError(flag + ": '" + token + "' is not a finite number");
    }
    out.push_back(v);
  }
  if (out.empty() || (!text.empty() && text.back() == ',')) throw UsageError(flag + ": expected a comma-separated list");
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.find_first_not_of(" \t\r") != std::string::npos) out.push_back(item);
  }
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& flag) {
  const auto v = parse_list(text, flag);
  if (v.size() != 3) throw UsageError(flag + ": expected exactly three components");
  return {v[0], v[1], v[2]};
}

Vec3 parse_upto3(const std::string& text, const std::string& flag) {
  const auto v = parse_list(text, flag);
  if (v.size() > 3) throw UsageError(flag + ": at most three components");
  Vec3 out;
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string format;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_path;
  std::vector<std::string> args;  // without the program name
  const CLI::App* sub = nullptr;
};

struct OutputFile {
  std::string path;
  std::string content;
  std::string format;
};

struct Result {
  std::string data;
  std::string format;
  std::vector<OutputFile> extra;
  int exit = kSuccess;
};

std::string resolve_format(const Context& ctx, const std::string& fallback) {
  return ctx.format.empty() ? fallback : ctx.format;
}

json manifest_for(const Context& ctx, const std::string& output, const std::string& format) {
  json params = json::object();
  for (const CLI::Option* opt : ctx.sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? " " : "") + res[i];
      if (opt->get_type_size() == 0 && value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
    }
    params[name] = value;
  }
  json m;
  m["subcommand"] = ctx.sub->get_name();
  m["parameters"] = params;
  m["args"] = ctx.args;
  m["seed"] = ctx.seed;
  m["workers"] = ctx.workers;
  m["format"] = format;
  m["output"] = output;
  m["tool_version"] = kToolVersion;
  m["timestamp"] = timestamp();
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void emit(const Context& ctx, const Result& r, std::ostream& out) {
  if (ctx.out_path.empty()) {
    out << r.data;
  } else {
    write_file(ctx.out_path, r.data);
    write_file(ctx.out_path + ".manifest.json", to_text(manifest_for(ctx, ctx.out_path, r.format)));
    out << "wrote " << ctx.out_path << "\n";
  }
  for (const auto& f : r.extra) {
    write_file(f.path, f.content);
    write_file(f.path + ".manifest.json", to_text(manifest_for(ctx, f.path, f.format)));
    out << "wrote " << f.path << "\n";
  }
}

// ---- subcommands --------------------------------------------------------

struct CheckOpts {
  bool inject_fault = false;
};

Result cmd_check(const Context& ctx, const CheckOpts& o, std::ostream& err) {
  SuiteOptions so;
  so.seed = ctx.seed;
  so.workers = ctx.workers;
  if (o.inject_fault) so.metric = MetricSignature{{-1.0, -1.0, -1.0, -1.0}};
  const auto rows = run_invariant_suite(so);
  Result r;
  r.format = resolve_format(ctx, "table");
  r.data = r.format == "csv" ? suite_csv(rows) : r.format == "json" ? suite_json(rows) : suite_table(rows);
  for (const auto& row : rows) {
    if (!row.pass) err << "invariant failed: " << row.module << "." << row.property << "\n";
  }
  r.exit = all_pass(rows) ? kSuccess : kDomainError;
  return r;
}

struct BoostOpts {
  std::string beta;
  double m = 1.0;
  std::string k = "0,0,0";
};

Result cmd_boost(const Context& ctx, const BoostOpts& o) {
  const BoostedMassState s = boost_state(RestMassState(o.m, parse_vec3(o.k, "--k")), ThreeVelocity(parse_vec3(o.beta, "--beta")));
  const MassShellReport shell = mass_shell(s);
  const BoostMatrix b = boost_matrix(s.beta);
  Result r;
  r.format = resolve_format(ctx, "json");
  if (r.format == "csv") {
    std::string d = "m,k1,k2,k3,beta1,beta2,beta3,gamma,E,P0,P1,P2,P3,V0,V1,V2,V3,K0,K1,K2,K3,M2\n";
    std::vector<double> vals{s.rest.m(), s.rest.k().x, s.rest.k().y, s.rest.k().z, s.beta.vector().x,
                             s.beta.vector().y, s.beta.vector().z, s.beta.gamma(), s.energy};
    for (const FourVector* v : {&s.P, &s.V, &s.K}) {
      for (int a = 0; a < 4; ++a) vals.push_back((*v)[a]);
    }
    vals.push_back(shell.M2);
    for (std::size_t i = 0; i < vals.size(); ++i) d += (i ? "," : "") + num(vals[i]);
    r.data = d + "\n";
    return r;
  }
  json j;
  j["m"] = s.rest.m();
  j["k"] = vec3(s.rest.k());
  j["beta"] = vec3(s.beta.vector());
  j["gamma"] = s.beta.gamma();
  j["E"] = s.energy;
  j["P"] = four(s.P);
  j["V"] = four(s.V);
  j["K"] = four(s.K);
  j["U"] = s.V.t;
  j["p2"] = shell.p2;
  j["v2"] = shell.v2;
  j["pv"] = shell.pv;
  j["M2"] = shell.M2;
  j["negative_M2"] = shell.negative_M2;
  json rows = json::array();
  for (int i = 0; i < 4; ++i) rows.push_back(json::array({b(i, 0), b(i, 1), b(i, 2), b(i, 3)}));
  j["boost_matrix"] = rows;
  r.data = to_text(j);
  return r;
}

struct KernelOpts {
  std::string m = "1";
  std::string dtau = "1";
  std::string dxi = "0,0,0";
  bool oracle = false;
  double epsilon = 0.02;
  double beta_step = 0.0;
};

Result cmd_kernel(const Context& ctx, const KernelOpts& o) {
  const auto ms = parse_list(o.m, "--m");
  const auto dtaus = parse_list(o.dtau, "--dtau");
  std::vector<Vec3> dxis;
  for (const auto& g : split(o.dxi, ';')) dxis.push_back(parse_upto3(g, "--dxi"));
  if (dxis.empty()) throw UsageError("--dxi: expected at least one displacement");
  if (o.oracle && !(o.epsilon > 0.0)) throw UsageError("--epsilon must be positive");

  Result r;
  r.format = resolve_format(ctx, "csv");
  std::string csv = kernel_csv_header() + (o.oracle ? ",numeric_re,numeric_im,rel_error" : "") + "\n";
  json rows = json::array();
  for (double m : ms) {
    for (double dtau : dtaus) {
      for (const Vec3& dxi : dxis) {
        const KernelQuery q{m, dtau, dxi};
        KernelValue v{};
        try {
          v = transition_kernel(q);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::lightlike_singularity) throw;
          v = {Complex(kNaN, kNaN), Regime::lightlike, 0.0};
        }
        Complex numeric(kNaN, kNaN);
        double rel = kNaN;
        if (o.oracle && v.regime == Regime::timelike && norm(dxi) <= 0.9 * (1.0 + 1e-12) * dtau && m != 0.0) {
          numeric = transition_kernel_numeric(q, {o.epsilon, o.beta_step}, ctx.workers);
          rel = std::abs(numeric - v.amplitude) / std::abs(v.amplitude);
        }
        csv += kernel_csv_row(q, v);
        if (o.oracle) csv += "," + num(numeric.real()) + "," + num(numeric.imag()) + "," + num(rel);
        csv += "\n";
        json row{{"m", m},
                 {"dtau", dtau},
                 {"dxi", vec3(dxi)},
                 {"regime", std::string(to_string(v.regime))},
                 {"proper_time", v.proper_time},
                 {"re", v.amplitude.real()},
                 {"im", v.amplitude.imag()}};
        if (o.oracle) {
          row["numeric_re"] = numeric.real();
          row["numeric_im"] = numeric.imag();
          row["rel_error"] = rel;
        }
        rows.push_back(row);
      }
    }
  }
  r.data = r.format == "json" ? to_text(json{{"rows", rows}}) : csv;
  return r;
}

struct ComposeOpts {
  double m = 50.0;
  double dtau = 2.0;
  std::string dxi = "0";
  int slices = 2;
  int dim = 1;
  std::string damping = "0.001";
  double calibration_damping = 1e-3;
  std::string mode = "steepest";
  bool taper = false;
  double half_width = 0.0;
  double step = 0.0;
  std::string constants;
  bool extrapolate = false;
};

Result cmd_compose(const Context& ctx, const ComposeOpts& o) {
  ComposeConfig cfg;
  cfg.grid = SliceGrid::uniform(0.0, o.dtau, o.slices, o.dim);
  cfg.grid.half_width = o.half_width;
  cfg.grid.step = o.step;
  cfg.calibration_damping = o.calibration_damping;
  cfg.mode = o.mode == "real" ? ComposeMode::real_axis : ComposeMode::steepest_descent;
  cfg.taper = o.taper;
  cfg.workers = ctx.workers;
  if (!o.constants.empty()) {
    cfg.normalization = NormalizationRule::explicit_constants;
    for (const auto& g : split(o.constants, ';')) {
      const auto c = parse_list(g, "--constants");
      if (c.size() != 2) throw UsageError("--constants: each constant is 're,im'");
      cfg.constants.emplace_back(c[0], c[1]);
    }
  }
  const Vec3 dxi = parse_upto3(o.dxi, "--dxi");
  const SpacetimePoint a{0.0, {}}, b{o.dtau, dxi};

  Result r;
  r.format = resolve_format(ctx, "csv");
  std::string csv =
      "damping,re,im,direct_re,direct_im,phase_error,modulus_ratio,calibration_re,calibration_im,half_width,step,"
      "points";
  csv += o.extrapolate ? ",phase_extrapolated\n" : "\n";
  json rows = json::array();
  for (double d : parse_list(o.damping, "--damping")) {
    cfg.damping = d;
    const ComposeResult c = compose_kernels(o.m, a, b, cfg);
    const double extra = o.extrapolate ? compose_phase_extrapolated(o.m, a, b, cfg) : kNaN;
    const std::vector<double> vals{d, c.amplitude.real(), c.amplitude.imag(), c.direct.real(), c.direct.imag(),
                                   c.phase_error, c.modulus_ratio, c.calibration.real(), c.calibration.imag(),
                                   c.half_width, c.step};
    for (std::size_t i = 0; i < vals.size(); ++i) csv += (i ? "," : "") + num(vals[i]);
    csv += "," + std::to_string(c.points_per_axis);
    if (o.extrapolate) csv += "," + num(extra);
    csv += "\n";
    json row{{"damping", d},
             {"amplitude", cplx(c.amplitude)},
             {"direct", cplx(c.direct)},
             {"phase_error", c.phase_error},
             {"modulus_ratio", c.modulus_ratio},
             {"calibration", cplx(c.calibration)},
             {"half_width", c.half_width},
             {"step", c.step},
             {"points", c.points_per_axis}};
    if (o.extrapolate) row["phase_extrapolated"] = extra;
    rows.push_back(row);
  }
  r.data = r.format == "json"
               ? to_text(json{{"m", o.m}, {"dtau", o.dtau}, {"dxi", vec3(dxi)}, {"slices", o.slices}, {"dim", o.dim},
                              {"rows", rows}})
               : csv;
  return r;
}

struct ActionOpts {
  std::string vertices;
  std::string path_file;
  double m = 1.0;
  std::uint64_t sample = 0;
  int bins = 50;
};

PiecewisePath parse_path(const std::string& text, const char sep) {
  PiecewisePath p;
  std::size_t widest = 1;
  for (const auto& g : split(text, sep)) {
    const auto v = parse_list(g, "vertex");
    if (v.size() > 4) throw UsageError("vertex '" + g + "' has more than three spatial components");
    SpacetimePoint pt{v[0], {}};
    for (std::size_t i = 1; i < v.size(); ++i) pt.xi[static_cast<int>(i - 1)] = v[i];
    widest = std::max(widest, v.size() - 1);
    p.vertices.push_back(pt);
  }
  p.dim = static_cast<int>(std::max<std::size_t>(1, widest));
  if (p.vertices.size() < 2) throw UsageError("a path needs at least two vertices");
  return p;
}

Result cmd_action(const Context& ctx, const ActionOpts& o) {
  if (o.vertices.empty() == o.path_file.empty()) throw UsageError("give exactly one of --vertices or --path");
  PiecewisePath path;
  if (!o.path_file.empty()) {
    std::ifstream f(o.path_file);
    if (!f) throw UsageError("cannot read path file '" + o.path_file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    path = parse_path(ss.str(), '\n');
  } else {
    path = parse_path(o.vertices, ';');
  }
  Result r;
  r.format = resolve_format(ctx, "json");

  if (o.sample > 0) {
    SliceGrid grid;
    grid.dim = path.dim;
    for (const auto& v : path.vertices) grid.times.push_back(v.tau);
    const McStatistics st =
        sample_paths_mc(path.vertices.front(), path.vertices.back(), grid, o.m, ctx.seed, o.sample, ctx.workers, o.bins);
    const double width = st.direct_proper_time / o.bins;
    if (r.format == "csv") {
      std::string d = "bin,lower,upper,count\n";
      for (int i = 0; i < o.bins; ++i) {
        d += std::to_string(i) + "," + num(i * width) + "," + num((i + 1) * width) + "," +
             std::to_string(st.histogram[i]) + "\n";
      }
      r.data = d;
    } else {
      json j{{"dim", path.dim},
             {"m", o.m},
             {"seed", ctx.seed},
             {"workers", ctx.workers},
             {"proposals", st.proposals},
             {"accepted", st.accepted},
             {"rejected_fraction", st.rejected_fraction},
             {"direct_proper_time", st.direct_proper_time},
             {"max_proper_time", st.max_proper_time},
             {"mean_proper_time", st.mean_proper_time},
             {"max_action", st.max_action},
             {"relative_gap", (st.direct_proper_time - st.max_proper_time) / st.direct_proper_time},
             {"bin_width", width},
             {"histogram", st.histogram}};
      r.data = to_text(j);
    }
    return r;
  }

  const ActionReport rep = path_action(path, o.m);
  if (r.format == "csv") {
    std::string d = "segment,proper_time,cumulative\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < rep.segment_proper_times.size(); ++i) {
      cum += rep.segment_proper_times[i];
      d += std::to_string(i) + "," + num(rep.segment_proper_times[i]) + "," + num(cum) + "\n";
    }
    r.data = d;
  } else {
    r.data = to_text(json{{"dim", path.dim},
                          {"m", o.m},
                          {"segment_proper_times", rep.segment_proper_times},
                          {"total_proper_time", rep.total_proper_time},
                          {"action", rep.action},
                          {"phase", cplx(rep.phase)}});
  }
  return r;
}

struct WavepacketOpts {
  std::string sigma_k = "1,1,1";
  std::string center_k = "0,0,0";
  double center_m = 5.0;
  double sigma_m = 0.5;
  double half_width = 0.0;
  double step = 0.0;
  std::string dump;
};

Result cmd_wavepacket(const Context& ctx, const WavepacketOpts& o) {
  WavepacketSpec spec;
  spec.sigma_k = parse_vec3(o.sigma_k, "--sigma-k");
  spec.center_k = parse_vec3(o.center_k, "--center-k");
  spec.center_m = o.center_m;
  spec.sigma_m = o.sigma_m;
  spec.half_width = o.half_width;
  spec.step = o.step;
  const MomentReport rep = wavepacket_moments(spec);
  Result r;
  r.format = resolve_format(ctx, "json");
  if (r.format == "csv") {
    std::string d = "pair,position_width,mass_width,product\n";
    for (int i = 0; i < 3; ++i) {
      d += "xi" + std::to_string(i + 1) + "/k" + std::to_string(i + 1) + "," + num(rep.delta_xi[i]) + "," +
           num(rep.delta_k[i]) + "," + num(rep.product_xi_k[i]) + "\n";
    }
    d += "tau/m," + num(rep.delta_tau) + "," + num(rep.delta_m) + "," + num(rep.product_tau_m) + "\n";
    r.data = d;
  } else {
    r.data = to_text(json::parse(moments_to_json(rep)));
  }
  if (!o.dump.empty()) {
    const auto samples = packet_axis_samples(spec);
    std::ostringstream os;
    write_grid_csv(os, samples);
    r.extra.push_back({o.dump, os.str(), "csv"});
  }
  return r;
}

struct OverlapOpts {
  double m1 = 1.0, m2 = 1.0;
  std::string k1 = "0,0,0", k2 = "0,0,0";
  std::string beta1 = "0,0,0", beta2 = "0,0,0";
  int sign1 = 1, sign2 = 1;
  double half_width = std::numbers::pi;
  double step = 0.05;
};

Result cmd_overlap(const Context& ctx, const OverlapOpts& o) {
  auto sign = [](int s, const char* flag) {
    if (s != 1 && s != -1) throw UsageError(std::string(flag) + " must be 1 or -1");
    return s == 1 ? EnergySign::positive : EnergySign::negative;
  };
  const PlaneWaveState w1{
      boost_state(RestMassState(o.m1, parse_vec3(o.k1, "--k1")), ThreeVelocity(parse_vec3(o.beta1, "--beta1"))),
      sign(o.sign1, "--sign1")};
  const PlaneWaveState w2{
      boost_state(RestMassState(o.m2, parse_vec3(o.k2, "--k2")), ThreeVelocity(parse_vec3(o.beta2, "--beta2"))),
      sign(o.sign2, "--sign2")};
  const Complex ov = box_overlap(w1, w2, o.half_width, o.step);
  const double diag = std::pow(2.0 * o.half_width / (2.0 * std::numbers::pi), 4);
  Result r;
  r.format = resolve_format(ctx, "json");
  if (r.format == "csv") {
    r.data = "re,im,abs,diagonal_reference,ratio,cells\n" + num(ov.real()) + "," + num(ov.imag()) + "," +
             num(std::abs(ov)) + "," + num(diag) + "," + num(std::abs(ov) / diag) + "," +
             std::to_string(box_cells(o.half_width, o.step)) + "\n";
  } else {
    r.data = to_text(json{{"re", ov.real()},
                          {"im", ov.imag()},
                          {"abs", std::abs(ov)},
                          {"diagonal_reference", diag},
                          {"ratio", std::abs(ov) / diag},
                          {"cells", box_cells(o.half_width, o.step)}});
  }
  return r;
}

std::vector<std::string> replay_args(const std::string& manifest_path, const std::string& out_override) {
  std::ifstream f(manifest_path);
  if (!f) throw UsageError("cannot read manifest '" + manifest_path + "'");
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  if (!m.contains("args") || !m["args"].is_array()) throw UsageError("manifest has no 'args' array");
  std::vector<std::string> args = m["args"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw UsageError("manifest records a replay");
  if (!out_override.empty()) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--out") {
        ++i;
        continue;
      }
      if (args[i].rfind("--out=", 0) == 0) continue;
      kept.push_back(args[i]);
    }
    kept.push_back("--out");
    kept.push_back(out_override);
    args = kept;
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vector-mass relativistic quantum mechanics toolkit", "vecmass"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Context ctx;
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", ctx.seed, "Seed for stochastic runs")->capture_default_str();
  app.add_option("--workers", ctx.workers, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
  app.add_option("--out", ctx.out_path, "Write data to PATH and a manifest to PATH.manifest.json");

  CheckOpts check;
  auto* c_check = app.add_subcommand("check", "Run the invariant suite of every module");
  c_check->add_flag("--inject-metric-fault", check.inject_fault, "Use a sign-flipped metric (fault-injection harness)");

  BoostOpts boost;
  auto* c_boost = app.add_subcommand("boost", "Boost a rest mass state");
  c_boost->option_defaults()->always_capture_default();
  c_boost->add_option("--beta", boost.beta, "Velocity bx,by,bz")->required();
  c_boost->add_option("--m", boost.m, "Scalar mass")->required();
  c_boost->add_option("--k", boost.k, "Vector mass kx,ky,kz");

  KernelOpts kernel;
  auto* c_kernel = app.add_subcommand("kernel", "Transition kernel over a sweep of queries");
  c_kernel->option_defaults()->always_capture_default();
  c_kernel->add_option("--m", kernel.m, "Comma-separated signed masses");
  c_kernel->add_option("--dtau", kernel.dtau, "Comma-separated time separations");
  c_kernel->add_option("--dxi", kernel.dxi, "Semicolon-separated displacements x[,y[,z]]");
  c_kernel->add_flag("--oracle", kernel.oracle, "Add the velocity-ball quadrature and its relative error");
  c_kernel->add_option("--epsilon", kernel.epsilon, "Nascent-delta width");
  c_kernel->add_option("--beta-step", kernel.beta_step, "Velocity lattice step (0 = automatic)");

  ComposeOpts compose;
  auto* c_compose = app.add_subcommand("compose", "Compose sliced kernels and compare with the direct kernel");
  c_compose->option_defaults()->always_capture_default();
  c_compose->add_option("--m", compose.m, "Scalar mass");
  c_compose->add_option("--dtau", compose.dtau, "Total time separation");
  c_compose->add_option("--dxi", compose.dxi, "Endpoint displacement x[,y[,z]]");
  c_compose->add_option("--slices", compose.slices, "Number of slices N")->check(CLI::Range(2, 64));
  c_compose->add_option("--dim", compose.dim, "Spatial dimension")->check(CLI::Range(1, 3));
  c_compose->add_option("--damping", compose.damping, "Comma-separated damping values");
  c_compose->add_option("--calibration-damping", compose.calibration_damping, "Damping of the calibration run");
  c_compose->add_option("--mode", compose.mode, "Integration contour")->check(CLI::IsMember({"steepest", "real"}));
  c_compose->add_flag("--taper", compose.taper, "Smooth window on real-axis boxes");
  c_compose->add_option("--half-width", compose.half_width, "Grid half-width (0 = automatic)");
  c_compose->add_option("--step", compose.step, "Grid step (0 = automatic)");
  c_compose->add_option("--constants", compose.constants, "Explicit per-slice constants 're,im;re,im;...'");
  c_compose->add_flag("--extrapolate", compose.extrapolate, "Add the phase extrapolated to zero damping");

  ActionOpts action;
  auto* c_action = app.add_subcommand("action", "Proper time and action of a polygonal worldline");
  c_action->option_defaults()->always_capture_default();
  c_action->add_option("--vertices", action.vertices, "Vertices 'tau,x[,y,z];tau,x;...'");
  c_action->add_option("--path", action.path_file, "File with one vertex 'tau,x[,y,z]' per line");
  c_action->add_option("--m", action.m, "Scalar mass");
  c_action->add_option("--sample", action.sample, "Monte Carlo proposals between the end vertices");
  c_action->add_option("--bins", action.bins, "Histogram bins")->check(CLI::Range(1, 100000));

  WavepacketOpts packet;
  auto* c_packet = app.add_subcommand("wavepacket", "Uncertainty moments of Gaussian packets");
  c_packet->option_defaults()->always_capture_default();
  c_packet->add_option("--sigma-k", packet.sigma_k, "Vector-mass widths");
  c_packet->add_option("--center-k", packet.center_k, "Vector-mass centre");
  c_packet->add_option("--center-m", packet.center_m, "Scalar-mass centre");
  c_packet->add_option("--sigma-m", packet.sigma_m, "Scalar-mass width");
  c_packet->add_option("--half-width", packet.half_width, "Sampling box half-width (0 = automatic)");
  c_packet->add_option("--step", packet.step, "Sampling step (0 = automatic)");
  c_packet->add_option("--dump", packet.dump, "Write packet values along the axes to this CSV");

  OverlapOpts overlap;
  auto* c_overlap = app.add_subcommand("overlap", "Box overlap of two plane waves");
  c_overlap->option_defaults()->always_capture_default();
  c_overlap->add_option("--m1", overlap.m1);
  c_overlap->add_option("--k1", overlap.k1);
  c_overlap->add_option("--beta1", overlap.beta1);
  c_overlap->add_option("--sign1", overlap.sign1, "Energy sign, 1 or -1");
  c_overlap->add_option("--m2", overlap.m2);
  c_overlap->add_option("--k2", overlap.k2);
  c_overlap->add_option("--beta2", overlap.beta2);
  c_overlap->add_option("--sign2", overlap.sign2, "Energy sign, 1 or -1");
  c_overlap->add_option("--half-width", overlap.half_width, "Box half-width L");
  c_overlap->add_option("--step", overlap.step, "Quadrature step");

  std::string manifest;
  auto* c_replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  c_replay->add_option("manifest", manifest, "Manifest file")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (c_replay->parsed()) {
    try {
      std::vector<std::string> next{args.empty() ? std::string("vecmass") : args.front()};
      const auto recorded = replay_args(manifest, ctx.out_path);
      next.insert(next.end(), recorded.begin(), recorded.end());
      return run_cli(next, out, err);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
      return kUsageError;
    }
  }

  ctx.args.assign(args.begin() + (args.empty() ? 0 : 1), args.end());
  try {
    Result r;
    if (c_check->parsed()) {
      ctx.sub = c_check;
      r = cmd_check(ctx, check, err);
    } else if (c_boost->parsed()) {
      ctx.sub = c_boost;
      r = cmd_boost(ctx, boost);
    } else if (c_kernel->parsed()) {
      ctx.sub = c_kernel;
      r = cmd_kernel(ctx, kernel);
    } else if (c_compose->parsed()) {
      ctx.sub = c_compose;
      r = cmd_compose(ctx, compose);
    } else if (c_action->parsed()) {
      ctx.sub = c_action;
      r = cmd_action(ctx, action);
    } else if (c_packet->parsed()) {
      ctx.sub = c_packet;
      r = cmd_wavepacket(ctx, packet);
    } else {
      ctx.sub = c_overlap;
      r = cmd_overlap(ctx, overlap);
    }
    emit(ctx, r, out);
    return r.exit;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace vecmass::cli
