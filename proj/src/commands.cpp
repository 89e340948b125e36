#include "kneser/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "kneser/boundary.hpp"
#include "kneser/poisson.hpp"
#include "kneser/qc.hpp"
#include "kneser/verify.hpp"

namespace kneser {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Shared state for one command invocation.
struct Context {
  const Scenario& sc;
  const CommandOptions& opt;
  std::size_t n;
  PolarGrid grid;
  JordanCurve curve;
  json files = json::array();

  Context(const Scenario& s, const CommandOptions& o)
      : sc(s), opt(o), n(o.nodes.value_or(s.quadrature_n)), grid(o.grid.value_or(s.grid)),
        curve(build_curve(s.curve, s.curve_samples)) {
    if (!is_power_of_two(n) || n < 256) throw Error(ErrorCode::InvalidSpec, "node count must be a power of two >= 256");
  }

  BoundaryMap boundary(const MapSpec& spec) const { return BoundaryMap(curve, make_map(spec, curve)); }

  void write(const std::string& name, const std::string& body) {
    if (opt.out_dir.empty()) return;
    std::filesystem::create_directories(opt.out_dir);
    const auto path = std::filesystem::path(opt.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidSpec, "cannot write " + path.string());
    out << body;
    files.push_back(name);
  }

  json header(const std::string& command) const {
    json h;
    h["command"] = command;
    if (!sc.name.empty()) h["scenario"] = sc.name;
    h["curve"] = to_json(sc.curve);
    h["curve_length"] = curve.length();
    h["map"] = to_json(sc.map);
    h["quadrature_N"] = n;
    h["grid"] = {{"radial", grid.radial}, {"angular", grid.angular}};
    h["tolerances"] = to_json(sc.tolerances);
    return h;
  }
};

json injectivity_json(const InjectivityResult& inj, const PolarGrid& grid) {
  json w = json::array();
  const auto locate = [&](std::size_t cell) {
    return json{{"ring", cell / grid.angular}, {"angle", cell % grid.angular}};
  };
  for (const auto& c : inj.witnesses) {
    json a = json::array(), b = json::array();
    for (cplx p : c.first_polygon) a.push_back(point_json(p));
    for (cplx p : c.second_polygon) b.push_back(point_json(p));
    w.push_back({{"cells", json::array({locate(c.first), locate(c.second)})},
                 {"polygons", json::array({a, b})},
                 {"rechecked", polygons_overlap(c.first_polygon, c.second_polygon)}});
  }
  return {{"pass", inj.pass}, {"collisions", inj.collisions}, {"witnesses", w}};
}

CommandResult cmd_extend(Context& ctx) {
  const BoundaryMap map = ctx.boundary(ctx.sc.map);
  const HarmonicExtension w = HarmonicExtension::from_map(map, ctx.n);
  std::ostringstream csv;
  csv << "r,tau,re_w,im_w,jacobian\n";
  double jmin = std::numeric_limits<double>::infinity(), jmax = -jmin, polar_gap = 0.0;
  for (std::size_t i = 0; i < ctx.grid.radial; ++i) {
    const double r = ctx.grid.radius(i);
    const auto ring = w.ring(r, ctx.grid.angular);
    for (std::size_t j = 0; j < ctx.grid.angular; ++j) {
      const double jac = std::norm(ring.w_z[j]) - std::norm(ring.w_zbar[j]);
      jmin = std::min(jmin, jac);
      jmax = std::max(jmax, jac);
      csv << num(r) << ',' << num(ctx.grid.angle(j)) << ',' << num(ring.value[j].real()) << ','
          << num(ring.value[j].imag()) << ',' << num(jac) << '\n';
    }
    // Polar-form Jacobian as a cross-check on one point per ring.
    if (i > 0) {
      const cplx z = std::polar(r, ctx.grid.angle(ctx.grid.angular / 3));
      polar_gap = std::max(polar_gap, std::abs(w.jacobian_polar(z) - w.jacobian(z)));
    }
  }
  ctx.write("extend.csv", csv.str());
  json rep = ctx.header("extend");
  rep["rows"] = ctx.grid.radial * ctx.grid.angular;
  rep["jacobian_min"] = jmin;
  rep["jacobian_max"] = jmax;
  rep["jacobian_form_gap"] = polar_gap;
  rep["files"] = ctx.files;
  return {rep, 0};
}

CommandResult cmd_verify(Context& ctx) {
  const BoundaryMap map = ctx.boundary(ctx.sc.map);
  const DiffeoVerdict v = verify_diffeomorphism(map, ctx.n, ctx.grid, ctx.sc.tolerances.t_relative);
  json rep = ctx.header("verify");
  rep["t_min"] = v.t_min;
  rep["t_argmin"] = v.t_argmin;
  rep["t_sup"] = v.t_sup;
  rep["t_tolerance"] = v.t_tolerance;
  rep["t_cross_form_error"] = v.t_cross_error;
  rep["boundary_ok"] = v.boundary_ok;
  rep["interior_jacobian_min"] = v.interior_jacobian_min;
  rep["interior_jacobian_argmin"] = point_json(v.interior_jacobian_argmin);
  rep["injectivity"] = injectivity_json(v.injectivity, v.grid);
  rep["verdict"] = to_string(v.verdict);
  ctx.write("verify.json", rep.dump(2) + "\n");
  rep["files"] = ctx.files;
  return {rep, 0};
}

CommandResult cmd_tfun(Context& ctx) {
  const BoundaryMap map = ctx.boundary(ctx.sc.map);
  const TOperatorResult t = t_field(map, ctx.n, true);
  const auto& f = map.map();
  std::ostringstream csv;
  csv << "tau,T,fprime,boundary_jacobian\n";
  for (std::size_t j = 0; j < ctx.n; ++j) {
    const double tau = t.values.node(j);
    const double fp = f.derivative(tau);
    const double tv = t.values[j].real();
    csv << num(tau) << ',' << num(tv) << ',' << num(fp) << ',' << num(fp * tv) << '\n';
  }
  ctx.write("tfun.csv", csv.str());
  json spots = json::array();
  for (std::size_t j : t.spot_nodes) {
    const double tau = t.values.node(j);
    spots.push_back({{"tau", tau},
                     {"cotangent", t.values[j].real()},
                     {"singular", t_operator_singular(map, tau, ctx.n)}});
  }
  json rep = ctx.header("tfun");
  rep["form"] = to_string(t.form);
  rep["min"] = t.min;
  rep["argmin"] = t.argmin;
  rep["max"] = t.max;
  rep["cross_form_max_discrepancy"] = t.estimated_error;
  rep["spot_checks"] = spots;
  ctx.write("tfun.json", rep.dump(2) + "\n");
  rep["files"] = ctx.files;
  return {rep, 0};
}

json qc_json(const QcReport& q) {
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json trail = json::array();
  for (const auto& s : q.trail) {
    trail.push_back({{"N", s.n}, {"sup_Fprime", s.sup_fprime}, {"sup_HFprime", s.sup_hfprime}, {"l_F", s.l_f}});
  }
  return {{"sup_Fprime", q.sup_fprime},
          {"sup_HFprime", q.sup_hfprime},
          {"l_F", q.l_f},
          {"S", opt(q.s)},
          {"K_estimate", opt(q.k_estimate)},
          {"K_from_S", opt(q.k_from_s)},
          {"mu_bound", opt(q.mu_bound)},
          {"mu_max_boundary", q.mu_max_boundary},
          {"mu_max_interior", q.mu_max_interior},
          {"verdict", to_string(q.verdict)},
          {"N_final", q.n},
          {"refinement_converged", q.refinement_converged},
          {"refinement_trail", trail},
          {"c2_declared", q.c2_declared},
          {"alpha", q.alpha},
          {"notes", q.notes},
          {"guards", q.guards}};
}

CommandResult cmd_qc(Context& ctx) {
  const BoundaryMap map = ctx.boundary(ctx.sc.map);
  QcTolerances tol;
  tol.not_qc = ctx.sc.tolerances.l_not_qc;
  tol.inconclusive = ctx.sc.tolerances.l_inconclusive;
  tol.refine = ctx.sc.tolerances.refine;
  tol.mu_slack = ctx.sc.tolerances.mu_slack;
  const QcReport q = qc_verdict(map, ctx.n, ctx.grid, tol);
  json rep = ctx.header("qc");
  rep["report"] = qc_json(q);
  ctx.write("qc.json", rep.dump(2) + "\n");
  rep["files"] = ctx.files;
  return {rep, q.guards.empty() ? 0 : 3};
}

CommandResult cmd_mollify(Context& ctx) {
  const BoundaryMap map = ctx.boundary(ctx.sc.map);
  const MapPtr& f = map.map_ptr();
  const auto steps = t_convergence_under_mollification(map, ctx.sc.schedule, ctx.n);
  const double l = f->shift();
  constexpr std::size_t kCheck = 1024;
  json rows = json::array();
  bool brackets = true, shifts = true, closeness = true;
  for (const auto& step : steps) {
    const MapPtr psi = mollify(f, step.n);
    const MapPtr conv = convolve(f, 1.0 / step.n);
    double sup_diff = 0.0, shift_defect = 0.0;
    for (std::size_t k = 0; k < kCheck; ++k) {
      const double x = kTwoPi * (static_cast<double>(k) + 0.25) / kCheck;
      sup_diff = std::max(sup_diff, std::abs(psi->value(x) - f->value(x)));
      shift_defect = std::max(shift_defect, std::abs(psi->value(x + kTwoPi) - psi->value(x) - l));
    }
    const double bound = (1.0 + f->lip_upper()) / step.n;
    const bool bracket_ok = conv->lip_lower() >= f->lip_lower() - 1e-9 && conv->lip_upper() <= f->lip_upper() + 1e-9;
    brackets = brackets && bracket_ok;
    shifts = shifts && shift_defect <= 1e-10 * std::max(1.0, l);
    closeness = closeness && sup_diff <= bound;
    rows.push_back({{"n", step.n},
                    {"T_discrepancy", step.discrepancy},
                    {"sup_psi_minus_f", sup_diff},
                    {"closeness_bound", bound},
                    {"shift_defect", shift_defect},
                    {"psi_lipschitz", json::array({psi->lip_lower(), psi->lip_upper()})},
                    {"convolution_lipschitz", json::array({conv->lip_lower(), conv->lip_upper()})},
                    {"bracket_preserved", bracket_ok}});
  }
  // nonincreasing, ignoring wobble at rounding level
  bool decreasing = true;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    decreasing = decreasing && steps[k].discrepancy <= steps[k - 1].discrepancy + 1e-12;
  }
  json rep = ctx.header("mollify");
  rep["map_lipschitz"] = json::array({f->lip_lower(), f->lip_upper()});
  rep["steps"] = rows;
  rep["decreasing"] = decreasing;
  rep["final_discrepancy"] = steps.empty() ? json(nullptr) : json(steps.back().discrepancy);
  rep["bracket_preserved"] = brackets;
  rep["shift_exact"] = shifts;
  rep["closeness_holds"] = closeness;
  ctx.write("mollify.json", rep.dump(2) + "\n");
  rep["files"] = ctx.files;
  return {rep, 0};
}

// Uniform double in [0, 1) from the top 53 bits, independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

CommandResult cmd_probe(Context& ctx) {
  std::vector<MapSpec> family = ctx.sc.sweep;
  std::mt19937_64 gen(ctx.sc.seed);
  const auto& rf = ctx.sc.random;
  for (std::size_t k = 0; k < rf.count; ++k) {
    MapSpec m;
    m.type = MapType::Twist;
    m.amplitude = rf.amplitude_min + (rf.amplitude_max - rf.amplitude_min) * unit(gen);
    m.frequency = 1 + static_cast<int>(unit(gen) * rf.frequency_max);
    m.phase = kTwoPi * unit(gen);
    family.push_back(m);
  }
  if (family.empty()) family.push_back(ctx.sc.map);

  json table = json::array();
  for (const auto& spec : family) {
    const BoundaryMap map = ctx.boundary(spec);
    const TOperatorResult t = t_field(map, ctx.n, false);
    double essinf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ctx.n; ++j) {
      const double fp = map.map().derivative(t.values.node(j));
      essinf = std::min(essinf, fp == 0.0 ? 0.0 : fp * t.values[j].real());
    }
    const HarmonicExtension w = HarmonicExtension::from_map(map, ctx.n);
    const MappedGrid mapped = map_grid(w, map, ctx.grid);
    const InjectivityResult inj = check_injectivity(mapped, 1);
    const double jmin = *std::min_element(mapped.jacobian.begin(), mapped.jacobian.end());
    table.push_back({{"map", to_json(spec)},
                     {"essinf_boundary_jacobian", essinf},
                     {"t_min", t.min},
                     {"interior_jacobian_min", jmin},
                     {"injective", inj.pass},
                     {"collisions", inj.collisions}});
  }
  json rep = ctx.header("probe");
  rep["seed"] = ctx.sc.seed;
  rep["random_family"] = {{"count", rf.count},
                          {"amplitude_min", rf.amplitude_min},
                          {"amplitude_max", rf.amplitude_max},
                          {"frequency_max", rf.frequency_max}};
  rep["table"] = table;
  rep["note"] = "evidence table only; a finite sample cannot settle the boundary-Jacobian conjecture";
  ctx.write("probe.json", rep.dump(2) + "\n");
  rep["files"] = ctx.files;
  return {rep, 0};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"extend", "verify", "tfun", "qc", "mollify", "probe"};
  return names;
}

CommandResult run_command(const std::string& command, const Scenario& scenario, const CommandOptions& options) {
  Context ctx(scenario, options);
  if (command == "extend") return cmd_extend(ctx);
  if (command == "verify") return cmd_verify(ctx);
  if (command == "tfun") return cmd_tfun(ctx);
  if (command == "qc") return cmd_qc(ctx);
  if (command == "mollify") return cmd_mollify(ctx);
  if (command == "probe") return cmd_probe(ctx);
  throw Error(ErrorCode::InvalidSpec, "unknown command '" + command + "'");
}

json error_report(ErrorCode code, const std::string& message) {
  return {{"error",
           {{"code", std::string(to_string(code))},
            {"class", is_spec_error(code) ? "spec" : "numerical-guard"},
            {"message", message}}}};
}

int exit_code_for(ErrorCode code) { return is_spec_error(code) ? 2 : 3; }

}  // namespace kneser
