// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kneser/boundary.hpp"
#include "kneser/error.hpp"
#include "kneser/poisson.hpp"
#include "kneser/qc.hpp"
#include "kneser/scenario.hpp"
#include "kneser/verify.hpp"

using namespace kneser;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const JordanCurve& circle() {
  static const JordanCurve c = build_curve(CurveSpec::circle(1.0));
  return c;
}
const JordanCurve& ellipse() {
  static const JordanCurve c = build_curve(CurveSpec::ellipse(2.0, 1.0));
  return c;
}
const JordanCurve& bean() {
  static const JordanCurve c = build_curve(CurveSpec::bean());
  return c;
}

BoundaryMap circle_twist() { return BoundaryMap(circle(), twist_map(kTwoPi, 0.3)); }

// bi-Lipschitz maps onto convex targets
std::vector<BoundaryMap> convex_family() {
  std::vector<BoundaryMap> out;
  for (const JordanCurve* c : {&circle(), &ellipse()}) {
    const double l = c->length();
    for (double eps : {0.0, 0.3, 0.6, 0.9}) {
      for (int k : {1, 2, 3}) out.emplace_back(*c, twist_map(l, eps, k, 0.4 * k));
    }
    out.emplace_back(*c, piecewise_map(l, {{0.0, 0.0}, {kPi, 0.4 * l / kTwoPi}}));
  }
  out.emplace_back(ellipse(), native_map(ellipse()));
  return out;
}

void c1(Outcome& o) {
  const BoundaryMap id(circle(), identity_map(kTwoPi));
  const auto field = t_field(id, 1024);
  double t_dev = 0.0, bj_dev = 0.0, j_dev = 0.0;
  for (std::size_t k = 0; k < 1024; ++k) {
    t_dev = std::max(t_dev, std::abs(field.values[k].real() - 1.0));
    bj_dev = std::max(bj_dev, std::abs(boundary_jacobian(id, field.values.node(k), 1024) - 1.0));
  }
  const auto w = HarmonicExtension::from_map(id, 1024);
  const PolarGrid g{64, 256};
  for (std::size_t i = 0; i < g.radial; ++i) {
    const auto ring = w.ring(g.radius(i), g.angular);
    for (std::size_t j = 0; j < g.angular; ++j) {
      j_dev = std::max(j_dev, std::abs(std::norm(ring.w_z[j]) - std::norm(ring.w_zbar[j]) - 1.0));
    }
  }
  j_dev = std::max(j_dev, std::abs(w.jacobian(std::polar(1.0 - 1e-6, 0.3)) - 1.0));
  o.detail << "max|T-1|=" << t_dev << " max|J_bdry-1|=" << bj_dev << " max|J-1|=" << j_dev;
  o.check(t_dev <= 1e-8, "T");
  o.check(bj_dev <= 1e-8, "boundary jacobian");
  o.check(j_dev <= 1e-8, "interior jacobian");
}

void c2(Outcome& o) {
  const BoundaryMap maps[] = {circle_twist(), BoundaryMap(ellipse(), identity_map(ellipse().length()))};
  for (const auto& m : maps) {
    const auto field = t_field(m, 2048);
    o.detail << m.map().describe() << ": " << field.estimated_error << " at " << field.spot_nodes.size() << " nodes; ";
    o.check(field.spot_nodes.size() == 16, "16 spot nodes");
    o.check(field.estimated_error <= 1e-5, "agreement");
  }
}

void c3(Outcome& o) {
  const auto m = circle_twist();
  const std::size_t n = 4096;
  const auto w = HarmonicExtension::from_map(m, n);
  const auto field = t_field(m, n, false);
  double j_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    j_max = std::max(j_max, std::abs(m.map().derivative(field.values.node(k)) * field.values[k].real()));
  }
  double worst_final = 0.0;
  bool decreasing = true;
  for (int a = 0; a < 8; ++a) {
    const double tau = kTwoPi * a / 8 + 0.1;
    const double bj = boundary_jacobian(m, tau, n);
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      const double gap = std::abs(bj - w.jacobian(std::polar(1.0 - delta, tau)));
      decreasing = decreasing && gap < prev;
      prev = gap;
    }
    worst_final = std::max(worst_final, prev);
  }
  o.detail << "decreasing=" << decreasing << " final=" << worst_final << " limit=" << 1e-2 * j_max;
  o.check(decreasing, "monotone in delta");
  o.check(worst_final <= 1e-2 * j_max, "final gap");
}

void c4(Outcome& o) {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> nd;
  double worst_pv = 0.0, worst_lit = 0.0, worst_sin = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(9), b(9), c(9), d(9);
    for (int k = 0; k <= 8; ++k) a[k] = nd(gen), b[k] = nd(gen), c[k] = nd(gen), d[k] = nd(gen);
    const auto poly = [&](double t) {
      cplx s = 0.0;
      for (int k = 0; k <= 8; ++k) s += cplx(a[k] * std::cos(k * t) + b[k] * std::sin(k * t), c[k] * std::cos(k * t) + d[k] * std::sin(k * t));
      return s;
    };
    const auto chi = CircleField::sample(poly, 64);
    const auto pv = hilbert_pv(chi);
    const auto mult = hilbert_transform(chi);
    for (std::size_t k = 0; k < chi.size(); ++k) worst_pv = std::max(worst_pv, std::abs(pv[k] - mult[k]));
    const auto re = CircleField::sample([&](double t) { return cplx(poly(t).real(), 0.0); }, 64);
    worst_lit = std::max(worst_lit, conjugate_consistency(re));
  }
  for (int n = 1; n <= 8; ++n) {
    const auto h = hilbert_transform(CircleField::sample([n](double t) { return cplx(std::cos(n * t), 0.0); }, 64));
    for (std::size_t k = 0; k < h.size(); ++k) worst_sin = std::max(worst_sin, std::abs(h[k] - std::sin(n * h.node(k))));
  }
  o.detail << "pv-vs-multiplier=" << worst_pv << " H(cos nt)-sin nt=" << worst_sin << " conjugate defect=" << worst_lit;
  o.check(worst_pv <= 1e-6, "pv path");
  o.check(worst_sin <= 1e-10, "H(cos nt)");
  o.check(worst_lit <= 1e-8, "conjugate identity");
}

void c5(Outcome& o) {
  for (const JordanCurve* c : {&circle(), &ellipse()}) {
    const auto cert = convexity_certificate(*c, 512);
    o.detail << "min K=" << cert.min_kernel << "; ";
    o.check(cert.min_kernel >= -1e-12, "kernel sign");
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& m : convex_family()) lowest = std::min(lowest, t_field(m, 1024, false).min);
  o.detail << "min T over family=" << lowest;
  o.check(lowest > 0.0, "T positivity");
}

void c6(Outcome& o) {
  std::mt19937_64 gen(6);
  for (const JordanCurve* c : {&circle(), &ellipse(), &bean()}) {
    std::uniform_real_distribution<double> u(0.0, c->length());
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10000; ++k) {
      const double s = u(gen), t = u(gen);
      try {
        const auto kb = kernel_bound_check(*c, s, t);
        worst = std::max(worst, kb.abs_kernel - kb.bound);
      } catch (const Error&) {
        worst = std::numeric_limits<double>::infinity();
      }
    }
    o.detail << "max(|K|-bound)=" << worst << "; ";
    o.check(worst <= 1e-9, "bound");
  }
}

void c7(Outcome& o) {
  const std::pair<const char*, std::function<double(double)>> moduli[] = {
      {"t", [](double t) { return t; }},
      {"t^1/2", [](double t) { return std::sqrt(t); }},
      {"t^3/4", [](double t) { return std::pow(t, 0.75); }},
  };
  for (const auto& [name, omega] : moduli) {
    const auto r = integration_identity_check(omega, 1.0, 1.0);
    o.detail << name << ": " << r.defect << "; ";
    o.check(r.defect <= 1e-6, name);
  }
}

void c8(Outcome& o, const Scenario& kinked) {
  const auto curve = build_curve(kinked.curve, kinked.curve_samples);
  const auto f = make_map(kinked.map, curve);
  const double l = f->lip_lower(), L = f->lip_upper();
  double shift = 0.0, bracket = 0.0;
  bool closeness = true;
  for (const auto& g : {f, twist_map(curve.length(), 0.3)}) {
    for (int n : kinked.schedule) {
      const auto psi = mollify(g, n);
      for (int k = 0; k < 512; ++k) {
        const double x = kTwoPi * (k + 0.25) / 512;
        shift = std::max(shift, std::abs(psi->value(x + kTwoPi) - psi->value(x) - curve.length()));
        const double d = psi->derivative(x);
        bracket = std::max({bracket, g->lip_lower() - d, d - g->lip_upper()});
      }
      bracket = std::max({bracket, g->lip_lower() - psi->lip_lower(), psi->lip_upper() - g->lip_upper()});
      double gap = 0.0;
      for (int k = 0; k < 1024; ++k) {
        const double x = kTwoPi * (k + 0.37) / 1024;
        gap = std::max(gap, std::abs(psi->value(x) - g->value(x)));
      }
      closeness = closeness && gap <= (1.0 + g->lip_upper()) / n;
    }
  }
  const BoundaryMap map(curve, f);
  const auto steps = t_convergence_under_mollification(map, kinked.schedule, kinked.quadrature_n);
  bool decreasing = true;
  for (std::size_t k = 1; k < steps.size(); ++k) decreasing = decreasing && steps[k].discrepancy < steps[k - 1].discrepancy;
  const double final_gap = steps.back().discrepancy;
  o.detail << "kinked f in [" << l << ", " << L << "]: bracket excess=" << bracket << " shift defect=" << shift
           << " closeness=" << closeness << " T gap at n=" << steps.back().n << ": " << final_gap;
  o.check(bracket <= 1e-9, "bracket");
  o.check(shift <= 1e-10, "periodic shift");
  o.check(closeness, "sup |psi - f|");
  o.check(decreasing, "T gap decreasing");
  o.check(steps.back().n == 512 && final_gap <= 1e-3, "T gap at 512");
}

void c9(Outcome& o) {
  const PolarGrid grid{32, 128};
  const auto id = qc_verdict(BoundaryMap(circle(), identity_map(kTwoPi)), 1024, grid);
  const double k_id = id.k_estimate.value_or(std::numeric_limits<double>::quiet_NaN());
  o.detail << "identity K-1=" << k_id - 1.0;
  o.check(id.verdict == QcVerdict::Qc && std::abs(k_id - 1.0) <= 1e-12, "identity K");

  std::vector<QcReport> qc_reports{id};
  double prev = std::numeric_limits<double>::infinity();
  bool toward_one = true;
  for (double eps : {0.1, 0.05, 0.01}) {
    const auto r = qc_verdict(BoundaryMap(circle(), twist_map(kTwoPi, eps)), 1024, grid);
    toward_one = toward_one && r.verdict == QcVerdict::Qc && *r.k_estimate < prev && *r.k_estimate > 1.0;
    prev = r.k_estimate.value_or(prev);
    qc_reports.push_back(r);
  }
  o.detail << " K(0.01)=" << prev;
  o.check(toward_one, "twist K decreasing toward 1");

  qc_reports.push_back(qc_verdict(circle_twist(), 2048, PolarGrid{64, 256}));
  for (double eps : {0.2, 0.5}) {
    qc_reports.push_back(qc_verdict(BoundaryMap(ellipse(), twist_map(ellipse().length(), eps, 2, 0.3)), 2048, PolarGrid{64, 256}));
  }
  qc_reports.push_back(qc_verdict(BoundaryMap(ellipse(), native_map(ellipse())), 1024, grid));
  qc_reports.push_back(qc_verdict(BoundaryMap(ellipse(), identity_map(ellipse().length())), 2048, grid));

  double worst_k = 0.0, worst_mu = -1.0;
  int qc_count = 0;
  for (const auto& r : qc_reports) {
    if (r.verdict != QcVerdict::Qc) continue;
    ++qc_count;
    worst_k = std::max(worst_k, std::abs(*r.k_estimate - std::sqrt(2.0 * *r.s - 1.0)) / *r.k_estimate);
    worst_mu = std::max(worst_mu, r.mu_max_interior - *r.mu_bound);
  }
  o.detail << " qc verdicts=" << qc_count << " |K-sqrt(2S-1)|/K=" << worst_k << " max(mu-mu2)=" << worst_mu;
  o.check(worst_k <= 1e-12, "K = sqrt(2S-1)");
  o.check(worst_mu <= 1e-6, "interior mu");

  const auto pl = qc_verdict(BoundaryMap(circle(), plateau_map(kTwoPi, {{1.0, 2.0}})), 1024, grid);
  o.detail << " plateau=" << to_string(pl.verdict);
  o.check(pl.verdict == QcVerdict::NotQc, "plateau");
}

bool witness_checks(const CollisionPair& w) {
  if (!polygons_overlap(w.first_polygon, w.second_polygon)) return false;
  const auto& a = w.first_polygon;
  const auto& b = w.second_polygon;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
    }
  }
  for (const auto& p : a) if (strictly_inside(p, b)) return true;
  for (const auto& p : b) if (strictly_inside(p, a)) return true;
  return false;
}

void c10(Outcome& o, const Scenario& fold) {
  const auto curve = build_curve(fold.curve, fold.curve_samples);
  const BoundaryMap m(curve, make_map(fold.map, curve));
  const auto v = verify_diffeomorphism(m, fold.quadrature_n, fold.grid, fold.tolerances.t_relative);
  bool rechecked = !v.injectivity.witnesses.empty();
  for (const auto& w : v.injectivity.witnesses) rechecked = rechecked && witness_checks(w);
  o.detail << "t_min=" << v.t_min << " verdict=" << to_string(v.verdict) << " collisions=" << v.injectivity.collisions
           << " witnesses rechecked=" << rechecked;
  o.check(v.t_min < -1e-3, "t_min");
  o.check(v.verdict == Verdict::FoldDetected, "verdict");
  o.check(rechecked, "collision pair");

  int folds = 0, runs = 0;
  for (const auto& cm : convex_family()) {
    ++runs;
    folds += verify_diffeomorphism(cm, 1024, PolarGrid{32, 128}).verdict == Verdict::FoldDetected;
  }
  for (const JordanCurve* c : {&circle(), &ellipse()}) {
    ++runs;
    const BoundaryMap pl(*c, plateau_map(c->length(), {{1.0, 2.0}}));
    folds += verify_diffeomorphism(pl, 1024, PolarGrid{32, 128}).verdict == Verdict::FoldDetected;
  }
  o.detail << " convex sweep: " << folds << "/" << runs << " fold-detected";
  o.check(folds == 0, "convex sweep");
}

}  // namespace

int main() {
  const std::string dir = KNESER_SCENARIOS;
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 circle identity calibration", c1},
      {"C2 two-form T agreement", c2},
      {"C3 boundary-interior Jacobian consistency", c3},
      {"C4 Hilbert transform oracle", c4},
      {"C5 convexity positivity", c5},
      {"C6 kernel bound", c6},
      {"C7 integration identity", c7},
      {"C8 mollifier suite", [&](Outcome& o) { c8(o, load_scenario(dir + "/circle_kinked.json")); }},
      {"C9 quasiconformality suite", c9},
      {"C10 fold detection", [&](Outcome& o) { c10(o, load_scenario(dir + "/bean_fold.json")); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    o.detail.precision(3);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.str().c_str());
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
