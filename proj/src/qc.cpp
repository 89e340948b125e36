#include "kneser/qc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kneser/error.hpp"

namespace kneser {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

cplx boundary_wz(double tau, cplx fprime, cplx hfprime) {
  return std::polar(1.0, -tau) * (hfprime - kI * fprime) / 2.0;
}

cplx boundary_wzbar(double tau, cplx fprime, cplx hfprime) {
  return std::polar(1.0, tau) * (hfprime + kI * fprime) / 2.0;
}

BoundaryNorms boundary_norms(const BoundaryMap& map, std::size_t n) {
  if (n < 256) throw Error(ErrorCode::InvalidSpec, "boundary norms need at least 256 nodes");
  const CircleField fp = map.sample_derivative(n);
  const CircleField hfp = hilbert_transform(fp);
  BoundaryNorms out;
  out.n = n;
  out.l_f = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = fp.node(k);
    const cplx wz = boundary_wz(tau, fp[k], hfp[k]);
    const cplx wzb = boundary_wzbar(tau, fp[k], hfp[k]);
    out.sup_fprime = std::max(out.sup_fprime, std::abs(fp[k]));
    out.sup_hfprime = std::max(out.sup_hfprime, std::abs(hfp[k]));
    // signed: negative where the boundary Jacobian is negative
    const double l = std::abs(wz) - std::abs(wzb);
    if (l < out.l_f) {
      out.l_f = l;
      out.argmin_l = tau;
    }
    const double mu = std::abs(wz) > 0.0 ? std::abs(wzb) / std::abs(wz) : 1.0;
    out.max_mu = std::max(out.max_mu, mu);
  }
  return out;
}

RefinedNorms refine_boundary_norms(const BoundaryMap& map, std::size_t n0, double tol, std::size_t n_max) {
  RefinedNorms out;
  BoundaryNorms prev = boundary_norms(map, n0);
  out.trail.push_back({prev.n, prev.sup_fprime, prev.sup_hfprime, prev.l_f});
  std::size_t n = n0;
  while (n * 2 <= n_max) {
    n *= 2;
    const BoundaryNorms next = boundary_norms(map, n);
    out.trail.push_back({next.n, next.sup_fprime, next.sup_hfprime, next.l_f});
    const bool settled = std::abs(next.sup_fprime - prev.sup_fprime) < tol &&
                         std::abs(next.sup_hfprime - prev.sup_hfprime) < tol && std::abs(next.l_f - prev.l_f) < tol;
    prev = next;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.norms = prev;
  if (!out.converged && out.trail.size() >= 4) {
    // Steady growth under doubling (a log singularity grows by a fixed step).
    const auto growing = [&](auto field) {
      const std::size_t m = out.trail.size();
      const double d1 = field(out.trail[m - 3]) - field(out.trail[m - 4]);
      const double d2 = field(out.trail[m - 2]) - field(out.trail[m - 3]);
      const double d3 = field(out.trail[m - 1]) - field(out.trail[m - 2]);
      return d1 > 10.0 * tol && d2 > 10.0 * tol && d3 > 10.0 * tol && d3 > 0.7 * d2 && d2 > 0.7 * d1;
    };
    out.hilbert_unbounded = growing([](const RefinementStep& s) { return s.sup_hfprime; });
    out.fprime_unbounded = growing([](const RefinementStep& s) { return s.sup_fprime; });
  }
  return out;
}

void require_nondegenerate(const BoundaryNorms& norms, double threshold) {
  if (norms.l_f <= threshold) {
    std::ostringstream os;
    os << "l(F) = " << norms.l_f << " at tau = " << norms.argmin_l << " (threshold " << threshold << ")";
    throw Error(ErrorCode::DegenerateBoundary, os.str());
  }
}

double composite_s(double sup_fprime, double sup_hfprime, double l_f) {
  if (!(l_f > 0.0)) throw Error(ErrorCode::ZeroLowerBound, "S needs l(F) > 0");
  return (sup_fprime * sup_fprime + sup_hfprime * sup_hfprime) / (2.0 * l_f * l_f);
}

double qc_constant(double sup_fprime, double sup_hfprime, double l_f) {
  if (!(l_f > 0.0)) throw Error(ErrorCode::ZeroLowerBound, "K needs l(F) > 0");
  const double radicand = sup_fprime * sup_fprime + sup_hfprime * sup_hfprime - l_f * l_f;
  return std::sqrt(std::max(radicand, 0.0)) / l_f;
}

double mu_bound(double s) {
  if (!(s >= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "S = " << s << " is below 1";
    throw Error(ErrorCode::SBelowOne, os.str());
  }
  return (s - 1.0) / (s + std::sqrt(2.0 * s - 1.0));
}

double PolarGrid::angle(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(angular); }

DilatationField dilatation_field(const HarmonicExtension& w, const PolarGrid& grid) {
  DilatationField out;
  out.grid = grid;
  out.mu.resize(grid.radial * grid.angular);
  std::vector<double> wz_abs(out.mu.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.radial; ++i) {
    for (std::size_t j = 0; j < grid.angular; ++j) {
      const cplx z = std::polar(grid.radius(i), grid.angle(j));
      const Derivatives d = w.derivatives(z);
      const std::size_t idx = i * grid.angular + j;
      wz_abs[idx] = std::abs(d.w_z);
      scale = std::max({scale, std::abs(d.w_z), std::abs(d.w_zbar)});
      out.mu[idx] = std::abs(d.w_zbar);
    }
  }
  out.max = 0.0;
  for (std::size_t idx = 0; idx < out.mu.size(); ++idx) {
    if (!(wz_abs[idx] > 1e-13 * scale)) {
      std::ostringstream os;
      const std::size_t i = idx / grid.angular, j = idx % grid.angular;
      os << "w_z vanishes at r = " << grid.radius(i) << ", tau = " << grid.angle(j);
      throw Error(ErrorCode::VanishingDerivative, os.str());
    }
    out.mu[idx] /= wz_abs[idx];
    if (out.mu[idx] > out.max || idx == 0) {
      out.max = out.mu[idx];
      out.argmax = std::polar(grid.radius(idx / grid.angular), grid.angle(idx % grid.angular));
    }
  }
  return out;
}

std::string to_string(QcVerdict verdict) {
  switch (verdict) {
    case QcVerdict::Qc:
      return "qc";
    case QcVerdict::NotQc:
      return "not-qc";
    case QcVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

QcReport qc_verdict(const BoundaryMap& map, std::size_t n, const PolarGrid& grid, const QcTolerances& tol) {
  QcReport rep;
  rep.grid = grid;
  rep.c2_declared = map.curve().c2_declared();
  rep.alpha = map.curve().alpha();

  const RefinedNorms refined = refine_boundary_norms(map, n, tol.refine);
  const BoundaryNorms& b = refined.norms;
  rep.n = b.n;
  rep.trail = refined.trail;
  rep.refinement_converged = refined.converged;
  rep.sup_fprime = b.sup_fprime;
  rep.sup_hfprime = b.sup_hfprime;
  rep.l_f = b.l_f;
  rep.mu_max_boundary = b.max_mu;

  if (!rep.c2_declared) rep.notes.push_back("curve not declared C^2: only the sufficiency direction applies");
  if (refined.fprime_unbounded) rep.notes.push_back("sup |F'| grows under refinement");
  if (refined.hilbert_unbounded) rep.notes.push_back("sup |H(F')| grows under refinement");
  if (!refined.converged) rep.notes.push_back("boundary extrema did not settle within the refinement cap");
  if (b.l_f < -tol.not_qc) rep.notes.push_back("|w_zbar| > |w_z| on the boundary: w is not sense-preserving");

  if (b.l_f <= tol.not_qc || refined.fprime_unbounded || refined.hilbert_unbounded) {
    rep.verdict = QcVerdict::NotQc;
  } else if (b.l_f < tol.inconclusive || !refined.converged) {
    rep.verdict = QcVerdict::Inconclusive;
  } else {
    rep.verdict = QcVerdict::Qc;
  }

  if (b.l_f > 0.0) {
    double s = composite_s(b.sup_fprime, b.sup_hfprime, b.l_f);
    // Rounding can leave S a few ulps under 1 for isometric data.
    if (s < 1.0 && s > 1.0 - 1e-12) s = 1.0;
    rep.s = s;
    rep.k_estimate = qc_constant(b.sup_fprime, b.sup_hfprime, b.l_f);
    rep.k_from_s = std::sqrt(2.0 * s - 1.0);
    rep.mu_bound = mu_bound(s);
  }

  const HarmonicExtension w = HarmonicExtension::from_map(map, n);
  try {
    rep.mu_max_interior = dilatation_field(w, grid).max;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::VanishingDerivative || rep.verdict != QcVerdict::NotQc) throw;
    rep.mu_max_interior = std::numeric_limits<double>::infinity();
    rep.notes.push_back("w_z vanishes on the interior grid");
  }
  if (rep.verdict == QcVerdict::Qc && rep.mu_bound && rep.mu_max_interior > *rep.mu_bound + tol.mu_slack) {
    std::ostringstream os;
    os.precision(17);
    os << "interior dilatation " << rep.mu_max_interior << " exceeds the bound " << *rep.mu_bound;
    rep.guards.push_back(os.str());
  }
  return rep;
}

}  // namespace kneser
