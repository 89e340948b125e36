#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kneser/correspondence.hpp"
#include "kneser/poisson.hpp"
#include "support.hpp"

using namespace kneser;
using namespace kneser::test_support;

namespace {
CircleField trig(std::function<cplx(double)> fn, std::size_t n = 64) { return CircleField::sample(fn, n); }

const cplx I(0.0, 1.0);

// A boundary that is not a trig polynomial: ellipse composed with a twist.
const CircleField& ellipse_twist_boundary() {
  static const CircleField f = [] {
    const auto curve = build_curve(CurveSpec::ellipse(2.0, 1.0));
    const BoundaryMap F(curve, twist_map(curve.length(), 0.4, 1, 0.5));
    return F.sample(1024);
  }();
  return f;
}

std::vector<cplx> random_points(std::size_t count, double r_max, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.0, kTwoPi);
  std::vector<cplx> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(std::polar(r_max * std::sqrt(ur(gen)), ut(gen)));
  return out;
}
}  // namespace

TEST(PoissonKernel, ClosedFormValues) {
  for (double t : {0.0, 1.0, 3.0}) EXPECT_NEAR(poisson_kernel(0.0, t), 1.0 / kTwoPi, 1e-16);
  EXPECT_NEAR(poisson_kernel(0.5, 0.0), 3.0 / kTwoPi, 1e-15);
  EXPECT_EQ(code_of([] { poisson_kernel(1.0, 0.3); }), ErrorCode::RadiusOutOfRange);
  EXPECT_EQ(code_of([] { poisson_kernel(-0.1, 0.3); }), ErrorCode::RadiusOutOfRange);
}

TEST(PoissonKernel, UnitMass) {
  // periodic trapezoid; r = 0.99 needs a few thousand nodes
  for (double r : {0.0, 0.5, 0.9, 0.99}) {
    const int n = 8192;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += poisson_kernel(r, kTwoPi * k / n);
    EXPECT_NEAR(sum * kTwoPi / n, 1.0, 1e-10) << r;
  }
}

TEST(Extension, ReproducesSimpleData) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t); }));
  EXPECT_NEAR(std::abs(w.value(0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.value(0.5) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.value(cplx(-0.3, 0.6)) - cplx(-0.3, 0.6)), 0.0, 1e-15);

  const HarmonicExtension c(trig([](double) { return cplx(7, 2); }));
  for (cplx z : {cplx(0, 0), cplx(0.9, 0.1), cplx(-0.2, -0.97)}) EXPECT_NEAR(std::abs(c.value(z) - cplx(7, 2)), 0.0, 1e-14);
}

TEST(Extension, ComplexDerivativesOfLinearMaps) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t); }));
  const HarmonicExtension wb(trig([](double t) { return std::polar(1.0, -t); }));
  for (cplx z : random_points(50, 0.9999, 1)) {
    const auto d = w.derivatives(z);
    EXPECT_NEAR(std::abs(d.w_z - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(d.w_zbar), 0.0, 1e-12);
    EXPECT_NEAR(w.jacobian(z), 1.0, 1e-12);
    const auto e = wb.derivatives(z);
    EXPECT_NEAR(std::abs(e.w_z), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e.w_zbar - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(wb.jacobian(z), -1.0, 1e-12);
  }
}

TEST(Extension, AffineJacobian) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t) + 0.2 * std::polar(1.0, -t); }));
  for (cplx z : random_points(200, 0.99999, 2)) {
    EXPECT_NEAR(w.jacobian(z), 0.96, 1e-12);
    if (std::abs(z) > 1e-3) EXPECT_NEAR(w.jacobian_polar(z), 0.96, 1e-9);
  }
}

TEST(Extension, AngularDerivativeAgainstFiniteDifference) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t) + 0.2 * std::polar(1.0, -t); }));
  const double h = 1e-5;
  for (double r : {0.3, 0.7, 0.95}) {
    for (double tau : {0.2, 2.0, 4.1}) {
      const cplx fd = (w.value(std::polar(r, tau + h)) - w.value(std::polar(r, tau - h))) / (2 * h);
      EXPECT_NEAR(std::abs(w.derivatives(std::polar(r, tau)).w_tau - fd), 0.0, 1e-6);
    }
  }
}

TEST(Extension, PolarAndComplexDerivativesAgree) {
  const HarmonicExtension w(ellipse_twist_boundary());
  double worst_d = 0.0, worst_j = 0.0;
  for (cplx z : random_points(1000, 0.998, 3)) {
    if (std::abs(z) < 1e-3) continue;
    const auto d = w.derivatives(z);
    const cplx e = z / std::abs(z);
    worst_d = std::max(worst_d, std::abs(d.w_tau - I * (z * d.w_z - std::conj(z) * d.w_zbar)));
    worst_d = std::max(worst_d, std::abs(d.w_r - (e * d.w_z + std::conj(e) * d.w_zbar)));
    worst_j = std::max(worst_j, std::abs(w.jacobian(z) - w.jacobian_polar(z)));
  }
  EXPECT_LE(worst_d, 1e-9);
  EXPECT_LE(worst_j, 1e-9);
}

TEST(Extension, MeanValueProperty) {
  const HarmonicExtension w(ellipse_twist_boundary());
  for (cplx z : random_points(40, 0.8, 4)) {
    for (double rho : {0.01, 0.1}) {
      const int m = 256;
      cplx avg = 0.0;
      for (int k = 0; k < m; ++k) avg += w.value(z + std::polar(rho, kTwoPi * k / m));
      EXPECT_NEAR(std::abs(avg / double(m) - w.value(z)), 0.0, 1e-8);
    }
  }
}

TEST(Extension, RingMatchesPointwise) {
  const HarmonicExtension w(ellipse_twist_boundary());
  for (double r : {0.0, 0.5, 0.99, 0.9995}) {
    const std::size_t T = 64;
    const auto ring = w.ring(r, T);
    for (std::size_t j = 0; j < T; ++j) {
      const cplx z = std::polar(r, kTwoPi * j / T);
      const auto d = w.derivatives(z);
      EXPECT_NEAR(std::abs(ring.value[j] - w.value(z)), 0.0, 1e-10) << r << " " << j;
      EXPECT_NEAR(std::abs(ring.w_z[j] - d.w_z), 0.0, 1e-9);
      EXPECT_NEAR(std::abs(ring.w_zbar[j] - d.w_zbar), 0.0, 1e-9);
    }
  }
}

TEST(Extension, BoundaryLimits) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t); }));
  const HarmonicExtension w2(trig([](double t) { return std::polar(1.0, 2 * t); }));
  for (double tau : {0.0, 1.0, 2.5, 5.0}) {
    const cplx e = std::polar(1.0, tau), e2 = std::polar(1.0, 2 * tau);
    auto b = w.boundary_limits(tau);
    EXPECT_NEAR(std::abs(b.w_tau - I * e), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(b.w_r - e), 0.0, 1e-12);
    b = w2.boundary_limits(tau);
    EXPECT_NEAR(std::abs(b.w_tau - 2.0 * I * e2), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(b.w_r - 2.0 * e2), 0.0, 1e-12);
  }
  // interior derivatives approach the limits
  const HarmonicExtension we(ellipse_twist_boundary());
  for (double tau : {0.3, 3.0}) {
    const auto lim = we.boundary_limits(tau);
    const auto near = we.derivatives(std::polar(1.0 - 1e-7, tau));
    EXPECT_NEAR(std::abs(near.w_tau - lim.w_tau), 0.0, 1e-5);
    EXPECT_NEAR(std::abs(near.w_r - lim.w_r), 0.0, 1e-5);
  }
}

TEST(Extension, PlateauBoundaryLimitVanishes) {
  const auto curve = build_curve(CurveSpec::circle(1.0));
  const auto w = HarmonicExtension::from_map(BoundaryMap(curve, plateau_map(kTwoPi, {{1.0, 2.0}})), 1024);
  // exact at the sample nodes; between them the interpolant of a jump rings
  for (std::size_t k = 0; k < 1024; ++k) {
    const double tau = kTwoPi * k / 1024;
    if (tau > 1.0 && tau < 2.0) EXPECT_NEAR(std::abs(w.boundary_limits(tau).w_tau), 0.0, 1e-12);
  }
}

TEST(Extension, OutsideDiskRejected) {
  const HarmonicExtension w(trig([](double t) { return std::polar(1.0, t); }));
  EXPECT_EQ(code_of([&] { w.value(1.0); }), ErrorCode::OutsideDisk);
  EXPECT_EQ(code_of([&] { w.derivatives(cplx(0.8, 0.7)); }), ErrorCode::OutsideDisk);
}

TEST(Hilbert, MultiplierOnTrigPolynomials) {
  const auto h = hilbert_transform(trig([](double t) { return cplx(std::cos(t), 0); }));
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_NEAR(std::abs(h[k] - std::sin(h.node(k))), 0.0, 1e-14);
  const auto c = hilbert_transform(trig([](double) { return cplx(3, -1); }));
  EXPECT_LE(c.max_abs(), 1e-15);

  // H(H chi) = -chi + mean
  const auto chi = trig([](double t) { return cplx(2 + std::cos(3 * t) + 0.5 * std::sin(5 * t), std::cos(t)); });
  const auto hh = hilbert_transform(hilbert_transform(chi));
  for (std::size_t k = 0; k < chi.size(); ++k) EXPECT_NEAR(std::abs(hh[k] + chi[k] - chi.mean()), 0.0, 1e-10);
}

TEST(Hilbert, PrincipalValueMatchesMultiplier) {
  // the defining integral evaluated directly gives sin tau for cos
  for (double tau : {0.0, 0.7, 3.0}) {
    EXPECT_NEAR(std::abs(hilbert_pv([](double t) { return cplx(std::cos(t), 0); }, tau, 64) - std::sin(tau)), 0.0,
                1e-10);
  }
  const auto& chi = ellipse_twist_boundary();
  const auto pv = hilbert_pv(chi);
  const auto mult = hilbert_transform(chi);
  double worst = 0.0;
  for (std::size_t k = 0; k < chi.size(); ++k) worst = std::max(worst, std::abs(pv[k] - mult[k]));
  EXPECT_LE(worst, 1e-6);
}

TEST(Hilbert, ConjugateConsistency) {
  EXPECT_LE(conjugate_consistency(trig([](double t) { return cplx(std::cos(t), 0); })), 1e-10);
  EXPECT_LE(conjugate_consistency(trig([](double) { return cplx(4, 0); })), 1e-15);
  EXPECT_LE(conjugate_consistency(trig([](double t) { return cplx(std::cos(3 * t) + 0.5 * std::sin(5 * t), 0); })),
            1e-9);
}

TEST(Hilbert, SeriesConjugate) {
  // conjugate of P[cos] = Re z is Im z
  const auto chi = trig([](double t) { return cplx(std::cos(t), 0); });
  for (cplx z : random_points(20, 0.99, 5)) EXPECT_NEAR(std::abs(harmonic_conjugate(chi, z) - z.imag()), 0.0, 1e-14);
}
