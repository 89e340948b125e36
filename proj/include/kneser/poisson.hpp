#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "kneser/circle_field.hpp"

namespace kneser {

class BoundaryMap;

// P(r, t) = (1 - r^2) / (2pi (1 - 2r cos t + r^2)), 0 <= r < 1.
double poisson_kernel(double r, double t);

// Conjugate function by the Fourier multiplier -i sgn(n): H(cos nt) = sin nt,
// constants go to zero.
CircleField hilbert_transform(const CircleField& chi);

// The defining principal-value integral
//   H(chi)(tau) = -(1/pi) int_{0+}^{pi} (chi(tau + t) - chi(tau - t)) / (2 tan(t/2)) dt
// by the midpoint rule on t_k = (k + 1/2) 2pi/n, which never touches t = 0.
cplx hilbert_pv(const std::function<cplx(double)>& chi, double tau, std::size_t n);
// Same quadrature at every node of chi, reading chi on the half-step grid.
CircleField hilbert_pv(const CircleField& chi);

// Harmonic conjugate of P[chi] from the series: c_n r^|n| -> -i sgn(n) c_n r^|n|.
cplx harmonic_conjugate(const CircleField& chi, cplx z);

// max over a polar test grid of |P[H chi](z) - conj(P[chi])(z)|, with H chi
// taken from the principal-value quadrature.
double conjugate_consistency(const CircleField& chi);

struct Derivatives {
  cplx w_z;
  cplx w_zbar;
  cplx w_r;
  cplx w_tau;
};

struct BoundaryLimits {
  cplx w_tau;  // F'(tau)
  cplx w_r;    // H(F')(tau)
};

// w = P[F] for boundary samples F. Inside |z| <= r* the Poisson integral of
// the band-limited interpolant is summed exactly as
//   w(z) = sum_{n >= 0} c_n z^n + sum_{m >= 1} c_{-m} conj(z)^m.
// Beyond r* the series is blended linearly (in r) with the radial boundary
// limits w_tau -> F', w_r -> H(F').
class HarmonicExtension {
 public:
  static constexpr double kDefaultSwitch = 0.999;

  explicit HarmonicExtension(CircleField boundary, double boundary_switch = kDefaultSwitch);
  // With exact samples of F' on the same nodes (preferred for kinked data).
  HarmonicExtension(CircleField boundary, CircleField boundary_derivative, double boundary_switch = kDefaultSwitch);

  static HarmonicExtension from_map(const BoundaryMap& map, std::size_t n, double boundary_switch = kDefaultSwitch);

  cplx value(cplx z) const;
  Derivatives derivatives(cplx z) const;
  // |w_z|^2 - |w_zbar|^2.
  double jacobian(cplx z) const;
  // (1/r) Im(w_tau conj(w_r)); equal to jacobian() for z != 0.
  double jacobian_polar(cplx z) const;
  // Exact at the quadrature nodes; band-limited interpolation in between.
  BoundaryLimits boundary_limits(double tau) const;

  struct Ring {
    std::vector<cplx> value;
    std::vector<cplx> w_z;
    std::vector<cplx> w_zbar;
  };
  // Values and complex derivatives at r e^{2pi i j / angular}, j < angular,
  // by aliasing the series onto an FFT of length angular.
  Ring ring(double r, std::size_t angular) const;

  const CircleField& boundary() const { return boundary_; }
  const CircleField& boundary_derivative() const { return derivative_; }
  const CircleField& hilbert_derivative() const { return hilbert_; }
  std::size_t quadrature_nodes() const { return boundary_.size(); }
  double boundary_switch() const { return switch_; }

 private:
  void check(cplx z) const;
  cplx series_value(cplx z) const;
  Derivatives series_derivatives(cplx z) const;

  CircleField boundary_;
  CircleField derivative_;
  CircleField hilbert_;
  double switch_;
};

}  // namespace kneser
