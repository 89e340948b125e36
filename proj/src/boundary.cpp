#include "kneser/boundary.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "kneser/error.hpp"

namespace kneser {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundSlack = 1e-9;
constexpr std::size_t kSpotChecks = 16;

// sin(beta(b) - beta(a)) for unit tangents a, b.
double sin_turn(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

double kernel_K(cplx g_s, cplx gprime_s, cplx g_t) {
  return (std::conj(g_t - g_s) * cplx(0.0, 1.0) * gprime_s).real();
}

double kernel_K(const JordanCurve& curve, double s, double t) {
  return kernel_K(curve.position(s), curve.tangent(s), curve.position(t));
}

double kernel_KF(const BoundaryMap& map, double t, double tau) {
  const auto& f = map.map();
  return f.derivative(tau) * kernel_K(map.curve(), f.value(tau), f.value(t));
}

double kernel_KF_direct(const BoundaryMap& map, double t, double tau) {
  return kernel_K(map.value(tau), map.derivative(tau), map.value(t));
}

KernelBound kernel_bound_check(const JordanCurve& curve, double s, double t) {
  const double l = curve.length();
  double d = std::fmod(std::abs(s - t), l);
  d = std::min(d, l - d);
  KernelBound out;
  out.abs_kernel = std::abs(kernel_K(curve, s, t));
  out.bound = curve.modulus_integral(d);
  if (out.abs_kernel > out.bound + kBoundSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "|K(" << s << ", " << t << ")| = " << out.abs_kernel << " exceeds the modulus bound " << out.bound;
    throw Error(ErrorCode::BoundViolated, os.str());
  }
  return out;
}

IdentityDefect integration_identity_check(const std::function<double(double)>& omega, double a, double y) {
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidSpec, "upper limit must be positive");
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::tanh_sinh;

  // Dini tail: with x = y e^{-v}, int_delta^y omega(ax)/x dx = int_0^V omega(a y e^{-v}) dv.
  // Successive blocks in v must shrink for the integral to converge.
  const auto tail = [&](double v) { return omega(a * y * std::exp(-v)); };
  const double block = 9.2;
  double blocks[3];
  for (int b = 0; b < 3; ++b) {
    blocks[b] = gauss_kronrod<double, 61>::integrate(tail, b * block, (b + 1) * block, 12, 1e-12);
  }
  const double scale = std::max(1.0, std::abs(blocks[0]));
  if (!std::isfinite(blocks[0] + blocks[1] + blocks[2]) ||
      (std::abs(blocks[2]) > 1e-9 * scale && std::abs(blocks[2]) > 0.5 * std::abs(blocks[1]))) {
    throw Error(ErrorCode::NonDini, "int omega(ax)/x dx does not converge at 0");
  }

  tanh_sinh<double> outer(15), inner(15);
  const double tol = 1e-12;
  IdentityDefect out;
  // int_0^x omega(at) dt = x int_0^1 omega(a x u) du
  out.lhs = outer.integrate(
      [&](double x) {
        if (x <= 0.0) return 0.0;
        return inner.integrate([&](double u) { return omega(a * x * u); }, 0.0, 1.0, tol) / x;
      },
      0.0, y, tol);
  out.rhs = outer.integrate(
      [&](double x) {
        if (x <= 0.0) return 0.0;
        const double w = omega(a * x);
        return w / x - w / y;
      },
      0.0, y, tol);
  if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs)) {
    throw Error(ErrorCode::NonDini, "identity integrals are not finite");
  }
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

std::string to_string(TForm form) { return form == TForm::Singular ? "singular" : "cotangent"; }

double t_operator_singular(const BoundaryMap& map, double tau, std::size_t n) {
  const auto& f = map.map();
  const auto& g = map.curve();
  const double f0 = f.value(tau);
  const cplx g0 = g.position(f0), gp0 = g.tangent(f0);
  const double h = kTwoPi / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -kPi + (static_cast<double>(k) + 0.5) * h;
    const double sn = std::sin(0.5 * u);
    acc += kernel_K(g0, gp0, g.position(f.value(tau + u))) / (2.0 * sn * sn);
  }
  return acc / static_cast<double>(n);
}

double t_operator_cotangent(const BoundaryMap& map, double tau, std::size_t n) {
  const auto& f = map.map();
  const auto& g = map.curve();
  const cplx t0 = g.tangent(f.value(tau));
  const double h = kTwoPi / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -kPi + (static_cast<double>(k) + 0.5) * h;
    const double fp = f.derivative(tau + u);
    if (fp == 0.0) continue;
    acc += fp * sin_turn(t0, g.tangent(f.value(tau + u))) / std::tan(0.5 * u);
  }
  return acc / static_cast<double>(n);
}

double boundary_jacobian(const BoundaryMap& map, double tau, std::size_t n) {
  const double fp = map.map().derivative(tau);
  if (fp == 0.0) return 0.0;
  return fp * t_operator_cotangent(map, tau, n);
}

TOperatorResult t_field(const BoundaryMap& map, std::size_t n, bool spot_checks) {
  if (!is_power_of_two(n) || n < 16) {
    throw Error(ErrorCode::InvalidSpec, "T-field node count must be a power of two >= 16");
  }
  const auto& f = map.map();
  const auto& g = map.curve();
  const double h = kTwoPi / static_cast<double>(n);

  // Data on the half-step grid s_m = (m + 1/2) h and tangents at the nodes.
  std::vector<cplx> a(n), node_tangent(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double s = (static_cast<double>(m) + 0.5) * h;
    a[m] = f.derivative(s) * g.tangent(f.value(s));
    node_tangent[m] = g.tangent(f.value(static_cast<double>(m) * h));
  }
  // S_j = sum_k cot(u_k/2) a_{j + k - n/2}: a circular correlation with the
  // real kernel C_d = cot(u_{d + n/2} / 2).
  std::vector<cplx> c(n);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t k = (d + n / 2) % n;
    const double u = -kPi + (static_cast<double>(k) + 0.5) * h;
    c[d] = 1.0 / std::tan(0.5 * u);
  }
  auto ah = detail::fft_forward(a);
  const auto ch = detail::fft_forward(c);
  for (std::size_t p = 0; p < n; ++p) ah[p] *= std::conj(ch[p]);
  const auto s = detail::fft_backward(ah);

  std::vector<cplx> values(n);
  const double nn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = sin_turn(node_tangent[j], s[j] / nn) / nn;
  }

  TOperatorResult out;
  out.form = TForm::Cotangent;
  out.quadrature_n = n;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double v = values[j].real();
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericalGuard, "non-finite T value");
    if (v < out.min) {
      out.min = v;
      out.argmin = static_cast<double>(j) * h;
    }
    out.max = std::max(out.max, v);
  }
  if (spot_checks) {
    for (std::size_t q = 0; q < kSpotChecks; ++q) {
      const std::size_t j = q * (n / kSpotChecks);
      out.spot_nodes.push_back(j);
      const double sing = t_operator_singular(map, static_cast<double>(j) * h, n);
      out.estimated_error = std::max(out.estimated_error, std::abs(sing - values[j].real()));
    }
  }
  out.values = CircleField(std::move(values));
  return out;
}

std::vector<MollificationStep> t_convergence_under_mollification(const BoundaryMap& map,
                                                                 const std::vector<int>& schedule,
                                                                 std::size_t nodes) {
  require_weak_homeomorphism(map.map());
  const auto reference = t_field(map, nodes, false);
  std::vector<MollificationStep> out;
  for (int n : schedule) {
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "mollification index must be positive");
    const BoundaryMap smoothed(map.curve(), mollify(map.map_ptr(), n));
    const auto field = t_field(smoothed, nodes, false);
    double d = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      d = std::max(d, std::abs(field.values[j].real() - reference.values[j].real()));
    }
    out.push_back({n, d});
  }
  return out;
}

}  // namespace kneser
