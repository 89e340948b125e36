#include "kneser/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "kneser/correspondence.hpp"
#include "kneser/error.hpp"

namespace kneser {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

double poisson_kernel(double r, double t) {
  if (!(r >= 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "poisson_kernel: radius " << r << " outside [0, 1)";
    throw Error(ErrorCode::RadiusOutOfRange, os.str());
  }
  return (1.0 - r * r) / (kTwoPi * (1.0 - 2.0 * r * std::cos(t) + r * r));
}

CircleField hilbert_transform(const CircleField& chi) {
  const long half = static_cast<long>(chi.size() / 2);
  std::vector<cplx> c(chi.coefficients().begin(), chi.coefficients().end());
  for (long k = -half; k <= half; ++k) {
    auto& ck = c[static_cast<std::size_t>(k + half)];
    if (k > 0) {
      ck *= -kI;
    } else if (k < 0) {
      ck *= kI;
    } else {
      ck = 0.0;
    }
  }
  return CircleField::from_coefficients(c, chi.size(), chi.shifted());
}

cplx hilbert_pv(const std::function<cplx(double)>& chi, double tau, std::size_t n) {
  const double h = kTwoPi / static_cast<double>(n);
  cplx acc(0.0);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * h;
    acc += (chi(tau + t) - chi(tau - t)) / (2.0 * std::tan(0.5 * t));
  }
  return -acc * h / kPi;
}

CircleField hilbert_pv(const CircleField& chi) {
  const std::size_t n = chi.size();
  const double h = chi.spacing();
  const CircleField other = chi.resampled(n, !chi.shifted());
  const auto s = other.samples();
  std::vector<double> weight(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) weight[k] = 1.0 / (2.0 * std::tan(0.5 * (static_cast<double>(k) + 0.5) * h));
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc(0.0);
    for (std::size_t k = 0; k < n / 2; ++k) {
      std::size_t plus, minus;
      if (!chi.shifted()) {
        // tau_j + t_k = (j + k + 1/2) h, tau_j - t_k = (j - k - 1 + 1/2) h
        plus = (j + k) % n;
        minus = (j + n - k - 1) % n;
      } else {
        // tau_j + t_k = (j + k + 1) h, tau_j - t_k = (j - k) h
        plus = (j + k + 1) % n;
        minus = (j + n - k) % n;
      }
      acc += (s[plus] - s[minus]) * weight[k];
    }
    out[j] = -acc * h / kPi;
  }
  return CircleField(std::move(out), chi.shifted());
}

cplx harmonic_conjugate(const CircleField& chi, cplx z) {
  const long half = static_cast<long>(chi.size() / 2);
  cplx pos(0.0), neg(0.0);
  const cplx zb = std::conj(z);
  for (long k = half; k >= 1; --k) {
    pos = pos * z + chi.coefficient(k);
    neg = neg * zb + chi.coefficient(-k);
  }
  return -kI * pos * z + kI * neg * zb;
}

double conjugate_consistency(const CircleField& chi) {
  const HarmonicExtension conj_ext(hilbert_pv(chi), 1.0);
  double defect = 0.0;
  for (double r : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    for (int j = 0; j < 32; ++j) {
      const cplx z = std::polar(r, kTwoPi * j / 32.0);
      defect = std::max(defect, std::abs(conj_ext.value(z) - harmonic_conjugate(chi, z)));
    }
  }
  return defect;
}

HarmonicExtension::HarmonicExtension(CircleField boundary, double boundary_switch)
    : boundary_(std::move(boundary)), switch_(boundary_switch) {
  derivative_ = boundary_.derivative();
  hilbert_ = hilbert_transform(derivative_);
}

HarmonicExtension::HarmonicExtension(CircleField boundary, CircleField boundary_derivative, double boundary_switch)
    : boundary_(std::move(boundary)), derivative_(std::move(boundary_derivative)), switch_(boundary_switch) {
  if (derivative_.size() != boundary_.size() || derivative_.shifted() != boundary_.shifted()) {
    throw Error(ErrorCode::InvalidSpec, "boundary derivative must share the boundary's nodes");
  }
  hilbert_ = hilbert_transform(derivative_);
}

HarmonicExtension HarmonicExtension::from_map(const BoundaryMap& map, std::size_t n, double boundary_switch) {
  return HarmonicExtension(map.sample(n), map.sample_derivative(n), boundary_switch);
}

void HarmonicExtension::check(cplx z) const {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream os;
    os << "point " << z << " is outside the open unit disk";
    throw Error(ErrorCode::OutsideDisk, os.str());
  }
}

cplx HarmonicExtension::series_value(cplx z) const {
  const long half = static_cast<long>(boundary_.size() / 2);
  cplx pos(0.0), neg(0.0);
  const cplx zb = std::conj(z);
  for (long k = half; k >= 1; --k) {
    pos = pos * z + boundary_.coefficient(k);
    neg = neg * zb + boundary_.coefficient(-k);
  }
  return boundary_.coefficient(0) + pos * z + neg * zb;
}

Derivatives HarmonicExtension::series_derivatives(cplx z) const {
  const long half = static_cast<long>(boundary_.size() / 2);
  const cplx zb = std::conj(z);
  // Horner for h'(z) = sum n c_n z^{n-1} and q'(zb) = sum m c_{-m} zb^{m-1}.
  cplx hp(0.0), qp(0.0);
  for (long k = half; k >= 1; --k) {
    hp = hp * z + static_cast<double>(k) * boundary_.coefficient(k);
    qp = qp * zb + static_cast<double>(k) * boundary_.coefficient(-k);
  }
  Derivatives d;
  d.w_z = hp;
  d.w_zbar = qp;
  // Polar derivatives summed directly from r^|n| e^{i n tau}.
  const double r = std::abs(z);
  const double tau = r > 0.0 ? std::arg(z) : 0.0;
  cplx wt(0.0), wr(0.0);
  const cplx e = std::polar(1.0, tau);
  cplx pz(1.0), pzb(1.0);  // r^{k-1} e^{i(k-1)tau} and its conjugate
  for (long k = 1; k <= half; ++k) {
    const double kk = static_cast<double>(k);
    const cplx cp = boundary_.coefficient(k), cm = boundary_.coefficient(-k);
    const cplx up = pz * e;          // r^{k-1} e^{ik tau}
    const cplx dn = pzb * std::conj(e);  // r^{k-1} e^{-ik tau}
    wr += kk * (cp * up + cm * dn);
    wt += kI * kk * r * (cp * up - cm * dn);
    pz *= z;
    pzb *= zb;
  }
  d.w_r = wr;
  d.w_tau = wt;
  return d;
}

cplx HarmonicExtension::value(cplx z) const {
  check(z);
  const double r = std::abs(z);
  const cplx series = series_value(z);
  if (r <= switch_) return series;
  const double lambda = (r - switch_) / (1.0 - switch_);
  const double tau = std::arg(z);
  const cplx edge = boundary_(tau) - (1.0 - r) * hilbert_(tau);
  return (1.0 - lambda) * series + lambda * edge;
}

Derivatives HarmonicExtension::derivatives(cplx z) const {
  check(z);
  const double r = std::abs(z);
  Derivatives d = series_derivatives(z);
  if (r <= switch_) return d;
  const double lambda = (r - switch_) / (1.0 - switch_);
  const double tau = std::arg(z);
  d.w_tau = (1.0 - lambda) * d.w_tau + lambda * r * derivative_(tau);
  d.w_r = (1.0 - lambda) * d.w_r + lambda * hilbert_(tau);
  const cplx e = std::polar(1.0, tau);
  d.w_z = std::conj(e) * (r * d.w_r - kI * d.w_tau) / (2.0 * r);
  d.w_zbar = e * (r * d.w_r + kI * d.w_tau) / (2.0 * r);
  return d;
}

double HarmonicExtension::jacobian(cplx z) const {
  const Derivatives d = derivatives(z);
  return std::norm(d.w_z) - std::norm(d.w_zbar);
}

double HarmonicExtension::jacobian_polar(cplx z) const {
  const Derivatives d = derivatives(z);
  const double r = std::abs(z);
  if (r == 0.0) return std::norm(d.w_z) - std::norm(d.w_zbar);
  return (d.w_tau * std::conj(d.w_r)).imag() / r;
}

HarmonicExtension::Ring HarmonicExtension::ring(double r, std::size_t angular) const {
  check(cplx(r, 0.0));
  Ring out;
  if (r > switch_ || angular == 0) {
    for (std::size_t j = 0; j < angular; ++j) {
      const cplx z = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(angular));
      const Derivatives d = derivatives(z);
      out.value.push_back(value(z));
      out.w_z.push_back(d.w_z);
      out.w_zbar.push_back(d.w_zbar);
    }
    return out;
  }
  const long half = static_cast<long>(boundary_.size() / 2);
  const long m = static_cast<long>(angular);
  const auto bin = [m](long k) { return static_cast<std::size_t>(((k % m) + m) % m); };
  std::vector<cplx> v(angular), wz(angular), wzb(angular);
  v[0] += boundary_.coefficient(0);
  double rk = 1.0;  // r^{k-1}
  for (long k = 1; k <= half; ++k) {
    const double kk = static_cast<double>(k);
    v[bin(k)] += boundary_.coefficient(k) * rk * r;
    v[bin(-k)] += boundary_.coefficient(-k) * rk * r;
    wz[bin(k - 1)] += kk * boundary_.coefficient(k) * rk;
    wzb[bin(1 - k)] += kk * boundary_.coefficient(-k) * rk;
    rk *= r;
  }
  out.value = detail::fft_backward(v);
  out.w_z = detail::fft_backward(wz);
  out.w_zbar = detail::fft_backward(wzb);
  return out;
}

BoundaryLimits HarmonicExtension::boundary_limits(double tau) const { return {derivative_(tau), hilbert_(tau)}; }

}  // namespace kneser
