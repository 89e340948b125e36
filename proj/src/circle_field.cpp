#include "kneser/circle_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "kneser/error.hpp"

namespace kneser {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> coefficients_from_samples(const std::vector<cplx>& samples, bool shifted) {
  const std::size_t n = samples.size();
  const long half = static_cast<long>(n / 2);
  const double delta = shifted ? 0.5 * kTwoPi / static_cast<double>(n) : 0.0;
  auto bins = detail::fft_forward(samples);
  std::vector<cplx> coeffs(n + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (long k = -half + 1; k < half; ++k) {
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    cplx phase = shifted ? std::polar(1.0, -static_cast<double>(k) * delta) : cplx(1.0);
    coeffs[static_cast<std::size_t>(k + half)] = bins[bin] * inv_n * phase;
  }
  const cplx nyq = bins[static_cast<std::size_t>(half)] * inv_n;
  const double hd = static_cast<double>(half) * delta;
  coeffs.front() = 0.5 * nyq * std::polar(1.0, hd);
  coeffs.back() = 0.5 * nyq * std::polar(1.0, -hd);
  return coeffs;
}

std::vector<cplx> samples_from_coefficients(std::span<const cplx> coeffs, std::size_t n, bool shifted) {
  const long half = static_cast<long>(n / 2);
  const long src_half = static_cast<long>((coeffs.size() - 1) / 2);
  const double delta = shifted ? 0.5 * kTwoPi / static_cast<double>(n) : 0.0;
  std::vector<cplx> bins(n, cplx(0.0));
  auto coeff = [&](long k) -> cplx {
    if (k < -src_half || k > src_half) return cplx(0.0);
    return coeffs[static_cast<std::size_t>(k + src_half)];
  };
  for (long k = -half + 1; k < half; ++k) {
    cplx c = coeff(k);
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    bins[bin] = c * (shifted ? std::polar(1.0, static_cast<double>(k) * delta) : cplx(1.0));
  }
  const double hd = static_cast<double>(half) * delta;
  bins[static_cast<std::size_t>(half)] = coeff(half) * std::polar(1.0, hd) + coeff(-half) * std::polar(1.0, -hd);
  return detail::fft_backward(bins);
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

CircleField::CircleField(std::vector<cplx> samples, bool shifted) : samples_(std::move(samples)), shifted_(shifted) {
  if (!is_power_of_two(samples_.size())) {
    throw Error(ErrorCode::InvalidSpec,
                "CircleField needs a power-of-two node count, got " + std::to_string(samples_.size()));
  }
  coeffs_ = coefficients_from_samples(samples_, shifted_);
}

CircleField CircleField::sample(const std::function<cplx(double)>& fn, std::size_t n, bool shifted) {
  if (!is_power_of_two(n)) {
    throw Error(ErrorCode::InvalidSpec, "CircleField needs a power-of-two node count, got " + std::to_string(n));
  }
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<cplx> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = fn((static_cast<double>(k) + (shifted ? 0.5 : 0.0)) * h);
  }
  return CircleField(std::move(values), shifted);
}

CircleField CircleField::from_coefficients(std::span<const cplx> coeffs, std::size_t n, bool shifted) {
  if (!is_power_of_two(n)) {
    throw Error(ErrorCode::InvalidSpec, "CircleField needs a power-of-two node count, got " + std::to_string(n));
  }
  return CircleField(samples_from_coefficients(coeffs, n, shifted), shifted);
}

double CircleField::spacing() const { return kTwoPi / static_cast<double>(samples_.size()); }

double CircleField::node(std::size_t k) const {
  return (static_cast<double>(k) + (shifted_ ? 0.5 : 0.0)) * spacing();
}

cplx CircleField::coefficient(long n) const {
  const long half = static_cast<long>(samples_.size() / 2);
  if (n < -half || n > half) return cplx(0.0);
  return coeffs_[static_cast<std::size_t>(n + half)];
}

cplx CircleField::operator()(double tau) const {
  const long half = static_cast<long>(samples_.size() / 2);
  // Sum c_n e^{i n tau} with a rotating phasor from both ends.
  const cplx step = std::polar(1.0, tau);
  cplx up(1.0), down(1.0);
  cplx acc = coeffs_[static_cast<std::size_t>(half)];
  for (long k = 1; k <= half; ++k) {
    up *= step;
    down = std::conj(up);
    acc += coeffs_[static_cast<std::size_t>(half + k)] * up + coeffs_[static_cast<std::size_t>(half - k)] * down;
  }
  return acc;
}

CircleField CircleField::derivative() const {
  const long half = static_cast<long>(samples_.size() / 2);
  std::vector<cplx> d(coeffs_.size());
  for (long k = -half; k <= half; ++k) {
    d[static_cast<std::size_t>(k + half)] = cplx(0.0, static_cast<double>(k)) * coeffs_[static_cast<std::size_t>(k + half)];
  }
  return from_coefficients(d, samples_.size(), shifted_);
}

CircleField CircleField::resampled(std::size_t n, bool shifted) const {
  if (n == samples_.size() && shifted == shifted_) return *this;
  return from_coefficients(coeffs_, n, shifted);
}

CircleField CircleField::real_part() const {
  std::vector<cplx> v(samples_.size());
  std::transform(samples_.begin(), samples_.end(), v.begin(), [](cplx z) { return cplx(z.real(), 0.0); });
  return CircleField(std::move(v), shifted_);
}

CircleField CircleField::imag_part() const {
  std::vector<cplx> v(samples_.size());
  std::transform(samples_.begin(), samples_.end(), v.begin(), [](cplx z) { return cplx(z.imag(), 0.0); });
  return CircleField(std::move(v), shifted_);
}

double CircleField::max_abs() const {
  double m = 0.0;
  for (const auto& z : samples_) m = std::max(m, std::abs(z));
  return m;
}

double CircleField::min_abs() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : samples_) m = std::min(m, std::abs(z));
  return m;
}

double CircleField::parseval_defect() const {
  const double n = static_cast<double>(samples_.size());
  double lhs = 0.0;
  for (const auto& z : samples_) lhs += std::norm(z);
  lhs /= n;
  const auto bins = detail::fft_forward(samples_);
  double rhs = 0.0;
  for (const auto& b : bins) rhs += std::norm(b / n);
  return std::abs(lhs - rhs);
}

}  // namespace kneser
