#include "kneser/curve.hpp"

// pchip.hpp in Boost 1.74 calls isnan unqualified.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "kneser/boundary.hpp"
#include "kneser/error.hpp"

namespace kneser {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

namespace detail {

struct NativeCurve {
  virtual ~NativeCurve() = default;
  virtual cplx position(double theta) const = 0;
  virtual cplx derivative(double theta) const = 0;
};

struct ArcLengthInverse {
  boost::math::interpolators::pchip<std::vector<double>> theta_of_s;
};

namespace {

struct CircleCurve final : NativeCurve {
  cplx center;
  double radius;
  CircleCurve(cplx c, double r) : center(c), radius(r) {}
  cplx position(double t) const override { return center + std::polar(radius, t); }
  cplx derivative(double t) const override { return cplx(0.0, 1.0) * std::polar(radius, t); }
};

struct EllipseCurve final : NativeCurve {
  double a, b;
  EllipseCurve(double a_, double b_) : a(a_), b(b_) {}
  cplx position(double t) const override { return {a * std::cos(t), b * std::sin(t)}; }
  cplx derivative(double t) const override { return {-a * std::sin(t), b * std::cos(t)}; }
};

struct PolarCurve final : NativeCurve {
  std::vector<double> c;  // a0, a1, b1, a2, b2, ...
  explicit PolarCurve(std::vector<double> coeffs) : c(std::move(coeffs)) {}
  void radius(double t, double& r, double& dr) const {
    r = c.empty() ? 0.0 : c[0];
    dr = 0.0;
    for (std::size_t i = 1; i + 1 <= c.size(); i += 2) {
      const double k = static_cast<double>((i + 1) / 2);
      const double ak = c[i];
      const double bk = i + 1 < c.size() ? c[i + 1] : 0.0;
      r += ak * std::cos(k * t) + bk * std::sin(k * t);
      dr += k * (-ak * std::sin(k * t) + bk * std::cos(k * t));
    }
  }
  cplx position(double t) const override {
    double r, dr;
    radius(t, r, dr);
    return std::polar(r, t);
  }
  cplx derivative(double t) const override {
    double r, dr;
    radius(t, r, dr);
    return cplx(dr, r) * std::polar(1.0, t);
  }
};

struct FourierCurve final : NativeCurve {
  std::vector<FourierTerm> terms;
  explicit FourierCurve(std::vector<FourierTerm> t) : terms(std::move(t)) {}
  cplx position(double t) const override {
    cplx acc(0.0);
    for (const auto& term : terms) acc += term.c * std::polar(1.0, term.k * t);
    return acc;
  }
  cplx derivative(double t) const override {
    cplx acc(0.0);
    for (const auto& term : terms) acc += cplx(0.0, term.k) * term.c * std::polar(1.0, term.k * t);
    return acc;
  }
};

std::vector<FourierTerm> interpolating_terms(const std::vector<cplx>& points) {
  const std::size_t m = points.size();
  const auto bins = fft_forward(points);
  const long half = static_cast<long>(m / 2);
  std::vector<FourierTerm> terms;
  const double inv = 1.0 / static_cast<double>(m);
  for (long k = -half; k <= half; ++k) {
    if (m % 2 == 0 && (k == half || k == -half)) {
      terms.push_back({static_cast<int>(k), 0.5 * bins[static_cast<std::size_t>(half)] * inv});
      continue;
    }
    if (m % 2 == 1 && (k == half + 1)) continue;
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m));
    terms.push_back({static_cast<int>(k), bins[bin] * inv});
  }
  return terms;
}

std::shared_ptr<const NativeCurve> make_native(const CurveSpec& spec) {
  auto need = [&](std::size_t n, const char* what) {
    if (spec.parameters.size() < n) throw Error(ErrorCode::InvalidSpec, std::string(what));
  };
  switch (spec.kind) {
    case CurveKind::Circle: {
      need(1, "circle needs a radius");
      const double r = spec.parameters[0];
      if (!(r > 0.0)) throw Error(ErrorCode::InvalidSpec, "circle radius must be positive");
      cplx c = spec.parameters.size() >= 3 ? cplx(spec.parameters[1], spec.parameters[2]) : cplx(0.0);
      return std::make_shared<CircleCurve>(c, r);
    }
    case CurveKind::Ellipse: {
      need(2, "ellipse needs semi-axes a, b");
      const double a = spec.parameters[0], b = spec.parameters[1];
      if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidSpec, "ellipse semi-axes must be positive");
      return std::make_shared<EllipseCurve>(a, b);
    }
    case CurveKind::PolarGraph:
      need(1, "polar-graph needs coefficients");
      return std::make_shared<PolarCurve>(spec.parameters);
    case CurveKind::FourierCoefficients:
      if (spec.terms.empty()) throw Error(ErrorCode::InvalidSpec, "fourier-coefficients needs terms");
      return std::make_shared<FourierCurve>(spec.terms);
    case CurveKind::SampleTable:
      if (spec.points.size() < 8) throw Error(ErrorCode::InvalidSpec, "sample-table needs at least 8 points");
      return std::make_shared<FourierCurve>(interpolating_terms(spec.points));
  }
  throw Error(ErrorCode::InvalidSpec, "unknown curve kind");
}

double orient(cplx a, cplx b, cplx c) { return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real()); }

bool on_segment(cplx a, cplx b, cplx p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_touch(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

// Sweep over x-extents of the closed polygon's edges; adjacent edges share a
// vertex and are skipped.
bool polygon_self_intersects(const std::vector<cplx>& poly) {
  const std::size_t m = poly.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto lo = [&](std::size_t i) { return std::min(poly[i].real(), poly[(i + 1) % m].real()); };
  auto hi = [&](std::size_t i) { return std::max(poly[i].real(), poly[(i + 1) % m].real()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo(a) < lo(b); });
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const double x = lo(idx);
    std::erase_if(active, [&](std::size_t j) { return hi(j) < x; });
    for (std::size_t j : active) {
      const std::size_t d = idx > j ? idx - j : j - idx;
      if (d == 1 || d == m - 1) continue;
      if (segments_touch(poly[idx], poly[(idx + 1) % m], poly[j], poly[(j + 1) % m])) return true;
    }
    active.push_back(idx);
  }
  return false;
}

}  // namespace
}  // namespace detail

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    case CurveKind::PolarGraph: return "polar-graph";
    case CurveKind::FourierCoefficients: return "fourier-coefficients";
    case CurveKind::SampleTable: return "sample-table";
  }
  return "unknown";
}

CurveSpec CurveSpec::circle(double radius, cplx center) {
  CurveSpec s;
  s.kind = CurveKind::Circle;
  s.parameters = {radius, center.real(), center.imag()};
  return s;
}

CurveSpec CurveSpec::ellipse(double a, double b) {
  CurveSpec s;
  s.kind = CurveKind::Ellipse;
  s.parameters = {a, b};
  return s;
}

CurveSpec CurveSpec::polar_graph(std::vector<double> coefficients) {
  CurveSpec s;
  s.kind = CurveKind::PolarGraph;
  s.parameters = std::move(coefficients);
  return s;
}

CurveSpec CurveSpec::fourier(std::vector<FourierTerm> terms) {
  CurveSpec s;
  s.kind = CurveKind::FourierCoefficients;
  s.terms = std::move(terms);
  return s;
}

CurveSpec CurveSpec::sample_table(std::vector<cplx> points) {
  CurveSpec s;
  s.kind = CurveKind::SampleTable;
  s.points = std::move(points);
  return s;
}

CurveSpec CurveSpec::bean() { return polar_graph({1.0, 0.0, 0.0, 0.6, 0.0}); }

cplx JordanCurve::native_position(double theta) const {
  return reversed_ ? native_->position(-theta) : native_->position(theta);
}

cplx JordanCurve::native_derivative(double theta) const {
  return reversed_ ? -native_->derivative(-theta) : native_->derivative(theta);
}

double JordanCurve::native_speed(double theta) const { return std::abs(native_derivative(theta)); }

double JordanCurve::arclength_at(double theta) const {
  const double a0 = speed_coeffs_[0].real();
  double s = a0 * theta;
  const cplx step = std::polar(1.0, theta);
  cplx ph(1.0);
  for (std::size_t k = 1; k < speed_coeffs_.size(); ++k) {
    ph *= step;
    s += 2.0 * (speed_coeffs_[k] * (ph - 1.0) / cplx(0.0, static_cast<double>(k))).real();
  }
  return s;
}

double JordanCurve::reduce(double s) const {
  double r = s - std::floor(s / length_) * length_;
  if (r >= length_) r -= length_;
  if (r < 0.0) r = 0.0;
  return r;
}

double JordanCurve::theta_of(double s) const {
  const double target = reduce(s);
  double theta = inverse_->theta_of_s(target);
  for (int it = 0; it < 4; ++it) {
    const double step = (arclength_at(theta) - target) / native_speed(theta);
    theta -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return theta;
}

double JordanCurve::native_parameter(double s) const {
  const double turns = std::floor(s / length_);
  return theta_of(s) + kTwoPi * turns;
}

cplx JordanCurve::position(double s) const { return native_position(theta_of(s)); }

cplx JordanCurve::tangent(double s) const {
  const cplx d = native_derivative(theta_of(s));
  return d / std::abs(d);
}

double JordanCurve::tangent_angle(double s) const {
  const double turns = std::floor(s / length_);
  const double s0 = reduce(s);
  const double h = grid_spacing();
  const std::size_t n = beta_.size();
  std::size_t j = static_cast<std::size_t>(std::lround(s0 / h));
  double ref = j >= n ? beta_[0] + kTwoPi * rotation_index_ : beta_[j];
  const double a = std::arg(tangent(s0));
  const double beta = ref + std::remainder(a - ref, kTwoPi);
  return beta + kTwoPi * rotation_index_ * turns;
}

double JordanCurve::modulus_of_continuity(double rho) const {
  if (rho < 0.0 || rho > length_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "modulus_of_continuity: rho outside [0, l]");
  }
  const auto lag = static_cast<std::size_t>(std::floor(rho / grid_spacing() + 1e-9));
  return omega_lag_[std::min(lag, omega_lag_.size() - 1)];
}

double JordanCurve::modulus_upper(double rho) const {
  if (rho < 0.0 || rho > length_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "modulus_upper: rho outside [0, l]");
  }
  const auto lag = static_cast<std::size_t>(std::ceil(rho / grid_spacing() - 1e-9));
  return omega_lag_[std::min(lag, omega_lag_.size() - 1)];
}

double JordanCurve::modulus_integral(double sigma) const {
  if (sigma <= 0.0) return 0.0;
  const double h = grid_spacing();
  const std::size_t last = omega_lag_.size() - 1;
  const auto m = static_cast<std::size_t>(std::floor(sigma / h));
  if (m >= last) return omega_prefix_[last] + (sigma - static_cast<double>(last) * h) * omega_lag_[last];
  return omega_prefix_[m] + (sigma - static_cast<double>(m) * h) * omega_lag_[m + 1];
}

JordanCurve build_curve(const CurveSpec& spec, std::size_t n_samples) {
  if (n_samples < 64) throw Error(ErrorCode::TooFewSamples, "build_curve needs n_samples >= 64");

  JordanCurve curve;
  curve.spec_ = spec;
  curve.native_ = detail::make_native(spec);

  // Dense polygonal proxy in the native parameter.
  const std::size_t dense = 4 * n_samples;
  std::vector<cplx> poly(dense);
  double min_speed = std::numeric_limits<double>::infinity();
  double area2 = 0.0;
  for (std::size_t j = 0; j < dense; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(dense);
    poly[j] = curve.native_->position(t);
    min_speed = std::min(min_speed, std::abs(curve.native_->derivative(t)));
  }
  for (std::size_t j = 0; j < dense; ++j) {
    const cplx a = poly[j], b = poly[(j + 1) % dense];
    area2 += a.real() * b.imag() - b.real() * a.imag();
  }
  if (!(min_speed > 1e-12)) {
    throw Error(ErrorCode::DegenerateTangent, "native parameterization has vanishing derivative");
  }
  if (detail::polygon_self_intersects(poly)) {
    throw Error(ErrorCode::SelfIntersecting, "curve trace self-intersects");
  }
  curve.reversed_ = area2 < 0.0;

  // Spectral arc-length function: Fourier series of |gamma'| integrated
  // term by term, refined until the tail is negligible.
  std::size_t m = 1024;
  while (m < 4 * n_samples) m *= 2;
  std::vector<cplx> bins;
  for (;; m *= 2) {
    std::vector<cplx> speed(m);
    for (std::size_t j = 0; j < m; ++j) {
      speed[j] = curve.native_speed(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
    }
    bins = detail::fft_forward(speed);
    const double a0 = bins[0].real();
    double tail = 0.0;
    for (std::size_t k = m / 4; k < m / 2; ++k) tail = std::max(tail, std::abs(bins[k]));
    if (tail <= 1e-14 * a0 || m >= (1u << 18)) break;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  std::size_t keep = 1;
  for (std::size_t k = 1; k < m / 2; ++k) {
    // Below ~1e-15 a0 the bins are FFT round-off.
    if (std::abs(bins[k]) > 1e-15 * bins[0].real()) keep = k + 1;
  }
  curve.speed_coeffs_.resize(keep);
  for (std::size_t k = 0; k < keep; ++k) curve.speed_coeffs_[k] = bins[k] * inv_m;
  curve.speed_coeffs_[0] = cplx(curve.speed_coeffs_[0].real(), 0.0);
  curve.length_ = kTwoPi * curve.speed_coeffs_[0].real();

  // Monotone cubic table for the inverse s -> theta (Newton-polished on use).
  const std::size_t table = 4 * n_samples;
  std::vector<double> ts(table + 1), ss(table + 1);
  for (std::size_t j = 0; j <= table; ++j) {
    ts[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(table);
    ss[j] = j == table ? curve.length_ : curve.arclength_at(ts[j]);
  }
  for (std::size_t j = 1; j <= table; ++j) {
    if (!(ss[j] > ss[j - 1])) throw Error(ErrorCode::DegenerateTangent, "arc-length table is not increasing");
  }
  curve.inverse_ = std::make_shared<detail::ArcLengthInverse>(
      detail::ArcLengthInverse{boost::math::interpolators::pchip<std::vector<double>>(std::move(ss), std::move(ts))});

  // Tangent angle on the arc-length grid, unwrapped.
  const double h = curve.length_ / static_cast<double>(n_samples);
  curve.beta_.resize(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double a = std::arg(curve.tangent(h * static_cast<double>(j)));
    if (j == 0) {
      curve.beta_[0] = a;
    } else {
      const double prev = curve.beta_[j - 1];
      curve.beta_[j] = prev + std::remainder(a - prev, kTwoPi);
    }
  }
  {
    const double closing = curve.beta_.back() + std::remainder(curve.beta_[0] - curve.beta_.back(), kTwoPi);
    curve.rotation_index_ = static_cast<int>(std::lround((closing - curve.beta_[0]) / kTwoPi));
  }
  if (curve.rotation_index_ != 1) {
    throw Error(ErrorCode::SelfIntersecting, "curve does not turn exactly once");
  }

  // Lag table of the modulus of continuity of g' (periodic pairs).
  const std::size_t half = n_samples / 2;
  curve.omega_lag_.assign(half + 1, 0.0);
  for (std::size_t lag = 1; lag <= half; ++lag) {
    double best = 0.0;
    for (std::size_t j = 0; j < n_samples; ++j) {
      const double d = curve.beta_[(j + lag) % n_samples] - curve.beta_[j];
      best = std::max(best, 2.0 * std::abs(std::sin(0.5 * d)));
    }
    curve.omega_lag_[lag] = std::max(best, curve.omega_lag_[lag - 1]);
  }
  curve.omega_prefix_.assign(half + 1, 0.0);
  for (std::size_t lag = 1; lag <= half; ++lag) {
    curve.omega_prefix_[lag] = curve.omega_prefix_[lag - 1] + h * curve.omega_lag_[lag];
  }

  // Hoelder exponent and constant.
  if (spec.alpha) {
    curve.alpha_ = *spec.alpha;
  } else if (spec.kind == CurveKind::SampleTable) {
    // log-log regression over the small lags
    const std::size_t upto = std::max<std::size_t>(4, n_samples / 16);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t lag = 1; lag <= upto; ++lag) {
      if (curve.omega_lag_[lag] <= 0.0) continue;
      const double x = std::log(h * static_cast<double>(lag)), y = std::log(curve.omega_lag_[lag]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++cnt;
    }
    const double denom = cnt * sxx - sx * sx;
    const double slope = (cnt >= 2 && denom > 0) ? (cnt * sxy - sx * sy) / denom : 1.0;
    curve.alpha_ = std::clamp(slope, 0.05, 1.0);
  } else {
    curve.alpha_ = 1.0;
  }
  if (!(curve.alpha_ > 0.0 && curve.alpha_ <= 1.0)) throw Error(ErrorCode::InvalidSpec, "alpha must lie in (0, 1]");
  if (spec.holder_c) {
    curve.holder_c_ = *spec.holder_c;
  } else {
    double c = 0.0;
    for (std::size_t lag = 1; lag <= half; ++lag) {
      c = std::max(c, curve.omega_lag_[lag] / std::pow(h * static_cast<double>(lag), curve.alpha_));
    }
    curve.holder_c_ = c;
  }
  return curve;
}

ConvexityCertificate convexity_certificate(const JordanCurve& curve, std::size_t grid) {
  const double h = curve.length() / static_cast<double>(grid);
  std::vector<cplx> g(grid), gp(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    g[j] = curve.position(h * static_cast<double>(j));
    gp[j] = curve.tangent(h * static_cast<double>(j));
  }
  ConvexityCertificate cert;
  cert.min_kernel = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double k = kernel_K(g[i], gp[i], g[j]);
      if (k < cert.min_kernel) {
        cert.min_kernel = k;
        cert.argmin_s = h * static_cast<double>(i);
        cert.argmin_t = h * static_cast<double>(j);
      }
    }
  }
  cert.convex = cert.min_kernel >= -1e-12;
  return cert;
}

}  // namespace kneser
