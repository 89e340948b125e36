#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kneser {

using cplx = std::complex<double>;

enum class CurveKind { Circle, Ellipse, PolarGraph, FourierCoefficients, SampleTable };

std::string to_string(CurveKind kind);

struct FourierTerm {
  int k = 0;
  cplx c;
};

// Description of a closed curve by a native 2pi-periodic parameterization
// gamma(theta). Per kind:
//   circle       parameters = {radius[, cx, cy]}
//   ellipse      parameters = {a, b}                  gamma = a cos + i b sin
//   polar-graph  parameters = {a0, a1, b1, a2, b2...} r(theta) = a0 + sum a_k cos k + b_k sin k
//   fourier      terms  gamma = sum c_k e^{i k theta}
//   sample-table points, interpolated trigonometrically
struct CurveSpec {
  CurveKind kind = CurveKind::Circle;
  std::vector<double> parameters;
  std::vector<FourierTerm> terms;
  std::vector<cplx> points;
  // Hoelder data when known; otherwise fitted from the tangent-angle grid.
  std::optional<double> alpha;
  std::optional<double> holder_c;
  // Declared C^2 regularity (required by the quasiconformality criterion).
  bool c2 = true;

  static CurveSpec circle(double radius, cplx center = {});
  static CurveSpec ellipse(double a, double b);
  static CurveSpec polar_graph(std::vector<double> coefficients);
  static CurveSpec fourier(std::vector<FourierTerm> terms);
  static CurveSpec sample_table(std::vector<cplx> points);
  // r(theta) = 1 + 0.6 cos 2theta: a simple curve with two reflex arcs.
  static CurveSpec bean();
};

namespace detail {
struct NativeCurve;
struct ArcLengthInverse;
}

// Arc-length parameterized, positively oriented C^{1,alpha} Jordan curve.
// All queries accept any real s and reduce it modulo the length.
class JordanCurve {
 public:
  double length() const { return length_; }

  cplx position(double s) const;  // g(s)
  cplx tangent(double s) const;   // g'(s), unit modulus
  // Continuous branch of arg g'(s) with beta(s + l) = beta(s) + 2pi.
  double tangent_angle(double s) const;

  // Native parameter <-> arc length. arclength_at(0) == 0.
  double arclength_at(double theta) const;
  double native_speed(double theta) const;
  double native_parameter(double s) const;

  std::size_t grid_size() const { return beta_.size(); }
  double grid_spacing() const { return length_ / static_cast<double>(beta_.size()); }
  std::span<const double> beta_grid() const { return beta_; }

  // max over grid pairs with |t - s| <= rho of 2|sin((beta(t) - beta(s))/2)|.
  double modulus_of_continuity(double rho) const;
  // Same table read at the next lag up; an upper envelope for the true
  // modulus, used wherever a bound is asserted.
  double modulus_upper(double rho) const;
  // Integral of modulus_upper over [0, sigma].
  double modulus_integral(double sigma) const;

  double alpha() const { return alpha_; }
  double holder_constant() const { return holder_c_; }
  bool c2_declared() const { return spec_.c2; }
  // Total turning (beta(l) - beta(0)) / 2pi; +1 for every stored curve.
  int rotation_index() const { return rotation_index_; }
  bool orientation_reversed() const { return reversed_; }
  const CurveSpec& spec() const { return spec_; }

 private:
  friend JordanCurve build_curve(const CurveSpec& spec, std::size_t n_samples);
  JordanCurve() = default;

  double reduce(double s) const;
  double theta_of(double s) const;
  cplx native_position(double theta) const;
  cplx native_derivative(double theta) const;

  CurveSpec spec_;
  std::shared_ptr<const detail::NativeCurve> native_;
  bool reversed_ = false;
  double length_ = 0.0;
  // Fourier coefficients a_k (k >= 0) of |gamma'(theta)|.
  std::vector<cplx> speed_coeffs_;
  std::shared_ptr<const detail::ArcLengthInverse> inverse_;
  std::vector<double> beta_;
  std::vector<double> omega_lag_;  // cumulative max, index = lag in grid steps
  std::vector<double> omega_prefix_;  // integral of the upper step function up to lag m
  double alpha_ = 1.0;
  double holder_c_ = 0.0;
  int rotation_index_ = 0;
};

JordanCurve build_curve(const CurveSpec& spec, std::size_t n_samples = 1024);

struct ConvexityCertificate {
  bool convex = false;
  double min_kernel = 0.0;
  double argmin_s = 0.0;
  double argmin_t = 0.0;
};

// Evaluates K(s, t) on a grid x grid lattice; convex iff min >= -1e-12.
ConvexityCertificate convexity_certificate(const JordanCurve& curve, std::size_t grid);

}  // namespace kneser
