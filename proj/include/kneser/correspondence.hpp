#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kneser/circle_field.hpp"
#include "kneser/curve.hpp"

namespace kneser {

// A nondecreasing f : R -> R with f(t + 2pi) = f(t) + l, describing the
// boundary correspondence F = g o f between the unit circle and a curve
// of length l. Plateaus (f' = 0 on an arc) are allowed.
class BoundaryCorrespondence {
 public:
  virtual ~BoundaryCorrespondence() = default;

  virtual double value(double t) const = 0;
  // f'(t) where it exists; at a kink the right derivative.
  virtual double derivative(double t) const = 0;
  // Points of [0, 2pi) where f' may jump.
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual bool smooth() const { return breakpoints().empty(); }
  virtual std::string describe() const = 0;

  double shift() const { return shift_; }
  double lip_upper() const { return lip_upper_; }
  double lip_lower() const { return lip_lower_; }

 protected:
  explicit BoundaryCorrespondence(double shift) : shift_(shift) {}
  // Estimates (l, L) from f' on a fine grid plus both sides of every kink.
  void estimate_lipschitz();

 private:
  double shift_;
  double lip_upper_ = 0.0;
  double lip_lower_ = 0.0;
};

using MapPtr = std::shared_ptr<const BoundaryCorrespondence>;

enum class MapType { Identity, Twist, Plateau, Piecewise, Samples, Native };

std::string to_string(MapType type);

struct MapSpec {
  MapType type = MapType::Identity;
  double amplitude = 0.0;  // twist
  int frequency = 1;       // twist
  double phase = 0.0;      // twist
  std::vector<std::pair<double, double>> arcs;   // plateau: [start, end] in t
  std::vector<std::pair<double, double>> knots;  // piecewise: (t, f(t)/l) with t in [0, 2pi)
  std::vector<double> values;                    // samples: f at t_k = 2pi k / M
  std::optional<double> span;                    // samples: declared f(t + 2pi) - f(t)
  double offset = 0.0;
};

// f(t) = offset + l t / 2pi.
MapPtr identity_map(double length, double offset = 0.0);
// f(t) = l/2pi (t + (eps/k) sin(k (t - phase))); f' = l/2pi (1 + eps cos k(t - phase)).
MapPtr twist_map(double length, double amplitude, int frequency = 1, double phase = 0.0);
// Piecewise linear through (t_i, length * u_i), closed by f(t_0 + 2pi) = f(t_0) + l.
MapPtr piecewise_map(double length, std::vector<std::pair<double, double>> knots);
// Constant on each arc, uniform speed elsewhere.
MapPtr plateau_map(double length, std::vector<std::pair<double, double>> arcs);
// Linear interpolation of f(2pi k / M) = values[k], extended by the shift.
MapPtr sampled_map(double length, std::vector<double> values);
// f = arc length of the curve's native parameterization, so F = gamma.
MapPtr native_map(const JordanCurve& curve);

MapPtr make_map(const MapSpec& spec, const JordanCurve& curve);

// Compactly supported exponential bump rho on (-1, 1), unit mass, scaled to
// rho_eps(t) = rho(t / eps) / eps.
class Mollifier {
 public:
  explicit Mollifier(double epsilon);
  double epsilon() const { return epsilon_; }
  static double profile(double z);  // rho(z)
  double density(double t) const;   // rho_eps(t)

  // (f * rho_eps)(x) and its derivative (f' * rho_eps)(x). Quadrature panels
  // are split at the kinks of f.
  double convolve(const BoundaryCorrespondence& f, double x) const;
  double convolve_derivative(const BoundaryCorrespondence& f, double x) const;

 private:
  double epsilon_;
};

// psi_n = (n l / (n l + 2pi)) ((f * rho_{1/n}) + x / n); smooth, strictly
// increasing, psi_n(x + 2pi) = psi_n(x) + l.
MapPtr mollify(const MapPtr& f, int n);
// Pure convolution f * rho_eps (keeps any bi-Lipschitz bracket of f).
MapPtr convolve(const MapPtr& f, double epsilon);

struct DerivativeField {
  CircleField values;
  bool almost_everywhere = false;  // true when f is only Lipschitz
};

DerivativeField derivative_field(const BoundaryCorrespondence& f, std::size_t n);

// F(tau) = g(f(tau)) on the unit circle.
class BoundaryMap {
 public:
  BoundaryMap(JordanCurve curve, MapPtr f);

  cplx value(double tau) const;
  // F'(tau) = g'(f(tau)) f'(tau).
  cplx derivative(double tau) const;

  CircleField sample(std::size_t n, bool shifted = false) const;
  CircleField sample_derivative(std::size_t n, bool shifted = false) const;

  const JordanCurve& curve() const { return curve_; }
  const BoundaryCorrespondence& map() const { return *f_; }
  const MapPtr& map_ptr() const { return f_; }

 private:
  JordanCurve curve_;
  MapPtr f_;
};

BoundaryMap compose_with_curve(const JordanCurve& curve, const MapPtr& f);

// Throws NotWeakHomeomorphism unless f' >= 0 on a fine grid and the
// period shift is positive.
void require_weak_homeomorphism(const BoundaryCorrespondence& f);

}  // namespace kneser
