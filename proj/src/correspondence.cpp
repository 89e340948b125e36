#include "kneser/correspondence.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kneser/error.hpp"

namespace kneser {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Position of t within its period: t = u + 2pi m with u in [t0, t0 + 2pi).
double period_index(double t, double t0, double& u) {
  const double m = std::floor((t - t0) / kTwoPi);
  u = t - kTwoPi * m;
  if (u >= t0 + kTwoPi) {
    u -= kTwoPi;
    return m + 1.0;
  }
  return m;
}

class LinearMap final : public BoundaryCorrespondence {
 public:
  LinearMap(double length, double offset) : BoundaryCorrespondence(length), offset_(offset) { estimate_lipschitz(); }
  double value(double t) const override { return offset_ + shift() * t / kTwoPi; }
  double derivative(double) const override { return shift() / kTwoPi; }
  std::string describe() const override { return "identity"; }

 private:
  double offset_;
};

class TwistMap final : public BoundaryCorrespondence {
 public:
  TwistMap(double length, double eps, int k, double phase)
      : BoundaryCorrespondence(length), eps_(eps), k_(k), phase_(phase) {
    if (k_ < 1) throw Error(ErrorCode::InvalidSpec, "twist frequency must be >= 1");
    if (std::abs(eps_) > 1.0) throw Error(ErrorCode::NotWeakHomeomorphism, "twist amplitude must satisfy |eps| <= 1");
    estimate_lipschitz();
  }
  double value(double t) const override {
    return shift() / kTwoPi * (t + eps_ / k_ * std::sin(k_ * (t - phase_)));
  }
  double derivative(double t) const override { return shift() / kTwoPi * (1.0 + eps_ * std::cos(k_ * (t - phase_))); }
  std::string describe() const override {
    std::ostringstream os;
    os << "twist(amplitude=" << eps_ << ", frequency=" << k_ << ", phase=" << phase_ << ")";
    return os.str();
  }

 private:
  double eps_;
  int k_;
  double phase_;
};

class PiecewiseLinearMap final : public BoundaryCorrespondence {
 public:
  PiecewiseLinearMap(double length, std::vector<std::pair<double, double>> knots, std::string label)
      : BoundaryCorrespondence(length), label_(std::move(label)) {
    if (knots.empty()) throw Error(ErrorCode::InvalidSpec, "piecewise map needs knots");
    std::sort(knots.begin(), knots.end());
    for (const auto& [t, v] : knots) {
      if (t < 0.0 || t >= kTwoPi) throw Error(ErrorCode::InvalidSpec, "piecewise knots must lie in [0, 2pi)");
      t_.push_back(t);
      v_.push_back(v);
    }
    t_.push_back(t_.front() + kTwoPi);
    v_.push_back(v_.front() + length);
    bool any_rise = false;
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
      if (!(t_[i + 1] > t_[i])) throw Error(ErrorCode::InvalidSpec, "piecewise knots must be distinct");
      if (v_[i + 1] < v_[i]) throw Error(ErrorCode::NotWeakHomeomorphism, "piecewise map decreases");
      any_rise = any_rise || v_[i + 1] > v_[i];
    }
    if (!any_rise) throw Error(ErrorCode::NotWeakHomeomorphism, "piecewise map is constant");
    estimate_lipschitz();
  }

  double value(double t) const override {
    double u;
    const double m = period_index(t, t_.front(), u);
    const std::size_t i = segment(u);
    const double w = (u - t_[i]) / (t_[i + 1] - t_[i]);
    return v_[i] + w * (v_[i + 1] - v_[i]) + m * shift();
  }
  double derivative(double t) const override {
    double u;
    period_index(t, t_.front(), u);
    const std::size_t i = segment(u);
    return (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
  }
  std::vector<double> breakpoints() const override {
    std::vector<double> b;
    const std::size_t k = t_.size() - 1;
    for (std::size_t i = 0; i < k; ++i) {
      const double left = slope((i + k - 1) % k), right = slope(i);
      if (left != right) b.push_back(t_[i]);
    }
    return b;
  }
  std::string describe() const override { return label_; }

 private:
  double slope(std::size_t i) const { return (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]); }
  std::size_t segment(double u) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), u);
    std::size_t i = static_cast<std::size_t>(std::distance(t_.begin(), it));
    i = i == 0 ? 0 : i - 1;
    return std::min(i, t_.size() - 2);
  }

  std::vector<double> t_;
  std::vector<double> v_;
  std::string label_;
};

class SampledMap final : public BoundaryCorrespondence {
 public:
  SampledMap(double length, std::vector<double> values) : BoundaryCorrespondence(length), v_(std::move(values)) {
    const std::size_t m = v_.size();
    if (m < 8) throw Error(ErrorCode::InvalidSpec, "sampled map needs at least 8 values");
    for (std::size_t k = 0; k < m; ++k) {
      if (at(static_cast<long>(k) + 1) < v_[k]) throw Error(ErrorCode::NotWeakHomeomorphism, "sampled map decreases");
    }
    h_ = kTwoPi / static_cast<double>(m);
    // Kinks: second-difference spikes above 10x the median.
    std::vector<double> d2(m);
    for (std::size_t k = 0; k < m; ++k) {
      const long kk = static_cast<long>(k);
      d2[k] = std::abs(at(kk + 1) - 2.0 * at(kk) + at(kk - 1));
    }
    std::vector<double> sorted = d2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(m / 2), sorted.end());
    const double threshold = std::max(10.0 * sorted[m / 2], 1e-12 * length / static_cast<double>(m));
    kink_.assign(m, false);
    for (std::size_t k = 0; k < m; ++k) kink_[k] = d2[k] > threshold;
    node_derivative_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const long kk = static_cast<long>(k);
      node_derivative_[k] = kink_[k] ? (at(kk + 1) - at(kk)) / h_ : (at(kk + 1) - at(kk - 1)) / (2.0 * h_);
    }
    estimate_lipschitz();
  }

  double value(double t) const override {
    const double x = t / h_;
    const double k = std::floor(x);
    const long kk = static_cast<long>(k);
    const double w = x - k;
    return (1.0 - w) * at(kk) + w * at(kk + 1);
  }
  double derivative(double t) const override {
    const double x = t / h_;
    const double k = std::floor(x);
    const long kk = static_cast<long>(k);
    const std::size_t i = wrap(kk), j = wrap(kk + 1);
    const double w = x - k;
    if (kink_[i] || kink_[j]) return (at(kk + 1) - at(kk)) / h_;
    return (1.0 - w) * node_derivative_[i] + w * node_derivative_[j];
  }
  std::vector<double> breakpoints() const override {
    std::vector<double> b;
    for (std::size_t k = 0; k < v_.size(); ++k) {
      if (kink_[k]) b.push_back(h_ * static_cast<double>(k));
    }
    return b;
  }
  bool smooth() const override { return false; }
  std::string describe() const override { return "samples(" + std::to_string(v_.size()) + ")"; }

 private:
  std::size_t wrap(long k) const {
    const long m = static_cast<long>(v_.size());
    return static_cast<std::size_t>(((k % m) + m) % m);
  }
  // value at node k, any integer k, with the period shift applied
  double at(long k) const {
    const long m = static_cast<long>(v_.size());
    const long q = (k >= 0) ? k / m : -((-k + m - 1) / m);
    return v_[static_cast<std::size_t>(k - q * m)] + static_cast<double>(q) * shift();
  }

  std::vector<double> v_;
  std::vector<bool> kink_;
  std::vector<double> node_derivative_;
  double h_ = 0.0;
};

class NativeArcLengthMap final : public BoundaryCorrespondence {
 public:
  explicit NativeArcLengthMap(const JordanCurve& curve) : BoundaryCorrespondence(curve.length()), curve_(curve) {
    estimate_lipschitz();
  }
  double value(double t) const override { return curve_.arclength_at(t); }
  double derivative(double t) const override { return curve_.native_speed(t); }
  std::string describe() const override { return "native"; }

 private:
  JordanCurve curve_;
};

// Composite Gauss-Legendre nodes for the bump on (-1, 1), panels split at the
// given interior points.
template <class Fn>
double bump_quadrature(Fn&& fn, std::vector<double> cuts, double& mass) {
  using gl = boost::math::quadrature::gauss<double, 20>;
  constexpr int kPanels = 16;
  for (int p = 1; p < kPanels; ++p) cuts.push_back(-1.0 + 2.0 * p / kPanels);
  cuts.push_back(-1.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  const auto& xs = gl::abscissa();
  const auto& ws = gl::weights();
  double acc = 0.0;
  mass = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t q = 0; q < xs.size(); ++q) {
      for (int sgn : {-1, 1}) {
        if (xs[q] == 0.0 && sgn > 0) continue;
        const double z = mid + sgn * half * xs[q];
        const double w = half * ws[q] * Mollifier::profile(z);
        if (w == 0.0) continue;
        mass += w;
        acc += w * fn(z);
      }
    }
  }
  return acc;
}

class MollifiedMap final : public BoundaryCorrespondence {
 public:
  // tilt_n == 0: pure convolution. Otherwise the tilted, rescaled form.
  MollifiedMap(MapPtr base, double epsilon, int tilt_n)
      : BoundaryCorrespondence(base->shift()), base_(std::move(base)), moll_(epsilon), n_(tilt_n) {
    if (n_ > 0) {
      const double b = shift();
      scale_ = n_ * b / (n_ * b + kTwoPi);
    }
    estimate_lipschitz();
  }
  double value(double x) const override {
    const double c = moll_.convolve(*base_, x);
    return n_ > 0 ? scale_ * (c + x / n_) : c;
  }
  double derivative(double x) const override {
    const double c = moll_.convolve_derivative(*base_, x);
    return n_ > 0 ? scale_ * (c + 1.0 / n_) : c;
  }
  bool smooth() const override { return true; }
  std::string describe() const override {
    std::ostringstream os;
    if (n_ > 0) {
      os << "mollified(n=" << n_ << ", " << base_->describe() << ")";
    } else {
      os << "convolved(eps=" << moll_.epsilon() << ", " << base_->describe() << ")";
    }
    return os.str();
  }

 private:
  MapPtr base_;
  Mollifier moll_;
  int n_;
  double scale_ = 1.0;
};

}  // namespace

void BoundaryCorrespondence::estimate_lipschitz() {
  constexpr std::size_t kGrid = 4096;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&](double d) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  };
  for (std::size_t k = 0; k < kGrid; ++k) take(derivative((static_cast<double>(k) + 0.5) * kTwoPi / kGrid));
  for (double b : breakpoints()) {
    take(derivative(b));
    take(derivative(b - 1e-9));
  }
  lip_lower_ = std::max(lo, 0.0);
  lip_upper_ = hi;
}

std::string to_string(MapType type) {
  switch (type) {
    case MapType::Identity: return "identity";
    case MapType::Twist: return "twist";
    case MapType::Plateau: return "plateau";
    case MapType::Piecewise: return "piecewise";
    case MapType::Samples: return "samples";
    case MapType::Native: return "native";
  }
  return "unknown";
}

MapPtr identity_map(double length, double offset) { return std::make_shared<LinearMap>(length, offset); }

MapPtr twist_map(double length, double amplitude, int frequency, double phase) {
  return std::make_shared<TwistMap>(length, amplitude, frequency, phase);
}

MapPtr piecewise_map(double length, std::vector<std::pair<double, double>> knots) {
  for (auto& k : knots) k.second *= length;
  return std::make_shared<PiecewiseLinearMap>(length, std::move(knots), "piecewise");
}

MapPtr plateau_map(double length, std::vector<std::pair<double, double>> arcs) {
  std::sort(arcs.begin(), arcs.end());
  double flat = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto [a, b] = arcs[i];
    if (a < 0.0 || b > kTwoPi || !(b > a)) throw Error(ErrorCode::InvalidSpec, "plateau arcs must satisfy 0 <= a < b <= 2pi");
    if (i > 0 && a < arcs[i - 1].second) throw Error(ErrorCode::InvalidSpec, "plateau arcs overlap");
    flat += b - a;
  }
  if (!(flat < kTwoPi)) throw Error(ErrorCode::NotWeakHomeomorphism, "plateaus cover the whole circle");
  const double speed = length / (kTwoPi - flat);
  std::vector<std::pair<double, double>> knots;
  double t = 0.0, f = 0.0;
  auto push = [&](double tt, double ff) {
    if (tt < kTwoPi && (knots.empty() || tt > knots.back().first)) knots.emplace_back(tt, ff);
  };
  push(0.0, 0.0);
  for (const auto& [a, b] : arcs) {
    f += speed * (a - t);
    push(a, f);
    push(b, f);
    t = b;
  }
  std::ostringstream label;
  label << "plateau(" << arcs.size() << " arcs)";
  return std::make_shared<PiecewiseLinearMap>(length, std::move(knots), label.str());
}

MapPtr sampled_map(double length, std::vector<double> values) {
  return std::make_shared<SampledMap>(length, std::move(values));
}

MapPtr native_map(const JordanCurve& curve) { return std::make_shared<NativeArcLengthMap>(curve); }

MapPtr make_map(const MapSpec& spec, const JordanCurve& curve) {
  const double l = curve.length();
  switch (spec.type) {
    case MapType::Identity: return identity_map(l, spec.offset);
    case MapType::Twist: return twist_map(l, spec.amplitude, spec.frequency, spec.phase);
    case MapType::Plateau: return plateau_map(l, spec.arcs);
    case MapType::Piecewise: return piecewise_map(l, spec.knots);
    case MapType::Samples: {
      if (spec.span && std::abs(*spec.span - l) > 1e-9 * std::max(1.0, l)) {
        std::ostringstream os;
        os << "sample table spans " << *spec.span << " but the curve has length " << l;
        throw Error(ErrorCode::RangeMismatch, os.str());
      }
      return sampled_map(l, spec.values);
    }
    case MapType::Native: return native_map(curve);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown map type");
}

Mollifier::Mollifier(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidSpec, "mollifier scale must be positive");
}

double Mollifier::profile(double z) {
  static const double mass = [] {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate([](double x) { return std::exp(-1.0 / (1.0 - x * x)); }, -1.0, 1.0);
  }();
  if (!(std::abs(z) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z)) / mass;
}

double Mollifier::density(double t) const { return profile(t / epsilon_) / epsilon_; }

namespace {
std::vector<double> kink_cuts(const BoundaryCorrespondence& f, double x, double eps) {
  std::vector<double> cuts;
  for (double b : f.breakpoints()) {
    const double m_lo = std::ceil((x - b - eps) / kTwoPi);
    const double m_hi = std::floor((x - b + eps) / kTwoPi);
    for (double m = m_lo; m <= m_hi; m += 1.0) {
      const double z = (x - b - kTwoPi * m) / eps;
      if (z > -1.0 && z < 1.0) cuts.push_back(z);
    }
  }
  return cuts;
}
}  // namespace

double Mollifier::convolve(const BoundaryCorrespondence& f, double x) const {
  double mass = 0.0;
  const double acc = bump_quadrature([&](double z) { return f.value(x - epsilon_ * z); }, kink_cuts(f, x, epsilon_), mass);
  return acc / mass;
}

double Mollifier::convolve_derivative(const BoundaryCorrespondence& f, double x) const {
  double mass = 0.0;
  const double acc =
      bump_quadrature([&](double z) { return f.derivative(x - epsilon_ * z); }, kink_cuts(f, x, epsilon_), mass);
  return acc / mass;
}

MapPtr mollify(const MapPtr& f, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidSpec, "mollify needs n >= 1");
  require_weak_homeomorphism(*f);
  return std::make_shared<MollifiedMap>(f, 1.0 / n, n);
}

MapPtr convolve(const MapPtr& f, double epsilon) {
  require_weak_homeomorphism(*f);
  return std::make_shared<MollifiedMap>(f, epsilon, 0);
}

void require_weak_homeomorphism(const BoundaryCorrespondence& f) {
  if (!(f.shift() > 0.0)) throw Error(ErrorCode::NotWeakHomeomorphism, "period shift must be positive");
  constexpr std::size_t kGrid = 2048;
  double prev = f.value(0.0);
  for (std::size_t k = 1; k <= kGrid; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / kGrid;
    const double v = f.value(t);
    if (v < prev - 1e-12 * f.shift()) throw Error(ErrorCode::NotWeakHomeomorphism, "map decreases");
    prev = v;
  }
  if (f.lip_lower() < 0.0) throw Error(ErrorCode::NotWeakHomeomorphism, "negative derivative");
}

DerivativeField derivative_field(const BoundaryCorrespondence& f, std::size_t n) {
  DerivativeField out;
  out.values = CircleField::sample([&](double t) { return cplx(f.derivative(t), 0.0); }, n);
  out.almost_everywhere = !f.smooth();
  return out;
}

BoundaryMap::BoundaryMap(JordanCurve curve, MapPtr f) : curve_(std::move(curve)), f_(std::move(f)) {
  const double l = curve_.length();
  const double span = f_->value(kTwoPi) - f_->value(0.0);
  if (std::abs(f_->shift() - l) > 1e-9 * std::max(1.0, l) || std::abs(span - l) > 1e-9 * std::max(1.0, l)) {
    std::ostringstream os;
    os << "boundary map spans " << span << " but the curve has length " << l;
    throw Error(ErrorCode::RangeMismatch, os.str());
  }
}

cplx BoundaryMap::value(double tau) const { return curve_.position(f_->value(tau)); }

cplx BoundaryMap::derivative(double tau) const { return curve_.tangent(f_->value(tau)) * f_->derivative(tau); }

CircleField BoundaryMap::sample(std::size_t n, bool shifted) const {
  return CircleField::sample([&](double t) { return value(t); }, n, shifted);
}

CircleField BoundaryMap::sample_derivative(std::size_t n, bool shifted) const {
  return CircleField::sample([&](double t) { return derivative(t); }, n, shifted);
}

BoundaryMap compose_with_curve(const JordanCurve& curve, const MapPtr& f) { return BoundaryMap(curve, f); }

}  // namespace kneser
