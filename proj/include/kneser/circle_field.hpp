#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kneser {

using cplx = std::complex<double>;

// A periodic complex function on [0, 2pi) stored as samples at N uniform
// nodes tau_k = k h (or (k + 1/2) h when shifted), h = 2pi / N, N a power
// of two. Values between nodes come from the trigonometric interpolant.
//
// Fourier coefficients are kept for n = -N/2 .. N/2 with the Nyquist mode
// split evenly between +N/2 and -N/2 so the interpolant of a real field
// stays real.
class CircleField {
 public:
  CircleField() = default;
  CircleField(std::vector<cplx> samples, bool shifted = false);

  static CircleField sample(const std::function<cplx(double)>& fn, std::size_t n, bool shifted = false);
  static CircleField from_coefficients(std::span<const cplx> coeffs, std::size_t n, bool shifted = false);

  std::size_t size() const { return samples_.size(); }
  bool shifted() const { return shifted_; }
  double spacing() const;
  double node(std::size_t k) const;

  std::span<const cplx> samples() const { return samples_; }
  const cplx& operator[](std::size_t k) const { return samples_[k]; }

  // c_n for n = -N/2 .. N/2, stored at index n + N/2.
  std::span<const cplx> coefficients() const { return coeffs_; }
  cplx coefficient(long n) const;
  cplx mean() const { return coefficient(0); }

  cplx operator()(double tau) const;

  CircleField derivative() const;
  CircleField resampled(std::size_t n, bool shifted) const;
  CircleField real_part() const;
  CircleField imag_part() const;

  double max_abs() const;
  double min_abs() const;

  // |mean |F_k|^2 - sum |bin_n / N|^2| using the unsplit DFT bins.
  double parseval_defect() const;

 private:
  std::vector<cplx> samples_;
  std::vector<cplx> coeffs_;
  bool shifted_ = false;
};

bool is_power_of_two(std::size_t n);

}  // namespace kneser
