#include "fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace kneser::detail {
namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x, int sign) {
  std::vector<std::complex<double>> in(x);
  std::vector<std::complex<double>> out(x.size());
  if (x.empty()) return out;
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(x.size()), reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& x) {
  return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_backward(const std::vector<std::complex<double>>& x) {
  return transform(x, FFTW_BACKWARD);
}

}  // namespace kneser::detail
