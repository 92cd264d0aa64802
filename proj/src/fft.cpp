#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace gevrey::detail {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, bool forward) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(grid.dim(), grid.n(), forward);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<std::complex<double>> a(grid.points()), b(grid.points());
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int n = grid.n();
    fftw_plan plan = grid.dim() == 2 ? fftw_plan_dft_2d(n, n, in, out, sign, flags)
                                     : fftw_plan_dft_3d(n, n, n, in, out, sign, flags);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void execute_fft(const Grid& grid, const std::complex<double>* in, std::complex<double>* out, bool forward) {
  fftw_plan plan = cache().get(grid, forward);
  // fftw_execute_dft does not write to `in` for out-of-place complex plans.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace gevrey::detail
