#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace freqlab::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.inverse);
    }
  }

  const PlanPair& get(int dim, int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({dim, n});
    if (it != plans_.end()) return it->second;

    const std::size_t total = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
    std::vector<std::complex<double>> a(total), b(total);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    if (dim == 1) {
      p.forward = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, flags);
      p.inverse = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, flags);
    } else {
      p.forward = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, flags);
      p.inverse = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, flags);
    }
    if (!p.forward || !p.inverse) throw std::runtime_error("FFTW planning failed");
    return plans_.emplace(std::pair{dim, n}, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(fftw_plan plan, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  // FFTW takes a non-const input pointer but does not modify it for
  // out-of-place complex transforms.
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  if (in.data() == out.data()) {
    std::vector<std::complex<double>> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), dst);
    return;
  }
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void fft_forward(int dim, int n, std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) {
  execute(cache().get(dim, n).forward, in, out);
}

void fft_inverse(int dim, int n, std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) {
  execute(cache().get(dim, n).inverse, in, out);
}

}  // namespace freqlab::detail
