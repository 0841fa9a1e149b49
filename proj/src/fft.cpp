// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "specinv/error.hpp"

namespace specinv::internal {
namespace {

// FFTW planning is not thread-safe but executing a plan on new arrays is, so
// plans are created once per size under a lock and reused.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

const PlanPair& GetPlans(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto plans = std::make_unique<PlanPair>();
    std::vector<double> real(n);
    std::vector<fftw_complex> spec(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int size = static_cast<int>(n);
    plans->forward = fftw_plan_dft_r2c_1d(size, real.data(), spec.data(), flags);
    plans->inverse = fftw_plan_dft_c2r_1d(size, spec.data(), real.data(),
                                          flags | FFTW_DESTROY_INPUT);
    if (!plans->forward || !plans->inverse)
      throw ConfigError("FFTW could not plan a transform of size " +
                        std::to_string(n));
    slot = std::move(plans);
  }
  return *slot;
}

}  // namespace

void RealForward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw ShapeError("RealForward: bad output size");
  const PlanPair& plans = GetPlans(n);
  // r2c does not touch its input, but the API takes a non-const pointer.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealInverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw ShapeError("RealInverse: bad input size");
  const PlanPair& plans = GetPlans(n);
  // c2r overwrites its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans.inverse,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
}

}  // namespace specinv::internal
