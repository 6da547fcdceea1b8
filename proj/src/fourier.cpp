#include "diracbs/fourier.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace diracbs {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

struct FourierTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

FourierTransform::FourierTransform(int n, int M, int components) : plans_(std::make_unique<Plans>()), components_(components) {
  points_ = 1;
  std::vector<int> dims(static_cast<std::size_t>(n), M);
  for (int a = 0; a < n; ++a) points_ *= static_cast<std::size_t>(M);
  size_ = points_ * static_cast<std::size_t>(components);

  std::vector<cplx> a(size_), b(size_);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_many_dft(n, dims.data(), components, in, nullptr, components, 1, out, nullptr, components,
                                       1, FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_many_dft(n, dims.data(), components, in, nullptr, components, 1, out, nullptr,
                                        components, 1, FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->backward) throw ComputationError("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void FourierTransform::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void FourierTransform::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(points_);
  for (std::size_t i = 0; i < size_; ++i) out[i] *= scale;
}

const FourierTransform& FourierTransform::for_shape(int n, int M, int components) {
  static std::mutex cache_mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<FourierTransform>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{n, M, components}];
  if (!slot) slot = std::make_unique<FourierTransform>(n, M, components);
  return *slot;
}

std::vector<cplx> to_fourier(const FieldOnGrid& f) {
  std::vector<cplx> out(f.values.size());
  FourierTransform::for_grid(f.grid).forward(f.values.data(), out.data());
  return out;
}

FieldOnGrid from_fourier(const GridSpec& grid, std::vector<cplx> coeffs) {
  FieldOnGrid f;
  f.grid = grid;
  FourierTransform::for_grid(grid).backward(coeffs.data(), coeffs.data());
  f.values = std::move(coeffs);
  return f;
}

} // namespace diracbs
