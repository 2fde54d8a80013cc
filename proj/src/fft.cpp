#include "bob/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace bob::fft {
namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex plan_mutex;

using PlanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, int>;

fftw_plan get_plan(std::size_t n, std::size_t count, std::size_t stride, std::size_t dist,
                   int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  const PlanKey key{n, count, stride, dist, sign};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  int dims = static_cast<int>(n);
  auto* scratch = fftw_alloc_complex(std::max<std::size_t>(1, (count - 1) * dist + (n - 1) * stride + 1));
  fftw_plan plan = fftw_plan_many_dft(1, &dims, static_cast<int>(count), scratch, nullptr,
                                      static_cast<int>(stride), static_cast<int>(dist), scratch,
                                      nullptr, static_cast<int>(stride), static_cast<int>(dist),
                                      sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  forward_many(out.data(), out.size(), 1, 1, out.size());
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  inverse_many(out.data(), out.size(), 1, 1, out.size());
}

void forward_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride,
                  std::size_t dist) {
  fftw_plan plan = get_plan(n, count, stride, dist, FFTW_FORWARD);
  fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
}

void inverse_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride,
                  std::size_t dist) {
  fftw_plan plan = get_plan(n, count, stride, dist, FFTW_BACKWARD);
  fftw_execute_dft(plan, as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < n; ++i) data[c * dist + i * stride] *= scale;
}

}  // namespace bob::fft
