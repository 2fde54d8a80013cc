#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bob::fft {

using cplx = std::complex<double>;

// Unnormalized forward DFT: out[m] = sum_j in[j] exp(-2 pi i j m / n).
void forward(std::span<const cplx> in, std::span<cplx> out);

// Inverse DFT including the 1/n factor.
void inverse(std::span<const cplx> in, std::span<cplx> out);

// Batched transforms of `count` sequences of length `n` laid out with element
// stride `stride` and sequence distance `dist` (in-place allowed).
void forward_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride,
                  std::size_t dist);
void inverse_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride,
                  std::size_t dist);

}  // namespace bob::fft
