#ifndef MIXNUM_FFT_HPP
#define MIXNUM_FFT_HPP

#include <cstddef>
#include <span>

#include "mixnum/types.hpp"

namespace mixnum {

bool is_power_of_two(std::size_t n);

// Transform convention used throughout the project:
//   dft:  X[k] = sum_n x[n] exp(-j2pi kn/L)          (unnormalized)
//   idft: x[n] = (1/L) sum_k X[k] exp(+j2pi kn/L)
// Lengths must be powers of two; anything else throws std::invalid_argument.
// `out` may alias `in`. Safe to call concurrently from any thread.
void dft(std::span<const cplx> in, std::span<cplx> out);
void idft(std::span<const cplx> in, std::span<cplx> out);

cvec dft(std::span<const cplx> in);
cvec idft(std::span<const cplx> in);

}  // namespace mixnum

#endif
