#ifndef MIXNUM_TYPES_HPP
#define MIXNUM_TYPES_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixnum {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Complex baseband samples at a fixed sample rate.
struct ComplexSignal {
    cvec samples;
    double sample_rate_hz{0.0};

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

enum class Modulation { Qpsk, Qam16, Qam64, Qam256 };

enum class Method { None, IIcef, EIcefWola, FcFOfdm, FcIcef };

int bits_per_symbol(Modulation mod);

std::string_view to_string(Modulation mod);
std::string_view to_string(Method method);
Modulation parse_modulation(std::string_view name);
Method parse_method(std::string_view name);

/// Mean of |x|^2. Zero for an empty span.
double mean_power(std::span<const cplx> x);

/// Largest |x|^2.
double peak_power(std::span<const cplx> x);

}  // namespace mixnum

#endif
