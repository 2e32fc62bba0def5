#ifndef MIXNUM_TEST_HELPERS_HPP
#define MIXNUM_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mixnum/types.hpp"

namespace testutil {

using mixnum::cplx;
using mixnum::cvec;

inline cvec random_signal(std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    cvec x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    return x;
}

// O(n^2) transform straight from the definition; sign -1 forward.
inline cvec naive_dft(const cvec& x, int sign)
{
    const std::size_t n = x.size();
    cvec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double ph = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * std::polar(1.0, ph);
        }
        out[k] = acc;
    }
    return out;
}

inline double max_abs_diff(const cvec& a, const cvec& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double energy(const cvec& a)
{
    double e = 0.0;
    for (const auto& v : a) e += std::norm(v);
    return e;
}

}  // namespace testutil

#endif
