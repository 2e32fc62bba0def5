#include "doctest.h"
#include "helpers.hpp"

#include "mixnum/fft.hpp"
#include "mixnum/parallel.hpp"
#include "mixnum/types.hpp"

using namespace mixnum;
using namespace testutil;

TEST_CASE("dft of all-ones length 4 is a scaled impulse")
{
    const cvec x(4, cplx{1.0, 0.0});
    const cvec y = dft(x);
    CHECK(std::abs(y[0] - cplx{4.0, 0.0}) < 1e-15);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(y[k]) < 1e-15);
}

TEST_CASE("dft and idft match the definition")
{
    for (std::size_t n : {2u, 8u, 64u, 256u}) {
        const cvec x = random_signal(n, 11 + static_cast<unsigned>(n));
        CHECK(max_abs_diff(dft(x), naive_dft(x, -1)) < 1e-10);
        cvec inv = naive_dft(x, +1);
        for (auto& v : inv) v /= static_cast<double>(n);
        CHECK(max_abs_diff(idft(x), inv) < 1e-12);
    }
}

TEST_CASE("round trip and Parseval at 2048")
{
    const cvec x = random_signal(2048, 3);
    CHECK(max_abs_diff(idft(dft(x)), x) < 1e-12);
    const double lhs = energy(dft(x));
    CHECK(lhs == doctest::Approx(2048.0 * energy(x)).epsilon(1e-12));
}

TEST_CASE("in-place transform through aliased spans")
{
    cvec x = random_signal(512, 5);
    const cvec expect = dft(x);
    dft(x, x);
    CHECK(max_abs_diff(x, expect) < 1e-12);
}

TEST_CASE("non power of two is rejected")
{
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(12));
    CHECK(is_power_of_two(8192));
    const cvec x(12);
    CHECK_THROWS_AS(dft(x), std::invalid_argument);
    CHECK_THROWS_AS(idft(x), std::invalid_argument);
}

TEST_CASE("parallel_for visits each index once and rethrows")
{
    set_thread_count(3);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    set_thread_count(0);
}

TEST_CASE("transforms from many threads agree")
{
    const cvec x = random_signal(1024, 9);
    const cvec ref = dft(x);
    set_thread_count(4);
    std::vector<cvec> outs(16);
    parallel_for(outs.size(), [&](std::size_t i) { outs[i] = dft(x); });
    for (const auto& o : outs) CHECK(o == ref);
    set_thread_count(0);
}
