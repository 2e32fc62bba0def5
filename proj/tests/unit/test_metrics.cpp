#include "doctest.h"
#include "helpers.hpp"

#include <limits>

#include "mixnum/cli.hpp"
#include "mixnum/experiment.hpp"
#include "mixnum/fft.hpp"
#include "mixnum/metrics.hpp"

using namespace mixnum;
using namespace testutil;

namespace {

// Signal whose Welch segments are periodic, so the Hann window leaks only
// into neighbouring bins: power `p_main` spread over bins [-m, m] and
// `p_adj` over bins centred on `adj_center` with the same width.
ComplexSignal banded(int nfft, int m, int adj_center, double p_main, double p_adj, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ph(0, 2 * std::numbers::pi);
    cvec spec(static_cast<std::size_t>(nfft));
    const double a_main = std::sqrt(p_main / (2 * m + 1)), a_adj = std::sqrt(p_adj / (2 * m + 1));
    for (int k = -m; k <= m; ++k) {
        spec[static_cast<std::size_t>((k + nfft) % nfft)] = std::polar(a_main, ph(rng)) * double(nfft);
        spec[static_cast<std::size_t>((adj_center + k + nfft) % nfft)] = std::polar(a_adj, ph(rng)) * double(nfft);
    }
    const cvec seg = idft(spec);
    ComplexSignal y;
    y.sample_rate_hz = nfft * 1e3;  // 1 kHz bins
    for (int rep = 0; rep < 16; ++rep) y.samples.insert(y.samples.end(), seg.begin(), seg.end());
    return y;
}

}  // namespace

TEST_CASE("sample-wise PAPR hand example")
{
    const cvec y{{1, 0}, {1, 0}, {1, 0}, {0, 3}};
    const auto p = papr_per_sample(y);
    REQUIRE(p.size() == 4);
    CHECK(p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p[3] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS(papr_per_sample(cvec(4)));
}

TEST_CASE("CCDF and its 0.1% point")
{
    std::vector<double> lin(1000);
    for (int i = 0; i < 1000; ++i) lin[i] = std::pow(10.0, (i + 1) / 1000.0);  // 0.01 .. 10 dB
    const auto c = ccdf(lin);
    CHECK(c.sample_count() == 1000);
    CHECK(std::is_sorted(c.sorted_db.begin(), c.sorted_db.end()));
    CHECK(c.exceedance(5.005) == doctest::Approx(0.5));
    CHECK(c.exceedance(10.5) == 0.0);
    CHECK(c.exceedance(-1.0) == 1.0);
    CHECK(papr_at_probability(c, 0.5) == doctest::Approx(5.0).epsilon(0.01));
    CHECK(papr_at_probability(c, 0.01) == doctest::Approx(9.9).epsilon(0.01));
    const auto t = ccdf_table(c, 0.0, 10.0, 1.0);
    REQUIRE(t.size() == 11);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].second <= t[i - 1].second);
}

TEST_CASE("Gaussian PAPR at 0.1% matches the exponential law")
{
    const cvec x = random_signal(400000, 21);
    const auto c = ccdf(papr_per_sample(x));
    CHECK(papr_at_probability(c, 1e-3) == doctest::Approx(10 * std::log10(std::log(1000.0))).epsilon(0.02));
}

TEST_CASE("MSE of a known perturbation and scalar invariance")
{
    const auto exp = prepare(small_scenario());
    const auto timing = default_timing_offsets(exp.dims);
    CHECK(timing[0] == -exp.dims.bwps[0].l_cp_os / 2);
    CHECK(timing[1] == -exp.dims.bwps[1].l_cp_os / 2);

    // one BWP only, so no INI: inject a known error on the grid
    auto grids = exp.grids;
    for (auto& v : grids[1].values) v = 0;
    auto noisy = grids;
    std::mt19937 rng(5);
    std::normal_distribution<double> g(0, 0.01 / std::sqrt(2.0));
    for (auto& v : noisy[0].values) v += cplx(g(rng), g(rng));
    const auto y = ofdm_modulate(noisy[0], exp.dims, Rate::Oversampled);
    double err = 0, ref = 0;
    for (std::size_t i = 0; i < grids[0].values.size(); ++i) {
        err += std::norm(noisy[0].values[i] - grids[0].values[i]);
        ref += std::norm(grids[0].values[i]);
    }
    const auto mse = mse_per_bwp(y, {grids[0], exp.grids[1]}, exp.dims, timing);
    CHECK(mse[0] == doctest::Approx(10 * std::log10(err / ref)).epsilon(0.01));

    ComplexSignal scaled = y;
    for (auto& v : scaled.samples) v *= std::polar(0.3, 1.1);
    const auto mse2 = mse_per_bwp(scaled, {grids[0], exp.grids[1]}, exp.dims, timing);
    CHECK(mse2[0] == doctest::Approx(mse[0]).epsilon(1e-9));
}

TEST_CASE("Welch PSD: tone position and power closure")
{
    CHECK(welch_segment_length(122.88e6, 30e3) == 4096);
    CHECK(welch_segment_length(30.72e6, 30e3) == 1024);
    ComplexSignal y;
    y.sample_rate_hz = 1.024e6;
    const double f0 = 100e3;
    for (int n = 0; n < 1 << 16; ++n) y.samples.push_back(std::polar(2.0, 2 * std::numbers::pi * f0 * n / y.sample_rate_hz));
    const auto psd = psd_welch(y, 1e3);
    CHECK(psd.segment_len == 1024);
    const auto peak = std::max_element(psd.power.begin(), psd.power.end()) - psd.power.begin();
    CHECK(psd.freq_hz[peak] == doctest::Approx(f0));
    double total = 0;
    for (double p : psd.power) total += p;
    CHECK(total == doctest::Approx(4.0).epsilon(1e-9));

    const cvec x = random_signal(1 << 16, 30);
    const auto p2 = psd_welch(ComplexSignal{x, 1e6}, 1e3);
    double t2 = 0;
    for (double p : p2.power) t2 += p;
    CHECK(std::abs(10 * std::log10(t2 / mean_power(x))) < 0.1);
}

TEST_CASE("ACLR of a constructed spectrum")
{
    const auto y = banded(1024, 100, 300, 1.0, 1e-6, 3);
    const auto psd = psd_welch(y, 1e3);
    const double offs[2] = {300e3, -300e3};
    const auto a = aclr(psd, 201e3, offs);
    CHECK(a[0] == doctest::Approx(60.0).epsilon(1e-3));
    CHECK(a[1] > 150.0);
    const double too_far[1] = {500e3};
    CHECK_THROWS(aclr(psd, 201e3, too_far));
}

TEST_CASE("emission mask parsing and margin")
{
    const auto mask = parse_mask_csv("frequency_offset_hz,limit_db_per_rbw\n0,-30\n1e5,-50\n2e5,inf\n");
    REQUIRE(mask.offset_hz.size() == 3);
    CHECK(mask.limit_at(0.0) == -30.0);
    CHECK(mask.limit_at(5e4) == doctest::Approx(-40.0));
    CHECK(std::isinf(mask.limit_at(1.5e5)));
    CHECK_THROWS(parse_mask_csv("0,-30\n0,-40\n"));
    CHECK_THROWS(parse_mask_csv("# nothing\n"));
    CHECK_THROWS(parse_mask_csv("0,-30\nbad,line\n"));

    const auto y = banded(1024, 100, 300, 1.0, 1e-6, 3);
    const auto psd = psd_welch(y, 1e3);
    // from 2 kHz past the channel edge the densest bins are the adjacent block
    // interior, near 1e-6/201 of the total power each
    const auto flat = parse_mask_csv("2e3,-60\n4e5,-60\n");
    const double m = mask_margin(psd, flat, 201e3);
    double densest = -1e300;
    for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
        const double off = std::abs(psd.freq_hz[i]) - 100.5e3;
        if (off >= 2e3 && off <= 4e5) densest = std::max(densest, psd.density_db[i]);
    }
    CHECK(m == doctest::Approx(-60 - densest).epsilon(1e-12));
    CHECK(std::abs(m - (-60 - 10 * std::log10(1e-6 / 201 / (1 + 1e-6)))) < 3.0);
    const auto none = parse_mask_csv("0,inf\n1e5,inf\n");
    CHECK(std::isinf(mask_margin(psd, none, 201e3)));
}
