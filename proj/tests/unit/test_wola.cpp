#include "doctest.h"
#include "helpers.hpp"

#include "mixnum/cli.hpp"
#include "mixnum/experiment.hpp"
#include "mixnum/wola.hpp"

using namespace mixnum;
using namespace testutil;

TEST_CASE("RC ramp of two samples")
{
    const WolaParams p{8, 2, 2};
    const auto w = build_rc_window(p);
    REQUIRE(w.size() == 12);
    CHECK(w[0] == doctest::Approx(0.5 - std::sqrt(0.5) / 2).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.5 + std::sqrt(0.5) / 2).epsilon(1e-15));
    CHECK(w[0] == doctest::Approx(0.1464466).epsilon(1e-6));
    CHECK(w[1] == doctest::Approx(0.8535534).epsilon(1e-6));
    for (int i = 2; i < 10; ++i) CHECK(w[i] == 1.0);
    CHECK(w[10] == w[1]);
    CHECK(w[11] == w[0]);
}

TEST_CASE("overlapping ramps are complementary")
{
    for (int ramp : {2, 10, 100, 402}) {
        const WolaParams p{2048, 576, ramp};
        const auto w = build_rc_window(p);
        const int len = p.window_len();
        for (int i = 0; i < ramp; ++i) CHECK(std::abs(w[i] + w[len - ramp + i] - 1.0) < 1e-15);
    }
    CHECK_THROWS(build_rc_window(WolaParams{4, 0, 6}));
}

TEST_CASE("reference-scenario window lengths")
{
    const auto spec = parse_scenario(R"({"bwps":[{"scs_hz":15e3,"num_prbs":52,"modulation":"QPSK","center_offset_hz":-5e6},
        {"scs_hz":60e3,"num_prbs":11,"modulation":"64QAM","center_offset_hz":5e6}],"method":"NONE","duration_symbols_base":4})");
    const auto d = derive_dims(spec);
    CHECK(make_wola_params(d.bwps[0]).window_len() == 9170);
    CHECK(make_wola_params(d.bwps[1]).window_len() == 2048 + 144 + 100);
}

TEST_CASE("cyclic extension layout")
{
    const WolaParams p{8, 2, 4};
    cvec body(8);
    for (int i = 0; i < 8; ++i) body[i] = cplx(i + 1, 0);
    const auto w = build_rc_window(p);
    const cvec out = wola_symbol(body, p);
    REQUIRE(out.size() == 14);
    // prefix = L_cp + l_ext/2 = 4 tail samples, suffix = 2 head samples
    const int src[14] = {5, 6, 7, 8, 1, 2, 3, 4, 5, 6, 7, 8, 1, 2};
    for (int i = 0; i < 14; ++i) CHECK(out[i] == cplx(src[i] * w[i], 0));
    CHECK_THROWS(wola_symbol(cvec(7), p));
}

TEST_CASE("assemble length and fold alignment")
{
    const WolaParams p{8, 2, 4};
    std::vector<cvec> syms(3, cvec(14, cplx{1.0, 0.0}));
    const auto a = wola_assemble(syms, p.stride(), 1.0);
    CHECK(a.size() == 3u * 10 + 4);
    const auto f = wola_fold(a, p.lead(), 30);
    CHECK(f.size() == 30);
    CHECK(f.samples[0] == a.samples[2] + a.samples[32]);
    CHECK(f.samples[29] == a.samples[31] + a.samples[1]);
}

TEST_CASE("constant DC grid gives a constant WOLA frame")
{
    auto spec = small_scenario();
    spec.bwps = {BwpSpec{15e3, 2, Modulation::Qpsk, 0.0}};
    validate_scenario(spec);
    auto exp = prepare(spec);
    auto& g = exp.grids[0];
    for (auto& v : g.values) v = 0;
    const auto bins = active_bins(exp.dims.bwps[0], Placement::FullBand);
    int dc_row = -1;
    for (std::size_t i = 0; i < bins.size(); ++i)
        if (bins[i] == 0) dc_row = static_cast<int>(i);
    REQUIRE(dc_row >= 0);
    for (int s = 0; s < g.cols; ++s) g.column(s)[dc_row] = 1.0;
    const auto y = wola_modulate(g, exp.dims);
    const cplx c = y.samples[0];
    CHECK(std::abs(c) > 0);
    for (const auto& v : y.samples) CHECK(std::abs(v - c) < 1e-14);
}

TEST_CASE("WOLA leaves the untapered body unchanged")
{
    const auto exp = prepare(small_scenario());
    for (int m = 0; m < 2; ++m) {
        const auto& b = exp.dims.bwps[m];
        const auto plain = ofdm_modulate(exp.grids[m], exp.dims, Rate::Oversampled);
        const auto wola = wola_modulate(exp.grids[m], exp.dims);
        REQUIRE(wola.size() == plain.size());
        const int half = b.wola_ext / 2;
        double worst = 0;
        for (int s = 0; s < b.symbols; ++s) {
            const long long start = static_cast<long long>(s) * b.stride_os();
            for (long long i = start + half; i < start + b.stride_os() - half; ++i)
                worst = std::max(worst, std::abs(wola.samples[i] - plain.samples[i]));
        }
        CHECK(worst < 1e-13);
        // CP-centre receiver sees no ramp
        const auto rx = ofdm_demodulate(wola, exp.dims, m, -b.l_cp_os / 2);
        CHECK(max_abs_diff(rx.values, exp.grids[m].values) < 1e-10);
    }
}

TEST_CASE("aggregate adds and checks rates")
{
    ComplexSignal a{{1.0, 2.0}, 10.0}, b{{3.0}, 10.0}, c{{1.0}, 20.0};
    const auto s = aggregate({a, b});
    CHECK(s.size() == 2);
    CHECK(s.samples[0] == cplx(4.0));
    CHECK(s.samples[1] == cplx(2.0));
    CHECK_THROWS(aggregate({a, c}));
    // disjoint bands of unit power add to power 2
    const auto exp = prepare(small_scenario());
    auto u0 = wola_modulate(exp.grids[0], exp.dims);
    auto u1 = wola_modulate(exp.grids[1], exp.dims);
    const double p0 = mean_power(u0.samples), p1 = mean_power(u1.samples);
    for (auto& v : u0.samples) v /= std::sqrt(p0);
    for (auto& v : u1.samples) v /= std::sqrt(p1);
    CHECK(mean_power(aggregate({u0, u1}).samples) == doctest::Approx(2.0).epsilon(0.05));
}
