#include "doctest.h"
#include "helpers.hpp"

#include "mixnum/cli.hpp"
#include "mixnum/experiment.hpp"
#include "mixnum/fft.hpp"
#include "mixnum/icef.hpp"
#include "mixnum/metrics.hpp"
#include "mixnum/wola.hpp"

using namespace mixnum;
using namespace testutil;

namespace {

ComplexSignal regenerate(const std::vector<ResourceGrid>& grids, const DerivedDims& dims)
{
    std::vector<ComplexSignal> parts;
    for (const auto& g : grids) parts.push_back(ofdm_modulate(g, dims, Rate::Oversampled));
    return aggregate(parts);
}

}  // namespace

TEST_CASE("polar clipping keeps phase")
{
    const cplx in[3] = {std::polar(2.0, std::numbers::pi / 4), {0.3, -0.4}, {0.0, 0.0}};
    const cvec out = clip_polar(in, 1.0);
    CHECK(std::abs(out[0] - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);
    CHECK(out[1] == in[1]);
    CHECK(out[2] == in[2]);
    cvec x(in, in + 3);
    CHECK_THROWS_AS(clip_polar_inplace(x, 0.0), std::invalid_argument);
}

TEST_CASE("threshold from target")
{
    const cvec unit(16, cplx{1.0, 0.0});
    CHECK(threshold_from_target(unit, 0.0) == doctest::Approx(1.0));
    CHECK(threshold_from_target(unit, 20 * std::log10(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    const cvec x = random_signal(1000, 4);
    cvec y = x;
    for (auto& v : y) v *= 3.5;
    CHECK(threshold_from_target(y, 5.0) == doctest::Approx(3.5 * threshold_from_target(x, 5.0)).epsilon(1e-12));
    CHECK_THROWS(threshold_from_target(cvec(4), 5.0));
}

TEST_CASE("ICEF on one symbol confines noise and lowers the peak")
{
    const auto exp = prepare(small_scenario());
    const auto& bd = exp.dims.bwps[0];
    const auto bins = active_bins(bd, Placement::FullBand);
    const auto col = exp.grids[0].column(1);
    cvec body(static_cast<std::size_t>(bd.l_ofdm_os));
    synthesize_symbol(col, bins, body);
    ClipConfig cfg = make_clip_config(body, 4.0, 10, 0.01);
    const auto r = icef_symbol(col, bins, bd.l_ofdm_os, cfg);
    CHECK(r.iterations >= 1);
    cvec out(static_cast<std::size_t>(bd.l_ofdm_os));
    synthesize_symbol(r.column, bins, out);
    CHECK(peak_power(out) < peak_power(body));
    // the whole output spectrum lives on the active bins
    const cvec spec = dft(out);
    const auto mask = subband_mask(bd, bd.l_ofdm_os);
    double off = 0;
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (!mask[k]) off = std::max(off, std::abs(spec[k]));
    CHECK(off < 1e-10);

    cfg.max_iterations = 0;
    const auto none = icef_symbol(col, bins, bd.l_ofdm_os, cfg);
    CHECK(none.iterations == 0);
    CHECK(max_abs_diff(none.column, cvec(col.begin(), col.end())) == 0.0);
}

TEST_CASE("INI is zero between same-numerology disjoint subbands")
{
    auto spec = small_scenario();
    spec.bwps = {BwpSpec{15e3, 6, Modulation::Qam16, -1.2e6}, BwpSpec{15e3, 6, Modulation::Qpsk, 0.9e6}};
    validate_scenario(spec);
    const auto exp = prepare(spec);
    std::vector<ComplexSignal> x;
    for (const auto& g : exp.grids) x.push_back(ofdm_modulate(g, exp.dims, Rate::Oversampled));
    for (int m = 0; m < 2; ++m)
        for (int s = 0; s < exp.dims.bwps[m].symbols; ++s) {
            const cvec z = compute_ini(x, m, s, exp.dims);
            const auto mask = subband_mask(exp.dims.bwps[m], exp.dims.bwps[m].l_ofdm_os);
            double worst = 0;
            for (std::size_t k = 0; k < z.size(); ++k)
                if (mask[k]) worst = std::max(worst, std::abs(z[k]));
            CHECK(worst < 1e-10);
        }
}

TEST_CASE("INI is present between mixed numerologies")
{
    const auto exp = prepare(small_scenario());
    std::vector<ComplexSignal> x;
    for (const auto& g : exp.grids) x.push_back(ofdm_modulate(g, exp.dims, Rate::Oversampled));
    const cvec z = compute_ini(x, 1, 0, exp.dims);
    const auto mask = subband_mask(exp.dims.bwps[1], exp.dims.bwps[1].l_ofdm_os);
    double on = 0;
    for (std::size_t k = 0; k < z.size(); ++k)
        if (mask[k]) on += std::norm(z[k]);
    CHECK(on > 1e-12);
}

TEST_CASE("E-ICEF output is built from active subcarriers only")
{
    const auto exp = prepare(small_scenario());
    EIcefOptions opt;
    opt.apply_wola = false;
    const auto r = run_e_icef(exp.spec, exp.dims, exp.grids, opt);
    CHECK(r.iterations_run >= 1);
    // regenerating from the modified grids reproduces the output exactly
    CHECK(max_abs_diff(regenerate(r.grids, exp.dims).samples, r.signal.samples) < 1e-12);
    bool changed = false;
    for (std::size_t m = 0; m < r.grids.size(); ++m) {
        CHECK(r.grids[m].rows == exp.grids[m].rows);
        CHECK(r.grids[m].cols == exp.grids[m].cols);
        changed = changed || r.grids[m].values != exp.grids[m].values;
    }
    CHECK(changed);
    for (const auto& t : r.trace) CHECK(t.peak_after_clip <= r.threshold_amp * r.threshold_amp * (1 + 1e-12));
    CHECK(r.trace.back().peak_after_regen < r.trace.front().peak_before_clip);
}

TEST_CASE("E-ICEF and I-ICEF with a target above the signal peak change nothing")
{
    auto spec = small_scenario();
    spec.papr_target_db = 30.0;
    const auto exp = prepare(spec);
    const auto e = run_e_icef(spec, exp.dims, exp.grids);
    CHECK(e.iterations_run == 0);
    const auto plain = synthesize(exp, Method::None);
    CHECK(e.signal.samples == plain.signal.samples);
    const auto i = run_i_icef(spec, exp.dims, exp.grids);
    for (int it : i.iterations) CHECK(it == 0);
    CHECK(i.signal.samples == plain.signal.samples);
}

TEST_CASE("I-ICEF clips every subband against its own threshold")
{
    const auto exp = prepare(small_scenario());
    const auto r = run_i_icef(exp.spec, exp.dims, exp.grids);
    for (std::size_t m = 0; m < exp.grids.size(); ++m) {
        const auto before = ofdm_modulate(exp.grids[m], exp.dims, Rate::Oversampled);
        const auto after = ofdm_modulate(r.grids[m], exp.dims, Rate::Oversampled);
        const double pb = 10 * std::log10(peak_power(before.samples) / mean_power(before.samples));
        const double pa = 10 * std::log10(peak_power(after.samples) / mean_power(before.samples));
        CHECK(pa < pb);
    }
}
