#include "mixnum/icef.hpp"

#include <cmath>
#include <stdexcept>

#include "mixnum/parallel.hpp"
#include "mixnum/wola.hpp"

namespace mixnum {

double ClipConfig::stop_power() const
{
    return threshold_amp * threshold_amp * std::pow(10.0, stop_epsilon_db / 10.0);
}

ClipConfig make_clip_config(std::span<const cplx> reference, double target_db, int max_iterations,
                            double stop_epsilon_db)
{
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
    ClipConfig cfg;
    cfg.papr_target_db = target_db;
    cfg.max_iterations = max_iterations;
    cfg.stop_epsilon_db = stop_epsilon_db;
    cfg.threshold_amp = threshold_from_target(reference, target_db);
    return cfg;
}

void clip_polar_inplace(std::span<cplx> x, double amplitude)
{
    if (!(amplitude > 0)) throw std::invalid_argument("clipping amplitude must be > 0");
    const double a2 = amplitude * amplitude;
    for (auto& v : x) {
        const double p = std::norm(v);
        if (p > a2) v *= amplitude / std::sqrt(p);
    }
}

cvec clip_polar(std::span<const cplx> x, double amplitude)
{
    cvec out(x.begin(), x.end());
    clip_polar_inplace(out, amplitude);
    return out;
}

double threshold_from_target(std::span<const cplx> x, double target_db)
{
    const double p = mean_power(x);
    if (!(p > 0)) throw std::invalid_argument("cannot derive a clipping threshold from a zero-power signal");
    return std::sqrt(p * std::pow(10.0, target_db / 10.0));
}

std::vector<bool> subband_mask(const BwpDims& dims, int transform_len, Placement placement)
{
    std::vector<bool> mask(static_cast<std::size_t>(transform_len), false);
    for (int k : active_bins(dims, placement)) mask[static_cast<std::size_t>(((k % transform_len) + transform_len) % transform_len)] = true;
    return mask;
}

IcefSymbolResult icef_symbol(std::span<const cplx> column, std::span<const int> bins, int transform_len,
                             const ClipConfig& cfg)
{
    IcefSymbolResult out;
    out.column.assign(column.begin(), column.end());
    if (cfg.max_iterations == 0) return out;

    cvec body(static_cast<std::size_t>(transform_len));
    cvec clipped_f(column.size());
    synthesize_symbol(out.column, bins, body);
    const double stop = cfg.stop_power();
    for (int l = 1; l <= cfg.max_iterations; ++l) {
        if (peak_power(body) <= stop) break;
        clip_polar_inplace(body, cfg.threshold_amp);
        analyze_symbol(body, bins, clipped_f);
        // c = clipped - original on the active bins; everything else is dropped
        for (std::size_t i = 0; i < column.size(); ++i) out.column[i] = column[i] + (clipped_f[i] - column[i]);
        synthesize_symbol(out.column, bins, body);
        out.iterations = l;
    }
    return out;
}

MethodResult run_i_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference)
{
    MethodResult result;
    std::vector<ComplexSignal> subbands;
    for (std::size_t m = 0; m < reference.size(); ++m) {
        const BwpDims& bd = dims.bwps[m];
        const ComplexSignal own = ofdm_modulate(reference[m], dims, Rate::Oversampled);
        const ClipConfig cfg =
            make_clip_config(own.samples, spec.papr_target_db, spec.max_iterations, spec.stop_epsilon_db);
        const auto bins = active_bins(bd, Placement::FullBand);

        ResourceGrid g = reference[m];
        g.reference = false;
        std::vector<int> iters(static_cast<std::size_t>(g.cols));
        parallel_for(static_cast<std::size_t>(g.cols), [&](std::size_t s) {
            auto r = icef_symbol(reference[m].column(static_cast<int>(s)), bins, bd.l_ofdm_os, cfg);
            std::copy(r.column.begin(), r.column.end(), g.column(static_cast<int>(s)).begin());
            iters[s] = r.iterations;
        });
        result.iterations.insert(result.iterations.end(), iters.begin(), iters.end());
        subbands.push_back(wola_modulate(g, dims));
        result.grids.push_back(std::move(g));
    }
    result.signal = aggregate(subbands);
    return result;
}

namespace {

// Transform of the CP-stripped stride window of `x` for BWP m, symbol s.
void symbol_window_spectrum(std::span<const cplx> x, const BwpDims& bd, int s, std::span<const int> bins,
                            std::span<cplx> column)
{
    const std::size_t start = static_cast<std::size_t>(s) * bd.stride_os() + bd.l_cp_os;
    if (start + bd.l_ofdm_os > x.size()) throw std::out_of_range("symbol window exceeds the signal");
    analyze_symbol(x.subspan(start, static_cast<std::size_t>(bd.l_ofdm_os)), bins, column);
}

}  // namespace

cvec compute_ini(const std::vector<ComplexSignal>& subbands, int m, int s, const DerivedDims& dims)
{
    const BwpDims& bd = dims.bwps.at(static_cast<std::size_t>(m));
    const std::size_t l = static_cast<std::size_t>(bd.l_ofdm_os);
    const std::size_t start = static_cast<std::size_t>(s) * bd.stride_os() + bd.l_cp_os;
    cvec window(l, cplx{});
    for (std::size_t i = 0; i < subbands.size(); ++i) {
        if (static_cast<int>(i) == m) continue;
        if (start + l > subbands[i].size()) throw std::out_of_range("INI window exceeds the signal");
        for (std::size_t n = 0; n < l; ++n) window[n] += subbands[i].samples[start + n];
    }
    // full-length transform with the receiver scaling
    std::vector<int> all(l);
    for (std::size_t k = 0; k < l; ++k) all[k] = static_cast<int>(k) - static_cast<int>(l / 2);
    cvec z(l);
    analyze_symbol(window, all, z);
    cvec out(l);
    for (std::size_t k = 0; k < l; ++k) out[(k + l / 2) % l] = z[k];  // back to natural bin order
    return out;
}

EIcefResult run_e_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference,
                       const EIcefOptions& options)
{
    EIcefResult result;
    const std::size_t nb = reference.size();
    std::vector<ComplexSignal> x(nb);
    std::vector<std::vector<int>> bins(nb);
    for (std::size_t m = 0; m < nb; ++m) {
        x[m] = ofdm_modulate(reference[m], dims, Rate::Oversampled);
        bins[m] = active_bins(dims.bwps[m], Placement::FullBand);
        ResourceGrid g = reference[m];
        g.reference = false;
        result.grids.push_back(std::move(g));
    }

    ComplexSignal y = aggregate(x);
    const ClipConfig cfg = make_clip_config(y.samples, spec.papr_target_db, spec.max_iterations, spec.stop_epsilon_db);
    result.threshold_amp = cfg.threshold_amp;
    const double stop = cfg.stop_power();

    for (int l = 1; l <= cfg.max_iterations; ++l) {
        EIcefTrace t;
        t.peak_before_clip = peak_power(y.samples);
        if (t.peak_before_clip <= stop) break;
        const cvec clipped = clip_polar(y.samples, cfg.threshold_amp);
        t.peak_after_clip = peak_power(clipped);

        for (std::size_t m = 0; m < nb; ++m) {
            const BwpDims& bd = dims.bwps[m];
            ResourceGrid& g = result.grids[m];
            const auto& ref = reference[m];
            parallel_for(static_cast<std::size_t>(g.cols), [&](std::size_t s) {
                const int si = static_cast<int>(s);
                const std::size_t k = static_cast<std::size_t>(g.rows);
                cvec xbar(k), z(k, cplx{});
                symbol_window_spectrum(clipped, bd, si, bins[m], xbar);
                if (options.cancel_ini && nb > 1) {
                    // z^(l-1): the other subbands, i.e. aggregate minus own signal
                    const std::size_t start = s * static_cast<std::size_t>(bd.stride_os()) + bd.l_cp_os;
                    cvec others(static_cast<std::size_t>(bd.l_ofdm_os));
                    for (std::size_t n = 0; n < others.size(); ++n)
                        others[n] = y.samples[start + n] - x[m].samples[start + n];
                    analyze_symbol(others, bins[m], z);
                }
                auto col = g.column(si);
                const auto orig = ref.column(si);
                for (std::size_t i = 0; i < k; ++i) {
                    const cplx c = xbar[i] - orig[i] - z[i];
                    col[i] = orig[i] + c;
                }
            });
        }
        for (std::size_t m = 0; m < nb; ++m) x[m] = ofdm_modulate(result.grids[m], dims, Rate::Oversampled);
        y = aggregate(x);
        t.peak_after_regen = peak_power(y.samples);
        result.trace.push_back(t);
        result.iterations_run = l;
    }
    result.iterations.push_back(result.iterations_run);

    if (options.apply_wola) {
        std::vector<ComplexSignal> shaped;
        for (const auto& g : result.grids) shaped.push_back(wola_modulate(g, dims));
        result.signal = aggregate(shaped);
    } else {
        result.signal = std::move(y);
    }
    return result;
}

}  // namespace mixnum
