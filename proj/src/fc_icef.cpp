#include "mixnum/fc_icef.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mixnum/fft.hpp"
#include "mixnum/parallel.hpp"

namespace mixnum {

std::vector<int> BinSets::indices(BinKind k) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < kind.size(); ++i)
        if (kind[i] == k) out.push_back(static_cast<int>(i));
    return out;
}

std::size_t BinSets::count(BinKind k) const { return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k)); }

BinSets build_bin_sets(const DerivedDims& dims, const std::vector<FcWindow>& windows, double channel_bw_hz)
{
    const int n = dims.fc.n;
    if (windows.size() != dims.fc.centers.size()) throw std::invalid_argument("one FC window per subband required");
    BinSets sets;
    sets.kind.assign(static_cast<std::size_t>(n), BinKind::Null);
    const double half_bw = channel_bw_hz / 2;
    for (int k = -n / 2; k < n / 2; ++k)
        if (std::abs(k) * dims.fc.bin_spacing_hz <= half_bw + 1e-6)
            sets.kind[static_cast<std::size_t>((k + n) % n)] = BinKind::Forbidden;

    for (std::size_t m = 0; m < windows.size(); ++m) {
        const auto& w = windows[m];
        for (int b = w.support_lo(); b <= w.support_hi(); ++b) {
            if (w.weights[static_cast<std::size_t>(b)] <= 0) continue;
            const int k = ((dims.fc.centers[m] - w.length() / 2 + b) % n + n) % n;
            auto& slot = sets.kind[static_cast<std::size_t>(k)];
            if (slot == BinKind::Allowed) throw std::invalid_argument("subband FC supports overlap");
            if (slot == BinKind::Null) throw std::invalid_argument("subband FC support leaves the channel bandwidth");
            slot = BinKind::Allowed;
        }
    }
    return sets;
}

std::vector<double> clip_noise_filter(const BinSets& sets)
{
    std::vector<double> h(sets.kind.size(), 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = sets.kind[i] == BinKind::Allowed ? 1.0 : 0.0;
    return h;
}

BlockIterateResult block_iterate(std::span<const cplx> v_f, std::span<const double> filter, double amplitude,
                                 int max_iterations, double stop_epsilon_db)
{
    if (filter.size() != v_f.size()) throw std::invalid_argument("filter length must match the block");
    BlockIterateResult out;
    out.freq.assign(v_f.begin(), v_f.end());
    out.time = idft(v_f);
    const double stop = amplitude * amplitude * std::pow(10.0, stop_epsilon_db / 10.0);
    cvec clipped_f(v_f.size());
    for (int l = 1; l <= max_iterations; ++l) {
        if (peak_power(out.time) <= stop) break;
        clip_polar_inplace(out.time, amplitude);
        dft(out.time, clipped_f);
        for (std::size_t k = 0; k < v_f.size(); ++k) {
            const cplx c = clipped_f[k] - v_f[k];
            out.freq[k] = v_f[k] + filter[k] * c;
        }
        idft(out.freq, out.time);
        out.iterations = l;
    }
    return out;
}

std::vector<ComplexSignal> fc_inputs(const DerivedDims& dims, const std::vector<ResourceGrid>& reference)
{
    // The FC mapping is one continuous frequency shift, whereas full-band
    // CP-OFDM restarts the carrier phase at each body. Pre-rotate every symbol
    // so the FC output lines up with the full-band reference.
    std::vector<ComplexSignal> out;
    for (std::size_t m = 0; m < reference.size(); ++m) {
        ResourceGrid g = reference[m];
        const auto& b = dims.bwps[m];
        const long long c = dims.fc.centers[m];
        for (int s = 0; s < g.cols; ++s) {
            const long long n0 = static_cast<long long>(s) * b.stride_os() + b.l_cp_os;
            const long long turns = (c * n0) % dims.fc.n;
            const cplx rot = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(turns) / dims.fc.n);
            for (auto& v : g.column(s)) v *= rot;
        }
        out.push_back(ofdm_modulate(g, dims, Rate::Nominal, Placement::Baseband));
    }
    return out;
}

std::vector<FcWindow> fc_windows(const DerivedDims& dims)
{
    std::vector<FcWindow> out;
    for (const auto& b : dims.bwps) out.push_back(design_window(b, dims.fc));
    return out;
}

FcRunResult run_fc(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference,
                   bool reduce_papr, std::span<const int> block_order)
{
    const auto windows = fc_windows(dims);
    FcRunResult result;
    FcCombined v = fc_synthesize(fc_inputs(dims, reference), windows, dims.fc);
    const long long out_len = dims.frame_len_os();
    result.unprocessed = ols_extract(v.time, dims.fc, out_len, dims.fs_oversampled);
    result.grids = reference;
    if (!reduce_papr || spec.max_iterations == 0) {
        result.signal = result.unprocessed;
        result.iterations.assign(static_cast<std::size_t>(v.time.count), 0);
        return result;
    }

    // Phase 1: one threshold for the whole signal, from the unprocessed output.
    result.threshold_amp = threshold_from_target(result.unprocessed.samples, spec.papr_target_db);
    const auto h = clip_noise_filter(build_bin_sets(dims, windows, spec.channel_bw_hz));

    // Phase 2: blocks are independent.
    std::vector<int> order(block_order.begin(), block_order.end());
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(v.freq.count));
        for (int r = 0; r < v.freq.count; ++r) order[static_cast<std::size_t>(r)] = r;
    }
    if (static_cast<int>(order.size()) != v.freq.count) throw std::invalid_argument("block order must cover all blocks");
    result.iterations.assign(static_cast<std::size_t>(v.freq.count), 0);
    parallel_for(order.size(), [&](std::size_t i) {
        const int r = order[i];
        auto res = block_iterate(v.freq.block(r), h, result.threshold_amp, spec.max_iterations, spec.stop_epsilon_db);
        std::copy(res.time.begin(), res.time.end(), v.time.block(r).begin());
        result.iterations[static_cast<std::size_t>(r)] = res.iterations;
    });
    result.signal = ols_extract(v.time, dims.fc, out_len, dims.fs_oversampled);
    return result;
}

FcRunResult run_fc_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference)
{
    return run_fc(spec, dims, reference, true);
}

}  // namespace mixnum
