#include "mixnum/fc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mixnum/fft.hpp"
#include "mixnum/parallel.hpp"

namespace mixnum {

double rc_transition(double x, int bins)
{
    if (bins <= 0) return x < 0 ? 1.0 : 0.0;
    if (x <= 0) return 1.0;
    if (x >= bins) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * x / bins));
}

FcWindow design_window(int passband_lo, int passband_hi, int l_m, int transition_bins)
{
    if (passband_hi < passband_lo) throw std::invalid_argument("empty passband");
    if (transition_bins < 0) throw std::invalid_argument("negative transition width");
    FcWindow w;
    w.transition_bins = transition_bins;
    w.pass_lo = passband_lo + l_m / 2;
    w.pass_hi = passband_hi + l_m / 2;
    if (w.support_lo() < 0 || w.support_hi() >= l_m)
        throw std::invalid_argument("passband plus transition bands (" +
                                    std::to_string(w.support_hi() - w.support_lo() + 1) + " bins) overflow L_m = " +
                                    std::to_string(l_m));
    w.weights.assign(static_cast<std::size_t>(l_m), 0.0);
    for (int b = w.pass_lo; b <= w.pass_hi; ++b) w.weights[static_cast<std::size_t>(b)] = 1.0;
    for (int i = 0; i < transition_bins; ++i) {
        const double v = rc_transition(i + 0.5, transition_bins);
        w.weights[static_cast<std::size_t>(w.pass_hi + 1 + i)] = v;
        w.weights[static_cast<std::size_t>(w.pass_lo - 1 - i)] = v;
    }
    return w;
}

FcWindow design_window(const BwpDims& bwp, const FcDims& fc)
{
    return design_window(bwp.passband_lo, bwp.passband_hi, fc.l_m, fc.transition_bins);
}

int fc_block_count(long long len, const FcDims& fc)
{
    const long long padded = len + fc.l_o / 2;
    return static_cast<int>((padded + fc.l_s - 1) / fc.l_s);
}

FcBlocks segment(std::span<const cplx> signal, const FcDims& fc)
{
    FcBlocks out;
    out.block_len = fc.l_m;
    out.count = fc_block_count(static_cast<long long>(signal.size()), fc);
    out.data.assign(static_cast<std::size_t>(out.count) * fc.l_m, cplx{});
    const long long head = fc.l_o / 2;
    for (int r = 0; r < out.count; ++r) {
        auto blk = out.block(r);
        const long long start = static_cast<long long>(r) * fc.l_s - head;
        for (int i = 0; i < fc.l_m; ++i) {
            const long long src = start + i;
            if (src >= 0 && src < static_cast<long long>(signal.size()))
                blk[static_cast<std::size_t>(i)] = signal[static_cast<std::size_t>(src)];
        }
    }
    return out;
}

FcBlocks subband_forward(const FcBlocks& blocks, const FcWindow& window, int center, const FcDims& fc)
{
    if (window.length() != blocks.block_len || blocks.block_len != fc.l_m)
        throw std::invalid_argument("window length must equal L_m");
    const int l = fc.l_m;
    const int n = fc.n;
    // theta = c L_S / L_m; only its fractional part matters for the rotation
    const double theta = static_cast<double>(center) * fc.l_s / l;
    const double gain = static_cast<double>(n) / l;

    FcBlocks out;
    out.block_len = n;
    out.count = blocks.count;
    out.data.assign(static_cast<std::size_t>(out.count) * n, cplx{});
    parallel_for(static_cast<std::size_t>(blocks.count), [&](std::size_t rr) {
        const int r = static_cast<int>(rr);
        cvec spec(static_cast<std::size_t>(l));
        dft(blocks.block(r), spec);
        const double turns = r * theta - std::floor(r * theta);
        const cplx rot = std::polar(gain, 2.0 * std::numbers::pi * turns);
        auto dst = out.block(r);
        for (int b = window.support_lo(); b <= window.support_hi(); ++b) {
            // shifted index b holds natural bin (b - l/2) mod l
            const cplx v = spec[static_cast<std::size_t>(((b - l / 2) % l + l) % l)];
            const int k = ((center - l / 2 + b) % n + n) % n;
            dst[static_cast<std::size_t>(k)] = v * window.weights[static_cast<std::size_t>(b)] * rot;
        }
    });
    return out;
}

FcCombined combine(const std::vector<FcBlocks>& subbands)
{
    if (subbands.empty()) throw std::invalid_argument("nothing to combine");
    FcCombined out;
    out.freq = subbands.front();
    for (std::size_t i = 1; i < subbands.size(); ++i) {
        const auto& s = subbands[i];
        if (s.count != out.freq.count || s.block_len != out.freq.block_len)
            throw std::invalid_argument("subband block shapes differ");
        for (std::size_t k = 0; k < s.data.size(); ++k) out.freq.data[k] += s.data[k];
    }
    out.time.block_len = out.freq.block_len;
    out.time.count = out.freq.count;
    out.time.data.resize(out.freq.data.size());
    parallel_for(static_cast<std::size_t>(out.freq.count), [&](std::size_t r) {
        idft(out.freq.block(static_cast<int>(r)), out.time.block(static_cast<int>(r)));
    });
    return out;
}

ComplexSignal ols_extract(const FcBlocks& time_blocks, const FcDims& fc, long long out_len, double sample_rate_hz)
{
    if (time_blocks.block_len != fc.n) throw std::invalid_argument("OLS expects blocks of length N");
    const int discard = (fc.n - fc.n_s) / 2;
    ComplexSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.reserve(static_cast<std::size_t>(time_blocks.count) * fc.n_s);
    for (int r = 0; r < time_blocks.count; ++r) {
        auto blk = time_blocks.block(r);
        out.samples.insert(out.samples.end(), blk.begin() + discard, blk.begin() + discard + fc.n_s);
    }
    if (out_len >= 0 && static_cast<long long>(out.samples.size()) > out_len)
        out.samples.resize(static_cast<std::size_t>(out_len));
    return out;
}

FcCombined fc_synthesize(const std::vector<ComplexSignal>& subbands, const std::vector<FcWindow>& windows,
                         const FcDims& fc)
{
    if (subbands.size() != windows.size() || subbands.size() != fc.centers.size())
        throw std::invalid_argument("subband/window/center count mismatch");
    std::vector<FcBlocks> mapped;
    for (std::size_t m = 0; m < subbands.size(); ++m) {
        const FcBlocks blocks = segment(subbands[m].samples, fc);
        mapped.push_back(subband_forward(blocks, windows[m], fc.centers[m], fc));
    }
    return combine(mapped);
}

}  // namespace mixnum
