#include "mixnum/wola.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mixnum/parallel.hpp"

namespace mixnum {

WolaParams make_wola_params(const BwpDims& dims)
{
    return WolaParams{dims.l_ofdm_os, dims.l_cp_os, dims.wola_ext};
}

std::vector<double> build_rc_window(const WolaParams& p)
{
    const int len = p.window_len();
    const int ramp = p.ramp_len();
    if (ramp < 0 || 2 * ramp > len) throw std::invalid_argument("WOLA ramp longer than half the window");
    std::vector<double> w(static_cast<std::size_t>(len), 1.0);
    for (int i = 0; i < ramp; ++i) {
        const double v = 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / ramp));
        w[static_cast<std::size_t>(i)] = v;
        w[static_cast<std::size_t>(len - 1 - i)] = v;
    }
    return w;
}

cvec wola_symbol(std::span<const cplx> body, const WolaParams& p)
{
    if (static_cast<int>(body.size()) != p.l_ofdm)
        throw std::invalid_argument("WOLA body length " + std::to_string(body.size()) + " != " +
                                    std::to_string(p.l_ofdm));
    const auto w = build_rc_window(p);
    const int prefix = p.l_cp + p.l_ext / 2;
    const int n = p.l_ofdm;
    cvec out(static_cast<std::size_t>(p.window_len()));
    for (int i = 0; i < p.window_len(); ++i) {
        const int src = (((i - prefix) % n) + n) % n;
        out[static_cast<std::size_t>(i)] = body[static_cast<std::size_t>(src)] * w[static_cast<std::size_t>(i)];
    }
    return out;
}

ComplexSignal wola_assemble(const std::vector<cvec>& windowed, int stride, double sample_rate_hz)
{
    if (windowed.empty()) throw std::invalid_argument("nothing to assemble");
    const std::size_t len = windowed.front().size();
    if (stride <= 0 || static_cast<std::size_t>(stride) > len)
        throw std::invalid_argument("stride must lie in (0, symbol length]");
    ComplexSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.assign(static_cast<std::size_t>(stride) * windowed.size() + (len - static_cast<std::size_t>(stride)),
                       cplx{});
    for (std::size_t s = 0; s < windowed.size(); ++s) {
        if (windowed[s].size() != len) throw std::invalid_argument("windowed symbols differ in length");
        cplx* dst = out.samples.data() + s * static_cast<std::size_t>(stride);
        for (std::size_t i = 0; i < len; ++i) dst[i] += windowed[s][i];
    }
    return out;
}

ComplexSignal wola_fold(const ComplexSignal& assembled, int lead, long long frame_len)
{
    if (frame_len <= 0) throw std::invalid_argument("frame length must be positive");
    ComplexSignal out;
    out.sample_rate_hz = assembled.sample_rate_hz;
    out.samples.assign(static_cast<std::size_t>(frame_len), cplx{});
    for (std::size_t i = 0; i < assembled.size(); ++i) {
        long long t = (static_cast<long long>(i) - lead) % frame_len;
        if (t < 0) t += frame_len;
        out.samples[static_cast<std::size_t>(t)] += assembled.samples[i];
    }
    return out;
}

ComplexSignal wola_modulate(const ResourceGrid& grid, const DerivedDims& dims)
{
    const BwpDims& m = dims.bwps.at(static_cast<std::size_t>(grid.bwp_index));
    const WolaParams params = make_wola_params(m);
    const auto bins = active_bins(m, Placement::FullBand);
    std::vector<cvec> windowed(static_cast<std::size_t>(grid.cols));
    parallel_for(windowed.size(), [&](std::size_t s) {
        cvec body(static_cast<std::size_t>(params.l_ofdm));
        synthesize_symbol(grid.column(static_cast<int>(s)), bins, body);
        windowed[s] = wola_symbol(body, params);
    });
    const auto assembled = wola_assemble(windowed, params.stride(), dims.fs_oversampled);
    return wola_fold(assembled, params.lead(), dims.frame_len_os());
}

ComplexSignal aggregate(const std::vector<ComplexSignal>& subbands)
{
    if (subbands.empty()) throw std::invalid_argument("nothing to aggregate");
    ComplexSignal out;
    out.sample_rate_hz = subbands.front().sample_rate_hz;
    std::size_t len = 0;
    for (const auto& s : subbands) {
        if (s.sample_rate_hz != out.sample_rate_hz) throw std::invalid_argument("sample-rate mismatch in aggregate");
        len = std::max(len, s.size());
    }
    out.samples.assign(len, cplx{});
    for (const auto& s : subbands)
        for (std::size_t i = 0; i < s.size(); ++i) out.samples[i] += s.samples[i];
    return out;
}

}  // namespace mixnum
