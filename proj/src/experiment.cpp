#include "mixnum/experiment.hpp"

#include <stdexcept>

#include "mixnum/fc_icef.hpp"
#include "mixnum/icef.hpp"
#include "mixnum/wola.hpp"

namespace mixnum {

Experiment prepare(const ScenarioSpec& spec)
{
    Experiment exp;
    exp.spec = spec;
    exp.dims = derive_dims(spec);
    for (std::size_t m = 0; m < spec.bwps.size(); ++m)
        exp.grids.push_back(generate_grid(spec.bwps[m], exp.dims.bwps[m], static_cast<int>(m), spec.seed));
    return exp;
}

Waveform synthesize(const Experiment& exp, std::optional<Method> method)
{
    ScenarioSpec spec = exp.spec;
    if (method) spec.method = *method;
    Waveform out;
    switch (spec.method) {
    case Method::None: {
        std::vector<ComplexSignal> subbands;
        for (const auto& g : exp.grids) subbands.push_back(wola_modulate(g, exp.dims));
        out.signal = aggregate(subbands);
        break;
    }
    case Method::IIcef: {
        auto r = run_i_icef(spec, exp.dims, exp.grids);
        out.signal = std::move(r.signal);
        out.iterations = std::move(r.iterations);
        break;
    }
    case Method::EIcefWola: {
        auto r = run_e_icef(spec, exp.dims, exp.grids);
        out.signal = std::move(r.signal);
        out.iterations = std::move(r.iterations);
        break;
    }
    case Method::FcFOfdm:
    case Method::FcIcef: {
        auto r = run_fc(spec, exp.dims, exp.grids, spec.method == Method::FcIcef);
        out.signal = std::move(r.signal);
        out.iterations = std::move(r.iterations);
        break;
    }
    }
    return out;
}

Measurement measure(const Experiment& exp, const Waveform& wave, const std::optional<EmissionMask>& mask)
{
    const auto& ms = exp.spec.measurement;
    Measurement out;
    out.ccdf = ccdf(papr_per_sample(wave.signal.samples));
    out.psd = psd_welch(wave.signal, ms.rbw_hz);

    auto& r = out.report;
    r.papr_probability = ms.papr_probability;
    r.papr_at_p_db = papr_at_probability(out.ccdf, ms.papr_probability);
    r.papr_max_db = out.ccdf.sorted_db.back();
    const std::vector<int> timing =
        ms.receiver_timing_offsets.empty() ? default_timing_offsets(exp.dims) : ms.receiver_timing_offsets;
    r.mse_db = mse_per_bwp(wave.signal, exp.grids, exp.dims, timing);
    r.aclr_offsets_hz = ms.aclr_offsets_hz;
    r.aclr_db = aclr(out.psd, ms.aclr_measurement_bw_hz, ms.aclr_offsets_hz);
    if (mask) r.mask_margin_db = mask_margin(out.psd, *mask, exp.spec.channel_bw_hz);
    for (int it : wave.iterations) ++r.iterations_histogram[it];
    return out;
}

}  // namespace mixnum
