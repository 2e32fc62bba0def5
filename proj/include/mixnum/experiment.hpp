#ifndef MIXNUM_EXPERIMENT_HPP
#define MIXNUM_EXPERIMENT_HPP

#include <optional>
#include <vector>

#include "mixnum/metrics.hpp"
#include "mixnum/ofdm.hpp"
#include "mixnum/scenario.hpp"

namespace mixnum {

/// A validated scenario with its derived dimensions and reference grids.
struct Experiment {
    ScenarioSpec spec;
    DerivedDims dims;
    std::vector<ResourceGrid> grids;
};

Experiment prepare(const ScenarioSpec& spec);

struct Waveform {
    ComplexSignal signal;
    std::vector<int> iterations;  // per symbol (I-ICEF), per run (E-ICEF) or per block (FC-ICEF)
};

/// Runs `method` (spec.method when omitted) end to end.
Waveform synthesize(const Experiment& exp, std::optional<Method> method = std::nullopt);

struct Measurement {
    MetricsReport report;
    CcdfCurve ccdf;
    PsdEstimate psd;
};

Measurement measure(const Experiment& exp, const Waveform& wave, const std::optional<EmissionMask>& mask);

}  // namespace mixnum

#endif
