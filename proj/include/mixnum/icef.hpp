#ifndef MIXNUM_ICEF_HPP
#define MIXNUM_ICEF_HPP

#include <span>
#include <vector>

#include "mixnum/ofdm.hpp"
#include "mixnum/scenario.hpp"
#include "mixnum/types.hpp"

namespace mixnum {

struct ClipConfig {
    double papr_target_db{5.0};
    int max_iterations{20};
    double threshold_amp{1.0};
    double stop_epsilon_db{0.01};

    // Peak power at or below which iterating stops.
    double stop_power() const;
};

/// Builds a ClipConfig whose threshold is derived from `reference` via
/// threshold_from_target.
ClipConfig make_clip_config(std::span<const cplx> reference, double target_db, int max_iterations,
                            double stop_epsilon_db);

/// Amplitude limiter: samples above A keep their phase and get magnitude A.
cvec clip_polar(std::span<const cplx> x, double amplitude);
void clip_polar_inplace(std::span<cplx> x, double amplitude);

/// A = sqrt(mean|x|^2 * 10^(target/10)).
double threshold_from_target(std::span<const cplx> x, double target_db);

/// Boolean mask over a BWP's L transform bins, true on active subcarriers.
std::vector<bool> subband_mask(const BwpDims& dims, int transform_len, Placement placement = Placement::FullBand);

struct IcefSymbolResult {
    cvec column;
    int iterations{0};  // clip/filter passes actually run
};

/// Baseline per-symbol ICEF on one OFDM symbol body of length `transform_len`.
/// Clipping noise is kept only on `bins`, so the result differs from the input
/// column on active subcarriers only.
IcefSymbolResult icef_symbol(std::span<const cplx> column, std::span<const int> bins, int transform_len,
                             const ClipConfig& cfg);

struct MethodResult {
    ComplexSignal signal;
    std::vector<ResourceGrid> grids;  // PAPR-modified grids
    std::vector<int> iterations;      // per symbol or per block
};

/// Subband-independent ICEF followed by per-BWP WOLA and aggregation.
MethodResult run_i_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference);

/// INI seen by BWP m in symbol s: sum of all other subband signals over the
/// symbol's stride window, CP part dropped, transformed at BWP m's
/// oversampled size with the analyze_symbol scaling. Length L_ofdm_os_m.
cvec compute_ini(const std::vector<ComplexSignal>& subbands, int m, int s, const DerivedDims& dims);

struct EIcefOptions {
    bool cancel_ini{true};  // false removes the INI term (ablation)
    bool apply_wola{true};  // false returns the plain CP-OFDM aggregate of X^(L)
};

struct EIcefTrace {
    double peak_before_clip{0.0};  // max|aggregate|^2 entering the iteration
    double peak_after_clip{0.0};   // max|aggregate|^2 right after clipping
    double peak_after_regen{0.0};  // max|aggregate|^2 after regenerating the subbands
};

struct EIcefResult : MethodResult {
    double threshold_amp{0.0};
    std::vector<EIcefTrace> trace;
    int iterations_run{0};
};

/// Enhanced ICEF: clipping on the aggregate, per-BWP noise extraction with
/// INI cancellation, CP regeneration each pass, then WOLA per BWP.
EIcefResult run_e_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference,
                       const EIcefOptions& options = {});

}  // namespace mixnum

#endif
