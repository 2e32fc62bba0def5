#ifndef MIXNUM_FC_ICEF_HPP
#define MIXNUM_FC_ICEF_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mixnum/fc.hpp"
#include "mixnum/icef.hpp"
#include "mixnum/ofdm.hpp"
#include "mixnum/scenario.hpp"

namespace mixnum {

enum class BinKind : std::uint8_t { Allowed, Forbidden, Null };

/// Classification of the N common FC bins (natural order, bin k <-> k mod N).
///   Allowed   (K_E)    passband and transition bins of any subband
///   Forbidden (K_F)    in-channel bins outside every subband's support
///   Null      (K_null) bins outside the channel bandwidth
struct BinSets {
    std::vector<BinKind> kind;

    std::vector<int> indices(BinKind k) const;
    std::size_t count(BinKind k) const;
};

BinSets build_bin_sets(const DerivedDims& dims, const std::vector<FcWindow>& windows, double channel_bw_hz);

/// Binary clipping-noise filter: 1 on K_E, 0 elsewhere.
std::vector<double> clip_noise_filter(const BinSets& sets);

struct BlockIterateResult {
    cvec time;  // v_t after the last pass
    cvec freq;  // v_f after the last pass
    int iterations{0};
};

/// Iterative clipping with noise filtering on one FC block spectrum `v_f`.
BlockIterateResult block_iterate(std::span<const cplx> v_f, std::span<const double> filter, double amplitude,
                                 int max_iterations, double stop_epsilon_db);

struct FcRunResult : MethodResult {
    ComplexSignal unprocessed;  // FC-F-OFDM output without PAPR reduction
    double threshold_amp{0.0};
};

/// Nominal-rate baseband CP-OFDM subband signals used as FC inputs.
std::vector<ComplexSignal> fc_inputs(const DerivedDims& dims, const std::vector<ResourceGrid>& reference);

std::vector<FcWindow> fc_windows(const DerivedDims& dims);

/// FC-F-OFDM synthesis; with reduce_papr the blocks are PAPR-limited in the
/// common FC stage before OLS. `block_order`, when non-empty, is the order in
/// which blocks are processed (results do not depend on it).
FcRunResult run_fc(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference,
                   bool reduce_papr, std::span<const int> block_order = {});

FcRunResult run_fc_icef(const ScenarioSpec& spec, const DerivedDims& dims, const std::vector<ResourceGrid>& reference);

}  // namespace mixnum

#endif
