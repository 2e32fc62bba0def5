#ifndef MIXNUM_FC_HPP
#define MIXNUM_FC_HPP

#include <span>
#include <vector>

#include "mixnum/scenario.hpp"
#include "mixnum/types.hpp"

namespace mixnum {

/// Frequency-domain window of one subband, indexed in DFT-shifted order
/// (index L/2 is the subband center).
struct FcWindow {
    std::vector<double> weights;
    int pass_lo{0};  // first passband index (shifted order)
    int pass_hi{0};  // last passband index
    int transition_bins{0};

    int length() const { return static_cast<int>(weights.size()); }
    // Indices with nonzero weight: passband plus both transition bands.
    int support_lo() const { return pass_lo - transition_bins; }
    int support_hi() const { return pass_hi + transition_bins; }
};

/// Continuous raised-cosine transition profile over `bins` bins, evaluated at
/// x bins past the passband edge: 1 at x=0, 0.5 at x=bins/2, 0 at x=bins.
double rc_transition(double x, int bins);

/// Window for a passband of 15 kHz bins [lo, hi] relative to the subband
/// center, with RC transitions of `transition_bins` bins placed outside the
/// passband on both sides. Transition bin i (0 nearest the passband) has
/// weight rc_transition(i + 0.5, T).
FcWindow design_window(int passband_lo, int passband_hi, int l_m, int transition_bins);
FcWindow design_window(const BwpDims& bwp, const FcDims& fc);

/// Matrix of equally sized blocks stored contiguously, block r at r*block_len.
struct FcBlocks {
    int block_len{0};
    int count{0};
    cvec data;

    std::span<cplx> block(int r) { return {data.data() + static_cast<std::size_t>(r) * block_len, static_cast<std::size_t>(block_len)}; }
    std::span<const cplx> block(int r) const
    {
        return {data.data() + static_cast<std::size_t>(r) * block_len, static_cast<std::size_t>(block_len)};
    }
};

/// Number of blocks segment() produces for `len` input samples.
int fc_block_count(long long len, const FcDims& fc);

/// Prepends L_O/2 zeros, zero-pads the tail, and cuts blocks of L_m at hop L_S.
FcBlocks segment(std::span<const cplx> signal, const FcDims& fc);

/// Per block: L_m-point DFT, half shift, window, map bin b to
/// (c - L_m/2 + b) mod N, phase rotation exp(j2pi r theta) with
/// theta = c L_S / L_m, gain N/L_m. Output blocks have length N.
FcBlocks subband_forward(const FcBlocks& blocks, const FcWindow& window, int center, const FcDims& fc);

struct FcCombined {
    FcBlocks freq;  // V_f
    FcBlocks time;  // V_t
};

/// Sums the subband spectra and inverse-transforms each block.
FcCombined combine(const std::vector<FcBlocks>& subbands);

/// Keeps the central N_S samples of every block and concatenates; the
/// result is truncated to `out_len` samples when out_len >= 0.
ComplexSignal ols_extract(const FcBlocks& time_blocks, const FcDims& fc, long long out_len, double sample_rate_hz);

/// Full FC-F-OFDM synthesis of nominal-rate baseband subband signals.
FcCombined fc_synthesize(const std::vector<ComplexSignal>& subbands, const std::vector<FcWindow>& windows,
                         const FcDims& fc);

}  // namespace mixnum

#endif
