#ifndef MIXNUM_OFDM_HPP
#define MIXNUM_OFDM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mixnum/scenario.hpp"
#include "mixnum/types.hpp"

namespace mixnum {

/// Gray-mapped square QAM with unit average power. Bits are consumed
/// MSB-first per symbol; even bit positions drive I, odd positions drive Q,
/// and an all-zero word maps to the (+,+) corner closest to the origin.
cvec qam_map(std::span<const std::uint8_t> bits, Modulation mod);

/// All points of the constellation, in bit-word order.
cvec constellation(Modulation mod);

/// Frequency-domain data for one BWP, column-major: column s holds the
/// active subcarriers of OFDM symbol s in BwpDims::active order.
struct ResourceGrid {
    int bwp_index{0};
    int rows{0};
    int cols{0};
    bool reference{true};
    cvec values;

    std::span<cplx> column(int s) { return {values.data() + static_cast<std::size_t>(s) * rows, static_cast<std::size_t>(rows)}; }
    std::span<const cplx> column(int s) const
    {
        return {values.data() + static_cast<std::size_t>(s) * rows, static_cast<std::size_t>(rows)};
    }
};

/// Random payload grid. Each (seed, bwp, symbol) column is drawn from its own
/// generator so grids do not depend on generation order.
ResourceGrid generate_grid(const BwpSpec& bwp, const BwpDims& dims, int bwp_index, std::uint64_t seed);

enum class Rate { Nominal, Oversampled };

// FullBand places subcarriers at their channel position (center offset
// embedded); Baseband centres the BWP on DC, which is what FC filtering takes.
enum class Placement { FullBand, Baseband };

int transform_size(const BwpDims& dims, Rate rate);
int cp_length(const BwpDims& dims, Rate rate);

/// Signed subcarrier indices for the chosen placement.
std::vector<int> active_bins(const BwpDims& dims, Placement placement);

/// One OFDM symbol body: subcarriers placed at (k mod L), inverse transform,
/// scaled by sqrt(L) so the mean sample power is (active/L) * symbol power.
/// Throws if a bin lies outside [-L/2, L/2).
void synthesize_symbol(std::span<const cplx> column, std::span<const int> bins, std::span<cplx> body);

/// Inverse of synthesize_symbol on the given bins.
void analyze_symbol(std::span<const cplx> body, std::span<const int> bins, std::span<cplx> column);

/// CP-OFDM modulation of a whole grid: per symbol place, inverse transform,
/// prepend the last L_cp samples, concatenate.
ComplexSignal ofdm_modulate(const ResourceGrid& grid, const DerivedDims& dims, Rate rate,
                            Placement placement = Placement::FullBand);

/// Reference CP-OFDM receiver: the DFT window of symbol s starts at
/// s * stride + L_cp + timing_offset. timing_offset must keep the window
/// inside the symbol's CP-extended span.
ResourceGrid ofdm_demodulate(const ComplexSignal& signal, const DerivedDims& dims, int bwp_index,
                             int timing_offset = 0, Rate rate = Rate::Oversampled,
                             Placement placement = Placement::FullBand);

}  // namespace mixnum

#endif
