#ifndef MIXNUM_WOLA_HPP
#define MIXNUM_WOLA_HPP

#include <span>
#include <vector>

#include "mixnum/ofdm.hpp"
#include "mixnum/scenario.hpp"
#include "mixnum/types.hpp"

namespace mixnum {

struct WolaParams {
    int l_ofdm{0};
    int l_cp{0};
    int l_ext{0};  // total extension, split evenly between prefix and suffix

    int window_len() const { return l_ofdm + l_cp + l_ext; }
    int ramp_len() const { return l_ext; }
    int stride() const { return l_ofdm + l_cp; }
    int lead() const { return l_ext / 2; }
};

WolaParams make_wola_params(const BwpDims& dims);

/// Raised-cosine ramps of ramp_len samples, w[i] = 0.5(1 - cos(pi(i+0.5)/R)),
/// mirrored at the tail, flat unity between.
std::vector<double> build_rc_window(const WolaParams& params);

/// Cyclic extension (L_cp + l_ext/2 tail samples in front, l_ext/2 head
/// samples behind) followed by the window.
cvec wola_symbol(std::span<const cplx> body, const WolaParams& params);

/// Overlap-add at `stride`. Output length is stride * S + (symbol_len - stride);
/// output sample 0 is the first sample of the first windowed symbol.
ComplexSignal wola_assemble(const std::vector<cvec>& windowed, int stride, double sample_rate_hz = 0.0);

/// Removes the l_ext/2 lead of an assembled signal by folding it cyclically
/// onto a frame of `frame_len` samples, so sample 0 lines up with the start of
/// the first CP-OFDM symbol. The head ramp wraps to the frame end and the tail
/// ramp to the frame start, as in continuous transmission.
ComplexSignal wola_fold(const ComplexSignal& assembled, int lead, long long frame_len);

/// Grid -> CP-OFDM symbols -> WOLA -> time-aligned frame, oversampled rate.
ComplexSignal wola_modulate(const ResourceGrid& grid, const DerivedDims& dims);

/// Element-wise sum; shorter inputs are zero-padded.
ComplexSignal aggregate(const std::vector<ComplexSignal>& subbands);

}  // namespace mixnum

#endif
