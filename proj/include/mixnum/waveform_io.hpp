#ifndef MIXNUM_WAVEFORM_IO_HPP
#define MIXNUM_WAVEFORM_IO_HPP

#include <string>

#include "mixnum/types.hpp"

namespace mixnum {

// Raw waveform export: `<base>.cf64` holds interleaved little-endian float64
// (re, im) pairs; `<base>.json` holds {"sample_rate_hz", "length", "format"}.
void write_waveform(const std::string& base_path, const ComplexSignal& signal);
ComplexSignal read_waveform(const std::string& base_path);

}  // namespace mixnum

#endif
