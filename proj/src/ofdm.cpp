#include "mixnum/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "mixnum/fft.hpp"
#include "mixnum/parallel.hpp"

namespace mixnum {

namespace {

// Gray-coded amplitude on one axis, 3GPP-style nesting:
// v = (1-2a0) * (2^(h-1) - (1-2a1) * (2^(h-2) - ... (1-2a_{h-1})))
double axis_level(const std::uint8_t* bits, int count)
{
    double v = 1.0;
    for (int i = count - 1; i >= 1; --i) v = static_cast<double>(1 << (count - i)) - (1.0 - 2.0 * bits[i]) * v;
    return (1.0 - 2.0 * bits[0]) * v;
}

double qam_norm(Modulation mod)
{
    const double m = static_cast<double>(1 << bits_per_symbol(mod));
    return std::sqrt(2.0 * (m - 1.0) / 3.0);
}

std::size_t wrap_bin(int k, int l)
{
    if (k < -l / 2 || k >= l / 2)
        throw std::out_of_range("subcarrier index " + std::to_string(k) + " outside transform of size " +
                                std::to_string(l));
    return static_cast<std::size_t>(((k % l) + l) % l);
}

}  // namespace

cvec qam_map(std::span<const std::uint8_t> bits, Modulation mod)
{
    const int bps = bits_per_symbol(mod);
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                                    std::to_string(bps));
    const int half = bps / 2;
    const double norm = qam_norm(mod);
    cvec out(bits.size() / static_cast<std::size_t>(bps));
    std::uint8_t ibits[4];
    std::uint8_t qbits[4];
    for (std::size_t s = 0; s < out.size(); ++s) {
        const std::uint8_t* word = bits.data() + s * static_cast<std::size_t>(bps);
        for (int i = 0; i < half; ++i) {
            ibits[i] = word[2 * i] & 1u;
            qbits[i] = word[2 * i + 1] & 1u;
        }
        out[s] = cplx(axis_level(ibits, half), axis_level(qbits, half)) / norm;
    }
    return out;
}

cvec constellation(Modulation mod)
{
    const int bps = bits_per_symbol(mod);
    const int m = 1 << bps;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(m * bps));
    for (int w = 0; w < m; ++w)
        for (int b = 0; b < bps; ++b) bits[static_cast<std::size_t>(w * bps + b)] = (w >> (bps - 1 - b)) & 1;
    return qam_map(bits, mod);
}

ResourceGrid generate_grid(const BwpSpec& bwp, const BwpDims& dims, int bwp_index, std::uint64_t seed)
{
    ResourceGrid g;
    g.bwp_index = bwp_index;
    g.rows = dims.num_active();
    g.cols = dims.symbols;
    g.values.resize(static_cast<std::size_t>(g.rows) * g.cols);
    const int bps = bits_per_symbol(bwp.modulation);
    parallel_for(static_cast<std::size_t>(g.cols), [&](std::size_t s) {
        std::seed_seq key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(bwp_index), static_cast<std::uint32_t>(s)};
        std::mt19937_64 rng(key);
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.rows * bps));
        std::uint64_t word = 0;
        int left = 0;
        for (auto& b : bits) {
            if (left == 0) {
                word = rng();
                left = 64;
            }
            b = static_cast<std::uint8_t>(word & 1u);
            word >>= 1;
            --left;
        }
        const cvec symbols = qam_map(bits, bwp.modulation);
        std::copy(symbols.begin(), symbols.end(), g.column(static_cast<int>(s)).begin());
    });
    return g;
}

int transform_size(const BwpDims& dims, Rate rate) { return rate == Rate::Oversampled ? dims.l_ofdm_os : dims.l_ofdm; }

int cp_length(const BwpDims& dims, Rate rate) { return rate == Rate::Oversampled ? dims.l_cp_os : dims.l_cp; }

std::vector<int> active_bins(const BwpDims& dims, Placement placement)
{
    std::vector<int> bins = dims.active;
    if (placement == Placement::Baseband)
        for (auto& k : bins) k -= dims.center_own;
    return bins;
}

void synthesize_symbol(std::span<const cplx> column, std::span<const int> bins, std::span<cplx> body)
{
    const int l = static_cast<int>(body.size());
    if (column.size() != bins.size()) throw std::invalid_argument("column/bin count mismatch");
    std::fill(body.begin(), body.end(), cplx{});
    for (std::size_t i = 0; i < bins.size(); ++i) body[wrap_bin(bins[i], l)] = column[i];
    idft(body, body);
    const double scale = std::sqrt(static_cast<double>(l));
    for (auto& v : body) v *= scale;
}

void analyze_symbol(std::span<const cplx> body, std::span<const int> bins, std::span<cplx> column)
{
    const int l = static_cast<int>(body.size());
    if (column.size() != bins.size()) throw std::invalid_argument("column/bin count mismatch");
    thread_local cvec spectrum;
    spectrum.resize(body.size());
    dft(body, spectrum);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l));
    for (std::size_t i = 0; i < bins.size(); ++i) column[i] = spectrum[wrap_bin(bins[i], l)] * scale;
}

ComplexSignal ofdm_modulate(const ResourceGrid& grid, const DerivedDims& dims, Rate rate, Placement placement)
{
    const BwpDims& m = dims.bwps.at(static_cast<std::size_t>(grid.bwp_index));
    if (grid.rows != m.num_active() || grid.cols != m.symbols)
        throw std::invalid_argument("grid dimensions do not match the derived BWP dimensions");
    const int l = transform_size(m, rate);
    const int cp = cp_length(m, rate);
    const std::size_t stride = static_cast<std::size_t>(l + cp);
    const auto bins = active_bins(m, placement);

    ComplexSignal out;
    out.sample_rate_hz = rate == Rate::Oversampled ? dims.fs_oversampled : dims.fs_nominal;
    out.samples.resize(stride * static_cast<std::size_t>(grid.cols));
    parallel_for(static_cast<std::size_t>(grid.cols), [&](std::size_t s) {
        std::span<cplx> sym(out.samples.data() + s * stride, stride);
        auto body = sym.subspan(static_cast<std::size_t>(cp));
        synthesize_symbol(grid.column(static_cast<int>(s)), bins, body);
        std::copy(body.end() - cp, body.end(), sym.begin());
    });
    return out;
}

ResourceGrid ofdm_demodulate(const ComplexSignal& signal, const DerivedDims& dims, int bwp_index, int timing_offset,
                             Rate rate, Placement placement)
{
    const BwpDims& m = dims.bwps.at(static_cast<std::size_t>(bwp_index));
    const int l = transform_size(m, rate);
    const int cp = cp_length(m, rate);
    const long long stride = l + cp;
    if (timing_offset < -cp || timing_offset > 0)
        throw std::out_of_range("timing offset " + std::to_string(timing_offset) + " leaves the CP-extended symbol");
    if (static_cast<long long>(signal.size()) < stride * m.symbols)
        throw std::out_of_range("signal too short for " + std::to_string(m.symbols) + " symbols");

    ResourceGrid g;
    g.bwp_index = bwp_index;
    g.rows = m.num_active();
    g.cols = m.symbols;
    g.reference = false;
    g.values.resize(static_cast<std::size_t>(g.rows) * g.cols);
    const auto bins = active_bins(m, placement);
    // An early window sees the body cyclically shifted; undo the resulting
    // per-subcarrier phase ramp exp(j2pi k offset / L).
    cvec derotate(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i)
        derotate[i] = std::polar(1.0, -2.0 * std::numbers::pi * bins[i] * timing_offset / l);
    parallel_for(static_cast<std::size_t>(g.cols), [&](std::size_t s) {
        const long long start = static_cast<long long>(s) * stride + cp + timing_offset;
        std::span<const cplx> window(signal.samples.data() + start, static_cast<std::size_t>(l));
        auto col = g.column(static_cast<int>(s));
        analyze_symbol(window, bins, col);
        if (timing_offset != 0)
            for (std::size_t i = 0; i < bins.size(); ++i) col[i] *= derotate[i];
    });
    return g;
}

}  // namespace mixnum
