#include "mixnum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mixnum/fft.hpp"

namespace mixnum {

std::vector<double> papr_per_sample(std::span<const cplx> y)
{
    const double p = mean_power(y);
    if (!(p > 0)) throw std::invalid_argument("PAPR of a zero-power signal is undefined");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::norm(y[i]) / p;
    return out;
}

double CcdfCurve::exceedance(double threshold_db) const
{
    if (sorted_db.empty()) return 0.0;
    const auto it = std::upper_bound(sorted_db.begin(), sorted_db.end(), threshold_db);
    return static_cast<double>(sorted_db.end() - it) / static_cast<double>(sorted_db.size());
}

CcdfCurve ccdf(std::span<const double> papr_linear)
{
    CcdfCurve c;
    c.sorted_db.reserve(papr_linear.size());
    for (double v : papr_linear)
        c.sorted_db.push_back(v > 0 ? 10.0 * std::log10(v) : -std::numeric_limits<double>::infinity());
    std::sort(c.sorted_db.begin(), c.sorted_db.end());
    return c;
}

double papr_at_probability(const CcdfCurve& curve, double p)
{
    const std::size_t n = curve.sample_count();
    if (n == 0) throw std::invalid_argument("empty CCDF");
    if (!(p > 0 && p < 1)) throw std::invalid_argument("probability must lie in (0, 1)");
    // exceedance of the i-th ascending sample is (n-1-i)/n
    const double pos = static_cast<double>(n - 1) - p * static_cast<double>(n);
    if (pos <= 0) return curve.sorted_db.front();
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return curve.sorted_db[lo] + frac * (curve.sorted_db[hi] - curve.sorted_db[lo]);
}

std::vector<std::pair<double, double>> ccdf_table(const CcdfCurve& curve, double min_db, double max_db, double step_db)
{
    std::vector<std::pair<double, double>> out;
    const auto steps = static_cast<long>(std::floor((max_db - min_db) / step_db + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double t = min_db + static_cast<double>(i) * step_db;
        out.emplace_back(t, curve.exceedance(t));
    }
    return out;
}

std::vector<int> default_timing_offsets(const DerivedDims& dims)
{
    std::vector<int> out;
    for (const auto& b : dims.bwps) out.push_back(-b.l_cp_os / 2);
    return out;
}

std::vector<double> mse_per_bwp(const ComplexSignal& y, const std::vector<ResourceGrid>& reference,
                                const DerivedDims& dims, std::span<const int> timing_offsets)
{
    if (reference.size() != dims.bwps.size()) throw std::invalid_argument("one reference grid per BWP required");
    if (y.size() < static_cast<std::size_t>(dims.frame_len_os()))
        throw std::invalid_argument("signal shorter than the scenario frame");
    std::vector<double> out;
    for (std::size_t m = 0; m < reference.size(); ++m) {
        const int offset = timing_offsets.empty() ? 0 : timing_offsets[m];
        const ResourceGrid rx = ofdm_demodulate(y, dims, static_cast<int>(m), offset);
        const auto& x = reference[m].values;
        if (rx.values.size() != x.size()) throw std::invalid_argument("reference grid shape mismatch");
        cplx cross{};
        double ref_energy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            cross += rx.values[i] * std::conj(x[i]);
            ref_energy += std::norm(x[i]);
        }
        const cplx gain = cross / ref_energy;
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) err += std::norm(rx.values[i] - gain * x[i]);
        const double mse = err / (std::norm(gain) * ref_energy);
        out.push_back(10.0 * std::log10(std::max(mse, 1e-300)));
    }
    return out;
}

int welch_segment_length(double fs_hz, double rbw_hz)
{
    const double target = fs_hz / rbw_hz;
    int best = 1;
    while (best * 2 <= target) best *= 2;
    // nearest in the log sense between best and 2*best
    if (target / best > 2.0 * best / target) best *= 2;
    return best;
}

PsdEstimate psd_welch(const ComplexSignal& y, double rbw_hz)
{
    if (!(y.sample_rate_hz > 0)) throw std::invalid_argument("PSD needs a sample rate");
    const int nfft = welch_segment_length(y.sample_rate_hz, rbw_hz);
    if (y.size() < static_cast<std::size_t>(nfft)) throw std::invalid_argument("signal shorter than one PSD segment");
    const std::size_t hop = static_cast<std::size_t>(nfft / 2);
    const std::size_t segments = (y.size() - static_cast<std::size_t>(nfft)) / hop + 1;

    std::vector<double> win(static_cast<std::size_t>(nfft));
    double win_energy = 0.0;
    for (int i = 0; i < nfft; ++i) {
        win[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / nfft));
        win_energy += win[static_cast<std::size_t>(i)] * win[static_cast<std::size_t>(i)];
    }

    std::vector<double> acc(static_cast<std::size_t>(nfft), 0.0);
    cvec buf(static_cast<std::size_t>(nfft));
    for (std::size_t s = 0; s < segments; ++s) {
        const cplx* src = y.samples.data() + s * hop;
        for (int i = 0; i < nfft; ++i) buf[static_cast<std::size_t>(i)] = src[i] * win[static_cast<std::size_t>(i)];
        dft(buf, buf);
        for (int k = 0; k < nfft; ++k) acc[static_cast<std::size_t>(k)] += std::norm(buf[static_cast<std::size_t>(k)]);
    }

    PsdEstimate psd;
    psd.segment_len = nfft;
    psd.rbw_hz = rbw_hz;
    psd.bin_width_hz = y.sample_rate_hz / nfft;
    psd.freq_hz.resize(static_cast<std::size_t>(nfft));
    psd.power.resize(static_cast<std::size_t>(nfft));
    psd.density_db.resize(static_cast<std::size_t>(nfft));
    const double scale = 1.0 / (static_cast<double>(segments) * nfft * win_energy);
    for (int i = 0; i < nfft; ++i) {
        const int k = (i + nfft / 2) % nfft;  // natural bin for ascending frequency
        psd.freq_hz[static_cast<std::size_t>(i)] = (i - nfft / 2) * psd.bin_width_hz;
        psd.power[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(k)] * scale;
    }
    double total = 0.0;
    for (double v : psd.power) total += v;
    const double per_rbw = rbw_hz / psd.bin_width_hz;
    for (std::size_t i = 0; i < psd.power.size(); ++i)
        psd.density_db[i] = 10.0 * std::log10(std::max(psd.power[i] * per_rbw / total, 1e-300));
    return psd;
}

double band_power(const PsdEstimate& psd, double center_hz, double bw_hz)
{
    const double lo = center_hz - bw_hz / 2;
    const double hi = center_hz + bw_hz / 2;
    double p = 0.0;
    for (std::size_t i = 0; i < psd.freq_hz.size(); ++i)
        if (psd.freq_hz[i] >= lo && psd.freq_hz[i] < hi) p += psd.power[i];
    return p;
}

std::vector<double> aclr(const PsdEstimate& psd, double measurement_bw_hz, std::span<const double> offsets_hz)
{
    if (psd.freq_hz.empty()) throw std::invalid_argument("empty PSD");
    const double nyquist = -psd.freq_hz.front();
    const double main = band_power(psd, 0.0, measurement_bw_hz);
    std::vector<double> out;
    for (double off : offsets_hz) {
        if (std::abs(off) + measurement_bw_hz / 2 > nyquist + 1e-6)
            throw std::invalid_argument("adjacent channel at " + std::to_string(off) + " Hz exceeds the Nyquist span");
        const double adj = band_power(psd, off, measurement_bw_hz);
        out.push_back(10.0 * std::log10(main / std::max(adj, 1e-300)));
    }
    return out;
}

double EmissionMask::limit_at(double offset) const
{
    if (offset_hz.empty()) throw std::invalid_argument("empty mask");
    if (offset <= offset_hz.front()) return limit_db.front();
    if (offset >= offset_hz.back()) return limit_db.back();
    const auto it = std::upper_bound(offset_hz.begin(), offset_hz.end(), offset);
    const std::size_t hi = static_cast<std::size_t>(it - offset_hz.begin());
    const std::size_t lo = hi - 1;
    if (std::isinf(limit_db[lo]) || std::isinf(limit_db[hi])) return std::max(limit_db[lo], limit_db[hi]);
    const double t = (offset - offset_hz[lo]) / (offset_hz[hi] - offset_hz[lo]);
    return limit_db[lo] + t * (limit_db[hi] - limit_db[lo]);
}

EmissionMask parse_mask_csv(const std::string& text)
{
    EmissionMask mask;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("mask line without comma: '" + line + "'");
        double off = 0.0, lim = 0.0;
        try {
            off = std::stod(line.substr(0, comma));
            const std::string v = line.substr(comma + 1);
            lim = (v.find("inf") != std::string::npos) ? std::numeric_limits<double>::infinity() : std::stod(v);
        } catch (const std::invalid_argument&) {
            if (mask.offset_hz.empty()) continue;  // header row
            throw std::invalid_argument("malformed mask line: '" + line + "'");
        }
        if (!mask.offset_hz.empty() && off <= mask.offset_hz.back())
            throw std::invalid_argument("mask offsets must be strictly increasing");
        mask.offset_hz.push_back(off);
        mask.limit_db.push_back(lim);
    }
    if (mask.offset_hz.empty()) throw std::invalid_argument("mask has no points");
    return mask;
}

EmissionMask load_mask_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open mask file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_mask_csv(buf.str());
}

double mask_margin(const PsdEstimate& psd, const EmissionMask& mask, double channel_bw_hz)
{
    if (mask.offset_hz.empty()) throw std::invalid_argument("empty mask");
    double margin = std::numeric_limits<double>::infinity();
    bool evaluated = false;
    for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
        const double off = std::abs(psd.freq_hz[i]) - channel_bw_hz / 2;
        if (off < mask.offset_hz.front() || off > mask.offset_hz.back()) continue;
        evaluated = true;
        const double lim = mask.limit_at(off);
        if (std::isinf(lim)) continue;
        margin = std::min(margin, lim - psd.density_db[i]);
    }
    if (!evaluated) throw std::invalid_argument("mask offsets do not overlap the PSD span");
    return margin;
}

}  // namespace mixnum
