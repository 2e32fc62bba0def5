#ifndef MIXNUM_METRICS_HPP
#define MIXNUM_METRICS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnum/ofdm.hpp"
#include "mixnum/scenario.hpp"
#include "mixnum/types.hpp"

namespace mixnum {

/// Per-sample PAPR, |y[n]|^2 / mean|y|^2 (linear).
std::vector<double> papr_per_sample(std::span<const cplx> y);

/// Empirical CCDF. `sorted_db` holds every sample's PAPR in dB, ascending.
struct CcdfCurve {
    std::vector<double> sorted_db;

    std::size_t sample_count() const { return sorted_db.size(); }
    /// P(PAPR > threshold_db).
    double exceedance(double threshold_db) const;
};

CcdfCurve ccdf(std::span<const double> papr_linear);

/// Smallest threshold whose exceedance is <= p, interpolated linearly in dB
/// between neighbouring order statistics.
double papr_at_probability(const CcdfCurve& curve, double p);

/// Exceedance sampled on a regular dB grid, for export.
std::vector<std::pair<double, double>> ccdf_table(const CcdfCurve& curve, double min_db, double max_db, double step_db);

/// Default receiver DFT-window offset per BWP: the middle of the CP.
std::vector<int> default_timing_offsets(const DerivedDims& dims);

/// Passband MSE per BWP in dB after a single complex LS gain per BWP:
/// mean|Y - gX|^2 / mean|gX|^2.
std::vector<double> mse_per_bwp(const ComplexSignal& y, const std::vector<ResourceGrid>& reference,
                                const DerivedDims& dims, std::span<const int> timing_offsets);

struct PsdEstimate {
    std::vector<double> freq_hz;  // bin centers, ascending from -fs/2
    std::vector<double> power;    // power per bin, sums to the signal's mean power
    std::vector<double> density_db;  // dB relative to total power, per resolution bandwidth
    double bin_width_hz{0.0};
    double rbw_hz{0.0};
    int segment_len{0};
};

/// Welch estimate: Hann window, segment = power of two nearest fs/rbw,
/// 50% overlap, scaled so sum(power) equals mean|y|^2.
PsdEstimate psd_welch(const ComplexSignal& y, double rbw_hz);

int welch_segment_length(double fs_hz, double rbw_hz);

/// Power integrated over bins whose centers fall in [center - bw/2, center + bw/2).
double band_power(const PsdEstimate& psd, double center_hz, double bw_hz);

/// 10 log10(P_main / P_adj) for every adjacent-channel offset.
std::vector<double> aclr(const PsdEstimate& psd, double measurement_bw_hz, std::span<const double> offsets_hz);

/// Piecewise-linear limit in dB (relative to total power, per RBW) versus
/// frequency offset from the channel edge. Applied to both sides.
struct EmissionMask {
    std::vector<double> offset_hz;
    std::vector<double> limit_db;

    double limit_at(double offset) const;
};

EmissionMask load_mask_csv(const std::string& path);
EmissionMask parse_mask_csv(const std::string& text);

/// min over evaluated offsets of (mask - psd); positive means compliant.
/// Returns +infinity when every limit is +infinity.
double mask_margin(const PsdEstimate& psd, const EmissionMask& mask, double channel_bw_hz);

struct MetricsReport {
    double papr_probability{1e-3};
    double papr_at_p_db{0.0};
    double papr_max_db{0.0};
    std::vector<double> mse_db;
    std::vector<double> aclr_offsets_hz;
    std::vector<double> aclr_db;
    std::optional<double> mask_margin_db;
    std::map<int, int> iterations_histogram;
};

}  // namespace mixnum

#endif
