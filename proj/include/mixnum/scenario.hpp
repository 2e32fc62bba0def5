#ifndef MIXNUM_SCENARIO_HPP
#define MIXNUM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixnum/types.hpp"

namespace mixnum {

/// Common frequency grid every BWP is projected onto.
inline constexpr double kBaseScsHz = 15e3;

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BwpSpec {
    double scs_hz{15e3};
    int num_prbs{1};
    Modulation modulation{Modulation::Qpsk};
    double center_offset_hz{0.0};

    int num_subcarriers() const { return 12 * num_prbs; }
};

struct FcConfig {
    int n_nom{2048};
    double bin_spacing_hz{15e3};
    double overlap_factor{0.5};
    int transition_bins{12};
    std::string transition_shape{"raised_cosine"};
};

struct MeasurementConfig {
    double papr_probability{1e-3};
    double rbw_hz{30e3};
    double aclr_measurement_bw_hz{18e6};
    std::vector<double> aclr_offsets_hz{-20e6, 20e6};
    std::optional<std::string> mask_file;
    double ccdf_min_db{0.0};
    double ccdf_max_db{14.0};
    double ccdf_step_db{0.05};
    // Receiver DFT window start relative to the end of the CP, per BWP, in
    // oversampled samples. Empty selects the middle of each BWP's CP.
    std::vector<int> receiver_timing_offsets;
};

struct ScenarioSpec {
    double channel_bw_hz{20e6};
    int nominal_transform{2048};
    int oversampling{4};
    std::vector<BwpSpec> bwps;
    double papr_target_db{5.0};
    int max_iterations{20};
    Method method{Method::None};
    std::uint64_t seed{1};
    int duration_symbols_base{512};
    double wola_extension_factor{0.7};
    double stop_epsilon_db{0.01};
    FcConfig fc;
    MeasurementConfig measurement;
};

/// Everything derived for one BWP.
struct BwpDims {
    int scs_ratio{1};          // scs / 15 kHz
    int l_ofdm{0};             // nominal-rate transform
    int l_ofdm_os{0};          // oversampled transform
    int l_cp{0};
    int l_cp_os{0};
    int symbols{0};            // S_m
    int center_own{0};         // snapped center in units of the BWP's own SCS
    int center_bin{0};         // snapped center in 15 kHz bins (c_m)
    std::vector<int> active;   // signed full-band subcarrier indices, own SCS units
    int passband_lo{0};        // lowest occupied 15 kHz bin relative to center_bin
    int passband_hi{0};        // highest occupied 15 kHz bin relative to center_bin
    int wola_ext{0};           // total WOLA extension at the oversampled rate

    int stride_os() const { return l_ofdm_os + l_cp_os; }
    int stride() const { return l_ofdm + l_cp; }
    int num_active() const { return static_cast<int>(active.size()); }
};

struct FcDims {
    int n{0};          // common inverse transform N = N_ov * n_nom
    int l_m{0};        // subband forward transform (equal for all subbands)
    int l_s{0};        // non-overlapping part (1 - lambda) L_m
    int l_o{0};        // overlap lambda L_m
    int n_s{0};        // kept output samples per block
    int interpolation{0};
    int transition_bins{0};
    double bin_spacing_hz{0.0};
    std::vector<int> centers;  // c_m in N-grid bins
};

struct DerivedDims {
    double fs_nominal{0.0};
    double fs_oversampled{0.0};
    int n{0};  // N_ov * L_nom
    std::vector<BwpDims> bwps;
    FcDims fc;

    // Aligned frame length (identical for every BWP).
    long long frame_len_os() const;
    long long frame_len_nominal() const;
};

ScenarioSpec parse_scenario(const std::string& json_text);
ScenarioSpec load_scenario(const std::string& path);

/// Throws ScenarioError naming the field when an invariant is violated.
void validate_scenario(const ScenarioSpec& spec);

/// Applies a `key=value` override, e.g. `papr_target_db=7`, `method=FC_ICEF`,
/// `fc.transition_bins=8`, `bwps.1.num_prbs=10`. Revalidates afterwards.
void apply_override(ScenarioSpec& spec, const std::string& assignment);

/// Canonical JSON form; identical specs yield identical text.
std::string scenario_to_json(const ScenarioSpec& spec);

/// Snaps `hz` to the nearest multiple of the largest configured SCS.
double snap_center_hz(const ScenarioSpec& spec, double hz);

DerivedDims derive_dims(const ScenarioSpec& spec);

}  // namespace mixnum

#endif
