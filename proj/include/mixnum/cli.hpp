#ifndef MIXNUM_CLI_HPP
#define MIXNUM_CLI_HPP

#include <string>
#include <vector>

#include "mixnum/experiment.hpp"
#include "mixnum/metrics.hpp"
#include "mixnum/scenario.hpp"

namespace mixnum {

struct RunOptions {
    std::string scenario_path;
    std::vector<std::string> overrides;  // key=value
    std::string out_dir;                 // empty: write nothing
    bool dump_waveform{false};
};

struct RunResult {
    std::string digest;
    Method method{Method::None};
    double target_db{0.0};
    MetricsReport report;
    double wall_seconds{0.0};
    std::vector<std::pair<double, double>> ccdf;  // (papr_db, probability)
    std::vector<std::pair<double, double>> psd;   // (freq_hz, db)
};

/// Scenario file + MIXNUM_SEED environment override + key=value overrides.
ScenarioSpec resolve_scenario(const std::string& path, const std::vector<std::string>& overrides);

/// Stable FNV-1a digest of the canonical scenario text.
std::string scenario_digest(const ScenarioSpec& spec);

/// Writes ccdf.csv, psd.csv and report.json (and waveform.* on request)
/// into out_dir. Wall time goes to timing.json so report.json stays
/// byte-identical across runs.
RunResult cmd_run(const RunOptions& options);

/// Runs `exp` with its configured method and measures it; used by run and
/// sweep. The synthesized waveform is handed back through `waveform_out`.
RunResult run_experiment(const Experiment& exp, const std::optional<EmissionMask>& mask,
                         Waveform* waveform_out = nullptr);

std::string report_json(const ScenarioSpec& spec, const RunResult& result);

struct SweepOptions {
    std::string scenario_path;
    std::vector<std::string> overrides;
    std::vector<double> targets_db{5, 6, 7, 8, 9};
    std::vector<Method> methods{Method::FcIcef, Method::EIcefWola, Method::IIcef};
    std::string out_dir;
};

/// One row per (method, target); writes summary.csv into out_dir.
std::vector<RunResult> cmd_sweep(const SweepOptions& options);

std::string sweep_csv(const std::vector<RunResult>& rows, std::size_t num_bwps);

struct SelftestOptions {
    // Debug hook: scales one passband weight of the all-pass FC window above 1
    // so the reconstruction property must fail.
    bool inject_window_fault{false};
};

struct PropertyOutcome {
    std::string name;
    bool passed{false};
    std::string detail;
};

std::vector<PropertyOutcome> cmd_selftest(const SelftestOptions& options = {});

/// Small deterministic two-numerology scenario used by selftest and tests.
ScenarioSpec small_scenario();

}  // namespace mixnum

#endif
