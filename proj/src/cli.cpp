#include "mixnum/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mixnum/fc.hpp"
#include "mixnum/fc_icef.hpp"
#include "mixnum/fft.hpp"
#include "mixnum/icef.hpp"
#include "mixnum/waveform_io.hpp"
#include "mixnum/wola.hpp"

namespace mixnum {

namespace {

// JSON has no infinity; an all-infinite mask reports this value.
constexpr double kMarginSentinelDb = 999.0;

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string fmt(double v, int precision = 6)
{
    std::ostringstream s;
    s << std::setprecision(precision) << std::fixed << v;
    return s.str();
}

std::string ccdf_csv(const RunResult& r)
{
    std::ostringstream s;
    s << "# mixnum ccdf v1\npapr_db,probability\n";
    for (const auto& [db, p] : r.ccdf) s << fmt(db, 4) << ',' << std::setprecision(10) << std::scientific << p << '\n';
    return s.str();
}

std::string psd_csv(const RunResult& r)
{
    std::ostringstream s;
    s << "# mixnum psd v1\nfreq_hz,db\n";
    for (const auto& [f, db] : r.psd) s << fmt(f, 1) << ',' << fmt(db, 4) << '\n';
    return s.str();
}

}  // namespace

ScenarioSpec resolve_scenario(const std::string& path, const std::vector<std::string>& overrides)
{
    ScenarioSpec spec = load_scenario(path);
    if (const char* env = std::getenv("MIXNUM_SEED"); env != nullptr && *env != '\0')
        apply_override(spec, std::string("seed=") + env);
    for (const auto& o : overrides) apply_override(spec, o);
    return spec;
}

std::string scenario_digest(const ScenarioSpec& spec)
{
    const std::string text = scenario_to_json(spec);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

RunResult run_experiment(const Experiment& exp, const std::optional<EmissionMask>& mask, Waveform* waveform_out)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    r.digest = scenario_digest(exp.spec);
    r.method = exp.spec.method;
    r.target_db = exp.spec.papr_target_db;
    const Waveform wave = synthesize(exp);
    const Measurement m = measure(exp, wave, mask);
    r.report = m.report;
    const auto& ms = exp.spec.measurement;
    r.ccdf = ccdf_table(m.ccdf, ms.ccdf_min_db, ms.ccdf_max_db, ms.ccdf_step_db);
    for (std::size_t i = 0; i < m.psd.freq_hz.size(); ++i) r.psd.emplace_back(m.psd.freq_hz[i], m.psd.density_db[i]);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (waveform_out) *waveform_out = wave;
    return r;
}

std::string report_json(const ScenarioSpec& spec, const RunResult& r)
{
    using nlohmann::json;
    json metrics{{"papr_probability", r.report.papr_probability},
                 {"papr_at_p_db", r.report.papr_at_p_db},
                 {"papr_max_db", r.report.papr_max_db},
                 {"mse_db", r.report.mse_db},
                 {"aclr_offsets_hz", r.report.aclr_offsets_hz},
                 {"aclr_db", r.report.aclr_db}};
    if (r.report.mask_margin_db) {
        const double m = *r.report.mask_margin_db;
        metrics["mask_margin_db"] = std::isinf(m) ? kMarginSentinelDb : m;
        metrics["mask_pass"] = m >= 0;
    }
    json hist = json::object();
    for (const auto& [it, count] : r.report.iterations_histogram) hist[std::to_string(it)] = count;
    metrics["iterations_histogram"] = hist;
    json doc{{"schema", "mixnum-report/1"},
             {"digest", r.digest},
             {"method", std::string(to_string(r.method))},
             {"papr_target_db", r.target_db},
             {"metrics", metrics},
             {"scenario", json::parse(scenario_to_json(spec))}};
    return doc.dump(2) + "\n";
}

RunResult cmd_run(const RunOptions& options)
{
    const ScenarioSpec spec = resolve_scenario(options.scenario_path, options.overrides);
    std::optional<EmissionMask> mask;
    if (spec.measurement.mask_file) {
        std::filesystem::path p(*spec.measurement.mask_file);
        if (p.is_relative()) p = std::filesystem::path(options.scenario_path).parent_path() / p;
        mask = load_mask_csv(p.string());
    }
    const Experiment exp = prepare(spec);
    Waveform wave;
    RunResult r = run_experiment(exp, mask, options.dump_waveform ? &wave : nullptr);

    if (!options.out_dir.empty()) {
        const std::filesystem::path dir(options.out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "ccdf.csv", ccdf_csv(r));
        write_text(dir / "psd.csv", psd_csv(r));
        write_text(dir / "report.json", report_json(spec, r));
        write_text(dir / "timing.json", nlohmann::json{{"wall_seconds", r.wall_seconds}}.dump(2) + "\n");
        if (options.dump_waveform) write_waveform((dir / "waveform").string(), wave.signal);
    }
    return r;
}

std::string sweep_csv(const std::vector<RunResult>& rows, std::size_t num_bwps)
{
    std::ostringstream s;
    s << "# mixnum sweep v1\nmethod,target_db,papr_at_p_db";
    for (std::size_t m = 0; m < num_bwps; ++m) s << ",mse_bwp" << m << "_db";
    std::size_t num_aclr = rows.empty() ? 0 : rows.front().report.aclr_db.size();
    for (std::size_t a = 0; a < num_aclr; ++a) s << ",aclr" << a << "_db";
    s << '\n';
    for (const auto& r : rows) {
        s << to_string(r.method) << ',' << fmt(r.target_db, 2) << ',' << fmt(r.report.papr_at_p_db, 4);
        for (double v : r.report.mse_db) s << ',' << fmt(v, 4);
        for (double v : r.report.aclr_db) s << ',' << fmt(v, 4);
        s << '\n';
    }
    return s.str();
}

std::vector<RunResult> cmd_sweep(const SweepOptions& options)
{
    const ScenarioSpec base = resolve_scenario(options.scenario_path, options.overrides);
    Experiment exp = prepare(base);
    std::vector<RunResult> rows;
    for (Method method : options.methods) {
        for (double target : options.targets_db) {
            exp.spec.method = method;
            exp.spec.papr_target_db = target;
            validate_scenario(exp.spec);
            rows.push_back(run_experiment(exp, std::nullopt));
        }
    }
    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        write_text(std::filesystem::path(options.out_dir) / "summary.csv", sweep_csv(rows, base.bwps.size()));
    }
    return rows;
}

ScenarioSpec small_scenario()
{
    ScenarioSpec s;
    s.channel_bw_hz = 5e6;
    s.nominal_transform = 512;
    s.oversampling = 4;
    s.bwps = {BwpSpec{15e3, 8, Modulation::Qpsk, -0.72e6}, BwpSpec{60e3, 2, Modulation::Qam64, 1.02e6}};
    s.papr_target_db = 5.0;
    s.max_iterations = 8;
    s.method = Method::FcIcef;
    s.seed = 7;
    s.duration_symbols_base = 4;
    s.fc.n_nom = 512;
    s.fc.transition_bins = 6;
    s.measurement.rbw_hz = 60e3;
    s.measurement.aclr_measurement_bw_hz = 4.5e6;
    s.measurement.aclr_offsets_hz = {-5e6, 5e6};
    validate_scenario(s);
    return s;
}

namespace {

double rel_error(std::span<const cplx> a, std::span<const cplx> b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

PropertyOutcome check(const std::string& name, bool ok, const std::string& detail)
{
    return PropertyOutcome{name, ok, detail};
}

}  // namespace

std::vector<PropertyOutcome> cmd_selftest(const SelftestOptions& options)
{
    std::vector<PropertyOutcome> out;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    auto random_vec = [&](std::size_t n) {
        cvec v(n);
        for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
        return v;
    };

    {
        const cvec x = random_vec(1024);
        const cvec back = idft(dft(x));
        double max_err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) max_err = std::max(max_err, std::abs(back[i] - x[i]));
        const cvec f = dft(x);
        double ex = 0.0, ef = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            ex += std::norm(x[i]);
            ef += std::norm(f[i]);
        }
        const double parseval = std::abs(ef - 1024.0 * ex) / (1024.0 * ex);
        out.push_back(check("transform round trip", max_err < 1e-12, "max error " + std::to_string(max_err)));
        out.push_back(check("parseval", parseval < 1e-12, "relative gap " + std::to_string(parseval)));
    }

    const ScenarioSpec spec = small_scenario();
    const Experiment exp = prepare(spec);
    {
        const auto sig = ofdm_modulate(exp.grids[0], exp.dims, Rate::Oversampled);
        const auto rx = ofdm_demodulate(sig, exp.dims, 0, 0);
        const double err = rel_error(rx.values, exp.grids[0].values);
        out.push_back(check("ofdm back-to-back", err < 1e-10, "relative error " + std::to_string(err)));
    }
    {
        // two 15 kHz BWPs on disjoint subcarriers are orthogonal
        ScenarioSpec same = spec;
        same.bwps = {BwpSpec{15e3, 4, Modulation::Qpsk, -0.6e6}, BwpSpec{15e3, 4, Modulation::Qam16, 0.6e6}};
        const Experiment e2 = prepare(same);
        std::vector<ComplexSignal> subs;
        for (const auto& g : e2.grids) subs.push_back(ofdm_modulate(g, e2.dims, Rate::Oversampled));
        double worst = 0.0;
        for (int s = 0; s < e2.dims.bwps[0].symbols; ++s) {
            const cvec z = compute_ini(subs, 0, s, e2.dims);
            const int l = e2.dims.bwps[0].l_ofdm_os;
            for (int k : e2.dims.bwps[0].active) worst = std::max(worst, std::abs(z[static_cast<std::size_t>((k + l) % l)]));
        }
        out.push_back(check("same-numerology orthogonality", worst < 1e-10, "max |z| " + std::to_string(worst)));
    }
    {
        const int l = 256;
        FcDims fc;
        fc.l_m = l;
        fc.l_o = l / 2;
        fc.l_s = l / 2;
        fc.interpolation = 4;
        fc.n = 4 * l;
        fc.n_s = fc.l_s * 4;
        fc.transition_bins = 0;
        fc.bin_spacing_hz = 15e3;
        fc.centers = {0};
        FcWindow w = design_window(-l / 2, l / 2 - 1, l, 0);
        if (options.inject_window_fault) w.weights[static_cast<std::size_t>(l / 2 + 3)] = 1.5;

        std::vector<std::pair<int, cplx>> tones;
        for (int k = -l / 2 + 1; k < l / 2; k += 5) tones.emplace_back(k, cplx(gauss(rng), gauss(rng)));
        const long long len = 8LL * l;
        cvec x(static_cast<std::size_t>(len));
        for (long long n = 0; n < len; ++n)
            for (const auto& [k, a] : tones) x[static_cast<std::size_t>(n)] += a * std::polar(1.0, 2 * std::numbers::pi * k * n / l);
        const auto blocks = segment(x, fc);
        const auto mapped = subband_forward(blocks, w, 0, fc);
        const auto y = ols_extract(combine({mapped}).time, fc, len * 4, 1.0);

        double num = 0.0, den = 0.0;
        for (long long p = 0; p < static_cast<long long>(y.size()); ++p) {
            const long long r = p / fc.n_s;
            const long long src_lo = r * fc.l_s - fc.l_o / 2;
            if (src_lo < 0 || src_lo + fc.l_m > len) continue;
            cplx ref{};
            for (const auto& [k, a] : tones) ref += a * std::polar(1.0, 2 * std::numbers::pi * k * p / (4.0 * l));
            num += std::norm(y.samples[static_cast<std::size_t>(p)] - ref);
            den += std::norm(ref);
        }
        const double err = std::sqrt(num / den);
        out.push_back(check("fc all-pass reconstruction", err < 1e-9, "relative error " + std::to_string(err)));
    }
    {
        const WolaParams p{64, 16, 10};
        const auto w = build_rc_window(p);
        double worst = 0.0;
        for (int i = 0; i < p.ramp_len(); ++i)
            worst = std::max(worst, std::abs(w[static_cast<std::size_t>(i)] +
                                             w[static_cast<std::size_t>(p.window_len() - p.ramp_len() + i)] - 1.0));
        out.push_back(check("rc ramp complementarity", worst < 1e-15, "max deviation " + std::to_string(worst)));
    }
    {
        const auto r = run_e_icef(spec, exp.dims, exp.grids, EIcefOptions{true, false});
        // regenerated symbols carry energy only on active subcarriers
        double worst = 0.0;
        for (std::size_t m = 0; m < r.grids.size(); ++m) {
            const auto& bd = exp.dims.bwps[m];
            const auto sig = ofdm_modulate(r.grids[m], exp.dims, Rate::Oversampled);
            const auto mask = subband_mask(bd, bd.l_ofdm_os);
            for (int s = 0; s < bd.symbols; ++s) {
                const auto* start = sig.samples.data() + static_cast<std::size_t>(s) * bd.stride_os() + bd.l_cp_os;
                const cvec f = dft(std::span<const cplx>(start, static_cast<std::size_t>(bd.l_ofdm_os)));
                double on = 0.0, off = 0.0;
                for (std::size_t k = 0; k < f.size(); ++k) (mask[k] ? on : off) += std::norm(f[k]);
                worst = std::max(worst, std::sqrt(off / on));
            }
        }
        out.push_back(check("e-icef noise confinement", worst < 1e-12, "off-mask/on-mask " + std::to_string(worst)));
    }
    {
        const auto windows = fc_windows(exp.dims);
        const auto sets = build_bin_sets(exp.dims, windows, spec.channel_bw_hz);
        const auto h = clip_noise_filter(sets);
        const auto v = fc_synthesize(fc_inputs(exp.dims, exp.grids), windows, exp.dims.fc);
        const auto ols = ols_extract(v.time, exp.dims.fc, exp.dims.frame_len_os(), exp.dims.fs_oversampled);
        const double a = threshold_from_target(ols.samples, 3.0);
        bool exact = true;
        for (int r = 0; r < v.freq.count && exact; ++r) {
            const auto res = block_iterate(v.freq.block(r), h, a, spec.max_iterations, spec.stop_epsilon_db);
            const auto orig = v.freq.block(r);
            for (std::size_t k = 0; k < h.size(); ++k)
                if (sets.kind[k] != BinKind::Allowed && res.freq[k] != orig[k]) exact = false;
        }
        out.push_back(check("fc-icef noise confinement", exact, exact ? "exact" : "delta on K_F or K_null"));
    }
    return out;
}

}  // namespace mixnum
