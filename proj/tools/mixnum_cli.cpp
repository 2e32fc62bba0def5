// Command-line front end: mixnum run | sweep | selftest
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixnum/cli.hpp"
#include "mixnum/parallel.hpp"
#include "mixnum/scenario.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_summary(const mixnum::RunResult& r)
{
    std::cout << "method        " << mixnum::to_string(r.method) << "\n"
              << "target        " << r.target_db << " dB\n"
              << "PAPR@" << r.report.papr_probability * 100 << "%    " << r.report.papr_at_p_db << " dB\n";
    for (std::size_t m = 0; m < r.report.mse_db.size(); ++m)
        std::cout << "MSE BWP" << m << "      " << r.report.mse_db[m] << " dB\n";
    for (std::size_t a = 0; a < r.report.aclr_db.size(); ++a)
        std::cout << "ACLR " << r.report.aclr_offsets_hz[a] / 1e6 << " MHz  " << r.report.aclr_db[a] << " dB\n";
    if (r.report.mask_margin_db) std::cout << "mask margin   " << *r.report.mask_margin_db << " dB\n";
    std::cout << "digest        " << r.digest << "\n"
              << "wall time     " << r.wall_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed-numerology CP-OFDM PAPR reduction simulator"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    mixnum::RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Synthesize one waveform and measure it");
    run->add_option("--scenario", run_opts.scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", run_opts.out_dir, "Output directory");
    run->add_option("--set", run_opts.overrides, "Override a scenario field, key=value");
    run->add_flag("--dump-waveform", run_opts.dump_waveform, "Also write the waveform as cf64 + JSON");

    mixnum::SweepOptions sweep_opts;
    std::string targets = "5,6,7,8,9";
    std::string methods = "FC_ICEF,E_ICEF_WOLA,I_ICEF";
    auto* sweep = app.add_subcommand("sweep", "Sweep PAPR targets and methods");
    sweep->add_option("--scenario", sweep_opts.scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--out", sweep_opts.out_dir, "Output directory");
    sweep->add_option("--set", sweep_opts.overrides, "Override a scenario field, key=value");
    sweep->add_option("--targets", targets, "Comma-separated PAPR targets in dB");
    sweep->add_option("--methods", methods, "Comma-separated methods");

    mixnum::SelftestOptions self_opts;
    auto* selftest = app.add_subcommand("selftest", "Check transform, reconstruction and confinement properties");
    selftest->add_flag("--inject-window-fault", self_opts.inject_window_fault,
                       "Debug hook: corrupt the all-pass FC window (negative control)");

    for (auto* sub : {run, sweep, selftest}) sub->add_option("--threads", threads, "Worker threads (0 = all cores)");

    CLI11_PARSE(app, argc, argv);
    mixnum::set_thread_count(threads);

    try {
        if (*run) {
            print_summary(mixnum::cmd_run(run_opts));
        } else if (*sweep) {
            sweep_opts.targets_db.clear();
            for (const auto& t : split_list(targets)) sweep_opts.targets_db.push_back(std::stod(t));
            sweep_opts.methods.clear();
            for (const auto& m : split_list(methods)) sweep_opts.methods.push_back(mixnum::parse_method(m));
            const auto rows = mixnum::cmd_sweep(sweep_opts);
            const auto spec = mixnum::resolve_scenario(sweep_opts.scenario_path, sweep_opts.overrides);
            std::cout << mixnum::sweep_csv(rows, spec.bwps.size());
        } else if (*selftest) {
            bool all = true;
            for (const auto& p : mixnum::cmd_selftest(self_opts)) {
                std::cout << (p.passed ? "PASS  " : "FAIL  ") << p.name << "  (" << p.detail << ")\n";
                all = all && p.passed;
            }
            return all ? 0 : 1;
        }
    } catch (const mixnum::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
