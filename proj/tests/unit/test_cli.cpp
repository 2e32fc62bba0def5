#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixnum/cli.hpp"
#include "mixnum/parallel.hpp"
#include "mixnum/waveform_io.hpp"

using namespace mixnum;
namespace fs = std::filesystem;

namespace {

const std::string kSmall = std::string(MIXNUM_SCENARIO_DIR) + "/small.json";

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("mixnum_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("run writes the versioned artifacts")
{
    const auto dir = scratch("run");
    RunOptions o;
    o.scenario_path = kSmall;
    o.out_dir = dir.string();
    o.dump_waveform = true;
    const auto r = cmd_run(o);
    CHECK(r.method == Method::FcIcef);
    const std::string ccdf = slurp(dir / "ccdf.csv");
    CHECK(ccdf.rfind("# mixnum ccdf v1\npapr_db,probability\n", 0) == 0);
    CHECK(slurp(dir / "psd.csv").rfind("# mixnum psd v1\nfreq_hz,db\n", 0) == 0);
    const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(rep["schema"] == "mixnum-report/1");
    CHECK(rep["digest"] == r.digest);
    CHECK(rep["method"] == "FC_ICEF");
    CHECK(rep["metrics"]["mse_db"].size() == 2);
    CHECK(rep["metrics"]["aclr_db"].size() == 2);
    CHECK(rep["metrics"].contains("mask_margin_db"));
    CHECK(rep["metrics"]["mask_pass"].is_boolean());
    CHECK(fs::exists(dir / "timing.json"));
    const auto wave = read_waveform((dir / "waveform").string());
    CHECK(wave.sample_rate_hz == doctest::Approx(4 * 7.68e6));
    CHECK(wave.size() > 0);
    fs::remove_all(dir);
}

TEST_CASE("identical config with different thread counts gives identical files")
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    RunOptions o;
    o.scenario_path = kSmall;
    set_thread_count(1);
    o.out_dir = a.string();
    cmd_run(o);
    set_thread_count(4);
    o.out_dir = b.string();
    cmd_run(o);
    set_thread_count(0);
    CHECK(slurp(a / "ccdf.csv") == slurp(b / "ccdf.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "psd.csv") == slurp(b / "psd.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("overrides reach the report and change the digest")
{
    RunOptions o;
    o.scenario_path = kSmall;
    const auto base = cmd_run(o);
    o.overrides = {"papr_target_db=7", "method=NONE"};
    const auto other = cmd_run(o);
    CHECK(other.method == Method::None);
    CHECK(other.target_db == doctest::Approx(7.0));
    CHECK(other.digest != base.digest);
    CHECK(other.report.papr_at_p_db > base.report.papr_at_p_db);
}

TEST_CASE("sweep produces one row per method and target")
{
    const auto dir = scratch("sweep");
    SweepOptions o;
    o.scenario_path = kSmall;
    o.targets_db = {5, 7};
    o.methods = {Method::FcIcef, Method::IIcef};
    o.out_dir = dir.string();
    const auto rows = cmd_sweep(o);
    CHECK(rows.size() == 4);
    const std::string csv = slurp(dir / "summary.csv");
    CHECK(csv.rfind("# mixnum sweep v1\nmethod,target_db,papr_at_p_db,mse_bwp0_db,mse_bwp1_db,aclr0_db,aclr1_db\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    fs::remove_all(dir);
}

TEST_CASE("selftest passes and its negative control fails")
{
    const auto ok = cmd_selftest();
    CHECK(ok.size() >= 6);
    for (const auto& p : ok) CHECK_MESSAGE(p.passed, p.name << ": " << p.detail);
    SelftestOptions bad;
    bad.inject_window_fault = true;
    bool any_failed = false;
    for (const auto& p : cmd_selftest(bad)) any_failed = any_failed || !p.passed;
    CHECK(any_failed);
    const auto again = cmd_selftest();
    REQUIRE(again.size() == ok.size());
    for (std::size_t i = 0; i < ok.size(); ++i) CHECK(again[i].detail == ok[i].detail);
}

TEST_CASE("waveform files round trip")
{
    const auto dir = scratch("wave");
    fs::create_directories(dir);
    ComplexSignal s{{{1.5, -2.0}, {0.0, 1e-300}, {-3.25, 7.0}}, 122.88e6};
    write_waveform((dir / "w").string(), s);
    CHECK(fs::file_size(dir / "w.cf64") == 3 * 16);
    const auto back = read_waveform((dir / "w").string());
    CHECK(back.samples == s.samples);
    CHECK(back.sample_rate_hz == s.sample_rate_hz);
    fs::remove_all(dir);
}

TEST_CASE("missing scenario file is reported as a scenario error")
{
    RunOptions o;
    o.scenario_path = "/nonexistent.json";
    CHECK_THROWS_AS(cmd_run(o), ScenarioError);
}
