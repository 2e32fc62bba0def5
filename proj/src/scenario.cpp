#include "mixnum/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mixnum/fft.hpp"

namespace mixnum {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ScenarioError(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) fail(where + key, "unknown field");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception& e) {
        fail(where + key, std::string("wrong type (") + e.what() + ")");
    }
}

bool is_integral(double v) { return std::isfinite(v) && std::abs(v - std::round(v)) < 1e-9; }

BwpSpec parse_bwp(const json& j, const std::string& where)
{
    if (!j.is_object()) fail(where, "expected an object");
    reject_unknown(j, where, {"scs_hz", "num_prbs", "modulation", "center_offset_hz"});
    for (const char* required : {"scs_hz", "num_prbs", "modulation"})
        if (!j.contains(required)) fail(where + required, "missing required field");
    BwpSpec b;
    read(j, "scs_hz", b.scs_hz, where);
    read(j, "num_prbs", b.num_prbs, where);
    std::string mod;
    read(j, "modulation", mod, where);
    try {
        b.modulation = parse_modulation(mod);
    } catch (const std::invalid_argument& e) {
        fail(where + "modulation", e.what());
    }
    read(j, "center_offset_hz", b.center_offset_hz, where);
    return b;
}

json to_json(const BwpSpec& b)
{
    return json{{"scs_hz", b.scs_hz},
                {"num_prbs", b.num_prbs},
                {"modulation", std::string(to_string(b.modulation))},
                {"center_offset_hz", b.center_offset_hz}};
}

json to_json(const ScenarioSpec& s)
{
    json bwps = json::array();
    for (const auto& b : s.bwps) bwps.push_back(to_json(b));
    json meas{{"papr_probability", s.measurement.papr_probability},
              {"rbw_hz", s.measurement.rbw_hz},
              {"aclr_measurement_bw_hz", s.measurement.aclr_measurement_bw_hz},
              {"aclr_offsets_hz", s.measurement.aclr_offsets_hz},
              {"ccdf_min_db", s.measurement.ccdf_min_db},
              {"ccdf_max_db", s.measurement.ccdf_max_db},
              {"ccdf_step_db", s.measurement.ccdf_step_db},
              {"receiver_timing_offsets", s.measurement.receiver_timing_offsets}};
    if (s.measurement.mask_file) meas["mask_file"] = *s.measurement.mask_file;
    return json{{"channel_bw_hz", s.channel_bw_hz},
                {"nominal_transform", s.nominal_transform},
                {"oversampling", s.oversampling},
                {"bwps", bwps},
                {"papr_target_db", s.papr_target_db},
                {"max_iterations", s.max_iterations},
                {"method", std::string(to_string(s.method))},
                {"seed", s.seed},
                {"duration_symbols_base", s.duration_symbols_base},
                {"wola_extension_factor", s.wola_extension_factor},
                {"stop_epsilon_db", s.stop_epsilon_db},
                {"fc",
                 {{"n_nom", s.fc.n_nom},
                  {"bin_spacing_hz", s.fc.bin_spacing_hz},
                  {"overlap_factor", s.fc.overlap_factor},
                  {"transition_bins", s.fc.transition_bins},
                  {"transition_shape", s.fc.transition_shape}}},
                {"measurement", meas}};
}

ScenarioSpec from_json(const json& j)
{
    if (!j.is_object()) fail("<root>", "expected a JSON object");
    reject_unknown(j, "",
                   {"channel_bw_hz", "nominal_transform", "oversampling", "bwps", "papr_target_db",
                    "max_iterations", "method", "seed", "duration_symbols_base", "wola_extension_factor",
                    "stop_epsilon_db", "fc", "measurement", "description"});
    for (const char* required : {"bwps", "method"})
        if (!j.contains(required)) fail(required, "missing required field");

    ScenarioSpec s;
    read(j, "channel_bw_hz", s.channel_bw_hz, "");
    read(j, "nominal_transform", s.nominal_transform, "");
    read(j, "oversampling", s.oversampling, "");
    read(j, "papr_target_db", s.papr_target_db, "");
    read(j, "max_iterations", s.max_iterations, "");
    read(j, "seed", s.seed, "");
    read(j, "duration_symbols_base", s.duration_symbols_base, "");
    read(j, "wola_extension_factor", s.wola_extension_factor, "");
    read(j, "stop_epsilon_db", s.stop_epsilon_db, "");

    std::string method;
    read(j, "method", method, "");
    try {
        s.method = parse_method(method);
    } catch (const std::invalid_argument& e) {
        fail("method", e.what());
    }
    const bool reduces_papr =
        s.method == Method::IIcef || s.method == Method::EIcefWola || s.method == Method::FcIcef;
    if (reduces_papr && !j.contains("papr_target_db"))
        fail("papr_target_db", "required for method " + method);

    const json& bwps = j.at("bwps");
    if (!bwps.is_array()) fail("bwps", "expected an array");
    for (std::size_t i = 0; i < bwps.size(); ++i)
        s.bwps.push_back(parse_bwp(bwps[i], "bwps." + std::to_string(i) + "."));

    if (auto it = j.find("fc"); it != j.end()) {
        reject_unknown(*it, "fc.",
                       {"n_nom", "bin_spacing_hz", "overlap_factor", "transition_bins", "transition_shape"});
        read(*it, "n_nom", s.fc.n_nom, "fc.");
        read(*it, "bin_spacing_hz", s.fc.bin_spacing_hz, "fc.");
        read(*it, "overlap_factor", s.fc.overlap_factor, "fc.");
        read(*it, "transition_bins", s.fc.transition_bins, "fc.");
        read(*it, "transition_shape", s.fc.transition_shape, "fc.");
    }
    if (auto it = j.find("measurement"); it != j.end()) {
        reject_unknown(*it, "measurement.",
                       {"papr_probability", "rbw_hz", "aclr_measurement_bw_hz", "aclr_offsets_hz", "mask_file",
                        "ccdf_min_db", "ccdf_max_db", "ccdf_step_db", "receiver_timing_offsets"});
        auto& m = s.measurement;
        read(*it, "papr_probability", m.papr_probability, "measurement.");
        read(*it, "rbw_hz", m.rbw_hz, "measurement.");
        read(*it, "aclr_measurement_bw_hz", m.aclr_measurement_bw_hz, "measurement.");
        read(*it, "aclr_offsets_hz", m.aclr_offsets_hz, "measurement.");
        read(*it, "ccdf_min_db", m.ccdf_min_db, "measurement.");
        read(*it, "ccdf_max_db", m.ccdf_max_db, "measurement.");
        read(*it, "ccdf_step_db", m.ccdf_step_db, "measurement.");
        read(*it, "receiver_timing_offsets", m.receiver_timing_offsets, "measurement.");
        if (it->contains("mask_file")) {
            std::string path;
            read(*it, "mask_file", path, "measurement.");
            m.mask_file = path;
        }
    }
    validate_scenario(s);
    return s;
}

int scs_ratio(double scs_hz) { return static_cast<int>(std::lround(scs_hz / kBaseScsHz)); }

}  // namespace

void validate_scenario(const ScenarioSpec& s)
{
    if (!(s.channel_bw_hz > 0)) fail("channel_bw_hz", "must be > 0");
    if (s.nominal_transform < 16 || !is_power_of_two(static_cast<std::size_t>(s.nominal_transform)))
        fail("nominal_transform", "must be a power of two >= 16");
    if (s.oversampling < 1 || !is_power_of_two(static_cast<std::size_t>(s.oversampling)))
        fail("oversampling", "must be a power of two >= 1");
    if (s.bwps.empty()) fail("bwps", "at least one BWP is required");
    if (!(s.papr_target_db > 0) || !std::isfinite(s.papr_target_db)) fail("papr_target_db", "must be > 0");
    if (s.max_iterations < 0) fail("max_iterations", "must be >= 0");
    if (s.duration_symbols_base < 1) fail("duration_symbols_base", "must be >= 1");
    if (!(s.wola_extension_factor >= 0) || s.wola_extension_factor > 2)
        fail("wola_extension_factor", "must lie in [0, 2]");
    if (!(s.stop_epsilon_db >= 0)) fail("stop_epsilon_db", "must be >= 0");

    const double fs_nominal = s.nominal_transform * kBaseScsHz;
    for (std::size_t i = 0; i < s.bwps.size(); ++i) {
        const auto& b = s.bwps[i];
        const std::string where = "bwps." + std::to_string(i) + ".";
        if (b.scs_hz != 15e3 && b.scs_hz != 30e3 && b.scs_hz != 60e3 && b.scs_hz != 120e3)
            fail(where + "scs_hz", "must be one of 15e3, 30e3, 60e3, 120e3");
        if (b.num_prbs < 1) fail(where + "num_prbs", "must be >= 1");
        if (!std::isfinite(b.center_offset_hz)) fail(where + "center_offset_hz", "must be finite");
        const double half_occupied = 0.5 * b.num_subcarriers() * b.scs_hz;
        if (half_occupied + std::abs(b.center_offset_hz) > s.channel_bw_hz / 2 + 1e-6)
            fail(where + "num_prbs", "BWP does not fit inside the channel bandwidth");
        if (!is_integral(fs_nominal / b.scs_hz) || fs_nominal / b.scs_hz < 16)
            fail(where + "scs_hz", "nominal transform too small for this subcarrier spacing");
    }

    const auto& fc = s.fc;
    if (fc.n_nom < 16 || !is_power_of_two(static_cast<std::size_t>(fc.n_nom)))
        fail("fc.n_nom", "must be a power of two >= 16");
    if (fc.bin_spacing_hz != kBaseScsHz) fail("fc.bin_spacing_hz", "only 15 kHz FC bin spacing is supported");
    if (std::abs(fc.n_nom * fc.bin_spacing_hz - fs_nominal) > 1e-6)
        fail("fc.n_nom", "n_nom * bin_spacing_hz must equal the nominal sample rate");
    if (!(fc.overlap_factor > 0 && fc.overlap_factor < 1)) fail("fc.overlap_factor", "must lie in (0, 1)");
    if (fc.transition_bins < 0) fail("fc.transition_bins", "must be >= 0");
    if (fc.transition_shape != "raised_cosine") fail("fc.transition_shape", "only raised_cosine is supported");

    const auto& m = s.measurement;
    if (!(m.papr_probability > 0 && m.papr_probability < 1))
        fail("measurement.papr_probability", "must lie in (0, 1)");
    if (!(m.rbw_hz > 0)) fail("measurement.rbw_hz", "must be > 0");
    if (!(m.aclr_measurement_bw_hz > 0)) fail("measurement.aclr_measurement_bw_hz", "must be > 0");
    if (!(m.ccdf_step_db > 0) || !(m.ccdf_max_db > m.ccdf_min_db))
        fail("measurement.ccdf_step_db", "CCDF grid must be increasing");
    if (!m.receiver_timing_offsets.empty() && m.receiver_timing_offsets.size() != s.bwps.size())
        fail("measurement.receiver_timing_offsets", "needs one entry per BWP");
}

ScenarioSpec parse_scenario(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("parse error: ") + e.what());
    }
    return from_json(j);
}

ScenarioSpec load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError("parse error: cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioSpec& spec) { return to_json(spec).dump(2); }

void apply_override(ScenarioSpec& spec, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ScenarioError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }

    json j = to_json(spec);
    json* node = &j;
    std::stringstream path(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const bool last = i + 1 == parts.size();
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(parts[i]);
            } catch (const std::exception&) {
                throw ScenarioError("override '" + key + "': '" + parts[i] + "' is not an index");
            }
            if (idx >= node->size()) throw ScenarioError("override '" + key + "': index out of range");
            node = &(*node)[idx];
        } else {
            if (!last && !node->contains(parts[i]))
                throw ScenarioError("override '" + key + "': unknown field");
            node = &(*node)[parts[i]];
        }
    }
    *node = value;
    spec = from_json(j);
}

double snap_center_hz(const ScenarioSpec& spec, double hz)
{
    int lcm = 1;
    for (const auto& b : spec.bwps) lcm = std::lcm(lcm, scs_ratio(b.scs_hz));
    const double grid = lcm * kBaseScsHz;
    return std::round(hz / grid) * grid;
}

long long DerivedDims::frame_len_os() const
{
    return bwps.empty() ? 0 : static_cast<long long>(bwps[0].symbols) * bwps[0].stride_os();
}

long long DerivedDims::frame_len_nominal() const
{
    return bwps.empty() ? 0 : static_cast<long long>(bwps[0].symbols) * bwps[0].stride();
}

DerivedDims derive_dims(const ScenarioSpec& spec)
{
    validate_scenario(spec);
    DerivedDims d;
    d.fs_nominal = spec.nominal_transform * kBaseScsHz;
    d.fs_oversampled = d.fs_nominal * spec.oversampling;
    d.n = spec.oversampling * spec.nominal_transform;

    int min_ratio = 1 << 30;
    for (const auto& b : spec.bwps) min_ratio = std::min(min_ratio, scs_ratio(b.scs_hz));

    for (std::size_t i = 0; i < spec.bwps.size(); ++i) {
        const auto& b = spec.bwps[i];
        const std::string where = "bwps." + std::to_string(i) + ".";
        BwpDims m;
        m.scs_ratio = scs_ratio(b.scs_hz);
        m.l_ofdm = spec.nominal_transform / m.scs_ratio;
        m.l_ofdm_os = spec.oversampling * m.l_ofdm;
        const double cp_exact = 144.0 * m.l_ofdm / 2048.0;
        m.l_cp = static_cast<int>(std::lround(cp_exact));
        if (!is_integral(cp_exact))
            fail(where + "scs_hz", "CP length 144*L/2048 is not an integer; frame durations would not align");
        m.l_cp_os = spec.oversampling * m.l_cp;
        m.symbols = spec.duration_symbols_base * (m.scs_ratio / min_ratio);

        const double snapped = snap_center_hz(spec, b.center_offset_hz);
        m.center_own = static_cast<int>(std::lround(snapped / b.scs_hz));
        m.center_bin = m.center_own * m.scs_ratio;
        const int k = b.num_subcarriers();
        m.active.resize(static_cast<std::size_t>(k));
        for (int a = 0; a < k; ++a) m.active[static_cast<std::size_t>(a)] = m.center_own - k / 2 + a;
        if (m.active.front() < -m.l_ofdm / 2 || m.active.back() >= m.l_ofdm / 2)
            fail(where + "center_offset_hz", "active subcarriers exceed the nominal transform after snapping");

        const int r = m.scs_ratio;
        m.passband_lo = -(k / 2) * r - r / 2;
        m.passband_hi = (k / 2 - 1) * r + (r + 1) / 2 - 1;
        const double edge_lo = (m.center_bin + m.passband_lo) * kBaseScsHz;
        const double edge_hi = (m.center_bin + m.passband_hi + 1) * kBaseScsHz;
        if (edge_lo < -spec.channel_bw_hz / 2 - 1e-6 || edge_hi > spec.channel_bw_hz / 2 + 1e-6)
            fail(where + "center_offset_hz", "snapped center is not representable: BWP leaves the channel");

        const int per_side = static_cast<int>(std::floor(0.5 * spec.wola_extension_factor * m.l_cp_os + 1e-9));
        m.wola_ext = 2 * per_side;
        if (m.wola_ext / 2 > m.l_cp_os) fail("wola_extension_factor", "extension exceeds the CP");
        d.bwps.push_back(std::move(m));
    }

    const long long frame = d.frame_len_os();
    for (std::size_t i = 0; i < d.bwps.size(); ++i)
        if (static_cast<long long>(d.bwps[i].symbols) * d.bwps[i].stride_os() != frame)
            fail("bwps." + std::to_string(i) + ".scs_hz", "frame duration differs between BWPs");

    for (std::size_t i = 0; i < d.bwps.size(); ++i) {
        for (std::size_t j = i + 1; j < d.bwps.size(); ++j) {
            const auto& a = d.bwps[i];
            const auto& b = d.bwps[j];
            const int a_lo = a.center_bin + a.passband_lo, a_hi = a.center_bin + a.passband_hi;
            const int b_lo = b.center_bin + b.passband_lo, b_hi = b.center_bin + b.passband_hi;
            if (a_lo <= b_hi && b_lo <= a_hi)
                fail("bwps." + std::to_string(j) + ".center_offset_hz",
                     "subcarriers overlap BWP " + std::to_string(i) + " on the common 15 kHz grid");
        }
    }

    auto& fc = d.fc;
    fc.n = spec.oversampling * spec.fc.n_nom;
    fc.l_m = spec.fc.n_nom;
    const double lo = spec.fc.overlap_factor * fc.l_m;
    if (!is_integral(lo)) fail("fc.overlap_factor", "overlap must be an integer number of samples");
    fc.l_o = static_cast<int>(std::lround(lo));
    fc.l_s = fc.l_m - fc.l_o;
    if (fc.l_o % 2 != 0 || fc.l_s % 2 != 0) fail("fc.overlap_factor", "L_S and L_O must be even");
    fc.interpolation = fc.n / fc.l_m;
    fc.n_s = fc.l_s * fc.interpolation;
    fc.transition_bins = spec.fc.transition_bins;
    fc.bin_spacing_hz = spec.fc.bin_spacing_hz;
    for (std::size_t i = 0; i < d.bwps.size(); ++i) {
        const auto& m = d.bwps[i];
        const double c = m.center_bin * kBaseScsHz / spec.fc.bin_spacing_hz;
        if (!is_integral(c)) fail("bwps." + std::to_string(i) + ".center_offset_hz", "center is not on the FC bin grid");
        fc.centers.push_back(static_cast<int>(std::lround(c)));
        const int span = m.passband_hi - m.passband_lo + 1 + 2 * fc.transition_bins;
        if (span > fc.l_m) fail("fc.transition_bins", "passband plus transition bands exceed L_m");
    }
    return d;
}

}  // namespace mixnum
