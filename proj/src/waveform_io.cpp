#include "mixnum/waveform_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mixnum {

namespace {

void put_le(std::ofstream& out, double v)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(const unsigned char* bytes)
{
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_waveform(const std::string& base_path, const ComplexSignal& signal)
{
    std::ofstream data(base_path + ".cf64", std::ios::binary);
    if (!data) throw std::runtime_error("cannot write '" + base_path + ".cf64'");
    for (const auto& v : signal.samples) {
        put_le(data, v.real());
        put_le(data, v.imag());
    }
    nlohmann::json meta{{"format", "cf64le"}, {"sample_rate_hz", signal.sample_rate_hz}, {"length", signal.size()}};
    std::ofstream sidecar(base_path + ".json");
    if (!sidecar) throw std::runtime_error("cannot write '" + base_path + ".json'");
    sidecar << meta.dump(2) << "\n";
}

ComplexSignal read_waveform(const std::string& base_path)
{
    std::ifstream sidecar(base_path + ".json");
    if (!sidecar) throw std::runtime_error("cannot read '" + base_path + ".json'");
    const auto meta = nlohmann::json::parse(sidecar);
    ComplexSignal out;
    out.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
    const auto len = meta.at("length").get<std::size_t>();

    std::ifstream data(base_path + ".cf64", std::ios::binary);
    if (!data) throw std::runtime_error("cannot read '" + base_path + ".cf64'");
    out.samples.resize(len);
    unsigned char bytes[16];
    for (std::size_t i = 0; i < len; ++i) {
        if (!data.read(reinterpret_cast<char*>(bytes), 16)) throw std::runtime_error("waveform file truncated");
        out.samples[i] = cplx(get_le(bytes), get_le(bytes + 8));
    }
    return out;
}

}  // namespace mixnum
