#include "mixnum/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace mixnum {

int bits_per_symbol(Modulation mod)
{
    switch (mod) {
    case Modulation::Qpsk: return 2;
    case Modulation::Qam16: return 4;
    case Modulation::Qam64: return 6;
    case Modulation::Qam256: return 8;
    }
    throw std::invalid_argument("unknown modulation");
}

std::string_view to_string(Modulation mod)
{
    switch (mod) {
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Qam16: return "16QAM";
    case Modulation::Qam64: return "64QAM";
    case Modulation::Qam256: return "256QAM";
    }
    return "?";
}

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::None: return "NONE";
    case Method::IIcef: return "I_ICEF";
    case Method::EIcefWola: return "E_ICEF_WOLA";
    case Method::FcFOfdm: return "FC_F_OFDM";
    case Method::FcIcef: return "FC_ICEF";
    }
    return "?";
}

Modulation parse_modulation(std::string_view name)
{
    if (name == "QPSK") return Modulation::Qpsk;
    if (name == "16QAM") return Modulation::Qam16;
    if (name == "64QAM") return Modulation::Qam64;
    if (name == "256QAM") return Modulation::Qam256;
    throw std::invalid_argument("unknown modulation '" + std::string(name) + "'");
}

Method parse_method(std::string_view name)
{
    if (name == "NONE") return Method::None;
    if (name == "I_ICEF") return Method::IIcef;
    if (name == "E_ICEF_WOLA") return Method::EIcefWola;
    if (name == "FC_F_OFDM") return Method::FcFOfdm;
    if (name == "FC_ICEF") return Method::FcIcef;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

double mean_power(std::span<const cplx> x)
{
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

double peak_power(std::span<const cplx> x)
{
    double peak = 0.0;
    for (const auto& v : x) peak = std::max(peak, std::norm(v));
    return peak;
}

}  // namespace mixnum
