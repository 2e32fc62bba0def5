#include "mixnum/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace mixnum {

namespace {

struct FftwFree {
    void operator()(cplx* p) const { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<cplx[], FftwFree>;

AlignedBuffer make_buffer(std::size_t n)
{
    auto* raw = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    if (raw == nullptr) throw std::bad_alloc();
    return AlignedBuffer(raw);
}

// The FFTW planner is not thread-safe; plan execution on new arrays is.
// Plans are created once per (length, direction) with FFTW_ESTIMATE, which is
// deterministic, and always executed in place on fftw_malloc'd buffers so the
// same SIMD code path runs regardless of the caller's memory.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto scratch = make_buffer(n);
        auto* io = reinterpret_cast<fftw_complex*>(scratch.get());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), io, io, sign, FFTW_ESTIMATE);
        if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

cplx* thread_buffer(std::size_t n)
{
    thread_local std::map<std::size_t, AlignedBuffer> buffers;
    auto it = buffers.find(n);
    if (it == buffers.end()) it = buffers.emplace(n, make_buffer(n)).first;
    return it->second.get();
}

void transform(std::span<const cplx> in, std::span<cplx> out, int sign)
{
    const std::size_t n = in.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("transform length " + std::to_string(n) + " is not a power of two");
    if (out.size() != n) throw std::invalid_argument("transform output length mismatch");

    fftw_plan plan = PlanCache::instance().get(n, sign);
    cplx* buf = thread_buffer(n);
    std::copy(in.begin(), in.end(), buf);
    auto* io = reinterpret_cast<fftw_complex*>(buf);
    fftw_execute_dft(plan, io, io);
    if (sign == FFTW_BACKWARD) {
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] * scale;
    } else {
        std::copy(buf, buf + n, out.begin());
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void dft(std::span<const cplx> in, std::span<cplx> out) { transform(in, out, FFTW_FORWARD); }

void idft(std::span<const cplx> in, std::span<cplx> out) { transform(in, out, FFTW_BACKWARD); }

cvec dft(std::span<const cplx> in)
{
    cvec out(in.size());
    dft(in, out);
    return out;
}

cvec idft(std::span<const cplx> in)
{
    cvec out(in.size());
    idft(in, out);
    return out;
}

}  // namespace mixnum
