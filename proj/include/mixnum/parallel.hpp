#ifndef MIXNUM_PARALLEL_HPP
#define MIXNUM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mixnum {

// Worker cap used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous static chunks;
/// each index is computed by exactly one worker, so results never depend on
/// the number of threads as long as body(i) only writes to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mixnum

#endif
