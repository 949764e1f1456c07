#ifndef PHOTOSTAT_RUNNER_HPP
#define PHOTOSTAT_RUNNER_HPP

#include "photostat/stats.hpp"
#include "photostat/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace photostat {

/// Simulate the whole stack and accumulate it. With `threads > 1` the
/// image index range is split into contiguous chunks, one private
/// accumulator per worker, merged afterwards; the result is
/// bit-identical for any worker count. `threads == 0` means one worker
/// per hardware thread.
StatAccumulator simulate_stack(const Scenario& scenario, unsigned threads = 1);

/// As simulate_stack, but also streams every generated image (in index
/// order) to `sink`; runs single-threaded so the stream order is the
/// index order.
StatAccumulator simulate_stack_streaming(const Scenario& scenario,
                                         const std::function<void(const SampleImage&)>& sink);

/// Split the stack into `n_blocks` near-equal contiguous blocks and
/// return one accumulator per block (merging them all reproduces
/// simulate_stack bit for bit). Used for empirical standard-error
/// calibration.
std::vector<StatAccumulator> simulate_blocks(const Scenario& scenario, std::size_t n_blocks,
                                             unsigned threads = 1);

unsigned resolve_thread_count(unsigned requested);

} // namespace photostat

#endif
