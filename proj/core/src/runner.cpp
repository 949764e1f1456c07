#include "photostat/runner.hpp"

#include "photostat/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace photostat {

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

// Contiguous index ranges, one per worker, covering [0, n).
std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(std::uint64_t n, std::uint64_t workers) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    const std::uint64_t w = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n));
    std::uint64_t start = 0;
    for (std::uint64_t i = 0; i < w; ++i) {
        const std::uint64_t count = n / w + (i < n % w ? 1 : 0);
        ranges.emplace_back(start, start + count);
        start += count;
    }
    return ranges;
}

} // namespace

StatAccumulator simulate_stack(const Scenario& scenario, unsigned threads) {
    const unsigned workers = resolve_thread_count(threads);
    const auto ranges = partition(scenario.n_samples, workers);

    std::vector<StatAccumulator> parts;
    parts.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
        parts.emplace_back(scenario.pixel_count(), scenario.covariance);

    if (ranges.size() == 1) {
        sample_batch(scenario, ranges[0].first, ranges[0].second,
                     [&](const SampleImage& img) { parts[0].accumulate(img); });
        return std::move(parts[0]);
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        pool.emplace_back([&, i] {
            try {
                sample_batch(scenario, ranges[i].first, ranges[i].second,
                             [&](const SampleImage& img) { parts[i].accumulate(img); });
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    // merge in chunk order; integer sums make the order irrelevant
    for (std::size_t i = 1; i < parts.size(); ++i)
        parts[0].merge(parts[i]);
    return std::move(parts[0]);
}

StatAccumulator simulate_stack_streaming(const Scenario& scenario,
                                         const std::function<void(const SampleImage&)>& sink) {
    StatAccumulator acc(scenario.pixel_count(), scenario.covariance);
    sample_batch(scenario, 0, scenario.n_samples, [&](const SampleImage& img) {
        acc.accumulate(img);
        sink(img);
    });
    return acc;
}

std::vector<StatAccumulator> simulate_blocks(const Scenario& scenario, std::size_t n_blocks,
                                             unsigned threads) {
    if (n_blocks == 0 || n_blocks > scenario.n_samples)
        throw std::invalid_argument("simulate_blocks: need 1 <= n_blocks <= n_samples");
    const unsigned workers = resolve_thread_count(threads);
    const auto blocks = partition(scenario.n_samples, n_blocks);

    std::vector<StatAccumulator> accs;
    accs.reserve(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i)
        accs.emplace_back(scenario.pixel_count(), scenario.covariance);

    if (workers <= 1) {
        for (std::size_t i = 0; i < blocks.size(); ++i)
            sample_batch(scenario, blocks[i].first, blocks[i].second,
                         [&](const SampleImage& img) { accs[i].accumulate(img); });
        return accs;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < blocks.size(); i = next.fetch_add(1))
                    sample_batch(scenario, blocks[i].first, blocks[i].second,
                                 [&](const SampleImage& img) { accs[i].accumulate(img); });
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return accs;
}

} // namespace photostat
