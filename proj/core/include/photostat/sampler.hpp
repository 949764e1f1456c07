#ifndef PHOTOSTAT_SAMPLER_HPP
#define PHOTOSTAT_SAMPLER_HPP

#include "photostat/rng.hpp"
#include "photostat/types.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace photostat {

/// One exposure: photon counts per pixel.
using SampleImage = std::vector<std::uint32_t>;

/// Variance scaling factor alpha = sqrt(1 + q) that turns a Poisson
/// draw into a draw with Mandel parameter q.
double q_scale_factor(double q);

/// Integer quantization shared by the sampler and the effective-moment
/// oracle: scale the fluctuation around the mean by alpha, round to
/// nearest, clamp at zero. Both sides must apply the identical
/// expression or the oracle stops describing the sampler.
inline std::int64_t quantize_scaled_count(std::int64_t poisson_draw, double mean, double alpha) {
    const double scaled = alpha * (double(poisson_draw) - mean) + mean;
    const std::int64_t rounded = std::llround(scaled);
    return rounded < 0 ? 0 : rounded;
}

/// Draw one photon count with expectation `mean` and Mandel parameter
/// `q`: a Poisson draw whose fluctuation is scaled by sqrt(1+q), then
/// rounded and clamped at zero. mean == 0 always yields 0; q == -1
/// yields round(mean) deterministically.
std::int64_t sample_source_counts(double mean, double q, RngStream& rng);

/// Multinomial draw of n photons over the 2J+1 PSF taps, by sequential
/// conditional binomials. Returned bins are indexed j = -J..J and sum
/// to n exactly.
std::vector<std::int64_t> sample_multinomial(std::int64_t n, const Psf& psf, RngStream& rng);

/// Generate one exposure of the scenario. Every photon count at object
/// position k is redistributed through the PSF into pixels k+j
/// (contributions outside [0, K-1] are discarded), then per-pixel noise
/// counts are added. Deterministic given (master_seed, image_index).
SampleImage sample_image(const Scenario& scenario, std::uint64_t image_index);

namespace detail {

/// Per-scenario sampling state reused across images: cached Poisson
/// parameters per position (parameter setup is the expensive part of
/// the stdlib samplers at 1e6-image scale).
class ScenarioSampler {
public:
    explicit ScenarioSampler(const Scenario& scenario);

    void generate(std::uint64_t image_index, SampleImage& out) const;

    SampleImage generate(std::uint64_t image_index) const {
        SampleImage img;
        generate(image_index, img);
        return img;
    }

private:
    const Scenario& scenario_;
    std::vector<double> source_alpha_;
    std::vector<double> noise_alpha_;
};

} // namespace detail

/// Generate images [first, last) and feed each to `sink(image)`.
/// Results are independent of how the full index range is partitioned
/// across calls, because every image owns its keyed streams.
template <typename Sink>
void sample_batch(const Scenario& scenario, std::uint64_t first, std::uint64_t last, Sink&& sink) {
    if (first >= last)
        return;
    detail::ScenarioSampler sampler(scenario);
    SampleImage img;
    for (std::uint64_t i = first; i < last; ++i) {
        sampler.generate(i, img);
        sink(img);
    }
}

} // namespace photostat

#endif
