#include "photostat/sampler.hpp"

#include "photostat/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace photostat {

double q_scale_factor(double q) {
    if (!(q >= -1.0))
        throw std::invalid_argument("q_scale_factor: q must be >= -1");
    return std::sqrt(1.0 + q);
}

namespace {

constexpr double kPoissonInversionMax = 30.0;
constexpr double kBinomialInversionMaxNp = 64.0;

// CDF-walk inversion for small lambda. One uniform per draw, ~lambda
// multiply/divide steps.
std::int64_t poisson_inversion(double lambda, RngStream& rng) {
    const double u = rng.next_double();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::int64_t x = 0;
    // The cap is unreachable in practice (tail mass ~1e-300 at 40 sigma)
    // and only bounds the walk against rounding pathologies.
    const std::int64_t cap = static_cast<std::int64_t>(lambda + 60.0 * std::sqrt(lambda + 1.0) + 100.0);
    while (u > cdf && x < cap) {
        ++x;
        pmf *= lambda / double(x);
        cdf += pmf;
    }
    return x;
}

std::int64_t draw_poisson(double lambda, RngStream& rng) {
    if (lambda <= 0.0)
        return 0;
    if (lambda <= kPoissonInversionMax)
        return poisson_inversion(lambda, rng);
    std::poisson_distribution<std::int64_t> dist(lambda);
    return dist(rng);
}

double pow_int(double base, std::int64_t n) {
    double acc = 1.0;
    while (n > 0) {
        if (n & 1)
            acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

// CDF-walk inversion over the smaller tail; expected ~n*min(p,1-p)
// steps. Falls back to the stdlib sampler when the walk would be long
// or pmf(0) underflows.
std::int64_t draw_binomial(std::int64_t n, double p, RngStream& rng) {
    if (n <= 0)
        return 0;
    if (p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;
    const bool flipped = p > 0.5;
    const double ps = flipped ? 1.0 - p : p;
    const double np = double(n) * ps;
    if (np <= kBinomialInversionMaxNp) {
        const double pmf0 = pow_int(1.0 - ps, n);
        if (pmf0 > 1e-290) {
            const double odds = ps / (1.0 - ps);
            const double u = rng.next_double();
            double pmf = pmf0;
            double cdf = pmf;
            std::int64_t x = 0;
            while (u > cdf && x < n) {
                ++x;
                pmf *= odds * double(n - x + 1) / double(x);
                cdf += pmf;
            }
            return flipped ? n - x : x;
        }
    }
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(rng);
}

std::int64_t scaled_count(double mean, double alpha, RngStream& rng) {
    if (mean <= 0.0)
        return 0;
    if (alpha == 1.0)
        return draw_poisson(mean, rng); // identity transform
    if (alpha == 0.0)
        return quantize_scaled_count(0, mean, 0.0); // round(mean), no dispersion
    const std::int64_t s = draw_poisson(mean, rng);
    return quantize_scaled_count(s, mean, alpha);
}

} // namespace

std::int64_t sample_source_counts(double mean, double q, RngStream& rng) {
    if (!(mean >= 0.0))
        throw std::invalid_argument("sample_source_counts: mean must be >= 0");
    return scaled_count(mean, q_scale_factor(q), rng);
}

std::vector<std::int64_t> sample_multinomial(std::int64_t n, const Psf& psf, RngStream& rng) {
    if (n < 0)
        throw std::invalid_argument("sample_multinomial: n must be >= 0");
    const int half = psf.half_width();
    std::vector<std::int64_t> bins(psf.tap_count(), 0);
    std::int64_t remaining = n;
    for (int j = -half; j <= half && remaining > 0; ++j) {
        std::int64_t x;
        if (j == half) {
            x = remaining;
        } else {
            const double tail = psf.tail_weight(j);
            if (!(tail > 0.0)) // no mass left in this or later taps
                break;
            x = draw_binomial(remaining, psf.at(j) / tail, rng);
        }
        bins[static_cast<std::size_t>(j + half)] = x;
        remaining -= x;
    }
    return bins;
}

namespace detail {

namespace {
constexpr std::uint64_t kStageSource = 0;
constexpr std::uint64_t kStageSpread = 1;
constexpr std::uint64_t kStageNoise = 2;
} // namespace

ScenarioSampler::ScenarioSampler(const Scenario& scenario) : scenario_(scenario) {
    const std::size_t k_count = scenario.pixel_count();
    source_alpha_.resize(k_count);
    noise_alpha_.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        source_alpha_[k] = q_scale_factor(scenario.object.q(k));
        noise_alpha_[k] = q_scale_factor(scenario.noise.q(k));
    }
}

void ScenarioSampler::generate(std::uint64_t image_index, SampleImage& out) const {
    const std::size_t k_count = scenario_.pixel_count();
    const int half = scenario_.psf.half_width();
    const std::uint64_t seed = scenario_.master_seed;
    out.assign(k_count, 0);

    std::vector<std::int64_t> signal(k_count, 0);
    for (std::size_t k = 0; k < k_count; ++k) {
        const double mean = scenario_.object.mean_flux(k);
        if (mean <= 0.0)
            continue;
        RngStream count_rng(seed, image_index, kStageSource, k);
        std::int64_t n = scaled_count(mean, source_alpha_[k], count_rng);
        if (n <= 0)
            continue;
        if (half == 0) {
            signal[k] += n;
            continue;
        }
        RngStream spread_rng(seed, image_index, kStageSpread, k);
        for (int j = -half; j <= half && n > 0; ++j) {
            std::int64_t x;
            if (j == half) {
                x = n;
            } else {
                const double tail = scenario_.psf.tail_weight(j);
                if (!(tail > 0.0))
                    break;
                x = draw_binomial(n, scenario_.psf.at(j) / tail, spread_rng);
            }
            n -= x;
            const std::int64_t pixel = static_cast<std::int64_t>(k) + j;
            if (x > 0 && pixel >= 0 && pixel < static_cast<std::int64_t>(k_count))
                signal[static_cast<std::size_t>(pixel)] += x;
        }
    }

    for (std::size_t k = 0; k < k_count; ++k) {
        const double mean = scenario_.noise.mean(k);
        if (mean > 0.0) {
            RngStream noise_rng(seed, image_index, kStageNoise, k);
            signal[k] += scaled_count(mean, noise_alpha_[k], noise_rng);
        }
        if (signal[k] > static_cast<std::int64_t>(UINT32_MAX))
            throw numeric_error("sample_image: pixel count exceeds 32-bit range");
        out[k] = static_cast<std::uint32_t>(signal[k]);
    }
}

} // namespace detail

SampleImage sample_image(const Scenario& scenario, std::uint64_t image_index) {
    return detail::ScenarioSampler(scenario).generate(image_index);
}

} // namespace photostat
