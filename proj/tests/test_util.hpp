#ifndef PHOTOSTAT_TEST_UTIL_HPP
#define PHOTOSTAT_TEST_UTIL_HPP

#include "photostat/rng.hpp"
#include "photostat/types.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace test_util {

// ---------------------------------------------------------------------
// Exhaustive joint-distribution oracle for tiny imaging systems.
//
// Sources hold tabulated photon-count laws on {0, 1, 2}; the imaging
// process (count -> multinomial spread -> clip to detector -> add
// noise) is enumerated outcome by outcome as a product measure over a
// dense table of whole-image states. No moment algebra or independence
// shortcuts are used beyond the process definition itself, so the
// first and second joint moments that come out are an implementation-
// independent check of the analytic imaging equations.
// ---------------------------------------------------------------------

struct TinySystem {
    std::vector<std::array<double, 3>> source_pmf; // per position, counts {0,1,2}
    std::vector<std::array<double, 3>> noise_pmf;  // per pixel
    photostat::Psf psf;                            // half width 0 or 1
};

struct JointMoments {
    std::vector<double> first;               // E[I(k)]
    std::vector<std::vector<double>> second; // E[I(k) I(l)]
};

// one weighted way the photons of a single source can land
struct Outcome {
    std::vector<int> pixel_delta;
    double prob;
};

inline void enumerate_spread(const photostat::Psf& psf, int position, std::size_t k_count,
                             int n, int bin, std::vector<int>& delta, double prob,
                             std::vector<Outcome>& out) {
    const int half = psf.half_width();
    if (bin > half) {
        if (n == 0)
            out.push_back({delta, prob});
        return;
    }
    if (bin == half) { // last bin takes the remainder
        const double w = psf.at(bin);
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            p *= w;
        if (p > 0.0 || n == 0) {
            const int pixel = position + bin;
            if (pixel >= 0 && pixel < static_cast<int>(k_count))
                delta[static_cast<std::size_t>(pixel)] += n;
            out.push_back({delta, prob * p});
            if (pixel >= 0 && pixel < static_cast<int>(k_count))
                delta[static_cast<std::size_t>(pixel)] -= n;
        }
        return;
    }
    for (int x = 0; x <= n; ++x) {
        // binomial factor of the multinomial pmf in sequential form
        double choose = 1.0;
        for (int i = 0; i < x; ++i)
            choose = choose * double(n - i) / double(i + 1);
        double p = choose;
        for (int i = 0; i < x; ++i)
            p *= psf.at(bin);
        // remaining probability mass handled by deeper bins via
        // conditional structure: multiply by (tail)^? -- instead use
        // direct multinomial pmf: prod p_j^{x_j} * n!/prod x_j!, built
        // incrementally: here p carries p_bin^x * C(n, x)
        const int pixel = position + bin;
        if (x > 0 && pixel >= 0 && pixel < static_cast<int>(k_count))
            delta[static_cast<std::size_t>(pixel)] += x;
        enumerate_spread(psf, position, k_count, n - x, bin + 1, delta, prob * p, out);
        if (x > 0 && pixel >= 0 && pixel < static_cast<int>(k_count))
            delta[static_cast<std::size_t>(pixel)] -= x;
    }
}

inline std::vector<Outcome> source_outcomes(const TinySystem& sys, std::size_t position) {
    const std::size_t k_count = sys.source_pmf.size();
    std::vector<Outcome> out;
    std::vector<int> delta(k_count, 0);
    for (int n = 0; n <= 2; ++n) {
        const double pn = sys.source_pmf[position][static_cast<std::size_t>(n)];
        if (pn == 0.0)
            continue;
        enumerate_spread(sys.psf, static_cast<int>(position), k_count, n, -sys.psf.half_width(),
                         delta, pn, out);
    }
    return out;
}

inline JointMoments enumerate_joint(const TinySystem& sys) {
    const std::size_t k_count = sys.source_pmf.size();
    if (k_count == 0 || k_count > 4 || sys.psf.half_width() > 1)
        throw std::invalid_argument("enumerate_joint: system too large for exhaustive pass");

    // counts per pixel: <= 2 photons from each of <= 3 reaching sources
    // plus <= 2 noise counts
    constexpr int kBase = 9;
    std::size_t states = 1;
    for (std::size_t k = 0; k < k_count; ++k)
        states *= kBase;

    std::vector<double> dist(states, 0.0);
    dist[0] = 1.0;
    std::vector<double> next(states, 0.0);

    std::vector<std::size_t> strides(k_count);
    strides[0] = 1;
    for (std::size_t k = 1; k < k_count; ++k)
        strides[k] = strides[k - 1] * kBase;

    auto apply_outcomes = [&](const std::vector<Outcome>& outcomes) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < states; ++s) {
            const double ps = dist[s];
            if (ps == 0.0)
                continue;
            for (const auto& o : outcomes) {
                std::size_t target = s;
                for (std::size_t k = 0; k < k_count; ++k)
                    target += strides[k] * static_cast<std::size_t>(o.pixel_delta[k]);
                next[target] += ps * o.prob;
            }
        }
        dist.swap(next);
    };

    for (std::size_t pos = 0; pos < k_count; ++pos)
        apply_outcomes(source_outcomes(sys, pos));

    for (std::size_t k = 0; k < k_count; ++k) {
        std::vector<Outcome> outcomes;
        for (int n = 0; n <= 2; ++n) {
            const double pn = sys.noise_pmf[k][static_cast<std::size_t>(n)];
            if (pn == 0.0)
                continue;
            Outcome o{std::vector<int>(k_count, 0), pn};
            o.pixel_delta[k] = n;
            outcomes.push_back(std::move(o));
        }
        apply_outcomes(outcomes);
    }

    JointMoments m;
    m.first.assign(k_count, 0.0);
    m.second.assign(k_count, std::vector<double>(k_count, 0.0));
    std::vector<int> counts(k_count);
    for (std::size_t s = 0; s < states; ++s) {
        const double ps = dist[s];
        if (ps == 0.0)
            continue;
        std::size_t rest = s;
        for (std::size_t k = 0; k < k_count; ++k) {
            counts[k] = static_cast<int>(rest % kBase);
            rest /= kBase;
        }
        for (std::size_t k = 0; k < k_count; ++k) {
            m.first[k] += ps * counts[k];
            for (std::size_t l = 0; l < k_count; ++l)
                m.second[k][l] += ps * counts[k] * counts[l];
        }
    }
    return m;
}

// moments of a tabulated pmf on {0,1,2}
inline std::pair<double, double> pmf_mean_variance(const std::array<double, 3>& pmf) {
    const double mean = pmf[1] + 2.0 * pmf[2];
    const double e2 = pmf[1] + 4.0 * pmf[2];
    return {mean, e2 - mean * mean};
}

// (mean, q) arrays matching the tabulated laws, for the analytic side
inline photostat::ObjectModel object_from_pmfs(const std::vector<std::array<double, 3>>& pmfs) {
    std::vector<double> mean(pmfs.size()), q(pmfs.size());
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        const auto [m, v] = pmf_mean_variance(pmfs[k]);
        mean[k] = m;
        q[k] = v / m - 1.0;
    }
    return photostat::ObjectModel(std::move(mean), std::move(q));
}

inline photostat::NoiseModel noise_from_pmfs(const std::vector<std::array<double, 3>>& pmfs) {
    std::vector<double> mean(pmfs.size()), q(pmfs.size());
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        const auto [m, v] = pmf_mean_variance(pmfs[k]);
        mean[k] = m;
        q[k] = v / m - 1.0;
    }
    return photostat::NoiseModel(std::move(mean), std::move(q));
}

// deterministic pseudo-random tiny system
inline TinySystem random_tiny_system(std::uint64_t seed) {
    photostat::RngStream rng(seed, 0, 0, 0);
    const auto k_count = static_cast<std::size_t>(2 + rng() % 3); // 2..4
    const int half = static_cast<int>(rng() % 2);                 // 0 or 1

    auto random_pmf = [&] {
        std::array<double, 3> pmf;
        double total = 0.0;
        for (auto& p : pmf) {
            p = 0.05 + rng.next_double();
            total += p;
        }
        for (auto& p : pmf)
            p /= total;
        return pmf;
    };

    TinySystem sys{{}, {}, photostat::Psf(std::vector<double>(2 * half + 1, 1.0))};
    std::vector<double> weights(static_cast<std::size_t>(2 * half + 1));
    for (auto& w : weights)
        w = 0.05 + rng.next_double();
    sys.psf = photostat::Psf(std::move(weights));
    for (std::size_t k = 0; k < k_count; ++k) {
        sys.source_pmf.push_back(random_pmf());
        sys.noise_pmf.push_back(random_pmf());
    }
    return sys;
}

} // namespace test_util

#endif
