#include "photostat/forward.hpp"

#include "photostat/errors.hpp"
#include "photostat/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace photostat {

namespace {

void check_shapes(std::size_t object_size, std::size_t noise_size, const char* who) {
    if (object_size != noise_size)
        throw std::invalid_argument(std::string(who) + ": object and noise lengths differ");
}

// sum_j values(k-j) p(j), zero-padded outside [0, K).
std::vector<double> convolve(const std::vector<double>& values, const Psf& psf) {
    const auto k_count = static_cast<std::int64_t>(values.size());
    const int half = psf.half_width();
    std::vector<double> out(values.size(), 0.0);
    for (std::int64_t k = 0; k < k_count; ++k) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const std::int64_t m = k - j;
            if (m >= 0 && m < k_count)
                acc += values[static_cast<std::size_t>(m)] * psf.at(j);
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

// sum_j values(k-j) p(j)^2.
std::vector<double> convolve_squared(const std::vector<double>& values, const Psf& psf) {
    const auto k_count = static_cast<std::int64_t>(values.size());
    const int half = psf.half_width();
    std::vector<double> out(values.size(), 0.0);
    for (std::int64_t k = 0; k < k_count; ++k) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const std::int64_t m = k - j;
            if (m >= 0 && m < k_count)
                acc += values[static_cast<std::size_t>(m)] * psf.at(j) * psf.at(j);
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

struct MomentArrays {
    std::vector<double> object_mean, object_z;
    std::vector<double> noise_mean, noise_z;
};

MomentArrays ideal_moments(const ObjectModel& object, const NoiseModel& noise) {
    MomentArrays m;
    const std::size_t k_count = object.size();
    m.object_mean.resize(k_count);
    m.object_z.resize(k_count);
    m.noise_mean.resize(k_count);
    m.noise_z.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        m.object_mean[k] = object.mean_flux(k);
        m.object_z[k] = object.z(k);
        m.noise_mean[k] = noise.mean(k);
        m.noise_z[k] = noise.z(k);
    }
    return m;
}

MomentArrays effective_moments(const ObjectModel& object, const NoiseModel& noise) {
    MomentArrays m;
    const std::size_t k_count = object.size();
    m.object_mean.resize(k_count);
    m.object_z.resize(k_count);
    m.noise_mean.resize(k_count);
    m.noise_z.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        const auto o = effective_source_moments(object.mean_flux(k), object.q(k));
        m.object_mean[k] = o.mean;
        m.object_z[k] = o.z;
        const auto n = effective_source_moments(noise.mean(k), noise.q(k));
        m.noise_mean[k] = n.mean;
        m.noise_z[k] = n.z;
    }
    return m;
}

std::vector<double> mean_from(const MomentArrays& m, const Psf& psf) {
    std::vector<double> out = convolve(m.object_mean, psf);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += m.noise_mean[k];
    return out;
}

std::vector<double> z_from(const MomentArrays& m, const Psf& psf) {
    std::vector<double> out = convolve_squared(m.object_z, psf);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += m.noise_z[k];
    return out;
}

std::vector<double> variance_from(const MomentArrays& m, const Psf& psf) {
    const auto k_count = static_cast<std::int64_t>(m.object_mean.size());
    const int half = psf.half_width();
    std::vector<double> out(m.object_mean.size(), 0.0);
    for (std::int64_t k = 0; k < k_count; ++k) {
        // Keep the flux term and the Z term in separate partial sums so
        // this stays within rounding of mean + z of the same models.
        double acc_flux = 0.0;
        double acc_z = 0.0;
        for (int j = -half; j <= half; ++j) {
            const std::int64_t pos = k - j;
            if (pos >= 0 && pos < k_count) {
                const auto i = static_cast<std::size_t>(pos);
                acc_flux += m.object_mean[i] * psf.at(j);
                acc_z += m.object_z[i] * psf.at(j) * psf.at(j);
            }
        }
        // sigma_N^2 = N (1 + Q_N) = N + Z_N
        const auto i = static_cast<std::size_t>(k);
        out[i] = (acc_flux + acc_z) + (m.noise_mean[i] + m.noise_z[i]);
    }
    return out;
}

CovarianceMatrix covariance_from(const MomentArrays& m, const Psf& psf, const CovarianceSpec& spec) {
    const auto k_count = static_cast<std::int64_t>(m.object_mean.size());
    const int half = psf.half_width();

    std::vector<int> rows;
    if (spec.mode == CovarianceMode::full) {
        rows.resize(static_cast<std::size_t>(k_count));
        for (std::int64_t k = 0; k < k_count; ++k)
            rows[static_cast<std::size_t>(k)] = static_cast<int>(k);
    } else if (spec.mode == CovarianceMode::slices) {
        rows = spec.rows;
    } else {
        return CovarianceMatrix();
    }

    const std::vector<double> z_img = z_from(m, psf);
    CovarianceMatrix cov(rows, static_cast<std::size_t>(k_count));
    for (int k : rows) {
        for (std::int64_t l = 0; l < k_count; ++l) {
            if (l == k) {
                cov.set(k, static_cast<int>(l), z_img[static_cast<std::size_t>(k)]);
                continue;
            }
            double acc = 0.0;
            for (int j = -half; j <= half; ++j) {
                const int jl = static_cast<int>(l) - k + j;
                if (jl < -half || jl > half)
                    continue;
                const std::int64_t pos = k - j;
                if (pos >= 0 && pos < k_count)
                    acc += m.object_z[static_cast<std::size_t>(pos)] * psf.at(j) * psf.at(jl);
            }
            cov.set(k, static_cast<int>(l), acc);
        }
    }
    return cov;
}

ExpectedImages images_from(const MomentArrays& m, const Psf& psf, const CovarianceSpec& spec) {
    ExpectedImages out;
    out.mean = mean_from(m, psf);
    out.variance = variance_from(m, psf);
    out.z = z_from(m, psf);
    out.cov = covariance_from(m, psf, spec);
    return out;
}

} // namespace

std::vector<double> classical_convolution(const ObjectModel& object, const Psf& psf,
                                          const std::vector<double>& noise_mean) {
    check_shapes(object.size(), noise_mean.size(), "classical_convolution");
    std::vector<double> out = convolve(object.mean_flux(), psf);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += noise_mean[k];
    return out;
}

std::vector<double> expected_mean_image(const ObjectModel& object, const Psf& psf,
                                        const NoiseModel& noise) {
    return classical_convolution(object, psf, noise.mean());
}

std::vector<double> expected_variance_image(const ObjectModel& object, const Psf& psf,
                                            const NoiseModel& noise) {
    check_shapes(object.size(), noise.size(), "expected_variance_image");
    return variance_from(ideal_moments(object, noise), psf);
}

std::vector<double> expected_z_image(const ObjectModel& object, const Psf& psf,
                                     const NoiseModel& noise) {
    check_shapes(object.size(), noise.size(), "expected_z_image");
    return z_from(ideal_moments(object, noise), psf);
}

CovarianceMatrix expected_covariance_image(const ObjectModel& object, const Psf& psf,
                                           const NoiseModel& noise, const CovarianceSpec& spec) {
    check_shapes(object.size(), noise.size(), "expected_covariance_image");
    return covariance_from(ideal_moments(object, noise), psf, spec);
}

CovarianceMatrix expected_covariance_image(const ObjectModel& object, const Psf& psf) {
    return expected_covariance_image(object, psf, NoiseModel::none(object.size()));
}

EffectiveMoments effective_source_moments(double mean, double q) {
    if (!(mean >= 0.0))
        throw std::invalid_argument("effective_source_moments: mean must be >= 0");
    if (!(q >= -1.0))
        throw std::invalid_argument("effective_source_moments: q must be >= -1");
    if (mean == 0.0)
        return {0.0, 0.0};
    if (q == 0.0)
        return {mean, 0.0}; // identity transform: exactly Poisson
    const double alpha = std::sqrt(1.0 + q);
    if (alpha == 0.0) {
        // zero-dispersion source: round(mean) with certainty
        const double v = double(quantize_scaled_count(0, mean, 0.0));
        return {v, 0.0 - v};
    }

    const double log_mean = std::log(mean);
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    const auto s_max =
        static_cast<std::int64_t>(std::ceil(mean + 12.0 * std::sqrt(mean + 1.0) + 45.0));
    for (std::int64_t s = 0; s <= s_max; ++s) {
        const double log_pmf = double(s) * log_mean - mean - std::lgamma(double(s) + 1.0);
        const double pmf = std::exp(log_pmf);
        const double t = double(quantize_scaled_count(s, mean, alpha));
        mass += pmf;
        m1 += pmf * t;
        m2 += pmf * t * t;
        if (mass >= 1.0 - 1e-15 && double(s) > mean)
            break;
    }
    const double variance = m2 - m1 * m1;
    return {m1, variance - m1};
}

ExpectedImages expected_images(const ObjectModel& object, const Psf& psf,
                               const NoiseModel& noise, const CovarianceSpec& spec) {
    check_shapes(object.size(), noise.size(), "expected_images");
    return images_from(ideal_moments(object, noise), psf, spec);
}

ExpectedImages effective_images(const ObjectModel& object, const Psf& psf,
                                const NoiseModel& noise, const CovarianceSpec& spec) {
    check_shapes(object.size(), noise.size(), "effective_images");
    return images_from(effective_moments(object, noise), psf, spec);
}

} // namespace photostat
