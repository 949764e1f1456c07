#ifndef PHOTOSTAT_FORWARD_HPP
#define PHOTOSTAT_FORWARD_HPP

#include "photostat/stats.hpp"
#include "photostat/types.hpp"

#include <vector>

namespace photostat {

/// Classical shift-invariant imaging: out(k) = sum_j O(k-j) p(j) + N(k),
/// with the object zero-padded outside its support.
std::vector<double> classical_convolution(const ObjectModel& object, const Psf& psf,
                                          const std::vector<double>& noise_mean);

/// Expected mean image. Identical arithmetic to classical_convolution
/// with the noise means taken from the noise model.
std::vector<double> expected_mean_image(const ObjectModel& object, const Psf& psf,
                                        const NoiseModel& noise);

/// Expected variance image:
/// out(k) = sum_j [O(k-j) p(j) + Z_O(k-j) p(j)^2] + sigma_N^2(k).
std::vector<double> expected_variance_image(const ObjectModel& object, const Psf& psf,
                                            const NoiseModel& noise);

/// Expected Z image: out(k) = sum_j Z_O(k-j) p(j)^2 + Z_N(k). Equals
/// variance minus mean of the same models.
std::vector<double> expected_z_image(const ObjectModel& object, const Psf& psf,
                                     const NoiseModel& noise);

/// Expected pixel-pair covariance, C(k,l) = sum_j Z_O(k-j) p(j) p(l-k+j)
/// for k != l. The noise is independent between pixels and adds nothing
/// off-diagonal; the diagonal is filled with the Z image by convention,
/// mirroring the corrected covariance estimator. The overload without a
/// noise model uses zero noise.
CovarianceMatrix expected_covariance_image(const ObjectModel& object, const Psf& psf,
                                           const NoiseModel& noise,
                                           const CovarianceSpec& spec = CovarianceSpec::full());
CovarianceMatrix expected_covariance_image(const ObjectModel& object, const Psf& psf);

/// Exact first moment and Z of the sampler's per-position count law:
/// Poisson(mean) scaled by sqrt(1+q) around the mean, rounded to
/// nearest and clamped at zero. Computed by enumerating the Poisson pmf
/// until the remaining tail mass is below 1e-15.
struct EffectiveMoments {
    double mean = 0.0;
    double z = 0.0;
};
EffectiveMoments effective_source_moments(double mean, double q);

/// Expected images of a model, bundled.
struct ExpectedImages {
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> z;
    CovarianceMatrix cov; // Z-diagonal convention; empty when spec is off
};

/// Eqs.-of-the-model expectations with the ideal per-position moments.
ExpectedImages expected_images(const ObjectModel& object, const Psf& psf,
                               const NoiseModel& noise,
                               const CovarianceSpec& spec = CovarianceSpec::off());

/// Expectations with every per-position (mean, Z) — object and noise —
/// replaced by its effective post-quantization value. This is the
/// oracle the sampled statistics actually converge to.
ExpectedImages effective_images(const ObjectModel& object, const Psf& psf,
                                const NoiseModel& noise,
                                const CovarianceSpec& spec = CovarianceSpec::off());

} // namespace photostat

#endif
