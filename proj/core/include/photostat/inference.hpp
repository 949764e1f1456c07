#ifndef PHOTOSTAT_INFERENCE_HPP
#define PHOTOSTAT_INFERENCE_HPP

#include "photostat/stats.hpp"
#include "photostat/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace photostat {

/// One corrected-covariance row around a center pixel, as (lag, value)
/// pairs. Lag 0 carries the Z value of the center pixel.
struct CovarianceSlice {
    int center = 0;
    std::vector<std::pair<int, double>> lags;

    /// Extract lags -window..window of row `center` from a corrected
    /// covariance matrix, dropping lags that fall off the detector.
    static CovarianceSlice from_matrix(const CovarianceMatrix& cov, int center, int window);

    bool has_lag(int m) const;
    double at_lag(int m) const;
};

/// PSF recovered from an isolated-point covariance row, plus the Z
/// value of the point implied by the same row.
struct PsfEstimate {
    Psf psf;
    double z_point = 0.0;
    bool clipped = false; // negative tap estimates were clipped to zero
};

/// Invert the point-source covariance law C(k,l) = Z p(0) p(l-k): the
/// row at lags -J..J, normalized to unit sum, is the PSF, and
/// (row sum)^2 / row(0) is the Z of the point. The lag-0 entry is the
/// corrected diagonal minus `noise_z` when the noise level is known.
/// Throws not_estimable_error when the row carries no usable energy.
PsfEstimate estimate_psf_point(const CovarianceMatrix& cov, int center, int half_width,
                               double noise_z = 0.0);

/// Least-squares fit of c(m) = z_b * a(m) over the slice's nonzero
/// lags, where a is the PSF autocorrelation. Lag 0 is excluded: it
/// carries the noise Z in addition to the background term. Throws
/// not_estimable_error for a delta PSF (a(m != 0) == 0 carries no
/// off-diagonal information).
double fit_flat_z(const CovarianceSlice& slice, const Psf& psf);

/// Noise Z at the slice center: the lag-0 value minus the fitted flat
/// background model at lag 0, z_n = Z(k) - z_b * sum_j p(j)^2.
double separate_noise(const CovarianceSlice& slice, double z_b, const Psf& psf);

/// Background mean and Mandel Q at a flat pixel, given the local noise
/// mean: o_b = mean(k) - noise_mean (the PSF sums up to 1 on a flat
/// interior), q_b = z_b / o_b. Throws not_estimable_error when the
/// implied background mean is not positive.
std::pair<double, double> recover_background(const std::vector<double>& mean_image,
                                             double noise_mean, double z_b, int center);

/// Full flat-region recovery result.
struct FitReport {
    int center = 0;
    double z_b = 0.0;          // fitted background Z
    double z_n = 0.0;          // separated noise Z
    double residual_rms = 0.0; // rms of c(m) - z_b a(m) over fitted lags
    std::optional<double> o_b; // background mean, when noise mean known
    std::optional<double> q_b; // background Q, when noise mean known

    /// Key-value text serialization (one `key = value` line per field).
    std::string to_text() const;
};

/// Run the full recipe on one slice: fit z_b, separate z_n, and
/// recover (o_b, q_b) when the noise mean is supplied.
FitReport fit_flat_region(const CovarianceSlice& slice, const Psf& psf,
                          const std::vector<double>& mean_image,
                          std::optional<double> noise_mean);

} // namespace photostat

#endif
