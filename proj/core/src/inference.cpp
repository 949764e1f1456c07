#include "photostat/inference.hpp"

#include "photostat/errors.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace photostat {

CovarianceSlice CovarianceSlice::from_matrix(const CovarianceMatrix& cov, int center, int window) {
    if (window < 1)
        throw std::invalid_argument("CovarianceSlice: window must be >= 1");
    if (!cov.has_row(center))
        throw std::invalid_argument("CovarianceSlice: row not present in covariance matrix");
    CovarianceSlice slice;
    slice.center = center;
    const auto k_count = static_cast<int>(cov.size());
    for (int m = -window; m <= window; ++m) {
        const int l = center + m;
        if (l >= 0 && l < k_count)
            slice.lags.emplace_back(m, cov.at(center, l));
    }
    return slice;
}

bool CovarianceSlice::has_lag(int m) const {
    for (const auto& [lag, value] : lags)
        if (lag == m)
            return true;
    return false;
}

double CovarianceSlice::at_lag(int m) const {
    for (const auto& [lag, value] : lags)
        if (lag == m)
            return value;
    throw std::invalid_argument("CovarianceSlice: lag not present");
}

PsfEstimate estimate_psf_point(const CovarianceMatrix& cov, int center, int half_width,
                               double noise_z) {
    if (half_width < 0)
        throw std::invalid_argument("estimate_psf_point: half_width must be >= 0");
    const auto k_count = static_cast<int>(cov.size());
    if (center - half_width < 0 || center + half_width >= k_count)
        throw std::invalid_argument("estimate_psf_point: window reaches outside the detector");

    // Row values at lags -J..J; lag 0 is the corrected diagonal with
    // the known noise Z removed.
    std::vector<double> row(static_cast<std::size_t>(2 * half_width + 1));
    double row_sum = 0.0;
    double row_energy = 0.0;
    for (int m = -half_width; m <= half_width; ++m) {
        double v = cov.at(center, center + m);
        if (m == 0)
            v -= noise_z;
        row[static_cast<std::size_t>(m + half_width)] = v;
        row_sum += v;
        row_energy += std::abs(v);
    }
    if (row_energy <= 0.0 || row_sum == 0.0)
        throw not_estimable_error("estimate_psf_point: covariance row carries no energy");

    const double lag0 = row[static_cast<std::size_t>(half_width)];
    if (lag0 == 0.0)
        throw not_estimable_error("estimate_psf_point: zero lag-0 value, p(0) not recoverable");

    // p(m) = row(m) / sum(row); Z = (sum(row))^2 / row(0).
    bool clipped = false;
    std::vector<double> weights(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        const double p = row[i] / row_sum;
        if (p < 0.0) {
            clipped = true;
            weights[i] = 0.0;
        } else {
            weights[i] = p;
        }
    }
    const double z_point = row_sum * row_sum / lag0;
    return {Psf(std::move(weights)), z_point, clipped};
}

double fit_flat_z(const CovarianceSlice& slice, const Psf& psf) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& [lag, value] : slice.lags) {
        if (lag == 0)
            continue;
        const double a = psf.autocorrelation(lag);
        num += value * a;
        den += a * a;
    }
    if (den == 0.0)
        throw not_estimable_error(
            "fit_flat_z: PSF autocorrelation vanishes off lag 0 (delta kernel?)");
    return num / den;
}

double separate_noise(const CovarianceSlice& slice, double z_b, const Psf& psf) {
    if (!slice.has_lag(0))
        throw std::invalid_argument("separate_noise: slice is missing its lag-0 value");
    return slice.at_lag(0) - z_b * psf.autocorrelation(0);
}

std::pair<double, double> recover_background(const std::vector<double>& mean_image,
                                             double noise_mean, double z_b, int center) {
    if (center < 0 || static_cast<std::size_t>(center) >= mean_image.size())
        throw std::invalid_argument("recover_background: center out of range");
    const double o_b = mean_image[static_cast<std::size_t>(center)] - noise_mean;
    if (!(o_b > 0.0))
        throw not_estimable_error("recover_background: implied background mean is not positive");
    return {o_b, z_b / o_b};
}

std::string FitReport::to_text() const {
    char buf[512];
    std::string out;
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out += buf;
    };
    std::snprintf(buf, sizeof buf, "center = %d\n", center);
    out += buf;
    line("z_b", z_b);
    line("z_n", z_n);
    line("residual_rms", residual_rms);
    if (o_b)
        line("o_b", *o_b);
    if (q_b)
        line("q_b", *q_b);
    return out;
}

FitReport fit_flat_region(const CovarianceSlice& slice, const Psf& psf,
                          const std::vector<double>& mean_image,
                          std::optional<double> noise_mean) {
    FitReport report;
    report.center = slice.center;
    report.z_b = fit_flat_z(slice, psf);
    report.z_n = separate_noise(slice, report.z_b, psf);

    double ss = 0.0;
    std::size_t fitted = 0;
    for (const auto& [lag, value] : slice.lags) {
        if (lag == 0)
            continue;
        const double r = value - report.z_b * psf.autocorrelation(lag);
        ss += r * r;
        ++fitted;
    }
    report.residual_rms = fitted > 0 ? std::sqrt(ss / double(fitted)) : 0.0;

    if (noise_mean) {
        const auto [o_b, q_b] = recover_background(mean_image, *noise_mean, report.z_b, slice.center);
        report.o_b = o_b;
        report.q_b = q_b;
    }
    return report;
}

} // namespace photostat
