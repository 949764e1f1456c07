#include "photostat/types.hpp"
#include "photostat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace photostat {

double z_quantity(double mean, double variance) {
    return variance - mean;
}

double mandel_q(double mean, double variance) {
    if (mean <= 0.0)
        throw std::invalid_argument("mandel_q: undefined for mean == 0");
    return variance / mean - 1.0;
}

namespace {

void check_flux_q(const std::vector<double>& mean, const std::vector<double>& q,
                  const char* who) {
    if (mean.size() != q.size())
        throw std::invalid_argument(std::string(who) + ": mean and q arrays differ in length");
    if (mean.empty())
        throw std::invalid_argument(std::string(who) + ": empty model");
    for (std::size_t k = 0; k < mean.size(); ++k) {
        if (!(mean[k] >= 0.0))
            throw std::invalid_argument(std::string(who) + ": negative mean flux");
        if (!(q[k] >= -1.0))
            throw std::invalid_argument(std::string(who) + ": Q below -1 gives negative variance");
    }
}

} // namespace

ObjectModel::ObjectModel(std::vector<double> mean_flux, std::vector<double> q)
    : mean_flux_(std::move(mean_flux)), q_(std::move(q)) {
    check_flux_q(mean_flux_, q_, "ObjectModel");
}

NoiseModel::NoiseModel(std::vector<double> mean, std::vector<double> q)
    : mean_(std::move(mean)), q_(std::move(q)) {
    check_flux_q(mean_, q_, "NoiseModel");
}

NoiseModel NoiseModel::flat(std::size_t size, double mean, double q) {
    return NoiseModel(std::vector<double>(size, mean), std::vector<double>(size, q));
}

NoiseModel NoiseModel::none(std::size_t size) {
    return flat(size, 0.0, 0.0);
}

Psf::Psf(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty() || weights_.size() % 2 == 0)
        throw std::invalid_argument("Psf: weights must have odd length 2J+1");
    half_width_ = static_cast<int>(weights_.size() / 2);
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0))
            throw std::invalid_argument("Psf: negative weight");
        total += w;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("Psf: weights sum to zero");
    for (double& w : weights_)
        w /= total;
    // Exact suffix sums, so the last multinomial bin always sees
    // conditional probability 1.
    suffix_.assign(weights_.size() + 1, 0.0);
    for (std::size_t i = weights_.size(); i-- > 0;)
        suffix_[i] = suffix_[i + 1] + weights_[i];
}

double Psf::autocorrelation(int lag) const {
    const int m = std::abs(lag);
    if (m > 2 * half_width_)
        return 0.0;
    double acc = 0.0;
    for (int j = -half_width_; j + m <= half_width_; ++j)
        acc += at(j) * at(j + m);
    return acc;
}

Psf make_gaussian_psf(double sigma, int half_width) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_gaussian_psf: sigma must be positive");
    if (half_width < 1)
        throw std::invalid_argument("make_gaussian_psf: half_width must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(2 * half_width + 1));
    // Fill by |j| so the kernel is symmetric to the bit.
    for (int j = 0; j <= half_width; ++j) {
        const double v = std::exp(-0.5 * double(j) * double(j) / (sigma * sigma));
        w[static_cast<std::size_t>(half_width + j)] = v;
        w[static_cast<std::size_t>(half_width - j)] = v;
    }
    return Psf(std::move(w));
}

int default_gaussian_half_width(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("default_gaussian_half_width: sigma must be positive");
    return std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
}

CovarianceSpec CovarianceSpec::slices(std::vector<int> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.empty())
        throw std::invalid_argument("CovarianceSpec::slices: no rows given");
    return {CovarianceMode::slices, std::move(rows)};
}

Scenario::Scenario(ObjectModel object_, Psf psf_, NoiseModel noise_,
                   std::uint64_t n_samples_, std::uint64_t master_seed_,
                   CovarianceSpec covariance_)
    : object(std::move(object_)), psf(std::move(psf_)), noise(std::move(noise_)),
      n_samples(n_samples_), master_seed(master_seed_), covariance(std::move(covariance_)) {
    if (object.size() != noise.size())
        throw std::invalid_argument("Scenario: object and noise lengths differ");
    if (n_samples < 1)
        throw std::invalid_argument("Scenario: n_samples must be >= 1");
    const int k_max = static_cast<int>(object.size());
    for (int r : covariance.rows)
        if (r < 0 || r >= k_max)
            throw std::invalid_argument("Scenario: covariance slice row out of range");
}

Scenario reference_scenario(double foreground_q) {
    constexpr std::size_t K = 128;
    std::vector<double> flux(K, 10.0);
    std::vector<double> q(K, 0.2);

    auto point = [&](std::size_t pos, double f) {
        flux[pos] = f;
        q[pos] = foreground_q;
    };
    point(64, 500.0);
    point(21, 250.0);
    point(28, 250.0);
    point(46, 300.0);
    point(51, 300.0);
    // Extended source: one full sinusoid period across [81, 113].
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (std::size_t k = 81; k <= 113; ++k) {
        flux[k] = 30.0 + 5.0 * std::sin(kTwoPi * double(k - 81) / 32.0);
        q[k] = foreground_q;
    }

    const double sigma = 3.0;
    return Scenario(ObjectModel(std::move(flux), std::move(q)),
                    make_gaussian_psf(sigma, default_gaussian_half_width(sigma)),
                    NoiseModel::flat(K, 5.0, 0.1),
                    /*n_samples=*/1000, kReferenceSeed,
                    CovarianceSpec::slices({48, 64, 72, 96}));
}

} // namespace photostat
