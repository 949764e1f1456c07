#ifndef PHOTOSTAT_TYPES_HPP
#define PHOTOSTAT_TYPES_HPP

#include <cstdint>
#include <vector>

namespace photostat {

/// Z quantity of a count distribution: variance minus mean.
/// Zero for Poissonian light, negative for sub-Poissonian,
/// positive for super-Poissonian.
double z_quantity(double mean, double variance);

/// Mandel Q parameter: variance/mean - 1.
/// Throws std::invalid_argument for mean == 0 (Q is undefined on dark
/// pixels; callers must handle them explicitly).
double mandel_q(double mean, double variance);

/// Per-position source statistics: expected flux (counts per unit
/// exposure) and Mandel Q at every object position. Immutable after
/// construction and safe to share across threads.
class ObjectModel {
public:
    ObjectModel(std::vector<double> mean_flux, std::vector<double> q);

    std::size_t size() const { return mean_flux_.size(); }
    const std::vector<double>& mean_flux() const { return mean_flux_; }
    const std::vector<double>& q() const { return q_; }

    double mean_flux(std::size_t k) const { return mean_flux_[k]; }
    double q(std::size_t k) const { return q_[k]; }
    /// Z quantity at position k: mean * Q == variance - mean.
    double z(std::size_t k) const { return mean_flux_[k] * q_[k]; }
    double variance(std::size_t k) const { return mean_flux_[k] * (1.0 + q_[k]); }

private:
    std::vector<double> mean_flux_;
    std::vector<double> q_;
};

/// Per-pixel local noise statistics (detector readout / dark current),
/// independent between pixels and independent of the signal.
class NoiseModel {
public:
    NoiseModel(std::vector<double> mean, std::vector<double> q);

    /// Spatially constant noise over `size` pixels.
    static NoiseModel flat(std::size_t size, double mean, double q);
    /// All-zero noise over `size` pixels.
    static NoiseModel none(std::size_t size);

    std::size_t size() const { return mean_.size(); }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& q() const { return q_; }

    double mean(std::size_t k) const { return mean_[k]; }
    double q(std::size_t k) const { return q_[k]; }
    double z(std::size_t k) const { return mean_[k] * q_[k]; }
    double variance(std::size_t k) const { return mean_[k] * (1.0 + q_[k]); }

private:
    std::vector<double> mean_;
    std::vector<double> q_;
};

/// Discrete normalized point spread function over taps j in [-J, J].
/// Weights are renormalized to sum to exactly 1 at construction.
class Psf {
public:
    /// `weights` has odd length 2J+1 and is indexed j = -J..J.
    explicit Psf(std::vector<double> weights);

    int half_width() const { return half_width_; }
    std::size_t tap_count() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }

    /// Weight at signed tap j, |j| <= J.
    double at(int j) const { return weights_[static_cast<std::size_t>(j + half_width_)]; }

    /// Total weight of taps >= j (exact running suffix used by the
    /// conditional-binomial multinomial sampler).
    double tail_weight(int j) const { return suffix_[static_cast<std::size_t>(j + half_width_)]; }

    /// Autocorrelation a(m) = sum_j p(j) p(m+j); support |m| <= 2J.
    double autocorrelation(int lag) const;

private:
    int half_width_ = 0;
    std::vector<double> weights_;
    std::vector<double> suffix_;
};

/// Gaussian kernel sampled at integer taps, weights[j] proportional to
/// exp(-j^2 / (2 sigma^2)), renormalized. Symmetric by construction.
Psf make_gaussian_psf(double sigma, int half_width);

/// Default truncation for a Gaussian kernel: ceil(4 sigma), leaving
/// tail mass below 1e-4 before renormalization.
int default_gaussian_half_width(double sigma);

enum class CovarianceMode { off, slices, full };

/// Which part of the pixel-pair covariance to accumulate. `full` costs
/// O(K^2) per image; `slices` restricts to the listed rows.
struct CovarianceSpec {
    CovarianceMode mode = CovarianceMode::off;
    std::vector<int> rows; // used when mode == slices; sorted, unique

    static CovarianceSpec off() { return {CovarianceMode::off, {}}; }
    static CovarianceSpec full() { return {CovarianceMode::full, {}}; }
    static CovarianceSpec slices(std::vector<int> rows);

    bool operator==(const CovarianceSpec&) const = default;
};

/// A complete simulation configuration: source, optics, noise, and the
/// sampling run parameters.
struct Scenario {
    ObjectModel object;
    Psf psf;
    NoiseModel noise;
    std::uint64_t n_samples = 1;
    std::uint64_t master_seed = 0;
    CovarianceSpec covariance = CovarianceSpec::off();

    Scenario(ObjectModel object, Psf psf, NoiseModel noise,
             std::uint64_t n_samples, std::uint64_t master_seed,
             CovarianceSpec covariance = CovarianceSpec::off());

    std::size_t pixel_count() const { return object.size(); }
};

/// The standard 128-pixel test scene: a 500 counts/sec point source at
/// pixel 64, dual sources at 21/28 (250 counts/sec) and 46/51
/// (300 counts/sec), a sinusoidal extended source on [81, 113] with
/// mean 30 and amplitude 5, a constant background of 10 counts/sec with
/// Q = 0.2, flat local noise of 5 counts/sec with Q = 0.1, and a
/// Gaussian PSF with sigma = 3. `foreground_q` sets the Q parameter of
/// every foreground source (typically -0.2, 0.0 or 0.2).
Scenario reference_scenario(double foreground_q = 0.2);

/// Seed baked into reference_scenario().
inline constexpr std::uint64_t kReferenceSeed = 12345;

} // namespace photostat

#endif
