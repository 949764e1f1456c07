#include "photostat/stats.hpp"

#include "photostat/errors.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace photostat {

namespace {

inline std::size_t triangle_index(std::size_t k, std::size_t l, std::size_t size) {
    // packed upper triangle, k <= l
    return k * size - k * (k - 1) / 2 + (l - k);
}

// (cross - sum_k * sum_l / n) / (n - 1), evaluated with one fixed
// operation order so that variance == cov(k,k) bit-exactly and the
// matrix is bit-exactly symmetric.
inline double finalize_cov(uint128 cross, uint128 sum_a, uint128 sum_b, std::uint64_t n) {
    const double c = static_cast<double>(cross);
    const double sa = static_cast<double>(sum_a);
    const double sb = static_cast<double>(sum_b);
    return (c - sa * (sb / double(n))) / double(n - 1);
}

} // namespace

CovarianceMatrix::CovarianceMatrix(std::vector<int> rows, std::size_t size)
    : rows_(std::move(rows)), size_(size), data_(rows_.size() * size, 0.0) {}

bool CovarianceMatrix::has_row(int k) const {
    return std::binary_search(rows_.begin(), rows_.end(), k);
}

std::size_t CovarianceMatrix::row_index(int k) const {
    const auto it = std::lower_bound(rows_.begin(), rows_.end(), k);
    if (it == rows_.end() || *it != k)
        throw std::invalid_argument("CovarianceMatrix: row not accumulated");
    return static_cast<std::size_t>(it - rows_.begin());
}

double CovarianceMatrix::at(int k, int l) const {
    if (l < 0 || static_cast<std::size_t>(l) >= size_)
        throw std::invalid_argument("CovarianceMatrix: column out of range");
    return data_[row_index(k) * size_ + static_cast<std::size_t>(l)];
}

void CovarianceMatrix::set(int k, int l, double value) {
    if (l < 0 || static_cast<std::size_t>(l) >= size_)
        throw std::invalid_argument("CovarianceMatrix: column out of range");
    data_[row_index(k) * size_ + static_cast<std::size_t>(l)] = value;
}

std::vector<double> CovarianceMatrix::row(int k) const {
    const std::size_t r = row_index(k);
    return std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(r * size_),
                               data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * size_));
}

StatAccumulator::StatAccumulator(std::size_t size, CovarianceSpec covariance)
    : size_(size), covariance_(std::move(covariance)) {
    if (size_ == 0)
        throw std::invalid_argument("StatAccumulator: size must be positive");
    for (int r : covariance_.rows)
        if (r < 0 || static_cast<std::size_t>(r) >= size_)
            throw std::invalid_argument("StatAccumulator: slice row out of range");
    sum_.assign(size_, 0);
    sumsq_.assign(size_, 0);
    switch (covariance_.mode) {
    case CovarianceMode::off:
        break;
    case CovarianceMode::slices:
        cross_.assign(covariance_.rows.size() * size_, 0);
        break;
    case CovarianceMode::full:
        cross_.assign(size_ * (size_ + 1) / 2, 0);
        break;
    }
}

void StatAccumulator::accumulate(const SampleImage& image) {
    if (image.size() != size_)
        throw std::invalid_argument("StatAccumulator: image length mismatch");
    if (n_ == std::numeric_limits<std::uint64_t>::max())
        throw numeric_error("StatAccumulator: image counter overflow");
    ++n_;
    for (std::size_t k = 0; k < size_; ++k) {
        const std::uint64_t c = image[k];
        sum_[k] += c;
        sumsq_[k] += c * c;
    }
    if (covariance_.mode == CovarianceMode::slices) {
        uint128* row = cross_.data();
        for (int r : covariance_.rows) {
            const std::uint64_t cr = image[static_cast<std::size_t>(r)];
            for (std::size_t l = 0; l < size_; ++l)
                row[l] += cr * std::uint64_t(image[l]);
            row += size_;
        }
    } else if (covariance_.mode == CovarianceMode::full) {
        uint128* cell = cross_.data();
        for (std::size_t k = 0; k < size_; ++k) {
            const std::uint64_t ck = image[k];
            for (std::size_t l = k; l < size_; ++l)
                *cell++ += ck * std::uint64_t(image[l]);
        }
    }
}

void StatAccumulator::merge(const StatAccumulator& other) {
    if (other.size_ != size_ || !(other.covariance_ == covariance_))
        throw std::invalid_argument("StatAccumulator::merge: shape mismatch");
    n_ += other.n_;
    for (std::size_t k = 0; k < size_; ++k) {
        sum_[k] += other.sum_[k];
        sumsq_[k] += other.sumsq_[k];
    }
    for (std::size_t i = 0; i < cross_.size(); ++i)
        cross_[i] += other.cross_[i];
}

uint128 StatAccumulator::cross(int k, int l) const {
    if (k < 0 || l < 0 || static_cast<std::size_t>(k) >= size_ || static_cast<std::size_t>(l) >= size_)
        throw std::invalid_argument("StatAccumulator::cross: index out of range");
    if (covariance_.mode == CovarianceMode::full) {
        const auto a = static_cast<std::size_t>(std::min(k, l));
        const auto b = static_cast<std::size_t>(std::max(k, l));
        return cross_[triangle_index(a, b, size_)];
    }
    if (covariance_.mode == CovarianceMode::slices) {
        const auto it = std::lower_bound(covariance_.rows.begin(), covariance_.rows.end(), k);
        if (it != covariance_.rows.end() && *it == k) {
            const auto r = static_cast<std::size_t>(it - covariance_.rows.begin());
            return cross_[r * size_ + static_cast<std::size_t>(l)];
        }
    }
    throw std::invalid_argument("StatAccumulator::cross: row not accumulated");
}

StatisticalImages StatAccumulator::finalize() const {
    if (n_ < 2)
        throw insufficient_samples_error("finalize: need at least 2 samples");
    StatisticalImages out;
    out.n_samples = n_;
    out.mean.resize(size_);
    out.variance.resize(size_);
    out.z.resize(size_);
    for (std::size_t k = 0; k < size_; ++k) {
        out.mean[k] = static_cast<double>(sum_[k]) / double(n_);
        out.variance[k] = finalize_cov(sumsq_[k], sum_[k], sum_[k], n_);
        out.z[k] = out.variance[k] - out.mean[k];
    }

    if (covariance_.mode != CovarianceMode::off) {
        std::vector<int> rows;
        if (covariance_.mode == CovarianceMode::full) {
            rows.resize(size_);
            for (std::size_t k = 0; k < size_; ++k)
                rows[k] = static_cast<int>(k);
        } else {
            rows = covariance_.rows;
        }
        out.cov_raw = CovarianceMatrix(rows, size_);
        for (int k : rows) {
            for (std::size_t l = 0; l < size_; ++l) {
                // order the sums by pixel index so that (k,l) and (l,k)
                // run the identical floating sequence
                const auto a = std::min<std::size_t>(static_cast<std::size_t>(k), l);
                const auto b = std::max<std::size_t>(static_cast<std::size_t>(k), l);
                out.cov_raw.set(k, static_cast<int>(l),
                                finalize_cov(cross(k, static_cast<int>(l)), sum_[a], sum_[b], n_));
            }
        }
        out.cov_corrected = out.cov_raw;
        for (int k : rows)
            out.cov_corrected.set(k, k, out.z[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace photostat
