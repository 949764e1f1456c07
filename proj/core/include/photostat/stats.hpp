#ifndef PHOTOSTAT_STATS_HPP
#define PHOTOSTAT_STATS_HPP

#include "photostat/sampler.hpp"
#include "photostat/types.hpp"

#include <cstdint>
#include <vector>

namespace photostat {

#ifndef __SIZEOF_INT128__
#error "photostat requires a compiler with 128-bit integer support"
#endif
using uint128 = unsigned __int128;

/// Covariance values for a set of matrix rows. `full` coverage stores
/// every row; slice coverage stores only the accumulated ones. Values
/// are bit-exactly symmetric wherever both orientations exist.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    CovarianceMatrix(std::vector<int> rows, std::size_t size);

    bool empty() const { return data_.empty(); }
    std::size_t size() const { return size_; }
    const std::vector<int>& rows() const { return rows_; }
    bool has_row(int k) const;

    double at(int k, int l) const;
    void set(int k, int l, double value);
    /// All K values of row k (throws if the row was not accumulated).
    std::vector<double> row(int k) const;

private:
    std::size_t row_index(int k) const;

    std::vector<int> rows_;
    std::size_t size_ = 0;
    std::vector<double> data_; // rows_.size() x size_, row-major
};

/// Finalized per-pixel statistics of an image stack.
struct StatisticalImages {
    std::uint64_t n_samples = 0;
    std::vector<double> mean;
    std::vector<double> variance; // unbiased, divisor n-1
    std::vector<double> z;        // variance - mean
    CovarianceMatrix cov_raw;       // sample covariance, divisor n-1
    CovarianceMatrix cov_corrected; // diagonal replaced by z
};

/// Exact streaming moment sums over an image stack. Counts are 32-bit,
/// sums are 128-bit and the image counter is 64-bit, so no overflow is
/// possible for counts < 2^32 over fewer than 2^64 images; every
/// accumulate/merge is exact integer arithmetic and merging partial
/// accumulators in any order reproduces the single-pass state bit for
/// bit. Floating point enters only in finalize().
class StatAccumulator {
public:
    StatAccumulator(std::size_t size, CovarianceSpec covariance = CovarianceSpec::off());

    std::size_t size() const { return size_; }
    std::uint64_t count() const { return n_; }
    const CovarianceSpec& covariance() const { return covariance_; }

    void accumulate(const SampleImage& image);
    void merge(const StatAccumulator& other);

    /// Requires n >= 2 (throws insufficient_samples_error otherwise).
    StatisticalImages finalize() const;

    const std::vector<uint128>& sums() const { return sum_; }
    const std::vector<uint128>& sums_of_squares() const { return sumsq_; }
    /// Cross-product sum for an accumulated row k against column l.
    uint128 cross(int k, int l) const;

private:
    std::size_t size_ = 0;
    CovarianceSpec covariance_;
    std::uint64_t n_ = 0;
    std::vector<uint128> sum_;
    std::vector<uint128> sumsq_;
    // full mode: packed upper triangle (k <= l); slices mode: one dense
    // row of length K per requested row.
    std::vector<uint128> cross_;
};

} // namespace photostat

#endif
