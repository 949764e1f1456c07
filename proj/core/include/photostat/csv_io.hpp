#ifndef PHOTOSTAT_CSV_IO_HPP
#define PHOTOSTAT_CSV_IO_HPP

#include "photostat/sampler.hpp"
#include "photostat/stats.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace photostat {

/// Per-pixel statistics table, one row per pixel:
///   index,mean,variance,z
/// Values use full round-trip precision (%.17g).
void write_stats_csv(const StatisticalImages& images, const std::string& path);

struct StatsTable {
    std::vector<double> mean, variance, z;
};
StatsTable read_stats_csv(const std::string& path);

/// Covariance rows:
///   index,c0,c1,...,c<K-1>
/// with one line per accumulated row. Sliced matrices only contain the
/// accumulated rows; reading rebuilds the row set from the first column.
void write_matrix_csv(const CovarianceMatrix& matrix, const std::string& path);
CovarianceMatrix read_matrix_csv(const std::string& path);

/// Generic single-series table `index,<name>` (used for expected /
/// reference curves).
void write_series_csv(const std::vector<double>& values, const std::string& name,
                      const std::string& path);
std::vector<double> read_series_csv(const std::string& path);

/// Raw image-stack dump: a 16-byte header — magic "PCS1" (4 bytes),
/// u32 pixel count K, u64 image count — followed by one record per
/// image of K little-endian u32 photon counts.
class StackWriter {
public:
    StackWriter(const std::string& path, std::uint32_t pixel_count);
    ~StackWriter();
    StackWriter(const StackWriter&) = delete;
    StackWriter& operator=(const StackWriter&) = delete;

    void append(const SampleImage& image);
    /// Rewrites the header with the final image count and closes the file.
    void close();

private:
    std::FILE* file_ = nullptr;
    std::string path_;
    std::uint32_t pixel_count_ = 0;
    std::uint64_t written_ = 0;
};

std::vector<SampleImage> read_stack(const std::string& path);

} // namespace photostat

#endif
