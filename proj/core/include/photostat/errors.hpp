#ifndef PHOTOSTAT_ERRORS_HPP
#define PHOTOSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace photostat {

/// Base class for all library runtime errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario/config file problems (bad syntax, out-of-range values).
struct config_error : error {
    using error::error;
};

/// File and stream I/O failures.
struct io_error : error {
    using error::error;
};

/// Numeric failures: accumulator overflow, count out of representable range.
struct numeric_error : error {
    using error::error;
};

/// Statistics requested from fewer than two samples.
struct insufficient_samples_error : error {
    using error::error;
};

/// Inference cannot produce an estimate from the given data
/// (zero-energy covariance row, delta PSF fit, non-positive background).
struct not_estimable_error : error {
    using error::error;
};

} // namespace photostat

#endif
