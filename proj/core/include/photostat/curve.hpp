#ifndef PHOTOSTAT_CURVE_HPP
#define PHOTOSTAT_CURVE_HPP

#include <cstddef>
#include <span>

namespace photostat {

/// Full width at half maximum of a sampled curve, with the half-max
/// crossings located by linear interpolation between samples. The
/// baseline is taken as 0. Throws std::invalid_argument if the curve
/// never rises above half of its peak on both sides.
double fwhm_interpolated(std::span<const double> values);

/// True if values[k] is a strict local minimum for some k in the open
/// index interval (first, last).
bool has_interior_local_min(std::span<const double> values, std::size_t first, std::size_t last);

} // namespace photostat

#endif
