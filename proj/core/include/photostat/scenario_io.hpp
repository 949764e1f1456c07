#ifndef PHOTOSTAT_SCENARIO_IO_HPP
#define PHOTOSTAT_SCENARIO_IO_HPP

#include "photostat/types.hpp"

#include <iosfwd>
#include <string>

namespace photostat {

/// Scenario text format: `key = value` lines grouped in [object],
/// [psf], [noise] and [run] sections, plus bare source lines inside
/// [object]:
///
///   [object]
///   length = 128
///   background 10 0.2          # flux q, fills every pixel
///   point 64 500 0.2           # pos flux q
///   extended 81 113 30 5 0.2   # first last mean amplitude q
///
///   [psf]
///   sigma = 3.0                # Gaussian kernel...
///   half_width = 12            # ...optional, default ceil(4 sigma)
///   # or: weights = w_-J ... w_J (odd count, overrides sigma)
///
///   [noise]
///   mean = 5
///   q = 0.1
///
///   [run]
///   samples = 1000
///   seed = 12345
///   covariance = slices=48,64,72,96   # or full | off
///
/// Pixel positions are 0-based. Later source lines overwrite earlier
/// ones where they overlap; the extended source profile is
/// mean + amplitude * sin(2*pi*(k - first)/(last - first + 1)).
/// A bare `pixel k flux q` line sets one position exactly (this is the
/// form format_scenario() emits, so arbitrary objects round-trip); the
/// [noise] section accepts the same `pixel` lines in place of the flat
/// mean/q keys. `#` starts a comment. Throws config_error with a line
/// number on any syntax or range problem.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

std::string format_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

} // namespace photostat

#endif
