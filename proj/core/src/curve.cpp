#include "photostat/curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace photostat {

double fwhm_interpolated(std::span<const double> values) {
    if (values.size() < 3)
        throw std::invalid_argument("fwhm_interpolated: need at least 3 samples");
    const auto peak_it = std::max_element(values.begin(), values.end());
    const auto peak = static_cast<std::size_t>(peak_it - values.begin());
    const double half = *peak_it / 2.0;
    if (!(*peak_it > 0.0))
        throw std::invalid_argument("fwhm_interpolated: non-positive peak");

    // walk left from the peak to the half-max crossing
    double left = -1.0;
    for (std::size_t i = peak; i-- > 0;) {
        if (values[i] <= half) {
            const double frac = (values[i + 1] - half) / (values[i + 1] - values[i]);
            left = double(i + 1) - frac;
            break;
        }
    }
    double right = -1.0;
    for (std::size_t i = peak + 1; i < values.size(); ++i) {
        if (values[i] <= half) {
            const double frac = (values[i - 1] - half) / (values[i - 1] - values[i]);
            right = double(i - 1) + frac;
            break;
        }
    }
    if (left < 0.0 || right < 0.0)
        throw std::invalid_argument("fwhm_interpolated: curve does not cross half maximum");
    return right - left;
}

bool has_interior_local_min(std::span<const double> values, std::size_t first, std::size_t last) {
    if (last >= values.size() || first + 1 >= last)
        return false;
    for (std::size_t k = first + 1; k < last; ++k)
        if (values[k] < values[k - 1] && values[k] < values[k + 1])
            return true;
    return false;
}

} // namespace photostat
