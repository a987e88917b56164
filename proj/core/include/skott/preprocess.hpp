#pragma once

#include <vector>

namespace skott {

// A time series with possibly missing entries. Missing values are NaN;
// loaders map empty CSV cells and the literal "nan" (any case) to NaN.
using TimeSeries = std::vector<double>;

bool is_missing(double value);

// Replaces every leading missing entry with the first subsequent valid
// value: [nan, x, y] -> [x, x, y]. Throws if the series has no valid entry.
TimeSeries backward_fill(TimeSeries series);

// Fills interior gaps by linear interpolation between the nearest valid
// neighbors. Leading/trailing gaps (no neighbor on one side) are untouched.
TimeSeries linear_interpolate(TimeSeries series);

// Extends a valid prefix x_1..x_t over trailing gaps with the weighted
// moving average
//   x_{t+1} = (1*x_1 + 2*x_2 + ... + t*x_t) / (t*(t+1)/2),
// re-applied with the window grown by one for each further gap. Requires the
// series to be a valid prefix followed only by gaps.
TimeSeries wma_extend(TimeSeries series);

// backward_fill, then linear_interpolate, then wma_extend. The result has no
// missing entries and originally valid entries are never altered.
TimeSeries preprocess(TimeSeries series);

}  // namespace skott
