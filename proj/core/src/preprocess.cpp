#include "skott/preprocess.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace skott {

bool is_missing(double value) { return std::isnan(value); }

namespace {

std::size_t first_valid(const TimeSeries& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_missing(s[i])) return i;
    }
    throw std::invalid_argument("no valid observation");
}

}  // namespace

TimeSeries backward_fill(TimeSeries series) {
    const std::size_t first = first_valid(series);
    for (std::size_t i = 0; i < first; ++i) series[i] = series[first];
    return series;
}

TimeSeries linear_interpolate(TimeSeries series) {
    const std::size_t n = series.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_missing(series[i])) {
            ++i;
            continue;
        }
        std::size_t gap_end = i;
        while (gap_end < n && is_missing(series[gap_end])) ++gap_end;
        if (i == 0 || gap_end == n) {
            // No neighbor on one side; left for backward_fill / wma_extend.
            i = gap_end;
            continue;
        }
        const double left = series[i - 1];
        const double right = series[gap_end];
        const double run = static_cast<double>(gap_end - (i - 1));
        for (std::size_t j = i; j < gap_end; ++j) {
            const double frac = static_cast<double>(j - (i - 1)) / run;
            series[j] = left + frac * (right - left);
        }
        i = gap_end;
    }
    return series;
}

TimeSeries wma_extend(TimeSeries series) {
    if (series.empty() || is_missing(series[0])) {
        throw std::invalid_argument("wma_extend: series must start with a valid value");
    }
    std::size_t prefix = 1;
    while (prefix < series.size() && !is_missing(series[prefix])) ++prefix;
    for (std::size_t i = prefix; i < series.size(); ++i) {
        if (!is_missing(series[i])) {
            throw std::invalid_argument("wma_extend: valid value after the trailing gap");
        }
        double weighted = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            weighted += static_cast<double>(j + 1) * series[j];
        }
        const double t = static_cast<double>(i);
        series[i] = weighted / (t * (t + 1.0) / 2.0);
    }
    return series;
}

TimeSeries preprocess(TimeSeries series) {
    return wma_extend(linear_interpolate(backward_fill(std::move(series))));
}

}  // namespace skott
