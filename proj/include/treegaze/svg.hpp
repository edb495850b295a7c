#pragma once

#include <array>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace treegaze::svg {

struct BarGroup {
    std::string label;
    std::array<double, 2> mean{};
    std::array<double, 2> sd{};
    double p = 1.0;  // comparison p-value, drawn as stars
};

/// Grouped bars (two conditions per group) with +/- 1 sd whiskers.
void bar_plot(std::ostream& out, std::span<const BarGroup> groups, const std::array<std::string, 2>& conditions,
              const std::string& title, const std::string& y_label);

struct Interval {
    double from = 0.0;
    double to = 0.0;
};

struct TimeCourse {
    std::vector<double> time_ms;
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> significant;
    std::vector<Interval> shaded;  // e.g. significant clusters
};

/// Mean line with a confidence band, dots at significant timepoints and shaded intervals.
void line_plot(std::ostream& out, const TimeCourse& course, const std::string& title, const std::string& y_label);

}  // namespace treegaze::svg
