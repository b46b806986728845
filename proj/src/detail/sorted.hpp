#pragma once

#include <span>
#include <vector>

namespace snrkit::detail {

// Helpers over ascending-sorted samples; defined in scoring.cpp.
double sorted_pairwise_sum(std::span<const double> sorted);
double sorted_mean_abs_deviation(std::span<const double> sorted, double y);
std::vector<double> sorted_copy(std::span<const double> values);

}  // namespace snrkit::detail
