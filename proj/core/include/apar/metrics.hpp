#pragma once

#include <span>

namespace apar {

/// Mean absolute error. Throws on empty or mismatched inputs.
double mae(std::span<const double> predicted, std::span<const double> truth);

/// Root mean squared error; always >= mae on the same pair.
double rmse(std::span<const double> predicted, std::span<const double> truth);

}  // namespace apar
