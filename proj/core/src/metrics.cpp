#include "apar/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace apar {

namespace {

void check(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("prediction/truth length mismatch");
    if (predicted.empty()) throw std::invalid_argument("no pairs to evaluate");
}

}  // namespace

double mae(std::span<const double> predicted, std::span<const double> truth) {
    check(predicted, truth);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - truth[i]);
    return sum / static_cast<double>(predicted.size());
}

double rmse(std::span<const double> predicted, std::span<const double> truth) {
    check(predicted, truth);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - truth[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace apar
