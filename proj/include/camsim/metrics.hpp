#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "camsim/camarray.hpp"

namespace camsim {

struct RetrievalMetrics {
    double precision = 0;  // percent
    double recall = 0;     // percent
    double f_score = 0;    // [0, 1]
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
};

/// Precision = |R cap V| / |V|, recall = |R cap V| / |R|, F = harmonic mean.
/// Empty retrieval has precision 100%; empty relevant set has recall 100%.
/// Both id sets must be sorted ascending.
RetrievalMetrics retrieval_metrics(std::span<const std::size_t> retrieved,
                                   std::span<const std::size_t> relevant);

/// Smallest d >= 1 such that the slowest row at HDist h+d still discharges
/// before the fastest row at HDist h (nominal, variation-free delays);
/// nullopt when no d <= h_max - h qualifies.
std::optional<std::size_t> mdd(const ArrayConfig& config, std::size_t h,
                               std::size_t h_max);

/// Points (1/(n(n-1)), t(n-1) - t(n)) for n = 2..n_max.
std::vector<std::pair<double, double>> separation_curve(const TechProfile& p,
                                                        std::size_t cols,
                                                        std::size_t n_max);

struct LinearFit {
    double intercept = 0;
    double slope = 0;
    double r_squared = 0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace camsim
