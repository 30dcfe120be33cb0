#include "camsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "camsim/error.hpp"

namespace camsim {

RetrievalMetrics retrieval_metrics(std::span<const std::size_t> retrieved,
                                   std::span<const std::size_t> relevant) {
    RetrievalMetrics m;
    std::size_t tp = 0;
    std::size_t i = 0, j = 0;
    while (i < retrieved.size() && j < relevant.size()) {
        if (retrieved[i] == relevant[j]) { ++tp; ++i; ++j; }
        else if (retrieved[i] < relevant[j]) ++i;
        else ++j;
    }
    m.true_positives = tp;
    m.false_positives = retrieved.size() - tp;
    m.false_negatives = relevant.size() - tp;
    // Empty retrieval: no false positives, precision 100. Empty relevant set:
    // nothing to miss, recall 100.
    const double p = retrieved.empty() ? 1.0 : static_cast<double>(tp) / retrieved.size();
    const double r = relevant.empty() ? 1.0 : static_cast<double>(tp) / relevant.size();
    m.precision = 100.0 * p;
    m.recall = 100.0 * r;
    m.f_score = (p + r > 0) ? 2.0 * p * r / (p + r) : 0.0;
    return m;
}

std::optional<std::size_t> mdd(const ArrayConfig& config, std::size_t h,
                               std::size_t h_max) {
    if (h < 1 || h >= h_max || h_max > config.cols)
        throw ConfigError("mdd: need 1 <= h < h_max <= cols");
    const TechProfile& p = config.profile;
    const MitigationConfig& m = config.mitigation;
    auto delay = [&](std::size_t hd, std::size_t row) {
        return searchline_arrival(p, m, row) +
               ideal_discharge_delay(p, config.cols, hd) /
                   ir_current_factor(p, config.rows, m, row) +
               p.t_sa_latch;
    };
    // Arrival grows and the IR factor shrinks with row, so the fastest HDist=h
    // row is row 0 and the slowest HDist=h+d row is the last one.
    const double fastest_h = delay(h, 0);
    for (std::size_t d = 1; h + d <= h_max; ++d) {
        if (delay(h + d, config.rows - 1) < fastest_h) return d;
    }
    return std::nullopt;
}

std::vector<std::pair<double, double>> separation_curve(const TechProfile& p,
                                                        std::size_t cols,
                                                        std::size_t n_max) {
    if (n_max < 2) throw ConfigError("separation_curve: n_max must be >= 2");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n_max - 1);
    for (std::size_t n = 2; n <= n_max; ++n) {
        const double x = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
        const double dt = ideal_discharge_delay(p, cols, n - 1) -
                          ideal_discharge_delay(p, cols, n);
        pts.emplace_back(x, dt);
    }
    return pts;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("fit_linear: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw ConfigError("fit_linear: degenerate x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = (syy == 0) ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

}  // namespace camsim
