#include "camsim/camarray.hpp"

#include <algorithm>
#include <cmath>

#include "camsim/error.hpp"

namespace camsim {

std::string to_string(ClockKind k) {
    switch (k) {
        case ClockKind::Ideal: return "ideal";
        case ClockKind::Fixed: return "fixed";
        case ClockKind::Matched: return "matched";
    }
    return "?";
}

ClockKind clock_from_string(std::string_view s) {
    if (s == "ideal") return ClockKind::Ideal;
    if (s == "fixed") return ClockKind::Fixed;
    if (s == "matched") return ClockKind::Matched;
    throw ConfigError("unknown clock policy '" + std::string(s) + "'");
}

void ArrayConfig::validate() const {
    if (rows < 1) throw ConfigError("ArrayConfig: rows must be >= 1");
    if (cols < 1) throw ConfigError("ArrayConfig: cols must be >= 1");
    profile.validate();
}

CamBankSet build_banks(const ArrayConfig& config, const std::vector<BitVec>& items) {
    config.validate();
    CamBankSet set;
    set.rows = config.rows;
    set.cols = config.cols;
    set.items = items.size();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].width() != config.cols)
            throw DataError("build_banks: item " + std::to_string(i) + " has width " +
                            std::to_string(items[i].width()) + ", expected " +
                            std::to_string(config.cols));
        if (i % config.rows == 0) set.banks.emplace_back();
        set.banks.back().push_back(items[i]);
    }
    return set;
}

double row_delay(const ArrayConfig& config, std::size_t row,
                 std::span<const std::size_t> mismatches,
                 std::span<const double> cell_currents) {
    if (mismatches.empty()) return kNeverDischarges;
    double current = 0;
    for (std::size_t col : mismatches) {
        if (col >= config.cols)
            throw ConfigError("row_delay: mismatch column out of range");
        current += cell_currents[col];
    }
    const double dv = config.profile.v_ml - config.profile.v_sa_threshold;
    return searchline_arrival(config.profile, config.mitigation, row) +
           ml_capacitance(config.profile, config.cols) * dv /
               (ir_current_factor(config.profile, config.rows, config.mitigation, row) *
                current) +
           config.profile.t_sa_latch;
}

std::vector<double> clock_threshold(const ArrayConfig& config, const ClockPolicy& policy) {
    if (policy.hdist_limit < 1)
        throw ConfigError("clock_threshold: hdist_limit must be >= 1");
    const TechProfile& p = config.profile;
    const double t_lo = ideal_discharge_delay(p, config.cols, policy.hdist_limit + 1);
    const double t_hi = ideal_discharge_delay(p, config.cols, policy.hdist_limit);
    // Threshold sits between the slowest excluded and fastest included ideal
    // delays; guard moves it toward t_hi, trading recall margin for precision.
    const double mid = 0.5 * (t_lo + t_hi) + policy.guard * 0.5 * (t_hi - t_lo);
    const double base = mid + p.t_sa_latch;
    std::vector<double> clocks(config.rows, base);
    switch (policy.kind) {
        case ClockKind::Ideal:
        case ClockKind::Fixed:
            // Uniform clock anchored at the nearest row's nominal delays, so
            // every nominal true match stays above the clock (recall 100%);
            // skew-inflated far rows become the false positives.
            break;
        case ClockKind::Matched: {
            if (config.mitigation.kind != MitigationKind::ClkMatch)
                throw ConfigError("clock_threshold: MATCHED policy requires clkmatch mitigation");
            for (std::size_t r = 0; r < config.rows; ++r)
                clocks[r] = base + config.mitigation.clk_match_gain *
                                       searchline_arrival(p, config.mitigation, r);
            break;
        }
    }
    return clocks;
}

static std::uint64_t mix_bank_seed(std::uint64_t seed, std::size_t bank) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (bank + 1));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CellCurrents sample_bank_currents(const ArrayConfig& config, const VariationConfig& v,
                                  std::size_t bank_count, std::size_t trial) {
    CellCurrents out;
    out.reserve(bank_count);
    for (std::size_t b = 0; b < bank_count; ++b) {
        VariationConfig vb = v;
        vb.seed = mix_bank_seed(v.seed, b);
        out.push_back(sample_cell_currents(config.profile, vb, config.rows,
                                           config.cols, trial));
    }
    return out;
}

SearchOutcome search(const CamBankSet& banks, const ArrayConfig& config,
                     const BitVec& query, const ClockPolicy& policy,
                     const CellCurrents* currents) {
    if (query.width() != config.cols)
        throw DataError("search: query width " + std::to_string(query.width()) +
                        " != cols " + std::to_string(config.cols));
    SearchOutcome out;
    out.clock_times = clock_threshold(config, policy);
    out.delays.assign(banks.bank_count() * config.rows, kNeverDischarges);
    const double dv = config.profile.v_ml - config.profile.v_sa_threshold;
    const double cml_dv = ml_capacitance(config.profile, config.cols) * dv;

    for (std::size_t b = 0; b < banks.bank_count(); ++b) {
        const std::vector<double>* cur = currents ? &(*currents)[b] : nullptr;
        out.energy_pj += energy_per_search(config.profile, banks.bank_rows(b),
                                           config.mitigation, config.cols);
        for (std::size_t r = 0; r < banks.bank_rows(b); ++r) {
            const BitVec& stored = banks.banks[b][r];
            auto qw = query.words();
            auto sw = stored.words();
            std::size_t n = 0;
            double current = 0;
            for (std::size_t w = 0; w < qw.size(); ++w) {
                std::uint64_t x = qw[w] ^ sw[w];
                if (cur) {
                    while (x) {
                        const std::size_t col = w * 64 +
                            static_cast<std::size_t>(std::countr_zero(x));
                        current += (*cur)[r * config.cols + col];
                        x &= x - 1;
                        ++n;
                    }
                } else {
                    n += static_cast<std::size_t>(std::popcount(x));
                }
            }
            if (!cur) current = static_cast<double>(n) * config.profile.i_sat0;
            const std::size_t id = banks.global_id(b, r);
            double delay = kNeverDischarges;
            if (n > 0) {
                delay = searchline_arrival(config.profile, config.mitigation, r) +
                        cml_dv /
                            (ir_current_factor(config.profile, config.rows,
                                               config.mitigation, r) *
                             current) +
                        config.profile.t_sa_latch;
            }
            out.delays[id] = delay;
            // Not discharged at the clock edge => match. HDist 0 rows never
            // discharge and are unconditional matches.
            if (n == 0 || delay >= out.clock_times[r]) out.retrieved.push_back(id);
        }
    }

    double slowest = 0;
    for (std::size_t b = 0; b < banks.bank_count(); ++b)
        for (std::size_t r = 0; r < banks.bank_rows(b); ++r)
            slowest = std::max(slowest, std::min(out.delays[banks.global_id(b, r)],
                                                 out.clock_times[r]));
    const double q = config.profile.delay_quantum;
    out.latency_s = std::ceil(slowest / q - 1e-12) * q;
    return out;
}

SearchOutcome search(const CamBankSet& banks, const ArrayConfig& config,
                     const BitVec& query, const ClockPolicy& policy,
                     const VariationConfig& variation, std::size_t trial) {
    if (variation.sigma_isat_rel == 0)
        return search(banks, config, query, policy, nullptr);
    const CellCurrents currents =
        sample_bank_currents(config, variation, banks.bank_count(), trial);
    return search(banks, config, query, policy, &currents);
}

}  // namespace camsim
