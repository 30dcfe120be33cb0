#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camsim/bitvec.hpp"
#include "camsim/techmodel.hpp"

namespace camsim {

struct ArrayConfig {
    std::size_t rows = 0;
    std::size_t cols = 0;
    TechProfile profile;
    MitigationConfig mitigation;

    void validate() const;
};

/// Items split row-major across equally sized banks searched in parallel.
/// Global item id of (bank b, row r) is b * rows + r.
struct CamBankSet {
    std::size_t rows = 0;  // rows per full bank
    std::size_t cols = 0;
    std::size_t items = 0;
    std::vector<std::vector<BitVec>> banks;

    std::size_t bank_count() const { return banks.size(); }
    std::size_t bank_rows(std::size_t bank) const { return banks[bank].size(); }
    std::size_t global_id(std::size_t bank, std::size_t row) const {
        return bank * rows + row;
    }
};

enum class ClockKind { Ideal, Fixed, Matched };

std::string to_string(ClockKind k);
ClockKind clock_from_string(std::string_view s);

struct ClockPolicy {
    ClockKind kind = ClockKind::Fixed;
    std::size_t hdist_limit = 0;
    double guard = 0.0;  // 0 = midpoint threshold; 1 biases fully toward precision
};

struct SearchOutcome {
    std::vector<double> delays;       // per global item id; +inf = never discharges
    std::vector<std::size_t> retrieved;  // global item ids, ascending
    double energy_pj = 0;
    double latency_s = 0;             // quantized up to the profile delay quantum
    std::vector<double> clock_times;  // per row index (full-bank height)
};

CamBankSet build_banks(const ArrayConfig& config, const std::vector<BitVec>& items);

constexpr double kNeverDischarges = std::numeric_limits<double>::infinity();

/// searchline_arrival(row) + C_ML*dV / (ir_factor(row) * sum of mismatch-cell
/// currents) + t_sa_latch; +inf when `mismatches` is empty.
double row_delay(const ArrayConfig& config, std::size_t row,
                 std::span<const std::size_t> mismatches,
                 std::span<const double> cell_currents);

/// Per-row latch clock times for the configured policy.
std::vector<double> clock_threshold(const ArrayConfig& config, const ClockPolicy& policy);

/// Per-bank cell current matrices for one trial (bank index folded into the seed).
using CellCurrents = std::vector<std::vector<double>>;
CellCurrents sample_bank_currents(const ArrayConfig& config, const VariationConfig& v,
                                  std::size_t bank_count, std::size_t trial);

/// One query against every bank. A row is retrieved when its matchline has not
/// discharged by the latch clock edge (delay >= clock); HDist = 0 rows never
/// discharge and are always retrieved.
SearchOutcome search(const CamBankSet& banks, const ArrayConfig& config,
                     const BitVec& query, const ClockPolicy& policy,
                     const VariationConfig& variation, std::size_t trial);

/// Same, with precomputed currents (nullptr = nominal currents everywhere).
SearchOutcome search(const CamBankSet& banks, const ArrayConfig& config,
                     const BitVec& query, const ClockPolicy& policy,
                     const CellCurrents* currents);

}  // namespace camsim
