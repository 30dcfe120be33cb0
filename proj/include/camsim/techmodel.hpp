#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace camsim {

enum class Tech { Sot, Sram, Fefet };

std::string to_string(Tech t);
Tech tech_from_string(std::string_view s);

/// All per-technology physical constants of one CAM flavor at one supply
/// point. Delays are in seconds, currents in amperes, capacitances in
/// farads, energies in picojoules.
struct TechProfile {
    std::string name;
    Tech tech = Tech::Sot;
    double v_ml = 0;            // matchline precharge level (V)
    double v_sa_threshold = 0;  // sense-amplifier trip point (V)
    double i_sat0 = 0;          // nominal per-mismatch discharge current (A)
    double c_cell = 0;          // ML capacitance per column (F)
    double c_fixed = 0;         // fixed ML load (F)
    double r_sl_row = 0;        // searchline resistance per row segment (ohm)
    double c_sl_row = 0;        // searchline capacitance per row segment (F)
    double ir_gamma = 0;        // IR-drop current degradation at farthest row
    double t_sa_latch = 0;      // sense amplifier + latch delay (s)
    double eps_intercept = 0;   // energy-per-search fit, pJ (at 128 columns)
    double eps_slope = 0;       // energy-per-search fit, pJ per row
    double vdd = 0;             // operating point tag (V)
    double delay_quantum = 0.4e-9;  // reported-delay granularity (s)

    // Calibration provenance, echoed into reports. Zero target = uncalibrated.
    double skew_target_percent = 0;
    std::size_t skew_target_hdist = 0;
    std::size_t skew_target_rows = 0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

enum class MitigationKind { Baseline, S2x, ClkMatch };

std::string to_string(MitigationKind k);
MitigationKind mitigation_from_string(std::string_view s);

struct MitigationConfig {
    MitigationKind kind = MitigationKind::Baseline;
    double s2x_skew_reduction = 1.0;   // divides searchline RC and IR skew
    double s2x_energy_overhead = 0.0;  // relative EPS increase
    double clk_match_gain = 1.0;       // 1.0 = clock skew tracks searchline skew
    double clk_match_energy_overhead = 0.0;

    static MitigationConfig baseline() { return {}; }
    /// Paper-reported defaults at 256 rows for the given technology.
    static MitigationConfig default_for(MitigationKind kind, Tech tech);

    double skew_reduction() const {
        return kind == MitigationKind::S2x ? s2x_skew_reduction : 1.0;
    }
    double energy_overhead() const {
        switch (kind) {
            case MitigationKind::S2x: return s2x_energy_overhead;
            case MitigationKind::ClkMatch: return clk_match_energy_overhead;
            default: return 0.0;
        }
    }
};

struct VariationConfig {
    double sigma_isat_rel = 0.0;  // per-cell relative 1-sigma of discharge current
    std::uint64_t seed = 1;
    std::size_t trials = 1;
};

/// Built-in profile names: sot, sram_0v5, sram_0v7, fefet.
std::vector<std::string> builtin_profile_names();
TechProfile builtin_profile(std::string_view name);

/// source is a built-in name or a path to a flat key-value profile file.
TechProfile load_profile(const std::string& source);
TechProfile parse_profile_text(const std::string& text, const std::string& origin);
std::string dump_profile(const TechProfile& p);

/// Copy of p with interconnect skew zeroed (the tables' "Ideal" column).
TechProfile make_ideal(const TechProfile& p);

/// c_fixed + c_cell * cols
double ml_capacitance(const TechProfile& p, std::size_t cols);

/// Constant-current discharge of the lumped ML capacitance:
/// C * (v_ml - v_sa_threshold) / (n * i_sat0). n = 0 never discharges (+inf).
double ideal_discharge_delay(const TechProfile& p, std::size_t cols, std::size_t n);

/// Elmore arrival of the searchline edge at `row`: 0.5 * r*c * row * (row+1),
/// divided by the S2x skew reduction when active.
double searchline_arrival(const TechProfile& p, const MitigationConfig& m,
                          std::size_t row);

/// 1 - gamma * row/(rows-1); S2x divides gamma. 1.0 when rows == 1.
double ir_current_factor(const TechProfile& p, std::size_t rows,
                         const MitigationConfig& m, std::size_t row);

/// Percentage increase in nominal ML discharge delay (arrival + discharge,
/// excluding the SA/latch constant) from row 0 to row rows-1 at a given HDist.
double skew_percent(const TechProfile& p, std::size_t rows, std::size_t cols,
                    const MitigationConfig& m, std::size_t hdist);

/// (eps_intercept + eps_slope*rows*(cols/128)) * (1 + mitigation overhead), pJ.
double energy_per_search(const TechProfile& p, std::size_t rows,
                         const MitigationConfig& m, std::size_t cols = 128);

/// Deterministic per-cell discharge currents for one Monte Carlo trial:
/// i_sat0 * max(0.05, N(1, sigma)), a pure function of (seed, trial, row, col).
/// Row-major rows x cols.
std::vector<double> sample_cell_currents(const TechProfile& p,
                                         const VariationConfig& v,
                                         std::size_t rows, std::size_t cols,
                                         std::size_t trial);

/// Counter-based deterministic N(0,1) draw; also used by the LSH encoder.
double gaussian_at(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                   std::uint64_t c);

}  // namespace camsim
