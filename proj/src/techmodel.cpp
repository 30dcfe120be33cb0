#include "camsim/techmodel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "camsim/error.hpp"
#include "camsim/experiments.hpp"

namespace camsim {

std::string to_string(Tech t) {
    switch (t) {
        case Tech::Sot: return "sot";
        case Tech::Sram: return "sram";
        case Tech::Fefet: return "fefet";
    }
    return "?";
}

Tech tech_from_string(std::string_view s) {
    if (s == "sot") return Tech::Sot;
    if (s == "sram") return Tech::Sram;
    if (s == "fefet") return Tech::Fefet;
    throw ConfigError("unknown technology '" + std::string(s) + "'");
}

std::string to_string(MitigationKind k) {
    switch (k) {
        case MitigationKind::Baseline: return "baseline";
        case MitigationKind::S2x: return "s2x";
        case MitigationKind::ClkMatch: return "clkmatch";
    }
    return "?";
}

MitigationKind mitigation_from_string(std::string_view s) {
    if (s == "baseline") return MitigationKind::Baseline;
    if (s == "s2x") return MitigationKind::S2x;
    if (s == "clkmatch" || s == "clk_match") return MitigationKind::ClkMatch;
    throw ConfigError("unknown mitigation '" + std::string(s) + "'");
}

MitigationConfig MitigationConfig::default_for(MitigationKind kind, Tech tech) {
    MitigationConfig m;
    m.kind = kind;
    if (kind == MitigationKind::S2x) {
        // Reported delay-variability reductions and EPS overheads at 256 rows.
        switch (tech) {
            case Tech::Sot: m.s2x_skew_reduction = 7.6; m.s2x_energy_overhead = 0.148; break;
            case Tech::Sram: m.s2x_skew_reduction = 9.5; m.s2x_energy_overhead = 0.033; break;
            case Tech::Fefet: m.s2x_skew_reduction = 8.2; m.s2x_energy_overhead = 0.254; break;
        }
    } else if (kind == MitigationKind::ClkMatch) {
        m.clk_match_gain = 1.0;
        switch (tech) {
            case Tech::Sot: m.clk_match_energy_overhead = 0.025; break;
            case Tech::Sram: m.clk_match_energy_overhead = 0.096; break;
            case Tech::Fefet: m.clk_match_energy_overhead = 0.041; break;
        }
    }
    return m;
}

void TechProfile::validate() const {
    auto fail = [&](const std::string& field, const std::string& why) {
        throw ConfigError("profile '" + name + "': " + field + " " + why);
    };
    if (!(v_sa_threshold > 0)) fail("v_sa_threshold", "must be > 0");
    if (!(v_ml > v_sa_threshold)) fail("v_ml", "must exceed v_sa_threshold");
    if (!(i_sat0 > 0)) fail("i_sat0", "must be > 0");
    if (c_cell < 0) fail("c_cell", "must be >= 0");
    if (c_fixed < 0) fail("c_fixed", "must be >= 0");
    if (r_sl_row < 0) fail("r_sl_row", "must be >= 0");
    if (c_sl_row < 0) fail("c_sl_row", "must be >= 0");
    if (ir_gamma < 0 || ir_gamma >= 1) fail("ir_gamma", "must be in [0, 1)");
    if (t_sa_latch < 0) fail("t_sa_latch", "must be >= 0");
    if (eps_slope < 0) fail("eps_slope", "must be >= 0");
    if (!(eps_intercept + eps_slope > 0)) fail("eps_intercept", "gives non-positive EPS at 1 row");
    if (!(vdd > 0)) fail("vdd", "must be > 0");
    if (!(delay_quantum > 0)) fail("delay_quantum", "must be > 0");
}

// ---------------------------------------------------------------------------
// Model laws

double ml_capacitance(const TechProfile& p, std::size_t cols) {
    if (cols < 1) throw ConfigError("ml_capacitance: cols must be >= 1");
    return p.c_fixed + p.c_cell * static_cast<double>(cols);
}

double ideal_discharge_delay(const TechProfile& p, std::size_t cols, std::size_t n) {
    if (n == 0) return std::numeric_limits<double>::infinity();
    const double dv = p.v_ml - p.v_sa_threshold;
    return ml_capacitance(p, cols) * dv / (static_cast<double>(n) * p.i_sat0);
}

double searchline_arrival(const TechProfile& p, const MitigationConfig& m,
                          std::size_t row) {
    const double r = static_cast<double>(row);
    return 0.5 * p.r_sl_row * p.c_sl_row * r * (r + 1.0) / m.skew_reduction();
}

double ir_current_factor(const TechProfile& p, std::size_t rows,
                         const MitigationConfig& m, std::size_t row) {
    if (row >= rows) throw ConfigError("ir_current_factor: row out of range");
    if (rows <= 1) return 1.0;
    const double gamma = p.ir_gamma / m.skew_reduction();
    return 1.0 - gamma * (static_cast<double>(row) / static_cast<double>(rows - 1));
}

// Nominal ML delay (arrival + discharge) without the SA/latch constant.
static double nominal_ml_delay(const TechProfile& p, std::size_t rows,
                               std::size_t cols, const MitigationConfig& m,
                               std::size_t hdist, std::size_t row) {
    return searchline_arrival(p, m, row) +
           ideal_discharge_delay(p, cols, hdist) / ir_current_factor(p, rows, m, row);
}

double skew_percent(const TechProfile& p, std::size_t rows, std::size_t cols,
                    const MitigationConfig& m, std::size_t hdist) {
    if (hdist < 1) throw ConfigError("skew_percent: hdist must be >= 1");
    if (rows < 2) throw ConfigError("skew_percent: rows must be >= 2");
    const double near = nominal_ml_delay(p, rows, cols, m, hdist, 0);
    const double far = nominal_ml_delay(p, rows, cols, m, hdist, rows - 1);
    return 100.0 * (far - near) / near;
}

double energy_per_search(const TechProfile& p, std::size_t rows,
                         const MitigationConfig& m, std::size_t cols) {
    if (rows < 1) throw ConfigError("energy_per_search: rows must be >= 1");
    const double slope = p.eps_slope * static_cast<double>(cols) / 128.0;
    const double eps = p.eps_intercept + slope * static_cast<double>(rows);
    return eps * (1.0 + m.energy_overhead());
}

// ---------------------------------------------------------------------------
// Deterministic variation sampling

static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double gaussian_at(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                   std::uint64_t c) {
    std::uint64_t h = splitmix(splitmix(splitmix(splitmix(seed) ^ a) ^ b) ^ c);
    const std::uint64_t h2 = splitmix(h + 0x632be59bd9b4e019ULL);
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 = (static_cast<double>(h >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(h2 >> 11) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> sample_cell_currents(const TechProfile& p,
                                         const VariationConfig& v,
                                         std::size_t rows, std::size_t cols,
                                         std::size_t trial) {
    if (trial >= v.trials)
        throw ConfigError("sample_cell_currents: trial " + std::to_string(trial) +
                          " >= trials " + std::to_string(v.trials));
    std::vector<double> cur(rows * cols, p.i_sat0);
    if (v.sigma_isat_rel == 0) return cur;
    constexpr double kFloor = 0.05;  // guards the 1/sum(I) division
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double g = gaussian_at(v.seed, trial, r, c);
            cur[r * cols + c] = p.i_sat0 * std::max(kFloor, 1.0 + v.sigma_isat_rel * g);
        }
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Profile files

namespace {

double parse_si_value(const std::string& token, const std::string& origin,
                      const std::string& key) {
    std::size_t pos = 0;
    double value;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw ConfigError(origin + ": key '" + key + "': bad number '" + token + "'");
    }
    if (pos < token.size()) {
        switch (token[pos]) {
            case 'a': value *= 1e-18; break;
            case 'f': value *= 1e-15; break;
            case 'p': value *= 1e-12; break;
            case 'n': value *= 1e-9; break;
            case 'u': value *= 1e-6; break;
            case 'm': value *= 1e-3; break;
            case 'k': value *= 1e3; break;
            case 'M': value *= 1e6; break;
            case 'G': value *= 1e9; break;
            default:
                throw ConfigError(origin + ": key '" + key + "': unknown unit suffix '" +
                                  token.substr(pos) + "'");
        }
    }
    return value;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

TechProfile parse_profile_text(const std::string& text, const std::string& origin) {
    TechProfile p;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto num = [&] { return parse_si_value(val, origin, key); };
        if (key == "name") p.name = val;
        else if (key == "tech") p.tech = tech_from_string(val);
        else if (key == "v_ml") p.v_ml = num();
        else if (key == "v_sa_threshold") p.v_sa_threshold = num();
        else if (key == "i_sat0") p.i_sat0 = num();
        else if (key == "c_cell") p.c_cell = num();
        else if (key == "c_fixed") p.c_fixed = num();
        else if (key == "r_sl_row") p.r_sl_row = num();
        else if (key == "c_sl_row") p.c_sl_row = num();
        else if (key == "ir_gamma") p.ir_gamma = num();
        else if (key == "t_sa_latch") p.t_sa_latch = num();
        else if (key == "eps_intercept") p.eps_intercept = num();
        else if (key == "eps_slope") p.eps_slope = num();
        else if (key == "vdd") p.vdd = num();
        else if (key == "delay_quantum") p.delay_quantum = num();
        else if (key == "skew_target_percent") p.skew_target_percent = num();
        else if (key == "skew_target_hdist") p.skew_target_hdist = static_cast<std::size_t>(num());
        else if (key == "skew_target_rows") p.skew_target_rows = static_cast<std::size_t>(num());
        else throw ConfigError(origin + ": unknown key '" + key + "'");
    }
    p.validate();
    return p;
}

std::string dump_profile(const TechProfile& p) {
    std::ostringstream out;
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << "\n";
    };
    out << "name = " << p.name << "\n";
    out << "tech = " << to_string(p.tech) << "\n";
    put("v_ml", p.v_ml);
    put("v_sa_threshold", p.v_sa_threshold);
    put("i_sat0", p.i_sat0);
    put("c_cell", p.c_cell);
    put("c_fixed", p.c_fixed);
    put("r_sl_row", p.r_sl_row);
    put("c_sl_row", p.c_sl_row);
    put("ir_gamma", p.ir_gamma);
    put("t_sa_latch", p.t_sa_latch);
    put("eps_intercept", p.eps_intercept);
    put("eps_slope", p.eps_slope);
    put("vdd", p.vdd);
    put("delay_quantum", p.delay_quantum);
    put("skew_target_percent", p.skew_target_percent);
    put("skew_target_hdist", static_cast<double>(p.skew_target_hdist));
    put("skew_target_rows", static_cast<double>(p.skew_target_rows));
    return out.str();
}

TechProfile make_ideal(const TechProfile& p) {
    TechProfile q = p;
    q.r_sl_row = 0;
    q.c_sl_row = 0;
    q.ir_gamma = 0;
    q.skew_target_percent = 0;
    return q;
}

// ---------------------------------------------------------------------------
// Built-in profiles.
//
// The physical constants are representative 7nm-class values; the published
// quantities they must reproduce are the per-row-count EPS triples (fit by
// least squares, intercept clamped to a through-origin fit when it would go
// negative) and the interconnect skew targets at 256 rows / 128 columns /
// HDist 40, which are calibration inputs, not published data.

namespace {

void fit_eps(TechProfile& p, const std::vector<std::pair<double, double>>& pts) {
    EnergyFit fit = calibrate_energy(pts);
    if (fit.intercept < 0) {
        double sxy = 0, sxx = 0;
        for (auto [x, y] : pts) { sxy += x * y; sxx += x * x; }
        fit.intercept = 0;
        fit.slope = sxy / sxx;
    }
    p.eps_intercept = fit.intercept;
    p.eps_slope = fit.slope;
}

TechProfile make_sot() {
    TechProfile p;
    p.name = "sot";
    p.tech = Tech::Sot;
    p.vdd = 0.7;
    p.v_ml = 0.7;
    p.v_sa_threshold = 0.35;
    p.i_sat0 = 2e-6;
    p.c_cell = 0.20e-15;
    p.c_fixed = 1.2e-15;
    p.t_sa_latch = 0.1e-9;
    p.r_sl_row = 25.0;
    // DC read current through the MTJ divider degrades the far-row gate drive.
    p.ir_gamma = 0.2;
    fit_eps(p, {{64, 1.88}, {128, 3.55}, {256, 7.16}});
    // Total far-row skew target 65% = 40% wire RC on top of the 25% IR ramp.
    calibrate_skew(p, 256, 128, 65.0, 40, SkewKnob::WireRc);
    return p;
}

TechProfile make_sram(double vdd, double i_sat0, const char* name, double eps_scale) {
    TechProfile p;
    p.name = name;
    p.tech = Tech::Sram;
    p.vdd = vdd;
    p.v_ml = vdd;
    p.v_sa_threshold = vdd / 2;
    p.i_sat0 = i_sat0;
    p.c_cell = 0.25e-15;
    p.c_fixed = 1.5e-15;
    p.t_sa_latch = 0.1e-9;
    p.r_sl_row = 30.0;
    fit_eps(p, {{64, 0.8 * eps_scale}, {128, 1.7 * eps_scale}, {256, 3.33 * eps_scale}});
    calibrate_skew(p, 256, 128, 85.0, 40, SkewKnob::WireRc);
    return p;
}

TechProfile make_fefet() {
    TechProfile p;
    p.name = "fefet";
    p.tech = Tech::Fefet;
    p.vdd = 0.7;
    p.v_ml = 0.7;
    p.v_sa_threshold = 0.35;
    p.i_sat0 = 3e-6;
    // Narrower cell: smallest ML capacitance of the three, but the gate
    // capacitance loads the searchline, hence the largest skew target.
    p.c_cell = 0.12e-15;
    p.c_fixed = 0.8e-15;
    p.t_sa_latch = 0.1e-9;
    p.r_sl_row = 30.0;
    fit_eps(p, {{64, 0.78}, {128, 1.66}, {256, 3.15}});
    calibrate_skew(p, 256, 128, 120.0, 40, SkewKnob::WireRc);
    return p;
}

}  // namespace

std::vector<std::string> builtin_profile_names() {
    return {"sot", "sram_0v5", "sram_0v7", "fefet"};
}

TechProfile builtin_profile(std::string_view name) {
    if (name == "sot") return make_sot();
    if (name == "sram_0v5") return make_sram(0.5, 1.5e-6, "sram_0v5", 1.0);
    // 0.7V variant: higher discharge current (worse resolution), EPS scaled
    // by the supply ratio squared. Extrapolated, not a published triple.
    if (name == "sram_0v7") return make_sram(0.7, 4e-6, "sram_0v7", 1.96);
    if (name == "fefet") return make_fefet();
    throw ConfigError("unknown built-in profile '" + std::string(name) + "'");
}

TechProfile load_profile(const std::string& source) {
    for (const auto& n : builtin_profile_names())
        if (n == source) return builtin_profile(source);
    std::ifstream in(source);
    if (!in)
        throw DataError("profile source '" + source +
                        "' is neither a built-in name nor a readable file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_profile_text(text.str(), source);
}

}  // namespace camsim
