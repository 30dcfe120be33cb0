// camsim: CAM similarity-search simulator CLI.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "camsim/experiments.hpp"

using json = nlohmann::json;
using namespace camsim;

namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t resolve_seed(std::uint64_t cli_seed, bool seed_set) {
    if (seed_set) return cli_seed;
    if (const char* env = std::getenv("CAMSIM_SEED")) return std::strtoull(env, nullptr, 10);
    return 42;
}

json profile_json(const TechProfile& p) {
    return {{"name", p.name},
            {"tech", to_string(p.tech)},
            {"v_ml", p.v_ml},
            {"v_sa_threshold", p.v_sa_threshold},
            {"i_sat0", p.i_sat0},
            {"c_cell", p.c_cell},
            {"c_fixed", p.c_fixed},
            {"r_sl_row", p.r_sl_row},
            {"c_sl_row", p.c_sl_row},
            {"ir_gamma", p.ir_gamma},
            {"t_sa_latch", p.t_sa_latch},
            {"eps_intercept", p.eps_intercept},
            {"eps_slope", p.eps_slope},
            {"vdd", p.vdd},
            {"delay_quantum", p.delay_quantum},
            {"calibration",
             {{"skew_target_percent", p.skew_target_percent},
              {"skew_target_hdist", p.skew_target_hdist},
              {"skew_target_rows", p.skew_target_rows}}}};
}

json mitigation_json(const MitigationConfig& m) {
    json j{{"kind", to_string(m.kind)}};
    if (m.kind == MitigationKind::S2x) {
        j["s2x_skew_reduction"] = m.s2x_skew_reduction;
        j["s2x_energy_overhead"] = m.s2x_energy_overhead;
    } else if (m.kind == MitigationKind::ClkMatch) {
        j["clk_match_gain"] = m.clk_match_gain;
        j["clk_match_energy_overhead"] = m.clk_match_energy_overhead;
    }
    return j;
}

json report_json(const FixedRadiusReport& r) {
    return {{"precision", r.mean_precision}, {"recall", r.mean_recall},
            {"f_score", r.mean_f},           {"mean_pool", r.mean_pool},
            {"eps_pj", r.energy_pj},         {"latency_ns", r.latency_ns},
            {"queries", r.queries}};
}

void emit(const json& report, const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot open '" + out_path + "' for writing");
        out << report.dump(2) << "\n";
    }
}

struct ArrayFlags {
    std::string profile = "sot";
    std::size_t rows = 256;
    std::size_t cols = 128;
    std::string mitigation = "baseline";

    void attach(CLI::App* cmd) {
        cmd->add_option("--profile", profile, "built-in profile name or profile file");
        cmd->add_option("--rows", rows, "rows per bank");
        cmd->add_option("--cols", cols, "vector width in bits");
        cmd->add_option("--mitigation", mitigation, "baseline|s2x|clkmatch");
    }

    ArrayConfig resolve() const {
        ArrayConfig c;
        c.profile = load_profile(profile);
        c.rows = rows;
        c.cols = cols;
        c.mitigation = MitigationConfig::default_for(mitigation_from_string(mitigation),
                                                     c.profile.tech);
        c.validate();
        return c;
    }
};

ClockPolicy policy_for(const ArrayConfig& config, const std::string& clock,
                       std::size_t limit, double guard) {
    ClockPolicy p;
    p.kind = clock_from_string(clock);
    if (p.kind == ClockKind::Matched && config.mitigation.kind != MitigationKind::ClkMatch)
        throw ConfigError("matched clock requires --mitigation clkmatch");
    p.hdist_limit = limit;
    p.guard = guard;
    return p;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

void print_table(const std::vector<std::string>& cols,
                 const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
    std::vector<std::size_t> w(cols.size() + 1, 0);
    for (const auto& [label, _] : rows) w[0] = std::max(w[0], label.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        w[c + 1] = cols[c].size();
        for (const auto& [_, cells] : rows) w[c + 1] = std::max(w[c + 1], cells[c].size());
    }
    auto pad = [](const std::string& s, std::size_t n) {
        return s + std::string(n - s.size() + 2, ' ');
    };
    std::cout << pad("", w[0]);
    for (std::size_t c = 0; c < cols.size(); ++c) std::cout << pad(cols[c], w[c + 1]);
    std::cout << "\n";
    for (const auto& [label, cells] : rows) {
        std::cout << pad(label, w[0]);
        for (std::size_t c = 0; c < cells.size(); ++c) std::cout << pad(cells[c], w[c + 1]);
        std::cout << "\n";
    }
}

std::string fmt(double v, int prec = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

// Table-shaped sweep over row counts and mitigations, ideal column first.
json run_sweep(const std::string& profile_name, const std::vector<std::size_t>& row_counts,
               const std::vector<std::string>& mitigations, std::size_t cols,
               std::size_t limit, const WorkloadSpec& wspec) {
    const TechProfile profile = load_profile(profile_name);
    const Workload workload = make_random_hdist_workload(wspec);

    std::vector<std::string> col_names{"Ideal"};
    std::vector<FixedRadiusReport> reports;
    {
        ArrayConfig ideal;
        ideal.profile = make_ideal(profile);
        ideal.rows = row_counts.front();
        ideal.cols = cols;
        reports.push_back(fixed_radius_experiment(
            ideal, policy_for(ideal, "ideal", limit, 0), workload));
    }
    json cells = json::array();
    for (const auto& mit : mitigations) {
        for (std::size_t rows : row_counts) {
            ArrayConfig c;
            c.profile = profile;
            c.rows = rows;
            c.cols = cols;
            c.mitigation = MitigationConfig::default_for(mitigation_from_string(mit),
                                                         profile.tech);
            const std::string clock =
                c.mitigation.kind == MitigationKind::ClkMatch ? "matched" : "fixed";
            reports.push_back(fixed_radius_experiment(
                c, policy_for(c, clock, limit, 0), workload));
            col_names.push_back(mit == "baseline" ? std::to_string(rows)
                                                  : mit + "/" + std::to_string(rows));
        }
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> table_rows{
        {"Recall Rate", {}}, {"Precision", {}}, {"F-score", {}},
        {"EPS (pJ)", {}},    {"Delay (ns)", {}}};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        table_rows[0].second.push_back(fmt(r.mean_recall));
        table_rows[1].second.push_back(fmt(r.mean_precision));
        table_rows[2].second.push_back(fmt(r.mean_f));
        table_rows[3].second.push_back(i == 0 ? "" : fmt(r.energy_pj));
        table_rows[4].second.push_back(i == 0 ? "" : fmt(r.latency_ns, 1));
        cells.push_back({{"column", col_names[i]}, {"metrics", report_json(r)}});
    }
    print_table(col_names, table_rows);
    return cells;
}

int run(int argc, char** argv) {
    CLI::App app{"CAM similarity-search simulator"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    bool seed_set = false;
    app.add_option("--seed", seed, "global RNG seed (env CAMSIM_SEED as fallback)")
        ->each([&](const std::string&) { seed_set = true; });
    std::size_t threads = 1;
    app.add_option("--threads", threads, "worker bound (current engine is sequential)");
    std::string out_path;
    app.add_option("--out", out_path, "write the JSON report here");

    // profiles
    auto* cmd_profiles = app.add_subcommand("profiles", "list or dump technology profiles");
    std::string dump_name;
    cmd_profiles->add_option("--dump", dump_name, "dump one profile as a profile file");

    // search
    auto* cmd_search = app.add_subcommand("search", "run queries against stored data");
    ArrayFlags search_flags;
    search_flags.attach(cmd_search);
    std::string data_path, query_path, clock = "fixed";
    std::size_t limit = 20;
    double guard = 0, sigma = 0;
    std::size_t trials = 1;
    cmd_search->add_option("--data", data_path, "stored vectors (packed CAMB or 0/1 CSV)")
        ->required();
    cmd_search->add_option("--queries", query_path, "query batch (0/1 CSV)")->required();
    cmd_search->add_option("--limit", limit, "HDist limit");
    cmd_search->add_option("--clock", clock, "ideal|fixed|matched");
    cmd_search->add_option("--guard", guard, "clock guard fraction");
    cmd_search->add_option("--sigma", sigma, "per-cell relative current sigma");
    cmd_search->add_option("--trials", trials, "Monte Carlo trials");

    // mdd
    auto* cmd_mdd = app.add_subcommand("mdd", "minimum detectable distance table");
    ArrayFlags mdd_flags;
    mdd_flags.attach(cmd_mdd);
    std::size_t hmax = 60;
    cmd_mdd->add_option("--hmax", hmax, "largest HDist considered");

    // curve
    auto* cmd_curve = app.add_subcommand("curve", "delay-separation curve vs 1/n(n-1)");
    std::string curve_profile = "sot";
    std::size_t curve_cols = 128, nmax = 50;
    cmd_curve->add_option("--profile", curve_profile);
    cmd_curve->add_option("--cols", curve_cols);
    cmd_curve->add_option("--nmax", nmax);

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "fixed-radius sweep over rows/mitigations");
    std::string sweep_profile = "sot", sweep_rows = "64,128,256",
                sweep_mits = "baseline,s2x,clkmatch";
    std::size_t sweep_cols = 128, sweep_limit = 20, sweep_items = 10000, sweep_queries = 50;
    cmd_sweep->add_option("--profile", sweep_profile);
    cmd_sweep->add_option("--rows", sweep_rows, "comma list of row counts");
    cmd_sweep->add_option("--mitigations", sweep_mits, "comma list");
    cmd_sweep->add_option("--cols", sweep_cols);
    cmd_sweep->add_option("--limit", sweep_limit);
    cmd_sweep->add_option("--items", sweep_items);
    cmd_sweep->add_option("--queries", sweep_queries);

    // dataset
    auto* cmd_dataset = app.add_subcommand("dataset", "categorical-dataset fixed-radius search");
    ArrayFlags ds_flags;
    ds_flags.attach(cmd_dataset);
    std::string csv_path;
    bool synthetic = false;
    std::size_t ds_limit = 8, ds_queries = 100;
    std::string ds_clock = "fixed";
    cmd_dataset->add_option("--csv", csv_path, "dataset CSV with header row");
    cmd_dataset->add_flag("--synthetic", synthetic, "generate a housing-like fixture instead");
    cmd_dataset->add_option("--limit", ds_limit);
    cmd_dataset->add_option("--queries", ds_queries);
    cmd_dataset->add_option("--clock", ds_clock, "ideal|fixed|matched");

    // recsys
    auto* cmd_recsys = app.add_subcommand("recsys", "CAM candidate generation + DPR ranking");
    ArrayFlags rs_flags;
    rs_flags.attach(cmd_recsys);
    std::string emb_path;
    std::size_t rs_items = 3000, rs_dim = 32, rs_clusters = 8, rs_instances = 500,
                rs_limit = 40, rs_k = 10;
    double rs_noise = 0.5;
    std::string rs_clock = "fixed";
    cmd_recsys->add_option("--embeddings", emb_path,
                           "embedding matrix (u32 items, u32 dim, f32 data); synthetic when absent");
    cmd_recsys->add_option("--items", rs_items);
    cmd_recsys->add_option("--dim", rs_dim);
    cmd_recsys->add_option("--clusters", rs_clusters);
    cmd_recsys->add_option("--instances", rs_instances);
    cmd_recsys->add_option("--limit", rs_limit);
    cmd_recsys->add_option("--k", rs_k);
    cmd_recsys->add_option("--noise", rs_noise);
    cmd_recsys->add_option("--clock", rs_clock);

    // calibrate
    auto* cmd_cal = app.add_subcommand("calibrate", "fit skew knobs or the EPS line");
    std::string cal_what = "skew", cal_profile = "sot", cal_knob = "rc", cal_points;
    std::size_t cal_rows = 256, cal_cols = 128, cal_hdist = 40;
    double cal_target = 50;
    cmd_cal->add_option("what", cal_what, "skew|energy");
    cmd_cal->add_option("--profile", cal_profile);
    cmd_cal->add_option("--rows", cal_rows);
    cmd_cal->add_option("--cols", cal_cols);
    cmd_cal->add_option("--hdist", cal_hdist);
    cmd_cal->add_option("--target", cal_target, "target skew percent");
    cmd_cal->add_option("--knob", cal_knob, "rc|ir");
    cmd_cal->add_option("--points", cal_points, "rows:eps comma list, e.g. 64:1.88,128:3.55");

    CLI11_PARSE(app, argc, argv);
    seed = resolve_seed(seed, seed_set);

    json report{{"schema_version", kSchemaVersion},
                {"seed", seed},
                {"meta", {{"tool", "camsim"}}}};

    if (cmd_profiles->parsed()) {
        if (!dump_name.empty()) {
            std::cout << dump_profile(load_profile(dump_name));
        } else {
            json list = json::array();
            for (const auto& n : builtin_profile_names()) {
                std::cout << n << "\n";
                list.push_back(profile_json(builtin_profile(n)));
            }
            report["results"] = list;
        }
        emit(report, out_path);
        return 0;
    }

    if (cmd_search->parsed()) {
        const ArrayConfig config = search_flags.resolve();
        const auto items = read_bits_auto(data_path);
        const auto queries = read_bits_csv(query_path);
        const ClockPolicy policy = policy_for(config, clock, limit, guard);
        VariationConfig var{sigma, seed, std::max<std::size_t>(trials, 1)};
        const CamBankSet banks = build_banks(config, items);
        json lines = json::array();
        for (std::size_t t = 0; t < var.trials; ++t) {
            for (std::size_t q = 0; q < queries.size(); ++q) {
                const SearchOutcome out = search(banks, config, queries[q], policy, var, t);
                json line{{"query", q},
                          {"trial", t},
                          {"retrieved", out.retrieved},
                          {"pool", out.retrieved.size()},
                          {"energy_pj", out.energy_pj},
                          {"latency_ns", out.latency_s * 1e9}};
                std::cout << line.dump() << "\n";
                lines.push_back(std::move(line));
            }
        }
        report["config"] = {{"profile", profile_json(config.profile)},
                            {"rows", config.rows},
                            {"cols", config.cols},
                            {"mitigation", mitigation_json(config.mitigation)},
                            {"limit", limit},
                            {"clock", clock},
                            {"sigma", sigma},
                            {"trials", var.trials}};
        report["results"] = lines;
        emit(report, out_path);
        return 0;
    }

    if (cmd_mdd->parsed()) {
        const ArrayConfig config = mdd_flags.resolve();
        json rows = json::array();
        std::cout << "h,d_min\n";
        for (std::size_t h = 1; h < hmax; ++h) {
            const auto d = mdd(config, h, hmax);
            std::cout << h << "," << (d ? std::to_string(*d) : "undefined") << "\n";
            rows.push_back({{"h", h}, {"d_min", d ? json(*d) : json(nullptr)}});
        }
        report["config"] = {{"profile", profile_json(config.profile)},
                            {"rows", config.rows},
                            {"cols", config.cols},
                            {"mitigation", mitigation_json(config.mitigation)},
                            {"hmax", hmax}};
        report["results"] = rows;
        emit(report, out_path);
        return 0;
    }

    if (cmd_curve->parsed()) {
        const TechProfile p = load_profile(curve_profile);
        const auto pts = separation_curve(p, curve_cols, nmax);
        std::vector<double> xs, ys;
        json rows = json::array();
        std::cout << "inv_n_nm1,delta_t\n";
        for (auto [x, y] : pts) {
            xs.push_back(x);
            ys.push_back(y);
            std::cout << std::setprecision(12) << x << "," << y << "\n";
            rows.push_back({{"x", x}, {"delta_t", y}});
        }
        const LinearFit fit = fit_linear(xs, ys);
        std::cout << "# slope " << fit.slope << " s, intercept " << fit.intercept
                  << " s, r_squared " << fit.r_squared << "\n";
        report["config"] = {{"profile", profile_json(p)}, {"cols", curve_cols}, {"nmax", nmax}};
        report["results"] = {{"points", rows},
                             {"slope", fit.slope},
                             {"intercept", fit.intercept},
                             {"r_squared", fit.r_squared}};
        emit(report, out_path);
        return 0;
    }

    if (cmd_sweep->parsed()) {
        std::vector<std::size_t> row_counts;
        for (const auto& tok : split_list(sweep_rows))
            row_counts.push_back(std::stoull(tok));
        if (row_counts.empty()) throw ConfigError("sweep: --rows list is empty");
        WorkloadSpec wspec;
        wspec.items = sweep_items;
        wspec.width = sweep_cols;
        wspec.queries = sweep_queries;
        wspec.seed = seed;
        report["config"] = {{"profile", profile_json(load_profile(sweep_profile))},
                            {"rows", sweep_rows},
                            {"mitigations", sweep_mits},
                            {"cols", sweep_cols},
                            {"limit", sweep_limit},
                            {"items", sweep_items},
                            {"queries", sweep_queries}};
        report["results"] = run_sweep(sweep_profile, row_counts, split_list(sweep_mits),
                                      sweep_cols, sweep_limit, wspec);
        emit(report, out_path);
        return 0;
    }

    if (cmd_dataset->parsed()) {
        if (synthetic) {
            if (csv_path.empty()) csv_path = "housing_like.csv";
            write_housing_like_csv(csv_path, 1460, seed);
        }
        if (csv_path.empty()) throw ConfigError("dataset: --csv or --synthetic required");
        const CategoricalDataset ds = load_categorical_csv(csv_path);
        ArrayConfig config = ds_flags.resolve();
        config.cols = ds.schema.width();
        if (ds_clock == "ideal") config.profile = make_ideal(config.profile);
        const ClockPolicy policy = policy_for(config, ds_clock, ds_limit, 0);
        const FixedRadiusReport r =
            dataset_search_experiment(ds, config, policy, ds_queries, seed);
        json features = json::array();
        for (const auto& f : ds.schema.features)
            features.push_back({{"name", f.name}, {"cardinality", f.cardinality}});
        print_table({"value"},
                    {{"Items", {std::to_string(ds.vectors.size())}},
                     {"Width (bits)", {std::to_string(ds.schema.width())}},
                     {"Recall Rate", {fmt(r.mean_recall)}},
                     {"Precision", {fmt(r.mean_precision)}},
                     {"F-score", {fmt(r.mean_f)}}});
        report["config"] = {{"csv", csv_path},
                            {"profile", profile_json(config.profile)},
                            {"rows", config.rows},
                            {"cols", config.cols},
                            {"limit", ds_limit},
                            {"clock", ds_clock},
                            {"queries", ds_queries},
                            {"features", features}};
        report["results"] = report_json(r);
        emit(report, out_path);
        return 0;
    }

    if (cmd_recsys->parsed()) {
        RecsysData data;
        if (emb_path.empty()) {
            data = synthesize_embeddings(rs_items, rs_dim, rs_clusters, rs_instances,
                                         rs_noise, seed);
        } else {
            data.embeddings = read_embeddings_bin(emb_path);
            data = synthesize_embeddings(data.embeddings.items, data.embeddings.dim, 1,
                                         rs_instances, rs_noise, seed);
        }
        ArrayConfig config = rs_flags.resolve();
        if (rs_clock == "ideal") config.profile = make_ideal(config.profile);
        const ClockPolicy policy = policy_for(config, rs_clock, rs_limit, 0);
        const RecsysReport r = recsys_experiment(data, config, policy, rs_k, seed);
        print_table({"value"},
                    {{"Mean pool size", {fmt(r.mean_pool_size, 1)}},
                     {"CAM HR@" + std::to_string(rs_k), {fmt(r.cam_hr_at_k, 3)}},
                     {"Baseline HR@" + std::to_string(rs_k), {fmt(r.baseline_hr_at_k, 3)}},
                     {"DPR reduction", {fmt(r.dpr_reduction, 2) + "x"}},
                     {"GT escapes", {std::to_string(r.ground_truth_escapes)}}});
        report["config"] = {{"profile", profile_json(config.profile)},
                            {"rows", config.rows},
                            {"cols", config.cols},
                            {"limit", rs_limit},
                            {"clock", rs_clock},
                            {"k", rs_k},
                            {"instances", data.instances.size()}};
        report["results"] = {{"mean_pool_size", r.mean_pool_size},
                             {"cam_hr_at_k", r.cam_hr_at_k},
                             {"baseline_hr_at_k", r.baseline_hr_at_k},
                             {"dpr_reduction", r.dpr_reduction},
                             {"ground_truth_escapes", r.ground_truth_escapes}};
        emit(report, out_path);
        return 0;
    }

    if (cmd_cal->parsed()) {
        if (cal_what == "skew") {
            TechProfile p = load_profile(cal_profile);
            const SkewKnob knob = cal_knob == "ir" ? SkewKnob::IrGamma : SkewKnob::WireRc;
            const double fitted =
                calibrate_skew(p, cal_rows, cal_cols, cal_target, cal_hdist, knob);
            std::cout << (knob == SkewKnob::IrGamma ? "ir_gamma " : "r_sl*c_sl ")
                      << std::setprecision(10) << fitted << "\n";
            std::cout << dump_profile(p);
            report["results"] = {{"knob", cal_knob},
                                 {"fitted", fitted},
                                 {"profile", profile_json(p)}};
        } else if (cal_what == "energy") {
            if (cal_points.empty()) throw ConfigError("calibrate energy: --points required");
            std::vector<std::pair<double, double>> pts;
            for (const auto& tok : split_list(cal_points)) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("calibrate energy: bad point '" + tok + "'");
                pts.emplace_back(std::stod(tok.substr(0, colon)),
                                 std::stod(tok.substr(colon + 1)));
            }
            const EnergyFit fit = calibrate_energy(pts);
            std::cout << "eps_intercept " << fit.intercept << " pJ, eps_slope " << fit.slope
                      << " pJ/row, max residual " << 100 * fit.max_rel_residual << "%\n";
            report["results"] = {{"intercept", fit.intercept},
                                 {"slope", fit.slope},
                                 {"max_rel_residual", fit.max_rel_residual}};
        } else {
            throw ConfigError("calibrate: what must be skew or energy");
        }
        emit(report, out_path);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
