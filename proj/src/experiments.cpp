#include "camsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "camsim/error.hpp"

namespace camsim {

namespace {

// mt19937_64 output is standardized; avoid std distributions, whose streams
// are implementation-defined.
std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

// Flip `h` distinct bit positions of `base`.
BitVec flip_bits(const BitVec& base, std::size_t h, std::mt19937_64& rng) {
    BitVec v = base;
    std::vector<std::size_t> idx(base.width());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < h; ++i) {
        const std::size_t j = i + bounded(rng, idx.size() - i);
        std::swap(idx[i], idx[j]);
        v.flip(idx[i]);
    }
    return v;
}

BitVec random_bits(std::size_t width, std::mt19937_64& rng) {
    BitVec v(width);
    for (std::size_t i = 0; i < width; ++i)
        if (rng() & 1u) v.set(i);
    return v;
}

double gauss(std::mt19937_64& rng) {
    // Box-Muller on explicitly constructed uniforms, for stream stability.
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace

// ---------------------------------------------------------------------------

Workload make_random_hdist_workload(const WorkloadSpec& spec) {
    if (spec.width < 1 || spec.items < 1)
        throw ConfigError("workload: items and width must be >= 1");
    std::mt19937_64 rng(spec.seed);
    Workload w;
    w.anchor = random_bits(spec.width, rng);
    w.items.reserve(spec.items);
    for (std::size_t i = 0; i < spec.items; ++i)
        w.items.push_back(flip_bits(w.anchor, bounded(rng, spec.width), rng));
    w.queries.reserve(spec.queries);
    for (std::size_t i = 0; i < spec.queries; ++i)
        w.queries.push_back(flip_bits(w.anchor, bounded(rng, spec.query_max_flip + 1), rng));
    return w;
}

std::vector<std::size_t> brute_force_radius(const std::vector<BitVec>& items,
                                            const BitVec& query,
                                            std::size_t limit) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (hamming(items[i], query) <= limit) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------

FixedRadiusReport fixed_radius_experiment(const ArrayConfig& config,
                                          const ClockPolicy& policy,
                                          const Workload& workload,
                                          const VariationConfig& variation,
                                          std::size_t trial) {
    const CamBankSet banks = build_banks(config, workload.items);
    CellCurrents currents;
    const CellCurrents* cur = nullptr;
    if (variation.sigma_isat_rel > 0) {
        currents = sample_bank_currents(config, variation, banks.bank_count(), trial);
        cur = &currents;
    }
    FixedRadiusReport rep;
    rep.queries = workload.queries.size();
    for (const auto& q : workload.queries) {
        const SearchOutcome out = search(banks, config, q, policy, cur);
        const auto relevant = brute_force_radius(workload.items, q, policy.hdist_limit);
        const RetrievalMetrics m = retrieval_metrics(out.retrieved, relevant);
        rep.mean_precision += m.precision;
        rep.mean_recall += m.recall;
        rep.mean_f += m.f_score;
        rep.mean_pool += static_cast<double>(out.retrieved.size());
        rep.energy_pj = out.energy_pj;
        rep.latency_ns += out.latency_s * 1e9;
    }
    const double n = static_cast<double>(rep.queries);
    rep.mean_precision /= n;
    rep.mean_recall /= n;
    rep.mean_f /= n;
    rep.mean_pool /= n;
    rep.latency_ns /= n;
    return rep;
}

VariationReport variation_experiment(const ArrayConfig& config,
                                     const ClockPolicy& policy,
                                     const Workload& workload,
                                     const VariationConfig& variation) {
    if (!(variation.sigma_isat_rel > 0))
        throw ConfigError("variation_experiment: sigma_isat_rel must be > 0");
    VariationReport rep;
    rep.trials = variation.trials;
    std::vector<double> ps, rs, fs;
    for (std::size_t t = 0; t < variation.trials; ++t) {
        const FixedRadiusReport r =
            fixed_radius_experiment(config, policy, workload, variation, t);
        ps.push_back(r.mean_precision);
        rs.push_back(r.mean_recall);
        fs.push_back(r.mean_f);
        rep.mean.mean_precision += r.mean_precision;
        rep.mean.mean_recall += r.mean_recall;
        rep.mean.mean_f += r.mean_f;
        rep.mean.mean_pool += r.mean_pool;
        rep.mean.energy_pj = r.energy_pj;
        rep.mean.latency_ns += r.latency_ns;
        rep.mean.queries = r.queries;
    }
    const double n = static_cast<double>(variation.trials);
    rep.mean.mean_precision /= n;
    rep.mean.mean_recall /= n;
    rep.mean.mean_f /= n;
    rep.mean.mean_pool /= n;
    rep.mean.latency_ns /= n;
    auto stddev = [n](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double s = 0;
        for (double x : v) s += (x - mean) * (x - mean);
        return std::sqrt(s / (n - 1));
    };
    rep.std_precision = stddev(ps, rep.mean.mean_precision);
    rep.std_recall = stddev(rs, rep.mean.mean_recall);
    rep.std_f = stddev(fs, rep.mean.mean_f);
    rep.reference = fixed_radius_experiment(config, policy, workload);
    return rep;
}

// ---------------------------------------------------------------------------
// Categorical dataset search

CategoricalDataset load_categorical_csv(const std::string& path,
                                        std::size_t max_features,
                                        std::size_t bits_per_feature,
                                        std::size_t max_cardinality) {
    const CsvTable table = read_csv(path);
    CategoricalDataset ds;
    ds.schema.bits_per_feature = bits_per_feature;
    std::vector<std::size_t> selected;                    // column indices
    std::vector<std::vector<std::string>> value_order;    // per selected column
    for (std::size_t c = 0; c < table.header.size() && selected.size() < max_features; ++c) {
        std::vector<std::string> order;
        bool ok = true;
        for (const auto& row : table.rows) {
            const std::string& v = row[c];  // empty string = missing, own category
            if (std::find(order.begin(), order.end(), v) == order.end()) {
                order.push_back(v);
                if (order.size() > max_cardinality) { ok = false; break; }
            }
        }
        if (!ok || order.empty()) continue;
        selected.push_back(c);
        value_order.push_back(std::move(order));
        ds.schema.features.push_back({table.header[c], value_order.back().size()});
    }
    if (selected.size() < max_features)
        throw DataError("'" + path + "': only " + std::to_string(selected.size()) +
                        " columns with <= " + std::to_string(max_cardinality) +
                        " distinct values, need " + std::to_string(max_features));
    ds.schema.validate();
    for (const auto& row : table.rows) {
        std::vector<std::size_t> record(selected.size());
        for (std::size_t f = 0; f < selected.size(); ++f) {
            const auto& order = value_order[f];
            const auto it = std::find(order.begin(), order.end(), row[selected[f]]);
            record[f] = static_cast<std::size_t>(it - order.begin());
        }
        ds.vectors.push_back(one_hot_encode(ds.schema, record));
        ds.records.push_back(std::move(record));
    }
    return ds;
}

FixedRadiusReport dataset_search_experiment(const CategoricalDataset& dataset,
                                            const ArrayConfig& config,
                                            const ClockPolicy& policy,
                                            std::size_t query_count,
                                            std::uint64_t seed) {
    if (dataset.vectors.empty()) throw DataError("dataset_search_experiment: empty dataset");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(dataset.vectors.size());
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t n = std::min(query_count, idx.size());
    for (std::size_t i = 0; i < n; ++i)
        std::swap(idx[i], idx[i + bounded(rng, idx.size() - i)]);
    Workload w;
    w.items = dataset.vectors;
    for (std::size_t i = 0; i < n; ++i) w.queries.push_back(dataset.vectors[idx[i]]);
    return fixed_radius_experiment(config, policy, w);
}

void write_housing_like_csv(const std::string& path, std::size_t rows,
                            std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    std::mt19937_64 rng(seed);
    constexpr std::size_t kCols = 30;
    for (std::size_t c = 0; c < kCols; ++c)
        out << "Feat" << c << (c + 1 < kCols ? "," : "\n");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < kCols; ++c) {
            if (c % 3 == 2) {
                out << (1000 + rng() % 100000);  // high cardinality, skipped
            } else {
                const std::size_t card = 2 + c % 6;  // 2..7 categories
                // occasional missing value on low-cardinality columns
                if (card <= 6 && rng() % 100 < 3) { /* empty cell */ }
                else out << "v" << bounded(rng, card);
            }
            out << (c + 1 < kCols ? "," : "\n");
        }
    }
}

// ---------------------------------------------------------------------------
// Recommendation candidate generation

RecsysData synthesize_embeddings(std::size_t items, std::size_t dim,
                                 std::size_t clusters, std::size_t instances,
                                 double noise, std::uint64_t seed) {
    if (items < 2 || dim < 1 || clusters < 1)
        throw ConfigError("synthesize_embeddings: counts must be positive");
    std::mt19937_64 rng(seed);
    RecsysData data;
    data.embeddings.items = items;
    data.embeddings.dim = dim;
    data.embeddings.data.resize(items * dim);
    std::vector<double> centers(clusters * dim);
    for (auto& x : centers) x = 4.0 * gauss(rng);
    for (std::size_t i = 0; i < items; ++i) {
        const std::size_t c = i % clusters;
        for (std::size_t d = 0; d < dim; ++d)
            data.embeddings.data[i * dim + d] =
                static_cast<float>(centers[c * dim + d] + gauss(rng));
    }
    const std::size_t negatives = std::min<std::size_t>(1000, items - 1);
    for (std::size_t t = 0; t < instances; ++t) {
        RecsysInstance inst;
        inst.ground_truth = bounded(rng, items);
        std::set<std::size_t> neg;
        while (neg.size() < negatives) {
            const std::size_t id = bounded(rng, items);
            if (id != inst.ground_truth) neg.insert(id);
        }
        inst.candidates.assign(neg.begin(), neg.end());
        inst.candidates.insert(inst.candidates.begin() + bounded(rng, inst.candidates.size() + 1),
                               inst.ground_truth);
        inst.predicted.resize(dim);
        const auto gt = data.embeddings.row(inst.ground_truth);
        for (std::size_t d = 0; d < dim; ++d)
            inst.predicted[d] = static_cast<float>(gt[d] + noise * gauss(rng));
        data.instances.push_back(std::move(inst));
    }
    return data;
}

namespace {

double dot(std::span<const float> a, std::span<const float> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * double(b[i]);
    return s;
}

// Top-k ids by dot product with the predicted embedding; ties broken by
// ascending id for determinism.
std::vector<std::size_t> rank_top_k(const EmbeddingMatrix& emb,
                                    std::span<const float> predicted,
                                    const std::vector<std::size_t>& pool,
                                    std::size_t k) {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(pool.size());
    for (std::size_t id : pool) scored.emplace_back(dot(emb.row(id), predicted), id);
    const std::size_t kk = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + kk, scored.end(),
                      [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first
                                                    : a.second < b.second;
                      });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kk; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace

RecsysReport recsys_experiment(const RecsysData& data, const ArrayConfig& config,
                               const ClockPolicy& policy, std::size_t k,
                               std::uint64_t lsh_seed) {
    if (data.instances.empty()) throw DataError("recsys_experiment: no test instances");
    const EmbeddingMatrix& emb = data.embeddings;
    const LshEncoder encoder(config.cols, emb.dim, lsh_seed);
    std::vector<BitVec> codes;
    codes.reserve(emb.items);
    for (std::size_t i = 0; i < emb.items; ++i) codes.push_back(encoder.encode(emb.row(i)));

    RecsysReport rep;
    rep.k = k;
    rep.candidates_per_instance = data.instances.front().candidates.size();
    std::size_t cam_hits = 0, base_hits = 0;
    for (const auto& inst : data.instances) {
        if (inst.candidates.size() != rep.candidates_per_instance)
            throw DataError("recsys_experiment: inconsistent candidate counts");
        std::vector<BitVec> stored;
        stored.reserve(inst.candidates.size());
        for (std::size_t id : inst.candidates) {
            if (id >= emb.items)
                throw DataError("recsys_experiment: missing embedding for item " +
                                std::to_string(id));
            stored.push_back(codes[id]);
        }
        const CamBankSet banks = build_banks(config, stored);
        const BitVec query = encoder.encode(std::span<const float>(inst.predicted));
        const SearchOutcome out = search(banks, config, query, policy, nullptr);
        std::vector<std::size_t> pool;
        pool.reserve(out.retrieved.size());
        for (std::size_t local : out.retrieved) pool.push_back(inst.candidates[local]);
        std::sort(pool.begin(), pool.end());
        rep.mean_pool_size += static_cast<double>(pool.size());
        if (!std::binary_search(pool.begin(), pool.end(), inst.ground_truth))
            ++rep.ground_truth_escapes;
        const auto cam_top = rank_top_k(emb, inst.predicted, pool, k);
        if (std::find(cam_top.begin(), cam_top.end(), inst.ground_truth) != cam_top.end())
            ++cam_hits;
        std::vector<std::size_t> all = inst.candidates;
        std::sort(all.begin(), all.end());
        const auto base_top = rank_top_k(emb, inst.predicted, all, k);
        if (std::find(base_top.begin(), base_top.end(), inst.ground_truth) != base_top.end())
            ++base_hits;
    }
    const double n = static_cast<double>(data.instances.size());
    rep.mean_pool_size /= n;
    rep.cam_hr_at_k = cam_hits / n;
    rep.baseline_hr_at_k = base_hits / n;
    rep.dpr_reduction = rep.mean_pool_size > 0
                            ? static_cast<double>(rep.candidates_per_instance) / rep.mean_pool_size
                            : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Calibration

double calibrate_skew(TechProfile& p, std::size_t rows, std::size_t cols,
                      double target_percent, std::size_t hdist, SkewKnob knob) {
    if (target_percent < 0) throw ConfigError("calibrate_skew: target must be >= 0");
    if (rows < 2 || hdist < 1)
        throw ConfigError("calibrate_skew: need rows >= 2 and hdist >= 1");
    const MitigationConfig base;
    const double t_h = ideal_discharge_delay(p, cols, hdist);
    const double segments = 0.5 * static_cast<double>(rows - 1) * static_cast<double>(rows);
    double fitted = 0;
    if (knob == SkewKnob::WireRc) {
        const double ir_term = 1.0 / ir_current_factor(p, rows, base, rows - 1) - 1.0;
        const double arrival = t_h * (target_percent / 100.0 - ir_term);
        if (arrival < -1e-15)
            throw ConfigError("calibrate_skew: target below the IR-induced skew floor");
        fitted = std::max(0.0, arrival) / segments;  // r_sl * c_sl product
        if (fitted > 0 && p.r_sl_row <= 0) p.r_sl_row = 1.0;
        p.c_sl_row = p.r_sl_row > 0 ? fitted / p.r_sl_row : 0.0;
    } else {
        const double arrival = searchline_arrival(p, base, rows - 1);
        const double inv = 1.0 + target_percent / 100.0 - arrival / t_h;
        if (inv < 1.0 - 1e-12)
            throw ConfigError("calibrate_skew: target below the RC-induced skew floor");
        fitted = std::max(0.0, 1.0 - 1.0 / inv);
        if (fitted >= 1.0) throw ConfigError("calibrate_skew: implied ir_gamma >= 1");
        p.ir_gamma = fitted;
    }
    // Provenance: total measured skew after the fit (equals the target when
    // the other mechanism is zero).
    p.skew_target_percent = skew_percent(p, rows, cols, base, hdist);
    p.skew_target_hdist = hdist;
    p.skew_target_rows = rows;
    return fitted;
}

EnergyFit calibrate_energy(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ConfigError("calibrate_energy: need >= 2 points");
    std::vector<double> x, y;
    for (auto [r, e] : points) { x.push_back(r); y.push_back(e); }
    const LinearFit lf = fit_linear(x, y);
    EnergyFit fit{lf.intercept, lf.slope, 0};
    for (auto [r, e] : points) {
        const double pred = fit.intercept + fit.slope * r;
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(pred - e) / std::abs(e));
    }
    return fit;
}

double cycle_speedup(std::size_t pool, std::size_t total, std::size_t dim,
                     std::size_t cam_cycles) {
    if (pool < 1 || total < 1 || dim < 1)
        throw ConfigError("cycle_speedup: pool, total and dim must be positive");
    return static_cast<double>(total) * static_cast<double>(dim) /
           (static_cast<double>(pool) * static_cast<double>(dim) +
            static_cast<double>(cam_cycles));
}

double ranking_cycles(std::size_t pool, std::size_t k) {
    return static_cast<double>(pool) * std::log2(static_cast<double>(std::max<std::size_t>(k, 2)));
}

}  // namespace camsim
