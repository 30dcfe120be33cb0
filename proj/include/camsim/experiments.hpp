#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "camsim/camarray.hpp"
#include "camsim/encode.hpp"
#include "camsim/io.hpp"
#include "camsim/metrics.hpp"

namespace camsim {

// ---------------------------------------------------------------------------
// Synthetic fixed-radius workloads

struct WorkloadSpec {
    std::size_t items = 10000;
    std::size_t width = 128;
    std::size_t queries = 50;
    std::size_t query_max_flip = 32;  // query HDist from anchor drawn U[0, this]
    std::uint64_t seed = 42;
};

struct Workload {
    BitVec anchor;
    std::vector<BitVec> items;
    std::vector<BitVec> queries;
};

/// Items are the anchor with h bits flipped, h uniform over [0, width-1].
Workload make_random_hdist_workload(const WorkloadSpec& spec);

std::vector<std::size_t> brute_force_radius(const std::vector<BitVec>& items,
                                            const BitVec& query,
                                            std::size_t limit);

// ---------------------------------------------------------------------------
// Fixed-radius and variation experiments

struct FixedRadiusReport {
    double mean_precision = 0;  // percent
    double mean_recall = 0;     // percent
    double mean_f = 0;
    double mean_pool = 0;       // mean retrieved-set size
    double energy_pj = 0;
    double latency_ns = 0;
    std::size_t queries = 0;
};

FixedRadiusReport fixed_radius_experiment(const ArrayConfig& config,
                                          const ClockPolicy& policy,
                                          const Workload& workload,
                                          const VariationConfig& variation = {},
                                          std::size_t trial = 0);

struct VariationReport {
    FixedRadiusReport mean;
    double std_precision = 0;
    double std_recall = 0;
    double std_f = 0;
    FixedRadiusReport reference;  // variation-free
    std::size_t trials = 0;
};

VariationReport variation_experiment(const ArrayConfig& config,
                                     const ClockPolicy& policy,
                                     const Workload& workload,
                                     const VariationConfig& variation);

// ---------------------------------------------------------------------------
// Categorical dataset search

struct CategoricalDataset {
    CategoricalSchema schema;
    std::vector<BitVec> vectors;
    std::vector<std::vector<std::size_t>> records;
};

/// Scans the CSV, keeps the first `max_features` columns with at most
/// `max_cardinality` distinct values (missing/empty counts as a category),
/// and one-hot encodes every row.
CategoricalDataset load_categorical_csv(const std::string& path,
                                        std::size_t max_features = 16,
                                        std::size_t bits_per_feature = 8,
                                        std::size_t max_cardinality = 7);

/// Runs fixed-radius search with `query_count` stored items (seeded, uniform)
/// as queries.
FixedRadiusReport dataset_search_experiment(const CategoricalDataset& dataset,
                                            const ArrayConfig& config,
                                            const ClockPolicy& policy,
                                            std::size_t query_count,
                                            std::uint64_t seed);

/// Housing-style CSV fixture: 1460 rows, a mix of low-cardinality categorical
/// columns (>= 16 of them), high-cardinality columns and missing values.
void write_housing_like_csv(const std::string& path, std::size_t rows = 1460,
                            std::uint64_t seed = 7);

// ---------------------------------------------------------------------------
// Recommendation candidate generation

struct RecsysInstance {
    std::size_t ground_truth = 0;
    std::vector<std::size_t> candidates;  // 1001 ids including ground truth
    std::vector<float> predicted;
};

struct RecsysData {
    EmbeddingMatrix embeddings;
    std::vector<RecsysInstance> instances;
};

/// Clustered Gaussian embeddings; each instance's predicted embedding is a
/// noisy copy of its ground-truth item embedding, negatives sampled uniformly.
RecsysData synthesize_embeddings(std::size_t items, std::size_t dim,
                                 std::size_t clusters, std::size_t instances,
                                 double noise, std::uint64_t seed);

struct RecsysReport {
    double mean_pool_size = 0;
    double cam_hr_at_k = 0;
    double baseline_hr_at_k = 0;
    double dpr_reduction = 0;  // candidates / mean_pool_size
    std::size_t ground_truth_escapes = 0;
    std::size_t k = 0;
    std::size_t candidates_per_instance = 0;
};

/// Per instance: LSH-encode the candidates into banks, retrieve a pool with
/// the encoded predicted embedding, rank the pool by exact dot product and
/// take top-k. Baseline ranks all candidates.
RecsysReport recsys_experiment(const RecsysData& data, const ArrayConfig& config,
                               const ClockPolicy& policy, std::size_t k,
                               std::uint64_t lsh_seed);

// ---------------------------------------------------------------------------
// Calibration and the cycle-count model

enum class SkewKnob { WireRc, IrGamma };

/// Fits the chosen skew knob so skew_percent(rows, cols, baseline, hdist)
/// equals target_percent; mutates the profile and records provenance.
/// Returns the fitted r_sl*c_sl product or ir_gamma.
double calibrate_skew(TechProfile& p, std::size_t rows, std::size_t cols,
                      double target_percent, std::size_t hdist, SkewKnob knob);

struct EnergyFit {
    double intercept = 0;  // pJ
    double slope = 0;      // pJ per row
    double max_rel_residual = 0;
};

/// Ordinary least squares over (rows, eps_pj) points.
EnergyFit calibrate_energy(const std::vector<std::pair<double, double>>& points);

/// (total*dim) / (pool*dim + cam_cycles) under the one-MAC-per-cycle model.
double cycle_speedup(std::size_t pool, std::size_t total, std::size_t dim,
                     std::size_t cam_cycles);

/// O(n log2 k) comparison count for ranking the pool, reported separately.
double ranking_cycles(std::size_t pool, std::size_t k);

}  // namespace camsim
