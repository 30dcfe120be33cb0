#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "camsim/error.hpp"
#include "camsim/experiments.hpp"

namespace py = pybind11;
using namespace camsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "CAM similarity-search simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);

    py::class_<BitVec>(m, "BitVec")
        .def(py::init<std::size_t>(), py::arg("width") = 0)
        .def_static("from_string", &BitVec::from_string)
        .def("to_string", &BitVec::to_string)
        .def("width", &BitVec::width)
        .def("popcount", &BitVec::popcount)
        .def("test", &BitVec::test)
        .def("set", &BitVec::set)
        .def("flip", &BitVec::flip)
        .def("__eq__", [](const BitVec& a, const BitVec& b) { return a == b; })
        .def("__repr__", [](const BitVec& v) { return "BitVec('" + v.to_string() + "')"; });
    m.def("hamming", [](const BitVec& a, const BitVec& b) { return hamming(a, b); });

    py::enum_<Tech>(m, "Tech")
        .value("SOT", Tech::Sot)
        .value("SRAM", Tech::Sram)
        .value("FEFET", Tech::Fefet);

    py::class_<TechProfile>(m, "TechProfile")
        .def(py::init<>())
        .def_readwrite("name", &TechProfile::name)
        .def_readwrite("tech", &TechProfile::tech)
        .def_readwrite("v_ml", &TechProfile::v_ml)
        .def_readwrite("v_sa_threshold", &TechProfile::v_sa_threshold)
        .def_readwrite("i_sat0", &TechProfile::i_sat0)
        .def_readwrite("c_cell", &TechProfile::c_cell)
        .def_readwrite("c_fixed", &TechProfile::c_fixed)
        .def_readwrite("r_sl_row", &TechProfile::r_sl_row)
        .def_readwrite("c_sl_row", &TechProfile::c_sl_row)
        .def_readwrite("ir_gamma", &TechProfile::ir_gamma)
        .def_readwrite("t_sa_latch", &TechProfile::t_sa_latch)
        .def_readwrite("eps_intercept", &TechProfile::eps_intercept)
        .def_readwrite("eps_slope", &TechProfile::eps_slope)
        .def_readwrite("vdd", &TechProfile::vdd)
        .def_readwrite("delay_quantum", &TechProfile::delay_quantum)
        .def("validate", &TechProfile::validate);

    m.def("builtin_profile_names", &builtin_profile_names);
    m.def("builtin_profile", [](const std::string& n) { return builtin_profile(n); });
    m.def("load_profile", &load_profile);
    m.def("parse_profile_text", &parse_profile_text);
    m.def("dump_profile", &dump_profile);
    m.def("make_ideal", &make_ideal);

    py::enum_<MitigationKind>(m, "MitigationKind")
        .value("BASELINE", MitigationKind::Baseline)
        .value("S2X", MitigationKind::S2x)
        .value("CLK_MATCH", MitigationKind::ClkMatch);

    py::class_<MitigationConfig>(m, "MitigationConfig")
        .def(py::init<>())
        .def_static("baseline", &MitigationConfig::baseline)
        .def_static("default_for", &MitigationConfig::default_for)
        .def_readwrite("kind", &MitigationConfig::kind)
        .def_readwrite("s2x_skew_reduction", &MitigationConfig::s2x_skew_reduction)
        .def_readwrite("s2x_energy_overhead", &MitigationConfig::s2x_energy_overhead)
        .def_readwrite("clk_match_gain", &MitigationConfig::clk_match_gain)
        .def("skew_reduction", &MitigationConfig::skew_reduction)
        .def("energy_overhead", &MitigationConfig::energy_overhead);

    py::class_<VariationConfig>(m, "VariationConfig")
        .def(py::init([](double sigma, std::uint64_t seed, std::size_t trials) {
                 return VariationConfig{sigma, seed, trials};
             }),
             py::arg("sigma_isat_rel") = 0.0, py::arg("seed") = 1, py::arg("trials") = 1)
        .def_readwrite("sigma_isat_rel", &VariationConfig::sigma_isat_rel)
        .def_readwrite("seed", &VariationConfig::seed)
        .def_readwrite("trials", &VariationConfig::trials);

    m.def("ml_capacitance", &ml_capacitance);
    m.def("ideal_discharge_delay", &ideal_discharge_delay);
    m.def("searchline_arrival", &searchline_arrival);
    m.def("ir_current_factor", &ir_current_factor);
    m.def("skew_percent", &skew_percent);
    m.def("energy_per_search", &energy_per_search, py::arg("profile"), py::arg("rows"),
          py::arg("mitigation"), py::arg("cols") = 128);

    py::class_<ArrayConfig>(m, "ArrayConfig")
        .def(py::init<>())
        .def_readwrite("rows", &ArrayConfig::rows)
        .def_readwrite("cols", &ArrayConfig::cols)
        .def_readwrite("profile", &ArrayConfig::profile)
        .def_readwrite("mitigation", &ArrayConfig::mitigation)
        .def("validate", &ArrayConfig::validate);

    py::enum_<ClockKind>(m, "ClockKind")
        .value("IDEAL", ClockKind::Ideal)
        .value("FIXED", ClockKind::Fixed)
        .value("MATCHED", ClockKind::Matched);

    py::class_<ClockPolicy>(m, "ClockPolicy")
        .def(py::init([](ClockKind kind, std::size_t limit, double guard) {
                 return ClockPolicy{kind, limit, guard};
             }),
             py::arg("kind") = ClockKind::Fixed, py::arg("hdist_limit") = 0,
             py::arg("guard") = 0.0)
        .def_readwrite("kind", &ClockPolicy::kind)
        .def_readwrite("hdist_limit", &ClockPolicy::hdist_limit)
        .def_readwrite("guard", &ClockPolicy::guard);

    py::class_<CamBankSet>(m, "CamBankSet")
        .def_readonly("rows", &CamBankSet::rows)
        .def_readonly("cols", &CamBankSet::cols)
        .def_readonly("items", &CamBankSet::items)
        .def("bank_count", &CamBankSet::bank_count)
        .def("bank_rows", &CamBankSet::bank_rows)
        .def("global_id", &CamBankSet::global_id);

    py::class_<SearchOutcome>(m, "SearchOutcome")
        .def_readonly("delays", &SearchOutcome::delays)
        .def_readonly("retrieved", &SearchOutcome::retrieved)
        .def_readonly("energy_pj", &SearchOutcome::energy_pj)
        .def_readonly("latency_s", &SearchOutcome::latency_s)
        .def_readonly("clock_times", &SearchOutcome::clock_times);

    m.def("build_banks", &build_banks);
    m.def("clock_threshold", &clock_threshold);
    m.def(
        "search",
        [](const CamBankSet& banks, const ArrayConfig& config, const BitVec& query,
           const ClockPolicy& policy) { return search(banks, config, query, policy, nullptr); },
        py::arg("banks"), py::arg("config"), py::arg("query"), py::arg("policy"));
    m.def(
        "search_with_variation",
        [](const CamBankSet& banks, const ArrayConfig& config, const BitVec& query,
           const ClockPolicy& policy, const VariationConfig& variation, std::size_t trial) {
            return search(banks, config, query, policy, variation, trial);
        },
        py::arg("banks"), py::arg("config"), py::arg("query"), py::arg("policy"),
        py::arg("variation"), py::arg("trial") = 0);

    py::class_<RetrievalMetrics>(m, "RetrievalMetrics")
        .def_readonly("precision", &RetrievalMetrics::precision)
        .def_readonly("recall", &RetrievalMetrics::recall)
        .def_readonly("f_score", &RetrievalMetrics::f_score)
        .def_readonly("true_positives", &RetrievalMetrics::true_positives)
        .def_readonly("false_positives", &RetrievalMetrics::false_positives)
        .def_readonly("false_negatives", &RetrievalMetrics::false_negatives);

    m.def("retrieval_metrics",
          [](std::vector<std::size_t> retrieved, std::vector<std::size_t> relevant) {
              return retrieval_metrics(retrieved, relevant);
          });
    m.def("mdd", &mdd);
    m.def("separation_curve", &separation_curve);

    py::class_<LshEncoder>(m, "LshEncoder")
        .def(py::init<std::size_t, std::size_t, std::uint64_t>(), py::arg("bits"),
             py::arg("dim"), py::arg("seed"))
        .def("bits", &LshEncoder::bits)
        .def("dim", &LshEncoder::dim)
        .def("encode", [](const LshEncoder& e, const std::vector<double>& v) {
            return e.encode(std::span<const double>(v));
        });

    py::class_<CategoricalSchema::Feature>(m, "Feature")
        .def_readonly("name", &CategoricalSchema::Feature::name)
        .def_readonly("cardinality", &CategoricalSchema::Feature::cardinality);
    py::class_<CategoricalSchema>(m, "CategoricalSchema")
        .def_readonly("features", &CategoricalSchema::features)
        .def_readonly("bits_per_feature", &CategoricalSchema::bits_per_feature)
        .def("width", &CategoricalSchema::width);
    m.def("one_hot_encode", [](const CategoricalSchema& s, const std::vector<std::size_t>& r) {
        return one_hot_encode(s, r);
    });

    py::class_<WorkloadSpec>(m, "WorkloadSpec")
        .def(py::init<>())
        .def_readwrite("items", &WorkloadSpec::items)
        .def_readwrite("width", &WorkloadSpec::width)
        .def_readwrite("queries", &WorkloadSpec::queries)
        .def_readwrite("query_max_flip", &WorkloadSpec::query_max_flip)
        .def_readwrite("seed", &WorkloadSpec::seed);
    py::class_<Workload>(m, "Workload")
        .def_readonly("anchor", &Workload::anchor)
        .def_readonly("items", &Workload::items)
        .def_readonly("queries", &Workload::queries);
    m.def("make_random_hdist_workload", &make_random_hdist_workload);
    m.def("brute_force_radius", &brute_force_radius);

    py::class_<FixedRadiusReport>(m, "FixedRadiusReport")
        .def_readonly("mean_precision", &FixedRadiusReport::mean_precision)
        .def_readonly("mean_recall", &FixedRadiusReport::mean_recall)
        .def_readonly("mean_f", &FixedRadiusReport::mean_f)
        .def_readonly("mean_pool", &FixedRadiusReport::mean_pool)
        .def_readonly("energy_pj", &FixedRadiusReport::energy_pj)
        .def_readonly("latency_ns", &FixedRadiusReport::latency_ns)
        .def_readonly("queries", &FixedRadiusReport::queries);
    m.def("fixed_radius_experiment", &fixed_radius_experiment, py::arg("config"),
          py::arg("policy"), py::arg("workload"), py::arg("variation") = VariationConfig{},
          py::arg("trial") = 0);

    py::class_<VariationReport>(m, "VariationReport")
        .def_readonly("mean", &VariationReport::mean)
        .def_readonly("std_precision", &VariationReport::std_precision)
        .def_readonly("std_recall", &VariationReport::std_recall)
        .def_readonly("std_f", &VariationReport::std_f)
        .def_readonly("reference", &VariationReport::reference)
        .def_readonly("trials", &VariationReport::trials);
    m.def("variation_experiment", &variation_experiment);

    py::class_<CategoricalDataset>(m, "CategoricalDataset")
        .def_readonly("schema", &CategoricalDataset::schema)
        .def_readonly("vectors", &CategoricalDataset::vectors)
        .def_readonly("records", &CategoricalDataset::records);
    m.def("load_categorical_csv", &load_categorical_csv, py::arg("path"),
          py::arg("max_features") = 16, py::arg("bits_per_feature") = 8,
          py::arg("max_cardinality") = 7);
    m.def("dataset_search_experiment", &dataset_search_experiment);
    m.def("write_housing_like_csv", &write_housing_like_csv, py::arg("path"),
          py::arg("rows") = 1460, py::arg("seed") = 7);

    py::class_<RecsysReport>(m, "RecsysReport")
        .def_readonly("mean_pool_size", &RecsysReport::mean_pool_size)
        .def_readonly("cam_hr_at_k", &RecsysReport::cam_hr_at_k)
        .def_readonly("baseline_hr_at_k", &RecsysReport::baseline_hr_at_k)
        .def_readonly("dpr_reduction", &RecsysReport::dpr_reduction)
        .def_readonly("ground_truth_escapes", &RecsysReport::ground_truth_escapes)
        .def_readonly("k", &RecsysReport::k)
        .def_readonly("candidates_per_instance", &RecsysReport::candidates_per_instance);
    py::class_<RecsysData>(m, "RecsysData");
    m.def("synthesize_embeddings", &synthesize_embeddings);
    m.def("recsys_experiment", &recsys_experiment);

    py::enum_<SkewKnob>(m, "SkewKnob")
        .value("WIRE_RC", SkewKnob::WireRc)
        .value("IR_GAMMA", SkewKnob::IrGamma);
    m.def("calibrate_skew", &calibrate_skew);

    py::class_<EnergyFit>(m, "EnergyFit")
        .def_readonly("intercept", &EnergyFit::intercept)
        .def_readonly("slope", &EnergyFit::slope)
        .def_readonly("max_rel_residual", &EnergyFit::max_rel_residual);
    m.def("calibrate_energy", &calibrate_energy);
    m.def("cycle_speedup", &cycle_speedup);
    m.def("ranking_cycles", &ranking_cycles);
}
