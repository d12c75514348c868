#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "testcat/dataset.hpp"
#include "testcat/montecarlo.hpp"
#include "testcat/randomize.hpp"
#include "testcat/testcat.hpp"

namespace testcat {

struct ValidationOutcome {
    std::string dataset_name;
    LogProb ods_pvalue = LogProb::one();
    Verdict ods_verdict = Verdict::unclusterable;
    LogProb crds_pvalue = LogProb::one();
    Verdict crds_verdict = Verdict::unclusterable;
    bool correctly_identified_ods = false;   // original data judged clusterable
    bool correctly_identified_crds = false;  // randomized data judged unclusterable
    PoolStats pool;
};

ValidationOutcome validate_dataset(const CategoricalDataset& ds, const std::string& name,
                                   const RandomizationConfig& cfg);

struct PvaluePool {
    std::vector<double> pvalues;             // one per pool member, replicate order
    std::vector<double> strong_proportions;  // strong-cell proportion per member
    double median_p = 1.0;
    double min_p = 1.0;
    double max_p = 1.0;
    double fraction_above_alpha = 0.0;
    double alpha = 0.01;
};

PvaluePool pvalue_pool(const CategoricalDataset& ds, std::uint32_t n, std::uint64_t seed,
                       const TestConfig& test = {});

struct RobustnessCurve {
    std::vector<double> fractions;
    std::vector<double> clusterable_proportion;
    std::vector<std::uint32_t> clusterable_count;  // exact counts keep tolerances auditable
    std::uint32_t repeats = 0;
    double alpha = 0.01;
};

std::vector<double> default_fraction_grid();

RobustnessCurve robustness_curve(const CategoricalDataset& ds,
                                 const std::vector<double>& fractions, std::uint32_t repeats,
                                 std::uint64_t seed, const TestConfig& test = {});

enum class ReportFormat { json, csv };

// ingestion choices change N and the dictionaries, so reports carry them
struct ReportMeta {
    std::string input;
    std::vector<std::string> attribute_names;
    std::string missing_policy;
    std::vector<std::string> dropped_columns;
    std::string delimiter = ",";
    bool header = true;
};

std::string emit_report(const ClusterabilityReport& r, ReportFormat f, const ReportMeta& m = {});
std::string emit_report(const McReport& r, ReportFormat f, const ReportMeta& m = {});
std::string emit_report(const ValidationOutcome& r, ReportFormat f, const ReportMeta& m = {});
std::string emit_report(const PvaluePool& r, ReportFormat f, const ReportMeta& m = {});
std::string emit_report(const RobustnessCurve& r, ReportFormat f, const ReportMeta& m = {});

}  // namespace testcat
