#pragma once

#include <cstdint>
#include <vector>

#include "testcat/dataset.hpp"
#include "testcat/special_functions.hpp"

namespace testcat {

struct TestConfig {
    double alpha = 0.01;
    double strong_threshold = 2.0;
    unsigned threads = 0;  // 0 = available parallelism
};

enum class Verdict { clusterable, unclusterable };

const char* to_string(Verdict v);

struct PairTestResult {
    std::uint32_t attr_a = 0;
    std::uint32_t attr_b = 0;
    double chi2 = 0.0;
    std::int64_t df = 0;
    LogProb p_value = LogProb::one();
    std::int64_t strong_positive = 0;
    std::int64_t strong_negative = 0;
    std::int64_t cell_count = 0;  // Q_a * Q_b
};

struct TestStatistic {
    double chi2_sum = 0.0;
    std::int64_t df_sum = 0;
};

struct ClusterabilityReport {
    double chi2_sum = 0.0;
    std::int64_t df_sum = 0;
    LogProb p_value = LogProb::one();
    double alpha = 0.01;
    Verdict verdict = Verdict::unclusterable;
    std::vector<PairTestResult> pairs;  // fixed (a < b) lexicographic order
    std::int64_t strong_pairs_total = 0;
    double strong_pairs_proportion = 0.0;
    std::uint32_t n_objects = 0;
    std::uint32_t n_attributes = 0;
};

// one result per unordered attribute pair, (a < b) lexicographic order
std::vector<PairTestResult> per_pair_results(const CategoricalDataset& ds,
                                             const TestConfig& cfg = {});

TestStatistic testcat_statistic(const CategoricalDataset& ds, unsigned threads = 0);

ClusterabilityReport testcat_pvalue(const CategoricalDataset& ds, const TestConfig& cfg = {});

// linear p-values of pairs with df > 0, in pair order
std::vector<double> per_pair_pvalues(const CategoricalDataset& ds, unsigned threads = 0);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// one-sample KS against Uniform[0,1]
KsResult uniformity_test(const std::vector<double>& pvalues);

}  // namespace testcat
