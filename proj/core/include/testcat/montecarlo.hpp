#pragma once

#include <cstdint>
#include <vector>

#include "testcat/contingency.hpp"
#include "testcat/dataset.hpp"
#include "testcat/special_functions.hpp"

namespace testcat {

struct MonteCarloConfig {
    std::uint32_t replicates = 20000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

// permutation p-value for one table; null tables re-pair the two columns
// uniformly at random, preserving both marginals exactly
double mc_pair_pvalue(const ContingencyTable& t, const MonteCarloConfig& cfg);

// X = -2 sum(ln p) referred to chi-squared with 2S degrees of freedom
LogProb fisher_pool(const std::vector<double>& pvalues);

struct McPairResult {
    std::uint32_t attr_a = 0;
    std::uint32_t attr_b = 0;
    double chi2 = 0.0;
    double p_value = 1.0;
};

struct McReport {
    std::vector<McPairResult> pairs;  // df > 0 pairs only, (a < b) order
    LogProb pooled = LogProb::one();
    std::uint32_t replicates = 0;
    std::uint32_t n_objects = 0;
    std::uint32_t n_attributes = 0;
};

McReport mc_testcat_pvalue(const CategoricalDataset& ds, const MonteCarloConfig& cfg);

}  // namespace testcat
