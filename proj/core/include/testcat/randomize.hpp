#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "testcat/dataset.hpp"
#include "testcat/testcat.hpp"

namespace testcat {

struct RandomizationConfig {
    std::uint64_t seed = 0;
    double fraction = 1.0;  // partial-shuffle fraction
    std::uint32_t pool_size = 101;
    double tolerance = 0.05;
    std::uint32_t max_attempts = 1000;
    TestConfig test;
};

// per-attribute independent uniform permutations; marginals preserved exactly
CategoricalDataset generate_crds(const CategoricalDataset& ds, std::uint64_t seed,
                                 std::uint64_t replicate = 0);

// one shared row subset of size ceil(fraction * N); each attribute permutes
// the selected entries among themselves independently
CategoricalDataset partial_shuffle(const CategoricalDataset& ds, double fraction,
                                   std::uint64_t seed, std::uint64_t replicate = 0);

struct PoolStats {
    std::vector<double> pvalues;  // pool member p-values, replicate order
    double median_p = 1.0;
    double fraction_above_alpha = 0.0;  // share of pool with p > alpha
    double alpha = 0.01;
    std::uint32_t selected_replicate = 0;
    double selected_p = 1.0;
};

struct SelectionError : std::runtime_error {
    PoolStats stats;
    SelectionError(const std::string& what, PoolStats s)
        : std::runtime_error(what), stats(std::move(s)) {}
};

// pool replicates are 0 .. pool_size-1; candidates continue from pool_size
// until one lands within tolerance of the pool median p-value
std::pair<CategoricalDataset, PoolStats> representative_crds(const CategoricalDataset& ds,
                                                             const RandomizationConfig& cfg);

}  // namespace testcat
