#pragma once

#include <cstdint>
#include <vector>

#include "testcat/dataset.hpp"

namespace testcat {

struct ContingencyTable {
    std::uint32_t attr_a = 0;
    std::uint32_t attr_b = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::int64_t> counts;  // row-major rows * cols
    std::vector<std::int64_t> row_marginals;
    std::vector<std::int64_t> col_marginals;
    std::int64_t grand_total = 0;

    std::int64_t at(std::uint32_t i, std::uint32_t j) const {
        return counts[static_cast<std::size_t>(i) * cols + j];
    }

    // builds a table from explicit counts; marginals may be zero here,
    // unlike tables built from datasets
    static ContingencyTable from_counts(const std::vector<std::vector<std::int64_t>>& m);
};

struct ResidualMatrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<double> values;

    double at(std::uint32_t i, std::uint32_t j) const {
        return values[static_cast<std::size_t>(i) * cols + j];
    }
};

struct ChiSquared {
    double statistic = 0.0;
    std::int64_t df = 0;
};

struct StrongCells {
    std::int64_t positive = 0;
    std::int64_t negative = 0;
};

ContingencyTable build_table(const CategoricalDataset& ds, std::uint32_t a, std::uint32_t b);

std::vector<double> expected_frequencies(const ContingencyTable& t);  // row-major

ChiSquared chi_squared(const ContingencyTable& t);

ResidualMatrix standardized_residuals(const ContingencyTable& t);

StrongCells count_strong_cells(const ResidualMatrix& r, double threshold = 2.0);

}  // namespace testcat
