#include "testcat/contingency.hpp"

#include <cmath>
#include <stdexcept>

namespace testcat {

namespace {

void fill_marginals(ContingencyTable& t) {
    t.row_marginals.assign(t.rows, 0);
    t.col_marginals.assign(t.cols, 0);
    t.grand_total = 0;
    for (std::uint32_t i = 0; i < t.rows; ++i)
        for (std::uint32_t j = 0; j < t.cols; ++j) {
            std::int64_t c = t.at(i, j);
            t.row_marginals[i] += c;
            t.col_marginals[j] += c;
            t.grand_total += c;
        }
}

}  // namespace

ContingencyTable ContingencyTable::from_counts(const std::vector<std::vector<std::int64_t>>& m) {
    if (m.empty() || m[0].empty()) throw std::invalid_argument("empty contingency table");
    ContingencyTable t;
    t.rows = static_cast<std::uint32_t>(m.size());
    t.cols = static_cast<std::uint32_t>(m[0].size());
    t.counts.reserve(static_cast<std::size_t>(t.rows) * t.cols);
    for (const auto& row : m) {
        if (row.size() != t.cols) throw std::invalid_argument("ragged contingency table");
        for (std::int64_t c : row) {
            if (c < 0) throw std::invalid_argument("negative count");
            t.counts.push_back(c);
        }
    }
    fill_marginals(t);
    return t;
}

ContingencyTable build_table(const CategoricalDataset& ds, std::uint32_t a, std::uint32_t b) {
    if (a == b) throw std::invalid_argument("attribute paired with itself");
    if (a >= ds.n_attributes || b >= ds.n_attributes)
        throw std::invalid_argument("attribute index out of range");
    ContingencyTable t;
    t.attr_a = a;
    t.attr_b = b;
    t.rows = ds.cardinality(a);
    t.cols = ds.cardinality(b);
    t.counts.assign(static_cast<std::size_t>(t.rows) * t.cols, 0);
    for (std::uint32_t r = 0; r < ds.n_objects; ++r)
        ++t.counts[static_cast<std::size_t>(ds.at(r, a)) * t.cols + ds.at(r, b)];
    fill_marginals(t);
    return t;
}

std::vector<double> expected_frequencies(const ContingencyTable& t) {
    if (t.grand_total <= 0) throw std::invalid_argument("empty table");
    std::vector<double> e(static_cast<std::size_t>(t.rows) * t.cols);
    double total = static_cast<double>(t.grand_total);
    for (std::uint32_t i = 0; i < t.rows; ++i)
        for (std::uint32_t j = 0; j < t.cols; ++j)
            e[static_cast<std::size_t>(i) * t.cols + j] =
                static_cast<double>(t.row_marginals[i]) *
                static_cast<double>(t.col_marginals[j]) / total;
    return e;
}

ChiSquared chi_squared(const ContingencyTable& t) {
    if (t.rows == 1 || t.cols == 1) return {0.0, 0};
    auto e = expected_frequencies(t);
    double stat = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0.0) continue;  // empty marginal forces O = 0 as well
        double d = static_cast<double>(t.counts[k]) - e[k];
        stat += d * d / e[k];
    }
    std::int64_t df = static_cast<std::int64_t>(t.rows - 1) * (t.cols - 1);
    return {stat, df};
}

ResidualMatrix standardized_residuals(const ContingencyTable& t) {
    if (t.rows < 2 || t.cols < 2)
        throw std::invalid_argument("residuals need at least 2 categories per attribute");
    auto e = expected_frequencies(t);
    ResidualMatrix r;
    r.rows = t.rows;
    r.cols = t.cols;
    r.values.resize(e.size());
    double total = static_cast<double>(t.grand_total);
    for (std::uint32_t i = 0; i < t.rows; ++i) {
        double rf = 1.0 - static_cast<double>(t.row_marginals[i]) / total;
        for (std::uint32_t j = 0; j < t.cols; ++j) {
            double cf = 1.0 - static_cast<double>(t.col_marginals[j]) / total;
            std::size_t k = static_cast<std::size_t>(i) * t.cols + j;
            double denom = std::sqrt(e[k] * rf * cf);
            r.values[k] = denom == 0.0 ? 0.0 : (static_cast<double>(t.counts[k]) - e[k]) / denom;
        }
    }
    return r;
}

StrongCells count_strong_cells(const ResidualMatrix& r, double threshold) {
    if (threshold <= 0.0) throw std::invalid_argument("threshold must be positive");
    StrongCells s;
    for (double v : r.values) {
        if (v > threshold) ++s.positive;
        else if (v < -threshold) ++s.negative;
    }
    return s;
}

}  // namespace testcat
