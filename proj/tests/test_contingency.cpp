#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "testcat/contingency.hpp"
#include "testcat/dataset.hpp"

using namespace testcat;
using testhelp::dataset_from_table;

namespace {

// independent chi-squared for 2x2 tables: T (ad - bc)^2 / (r1 r2 c1 c2)
double chi2_2x2_closed_form(const ContingencyTable& t) {
    double det = static_cast<double>(t.at(0, 0)) * static_cast<double>(t.at(1, 1)) -
                 static_cast<double>(t.at(0, 1)) * static_cast<double>(t.at(1, 0));
    double denom = static_cast<double>(t.row_marginals[0]) *
                   static_cast<double>(t.row_marginals[1]) *
                   static_cast<double>(t.col_marginals[0]) *
                   static_cast<double>(t.col_marginals[1]);
    return static_cast<double>(t.grand_total) * det * det / denom;
}

ContingencyTable random_2x2(std::mt19937_64& eng) {
    // all cells at least 1 keeps every marginal positive
    std::vector<std::vector<std::int64_t>> m(2, std::vector<std::int64_t>(2));
    for (auto& row : m)
        for (auto& c : row) c = 1 + static_cast<std::int64_t>(eng() % 30);
    return ContingencyTable::from_counts(m);
}

ContingencyTable transpose(const ContingencyTable& t) {
    std::vector<std::vector<std::int64_t>> m(t.cols, std::vector<std::int64_t>(t.rows));
    for (std::uint32_t i = 0; i < t.rows; ++i)
        for (std::uint32_t j = 0; j < t.cols; ++j) m[j][i] = t.at(i, j);
    return ContingencyTable::from_counts(m);
}

}  // namespace

TEST_CASE("from_counts computes marginals") {
    auto t = testhelp::ds1_table();
    CHECK(t.rows == 2);
    CHECK(t.cols == 2);
    CHECK(t.grand_total == 100);
    CHECK(t.row_marginals == std::vector<std::int64_t>{25, 75});
    CHECK(t.col_marginals == std::vector<std::int64_t>{40, 60});
    CHECK(t.at(0, 0) == 20);
    CHECK(t.at(1, 1) == 55);
    CHECK_THROWS_AS(ContingencyTable::from_counts({{1, 2}, {3}}), std::invalid_argument);
    CHECK_THROWS_AS(ContingencyTable::from_counts({{1, -2}}), std::invalid_argument);
    CHECK_THROWS_AS(ContingencyTable::from_counts({}), std::invalid_argument);
}

TEST_CASE("build_table matches manual tally") {
    auto ds = make_dataset({"a", "b"}, {{"x", "1"}, {"x", "2"}, {"y", "1"}, {"x", "1"}});
    auto t = build_table(ds, 0, 1);
    CHECK(t.rows == 2);
    CHECK(t.cols == 2);
    CHECK(t.at(0, 0) == 2);  // (x, 1)
    CHECK(t.at(0, 1) == 1);  // (x, 2)
    CHECK(t.at(1, 0) == 1);  // (y, 1)
    CHECK(t.at(1, 1) == 0);
    CHECK(t.grand_total == 4);
    CHECK(t.attr_a == 0);
    CHECK(t.attr_b == 1);
    CHECK_THROWS_AS(build_table(ds, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_table(ds, 0, 2), std::invalid_argument);
}

TEST_CASE("build_table tally oracle on random data") {
    std::mt19937_64 eng(7);
    for (int rep = 0; rep < 50; ++rep) {
        auto ds = testhelp::random_dataset(eng, 10 + rep, {3, 4});
        auto t = build_table(ds, 0, 1);
        // independent enumeration
        std::vector<std::int64_t> manual(static_cast<std::size_t>(t.rows) * t.cols, 0);
        for (std::uint32_t r = 0; r < ds.n_objects; ++r)
            manual[static_cast<std::size_t>(ds.at(r, 0)) * t.cols + ds.at(r, 1)]++;
        CHECK(t.counts == manual);
        CHECK(t.grand_total == ds.n_objects);
        std::int64_t row_sum = 0, col_sum = 0;
        for (auto v : t.row_marginals) row_sum += v;
        for (auto v : t.col_marginals) col_sum += v;
        CHECK(row_sum == t.grand_total);
        CHECK(col_sum == t.grand_total);
    }
}

TEST_CASE("expected frequencies use the product rule") {
    auto e = expected_frequencies(testhelp::ds1_table());
    REQUIRE(e.size() == 4);
    CHECK(e[0] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(e[1] == doctest::Approx(15.0).epsilon(1e-14));
    CHECK(e[2] == doctest::Approx(30.0).epsilon(1e-14));
    CHECK(e[3] == doctest::Approx(45.0).epsilon(1e-14));
    // expected marginals equal observed marginals
    std::mt19937_64 eng(11);
    for (int rep = 0; rep < 20; ++rep) {
        auto ds = testhelp::random_dataset(eng, 40, {3, 5});
        auto t = build_table(ds, 0, 1);
        auto exp = expected_frequencies(t);
        for (std::uint32_t i = 0; i < t.rows; ++i) {
            double s = 0.0;
            for (std::uint32_t j = 0; j < t.cols; ++j) s += exp[i * t.cols + j];
            CHECK(s == doctest::Approx(static_cast<double>(t.row_marginals[i])).epsilon(1e-12));
        }
        for (std::uint32_t j = 0; j < t.cols; ++j) {
            double s = 0.0;
            for (std::uint32_t i = 0; i < t.rows; ++i) s += exp[i * t.cols + j];
            CHECK(s == doctest::Approx(static_cast<double>(t.col_marginals[j])).epsilon(1e-12));
        }
    }
}

TEST_CASE("worked tables give the published statistics") {
    auto c1 = chi_squared(testhelp::ds1_table());
    CHECK(c1.statistic == doctest::Approx(200.0 / 9.0).epsilon(1e-12));
    CHECK(c1.df == 1);

    auto c2 = chi_squared(testhelp::ds2_table());
    CHECK(c2.statistic == doctest::Approx(50.0 / 9.0).epsilon(1e-12));
    CHECK(c2.df == 1);

    auto c3 = chi_squared(testhelp::ds3_table());
    CHECK(c3.statistic == doctest::Approx(0.0));
    CHECK(c3.df == 1);
}

TEST_CASE("chi_squared df and degenerate shapes") {
    auto t34 = ContingencyTable::from_counts(
        {{5, 5, 5, 5}, {5, 5, 5, 5}, {5, 5, 5, 5}});
    auto c = chi_squared(t34);
    CHECK(c.df == 6);
    CHECK(c.statistic == doctest::Approx(0.0));

    // single-category attribute carries no information
    auto t1 = ContingencyTable::from_counts({{3, 4}});
    auto c1 = chi_squared(t1);
    CHECK(c1.statistic == 0.0);
    CHECK(c1.df == 0);
    auto t2 = ContingencyTable::from_counts({{3}, {4}});
    CHECK(chi_squared(t2).df == 0);
}

TEST_CASE("empty expected cells are skipped") {
    // an all-zero row contributes nothing; observed is zero there too
    auto t = ContingencyTable::from_counts({{10, 5}, {0, 0}, {5, 10}});
    auto c = chi_squared(t);
    CHECK(std::isfinite(c.statistic));
    CHECK(c.df == 2);
    auto dense = ContingencyTable::from_counts({{10, 5}, {5, 10}});
    CHECK(c.statistic == doctest::Approx(chi_squared(dense).statistic).epsilon(1e-12));
}

TEST_CASE("chi_squared agrees with the 2x2 closed form") {
    std::mt19937_64 eng(13);
    for (int rep = 0; rep < 1000; ++rep) {
        auto t = random_2x2(eng);
        CHECK(chi_squared(t).statistic ==
              doctest::Approx(chi2_2x2_closed_form(t)).epsilon(1e-9));
    }
}

TEST_CASE("chi_squared invariances") {
    std::mt19937_64 eng(17);
    for (int rep = 0; rep < 100; ++rep) {
        std::uint32_t r = 2 + eng() % 3, c = 2 + eng() % 4;
        std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(c));
        for (auto& row : m)
            for (auto& v : row) v = 1 + static_cast<std::int64_t>(eng() % 20);
        auto t = ContingencyTable::from_counts(m);
        auto base = chi_squared(t);
        CHECK(base.statistic >= 0.0);

        // transposition
        auto tt = chi_squared(transpose(t));
        CHECK(tt.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
        CHECK(tt.df == base.df);

        // row permutation
        auto perm = m;
        std::reverse(perm.begin(), perm.end());
        auto tp = chi_squared(ContingencyTable::from_counts(perm));
        CHECK(tp.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
    }
}

TEST_CASE("zero statistic exactly when observed equals expected") {
    // outer-product construction: counts r_i * c_j
    std::vector<std::int64_t> rr{2, 3, 5}, cc{1, 4};
    std::vector<std::vector<std::int64_t>> m(3, std::vector<std::int64_t>(2));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) m[i][j] = rr[i] * cc[j];
    auto c = chi_squared(ContingencyTable::from_counts(m));
    CHECK(c.statistic == doctest::Approx(0.0));
    CHECK(c.df == 2);
}

TEST_CASE("standardized residuals on the strong worked table") {
    auto r = standardized_residuals(testhelp::ds1_table());
    REQUIRE(r.rows == 2);
    REQUIRE(r.cols == 2);
    const double mag = 4.7140452079103168293;  // sqrt of the table chi-squared
    CHECK(r.at(0, 0) == doctest::Approx(mag).epsilon(1e-12));
    CHECK(r.at(0, 1) == doctest::Approx(-mag).epsilon(1e-12));
    CHECK(r.at(1, 0) == doctest::Approx(-mag).epsilon(1e-12));
    CHECK(r.at(1, 1) == doctest::Approx(mag).epsilon(1e-12));

    auto weak = standardized_residuals(testhelp::ds3_table());
    for (double v : weak.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("each squared residual equals the table chi-squared on 2x2") {
    // for 2x2 tables all four standardized residuals share one magnitude
    std::mt19937_64 eng(19);
    for (int rep = 0; rep < 1000; ++rep) {
        auto t = random_2x2(eng);
        auto chi = chi_squared(t).statistic;
        auto r = standardized_residuals(t);
        for (double v : r.values) CHECK(v * v == doctest::Approx(chi).epsilon(1e-9));
    }
}

TEST_CASE("residuals require two categories per side") {
    auto t = ContingencyTable::from_counts({{3, 4}});
    CHECK_THROWS_AS(standardized_residuals(t), std::invalid_argument);
}

TEST_CASE("degenerate residual cells fall back to zero") {
    // a zero row marginal makes the variance factor vanish
    auto t = ContingencyTable::from_counts({{5, 5}, {0, 0}});
    auto r = standardized_residuals(t);
    CHECK(r.at(1, 0) == 0.0);
    CHECK(r.at(1, 1) == 0.0);
}

TEST_CASE("strong cell counting is strict") {
    ResidualMatrix r;
    r.rows = 2;
    r.cols = 3;
    r.values = {2.0, -2.0, 1.999, 2.0000001, -2.0000001, 0.0};
    auto s = count_strong_cells(r);
    CHECK(s.positive == 1);
    CHECK(s.negative == 1);
    auto loose = count_strong_cells(r, 1.5);
    CHECK(loose.positive == 3);
    CHECK(loose.negative == 2);
    CHECK_THROWS_AS(count_strong_cells(r, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(count_strong_cells(r, -1.0), std::invalid_argument);
}

TEST_CASE("worked table strong cells") {
    auto s1 = count_strong_cells(standardized_residuals(testhelp::ds1_table()));
    CHECK(s1.positive == 2);
    CHECK(s1.negative == 2);
    auto s3 = count_strong_cells(standardized_residuals(testhelp::ds3_table()));
    CHECK(s3.positive == 0);
    CHECK(s3.negative == 0);
}
