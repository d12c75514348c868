#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "testcat/contingency.hpp"
#include "testcat/testcat.hpp"

using namespace testcat;

namespace {

// reverses sort order of labels on one attribute without touching the rows
CategoricalDataset relabel_attribute(const CategoricalDataset& ds, std::uint32_t attr) {
    std::vector<std::vector<std::string>> rows(ds.n_objects);
    for (std::uint32_t r = 0; r < ds.n_objects; ++r)
        for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
            std::string lab = ds.label(m, ds.at(r, m));
            if (m == attr) {
                // prefix with a reversed sort key
                std::uint32_t rank = ds.cardinality(m) - 1 - ds.at(r, m);
                lab = "z" + testhelp::pad2(rank) + "_" + lab;
            }
            rows[r].push_back(lab);
        }
    return make_dataset(ds.attribute_names, rows);
}

CategoricalDataset permute_attributes(const CategoricalDataset& ds,
                                      const std::vector<std::uint32_t>& order) {
    std::vector<std::string> names;
    for (auto m : order) names.push_back(ds.attribute_names[m]);
    std::vector<std::vector<std::string>> rows(ds.n_objects);
    for (std::uint32_t r = 0; r < ds.n_objects; ++r)
        for (auto m : order) rows[r].push_back(ds.label(m, ds.at(r, m)));
    return make_dataset(std::move(names), rows);
}

CategoricalDataset permute_rows(const CategoricalDataset& ds, std::mt19937_64& eng) {
    std::vector<std::uint32_t> order(ds.n_objects);
    for (std::uint32_t i = 0; i < ds.n_objects; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), eng);
    std::vector<std::vector<std::string>> rows;
    for (auto r : order) {
        std::vector<std::string> row;
        for (std::uint32_t m = 0; m < ds.n_attributes; ++m) row.push_back(ds.label(m, ds.at(r, m)));
        rows.push_back(std::move(row));
    }
    return make_dataset(ds.attribute_names, rows);
}

CategoricalDataset duplicate_rows(const CategoricalDataset& ds) {
    std::vector<std::vector<std::string>> rows;
    for (int pass = 0; pass < 2; ++pass)
        for (std::uint32_t r = 0; r < ds.n_objects; ++r) {
            std::vector<std::string> row;
            for (std::uint32_t m = 0; m < ds.n_attributes; ++m)
                row.push_back(ds.label(m, ds.at(r, m)));
            rows.push_back(std::move(row));
        }
    return make_dataset(ds.attribute_names, rows);
}

}  // namespace

TEST_CASE("two attribute statistic matches the pair chi-squared") {
    auto ds = testhelp::dataset_from_table({{20, 5}, {20, 55}});
    auto stat = testcat_statistic(ds);
    CHECK(stat.chi2_sum == doctest::Approx(200.0 / 9.0).epsilon(1e-12));
    CHECK(stat.df_sum == 1);

    auto report = testcat_pvalue(ds);
    CHECK(report.p_value.linear == doctest::Approx(2.428467472975843e-6).epsilon(1e-9));
    CHECK(report.verdict == Verdict::clusterable);
    CHECK(report.pairs.size() == 1);
    CHECK(report.strong_pairs_total == 4);
    CHECK(report.strong_pairs_proportion == doctest::Approx(1.0));
    CHECK(report.n_objects == 100);
    CHECK(report.n_attributes == 2);
}

TEST_CASE("statistic is the sum over unordered pairs") {
    std::mt19937_64 eng(23);
    auto ds = testhelp::random_dataset(eng, 80, {3, 4, 2});
    auto stat = testcat_statistic(ds);

    double manual_chi2 = 0.0;
    std::int64_t manual_df = 0;
    for (std::uint32_t a = 0; a < ds.n_attributes; ++a)
        for (std::uint32_t b = a + 1; b < ds.n_attributes; ++b) {
            auto c = chi_squared(build_table(ds, a, b));
            manual_chi2 += c.statistic;
            manual_df += c.df;
        }
    CHECK(stat.chi2_sum == doctest::Approx(manual_chi2).epsilon(1e-12));
    CHECK(stat.df_sum == manual_df);

    auto pairs = per_pair_results(ds);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].attr_a == 0);
    CHECK(pairs[0].attr_b == 1);
    CHECK(pairs[1].attr_a == 0);
    CHECK(pairs[1].attr_b == 2);
    CHECK(pairs[2].attr_a == 1);
    CHECK(pairs[2].attr_b == 2);
    std::int64_t cells = 0;
    for (const auto& p : pairs) cells += p.cell_count;
    CHECK(cells == 3 * 4 + 3 * 2 + 4 * 2);
}

TEST_CASE("duplicating every row doubles each pair statistic") {
    std::mt19937_64 eng(29);
    auto ds = testhelp::random_dataset(eng, 60, {3, 3, 4});
    auto base = per_pair_results(ds);
    auto doubled = per_pair_results(duplicate_rows(ds));
    REQUIRE(base.size() == doubled.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        CHECK(doubled[k].chi2 == doctest::Approx(2.0 * base[k].chi2).epsilon(1e-9));
        CHECK(doubled[k].df == base[k].df);
    }
}

TEST_CASE("report is invariant under attribute order, row order, relabeling") {
    std::mt19937_64 eng(31);
    auto ds = testhelp::random_dataset(eng, 70, {3, 4, 2, 3});
    auto base = testcat_pvalue(ds);

    auto permuted = testcat_pvalue(permute_attributes(ds, {2, 0, 3, 1}));
    CHECK(permuted.chi2_sum == doctest::Approx(base.chi2_sum).epsilon(1e-12));
    CHECK(permuted.df_sum == base.df_sum);
    CHECK(permuted.p_value.log_e == doctest::Approx(base.p_value.log_e).epsilon(1e-12));
    CHECK(permuted.strong_pairs_total == base.strong_pairs_total);
    CHECK(permuted.strong_pairs_proportion ==
          doctest::Approx(base.strong_pairs_proportion).epsilon(1e-15));

    auto shuffled = testcat_pvalue(permute_rows(ds, eng));
    CHECK(shuffled.chi2_sum == doctest::Approx(base.chi2_sum).epsilon(1e-12));
    CHECK(shuffled.df_sum == base.df_sum);
    CHECK(shuffled.strong_pairs_total == base.strong_pairs_total);

    auto relabeled = testcat_pvalue(relabel_attribute(ds, 1));
    CHECK(relabeled.chi2_sum == doctest::Approx(base.chi2_sum).epsilon(1e-12));
    CHECK(relabeled.df_sum == base.df_sum);
    CHECK(relabeled.strong_pairs_total == base.strong_pairs_total);
}

TEST_CASE("verdict follows the significance level") {
    // a moderate-association table: p sits between 0.01 and 0.05
    auto ds = testhelp::dataset_from_table({{15, 10}, {25, 50}});
    TestConfig strict;
    strict.alpha = 0.01;
    auto r1 = testcat_pvalue(ds, strict);
    CHECK(r1.p_value.linear == doctest::Approx(0.018422125454099010).epsilon(1e-9));
    CHECK(r1.verdict == Verdict::unclusterable);

    TestConfig loose;
    loose.alpha = 0.05;
    auto r2 = testcat_pvalue(ds, loose);
    CHECK(r2.verdict == Verdict::clusterable);

    // boundary: p <= alpha counts as clusterable
    TestConfig at_p;
    at_p.alpha = r1.p_value.linear;
    CHECK(testcat_pvalue(ds, at_p).verdict == Verdict::clusterable);
}

TEST_CASE("degenerate attribute sets give certainty") {
    // two constant attributes: no testable pair
    auto ds = make_dataset({"a", "b"}, {{"k", "q"}, {"k", "q"}, {"k", "q"}});
    auto report = testcat_pvalue(ds);
    CHECK(report.df_sum == 0);
    CHECK(report.p_value.linear == 1.0);
    CHECK(report.p_value.log_e == 0.0);
    CHECK(report.verdict == Verdict::unclusterable);
}

TEST_CASE("configuration is validated") {
    auto ds = testhelp::dataset_from_table({{5, 5}, {5, 5}});
    TestConfig bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(testcat_pvalue(ds, bad), std::invalid_argument);
    bad.alpha = 1.0;
    CHECK_THROWS_AS(testcat_pvalue(ds, bad), std::invalid_argument);
    TestConfig bad2;
    bad2.strong_threshold = 0.0;
    CHECK_THROWS_AS(testcat_pvalue(ds, bad2), std::invalid_argument);

    auto single = make_dataset({"only"}, {{"a"}, {"b"}});
    CHECK_THROWS_AS(testcat_pvalue(single), std::invalid_argument);
    CHECK_THROWS_AS(testcat_statistic(single), std::invalid_argument);
}

TEST_CASE("per_pair_pvalues excludes untestable pairs") {
    auto ds = make_dataset({"a", "b", "c"},
                           {{"x", "1", "k"}, {"y", "2", "k"}, {"x", "1", "k"}, {"y", "2", "k"}});
    // attribute c is constant: pairs (a,c) and (b,c) carry df 0
    auto ps = per_pair_pvalues(ds);
    REQUIRE(ps.size() == 1);
    auto all = per_pair_results(ds);
    REQUIRE(all.size() == 3);
    CHECK(all[0].df == 1);
    CHECK(all[1].df == 0);
    CHECK(all[2].df == 0);
    CHECK(ps[0] == all[0].p_value.linear);
}

TEST_CASE("thread count does not change any reported number") {
    std::mt19937_64 eng(37);
    auto ds = testhelp::random_dataset(eng, 150, {4, 3, 5, 2, 3});
    TestConfig one;
    one.threads = 1;
    TestConfig four;
    four.threads = 4;
    auto a = testcat_pvalue(ds, one);
    auto b = testcat_pvalue(ds, four);
    CHECK(a.chi2_sum == b.chi2_sum);  // bitwise equality required
    CHECK(a.df_sum == b.df_sum);
    CHECK(a.p_value.log_e == b.p_value.log_e);
    CHECK(a.strong_pairs_total == b.strong_pairs_total);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t k = 0; k < a.pairs.size(); ++k) {
        CHECK(a.pairs[k].chi2 == b.pairs[k].chi2);
        CHECK(a.pairs[k].p_value.log_e == b.pairs[k].p_value.log_e);
    }
}

TEST_CASE("uniformity statistic on fixed samples") {
    auto single = uniformity_test({0.5});
    CHECK(single.statistic == doctest::Approx(0.5).epsilon(1e-15));

    // evenly spread points k/(n+1) give D = 1/(n+1)
    std::vector<double> spread;
    const int n = 9;
    for (int k = 1; k <= n; ++k) spread.push_back(k / 10.0);
    auto r = uniformity_test(spread);
    CHECK(r.statistic == doctest::Approx(0.1).epsilon(1e-12));

    // order must not matter
    std::vector<double> reversed(spread.rbegin(), spread.rend());
    CHECK(uniformity_test(reversed).statistic == doctest::Approx(r.statistic).epsilon(1e-15));

    auto extreme = uniformity_test({1.0, 1.0, 1.0});
    CHECK(extreme.statistic == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(extreme.p_value < 0.05);

    CHECK_THROWS_AS(uniformity_test({}), std::invalid_argument);
    CHECK_THROWS_AS(uniformity_test({0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(uniformity_test({-0.1}), std::invalid_argument);
}

TEST_CASE("uniformity test accepts genuinely uniform draws") {
    std::mt19937_64 eng(41);
    std::vector<double> xs(500);
    for (auto& x : xs) x = std::ldexp(static_cast<double>(eng() >> 11), -53);
    auto r = uniformity_test(xs);
    CHECK(r.p_value > 0.01);

    // and rejects a point mass
    std::vector<double> mass(200, 0.3);
    CHECK(uniformity_test(mass).p_value < 1e-6);
}
