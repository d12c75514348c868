#include "testcat/testcat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "testcat/contingency.hpp"

namespace testcat {

namespace {

// Neumaier variant of Kahan summation; result does not depend on how the
// additions were grouped across threads because callers add in pair order
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

std::vector<std::pair<std::uint32_t, std::uint32_t>> attribute_pairs(std::uint32_t m) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (std::uint32_t a = 0; a + 1 < m; ++a)
        for (std::uint32_t b = a + 1; b < m; ++b) pairs.emplace_back(a, b);
    return pairs;
}

PairTestResult test_pair(const CategoricalDataset& ds, std::uint32_t a, std::uint32_t b,
                         double strong_threshold) {
    auto t = build_table(ds, a, b);
    auto cs = chi_squared(t);
    PairTestResult r;
    r.attr_a = a;
    r.attr_b = b;
    r.chi2 = cs.statistic;
    r.df = cs.df;
    r.cell_count = static_cast<std::int64_t>(t.rows) * t.cols;
    if (cs.df > 0) {
        r.p_value = chi2_survival(cs.statistic, cs.df);
        auto strong = count_strong_cells(standardized_residuals(t), strong_threshold);
        r.strong_positive = strong.positive;
        r.strong_negative = strong.negative;
    }
    return r;
}

void check_config(const TestConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0, 1)");
    if (!(cfg.strong_threshold > 0.0))
        throw std::invalid_argument("strong threshold must be positive");
}

}  // namespace

const char* to_string(Verdict v) {
    return v == Verdict::clusterable ? "clusterable" : "unclusterable";
}

std::vector<PairTestResult> per_pair_results(const CategoricalDataset& ds,
                                             const TestConfig& cfg) {
    if (ds.n_attributes < 2) throw std::invalid_argument("need at least 2 attributes");
    check_config(cfg);
    auto pairs = attribute_pairs(ds.n_attributes);
    std::vector<PairTestResult> results(pairs.size());
    detail::parallel_for(pairs.size(), cfg.threads, [&](std::size_t s) {
        results[s] = test_pair(ds, pairs[s].first, pairs[s].second, cfg.strong_threshold);
    });
    return results;
}

TestStatistic testcat_statistic(const CategoricalDataset& ds, unsigned threads) {
    TestConfig cfg;
    cfg.threads = threads;
    auto results = per_pair_results(ds, cfg);
    CompensatedSum chi2;
    TestStatistic stat;
    for (const auto& r : results) {
        chi2.add(r.chi2);
        stat.df_sum += r.df;
    }
    stat.chi2_sum = chi2.value();
    return stat;
}

ClusterabilityReport testcat_pvalue(const CategoricalDataset& ds, const TestConfig& cfg) {
    ClusterabilityReport rep;
    rep.pairs = per_pair_results(ds, cfg);
    rep.alpha = cfg.alpha;
    rep.n_objects = ds.n_objects;
    rep.n_attributes = ds.n_attributes;

    CompensatedSum chi2;
    std::int64_t cells = 0;
    for (const auto& r : rep.pairs) {
        chi2.add(r.chi2);
        rep.df_sum += r.df;
        rep.strong_pairs_total += r.strong_positive + r.strong_negative;
        cells += r.cell_count;
    }
    rep.chi2_sum = chi2.value();
    rep.strong_pairs_proportion =
        cells > 0 ? static_cast<double>(rep.strong_pairs_total) / static_cast<double>(cells)
                  : 0.0;

    if (rep.df_sum == 0) {
        // no pair carries any degrees of freedom; nothing to test
        rep.p_value = LogProb::one();
        rep.verdict = Verdict::unclusterable;
    } else {
        rep.p_value = chi2_survival(rep.chi2_sum, rep.df_sum);
        rep.verdict = rep.p_value.log_e <= std::log(cfg.alpha) ? Verdict::clusterable
                                                               : Verdict::unclusterable;
    }
    return rep;
}

std::vector<double> per_pair_pvalues(const CategoricalDataset& ds, unsigned threads) {
    TestConfig cfg;
    cfg.threads = threads;
    auto results = per_pair_results(ds, cfg);
    std::vector<double> ps;
    ps.reserve(results.size());
    for (const auto& r : results)
        if (r.df > 0) ps.push_back(r.p_value.linear);
    return ps;
}

KsResult uniformity_test(const std::vector<double>& pvalues) {
    if (pvalues.empty()) throw std::invalid_argument("empty p-value list");
    for (double v : pvalues)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("p-value outside [0, 1]");
    auto x = pvalues;
    std::sort(x.begin(), x.end());
    double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double above = (static_cast<double>(i) + 1.0) / n - x[i];
        double below = x[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(above, below));
    }
    return {d, kolmogorov_ks_pvalue(d, static_cast<std::int64_t>(x.size()))};
}

}  // namespace testcat
