#include "testcat/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "parallel.hpp"
#include "testcat/rng.hpp"

namespace testcat {

namespace {

std::uint64_t pair_key(const ContingencyTable& t) {
    return (static_cast<std::uint64_t>(t.attr_a) << 32) | t.attr_b;
}

}  // namespace

double mc_pair_pvalue(const ContingencyTable& t, const MonteCarloConfig& cfg) {
    if (t.rows < 2 || t.cols < 2)
        throw std::invalid_argument("monte carlo needs at least 2 categories per attribute");
    if (cfg.replicates < 1) throw std::invalid_argument("need at least one replicate");

    // expand the table back into paired value columns
    std::vector<std::uint32_t> col_a, col_b;
    col_a.reserve(t.grand_total);
    col_b.reserve(t.grand_total);
    for (std::uint32_t i = 0; i < t.rows; ++i)
        for (std::uint32_t j = 0; j < t.cols; ++j)
            for (std::int64_t c = 0; c < t.at(i, j); ++c) {
                col_a.push_back(i);
                col_b.push_back(j);
            }

    auto expected = expected_frequencies(t);
    // one shared code path so identical counts give bitwise-identical statistics
    auto chi2_of = [&](const std::vector<std::int64_t>& counts) {
        double stat = 0.0;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (expected[k] == 0.0) continue;
            double d = static_cast<double>(counts[k]) - expected[k];
            stat += d * d / expected[k];
        }
        return stat;
    };
    double observed = chi2_of(t.counts);

    std::uint64_t key = pair_key(t);
    unsigned n_threads = detail::resolve_threads(cfg.threads, cfg.replicates);
    std::vector<std::int64_t> exceed(n_threads, 0);
    auto run_range = [&](unsigned worker, std::uint32_t lo, std::uint32_t hi) {
        std::vector<std::uint32_t> shuffled(col_b.size());
        std::vector<std::int64_t> counts(expected.size());
        std::int64_t local = 0;
        for (std::uint32_t r = lo; r < hi; ++r) {
            shuffled = col_b;
            auto eng = rng::engine_for(cfg.seed, rng::kTagMonteCarlo, key, r);
            rng::shuffle(shuffled, eng);
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t o = 0; o < col_a.size(); ++o)
                ++counts[static_cast<std::size_t>(col_a[o]) * t.cols + shuffled[o]];
            if (chi2_of(counts) >= observed) ++local;
        }
        exceed[worker] = local;
    };

    if (n_threads <= 1) {
        run_range(0, 0, cfg.replicates);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        std::uint32_t base = cfg.replicates / n_threads;
        std::uint32_t extra = cfg.replicates % n_threads;
        std::uint32_t lo = 0;
        for (unsigned w = 0; w < n_threads; ++w) {
            std::uint32_t hi = lo + base + (w < extra ? 1 : 0);
            pool.emplace_back(run_range, w, lo, hi);
            lo = hi;
        }
        for (auto& th : pool) th.join();
    }

    std::int64_t total = 0;
    for (std::int64_t e : exceed) total += e;
    return (1.0 + static_cast<double>(total)) / (1.0 + static_cast<double>(cfg.replicates));
}

LogProb fisher_pool(const std::vector<double>& pvalues) {
    if (pvalues.empty()) throw std::invalid_argument("empty p-value list");
    double log_sum = 0.0;
    for (double p : pvalues) {
        if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p-values must lie in (0, 1]");
        log_sum += std::log(p);
    }
    double x = -2.0 * log_sum;
    return chi2_survival(x, 2 * static_cast<std::int64_t>(pvalues.size()));
}

McReport mc_testcat_pvalue(const CategoricalDataset& ds, const MonteCarloConfig& cfg) {
    if (ds.n_attributes < 2) throw std::invalid_argument("need at least 2 attributes");
    McReport rep;
    rep.replicates = cfg.replicates;
    rep.n_objects = ds.n_objects;
    rep.n_attributes = ds.n_attributes;

    std::vector<double> ps;
    for (std::uint32_t a = 0; a + 1 < ds.n_attributes; ++a)
        for (std::uint32_t b = a + 1; b < ds.n_attributes; ++b) {
            auto t = build_table(ds, a, b);
            if (chi_squared(t).df == 0) continue;  // single-category attribute
            McPairResult r;
            r.attr_a = a;
            r.attr_b = b;
            r.chi2 = chi_squared(t).statistic;
            r.p_value = mc_pair_pvalue(t, cfg);
            ps.push_back(r.p_value);
            rep.pairs.push_back(r);
        }
    // no testable pair mirrors the df_sum = 0 convention
    rep.pooled = ps.empty() ? LogProb::one() : fisher_pool(ps);
    return rep;
}

}  // namespace testcat
