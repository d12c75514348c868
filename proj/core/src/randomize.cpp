#include "testcat/randomize.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "testcat/rng.hpp"

namespace testcat {

CategoricalDataset generate_crds(const CategoricalDataset& ds, std::uint64_t seed,
                                 std::uint64_t replicate) {
    CategoricalDataset out = ds;
    std::uint32_t n = ds.n_objects;
    for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
        auto eng = rng::engine_for(seed, rng::kTagCrds, replicate, m);
        auto perm = rng::permutation(n, eng);
        for (std::uint32_t r = 0; r < n; ++r)
            out.cells[static_cast<std::size_t>(r) * ds.n_attributes + m] = ds.at(perm[r], m);
    }
    return out;
}

CategoricalDataset partial_shuffle(const CategoricalDataset& ds, double fraction,
                                   std::uint64_t seed, std::uint64_t replicate) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must be in [0, 1]");
    std::uint32_t n = ds.n_objects;
    // small backoff so fraction * n landing exactly on an integer stays put
    auto k = static_cast<std::uint32_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    if (k >= n) return generate_crds(ds, seed, replicate);
    if (k <= 1) return ds;  // permuting one entry is the identity

    auto row_eng = rng::engine_for(seed, rng::kTagPartialRows, replicate, 0);
    auto rows = rng::sample_without_replacement(n, k, row_eng);

    CategoricalDataset out = ds;
    for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
        auto eng = rng::engine_for(seed, rng::kTagPartialPerm, replicate, m);
        auto perm = rng::permutation(k, eng);
        for (std::uint32_t i = 0; i < k; ++i)
            out.cells[static_cast<std::size_t>(rows[i]) * ds.n_attributes + m] =
                ds.at(rows[perm[i]], m);
    }
    return out;
}

std::pair<CategoricalDataset, PoolStats> representative_crds(const CategoricalDataset& ds,
                                                             const RandomizationConfig& cfg) {
    if (cfg.pool_size < 1) throw std::invalid_argument("pool size must be at least 1");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

    PoolStats stats;
    stats.alpha = cfg.test.alpha;
    stats.pvalues.resize(cfg.pool_size);
    detail::parallel_for(cfg.pool_size, cfg.test.threads, [&](std::size_t rep) {
        auto crds = generate_crds(ds, cfg.seed, rep);
        TestConfig tc = cfg.test;
        tc.threads = 1;  // parallelism lives at the pool level
        stats.pvalues[rep] = testcat_pvalue(crds, tc).p_value.linear;
    });

    auto sorted = stats.pvalues;
    std::sort(sorted.begin(), sorted.end());
    std::size_t half = sorted.size() / 2;
    stats.median_p = sorted.size() % 2 == 1 ? sorted[half]
                                            : 0.5 * (sorted[half - 1] + sorted[half]);
    std::size_t above = 0;
    for (double p : stats.pvalues)
        if (p > cfg.test.alpha) ++above;
    stats.fraction_above_alpha = static_cast<double>(above) / static_cast<double>(sorted.size());

    for (std::uint32_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        std::uint64_t rep = static_cast<std::uint64_t>(cfg.pool_size) + attempt;
        auto crds = generate_crds(ds, cfg.seed, rep);
        double p = testcat_pvalue(crds, cfg.test).p_value.linear;
        if (std::abs(p - stats.median_p) <= cfg.tolerance) {
            stats.selected_replicate = static_cast<std::uint32_t>(rep);
            stats.selected_p = p;
            return {std::move(crds), std::move(stats)};
        }
    }
    throw SelectionError("no candidate within " + std::to_string(cfg.tolerance) +
                             " of the pool median after " + std::to_string(cfg.max_attempts) +
                             " attempts",
                         std::move(stats));
}

}  // namespace testcat
