#include "testcat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "json.hpp"
#include "parallel.hpp"

namespace testcat {

namespace {

using ordered_json = nlohmann::ordered_json;

// shortest round-trip decimal form, for csv cells
std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void attach_meta(ordered_json& j, const ReportMeta& m) {
    if (!m.input.empty()) j["input"] = m.input;
    if (!m.missing_policy.empty()) {
        j["ingest"] = {{"delimiter", m.delimiter},
                       {"header", m.header},
                       {"missing_policy", m.missing_policy},
                       {"dropped_columns", m.dropped_columns}};
    }
}

std::string pair_name(const ReportMeta& m, std::uint32_t attr) {
    if (attr < m.attribute_names.size()) return m.attribute_names[attr];
    return "a" + std::to_string(attr);
}

}  // namespace

ValidationOutcome validate_dataset(const CategoricalDataset& ds, const std::string& name,
                                   const RandomizationConfig& cfg) {
    ValidationOutcome out;
    out.dataset_name = name;
    auto ods = testcat_pvalue(ds, cfg.test);
    out.ods_pvalue = ods.p_value;
    out.ods_verdict = ods.verdict;

    auto [crds, pool] = representative_crds(ds, cfg);
    auto crep = testcat_pvalue(crds, cfg.test);
    out.crds_pvalue = crep.p_value;
    out.crds_verdict = crep.verdict;
    out.pool = std::move(pool);
    out.correctly_identified_ods = out.ods_verdict == Verdict::clusterable;
    out.correctly_identified_crds = out.crds_verdict == Verdict::unclusterable;
    return out;
}

PvaluePool pvalue_pool(const CategoricalDataset& ds, std::uint32_t n, std::uint64_t seed,
                       const TestConfig& test) {
    if (n < 1) throw std::invalid_argument("pool needs at least one member");
    PvaluePool pool;
    pool.alpha = test.alpha;
    pool.pvalues.resize(n);
    pool.strong_proportions.resize(n);
    detail::parallel_for(n, test.threads, [&](std::size_t i) {
        TestConfig tc = test;
        tc.threads = 1;  // parallelism lives at the pool level
        auto rep = testcat_pvalue(generate_crds(ds, seed, i), tc);
        pool.pvalues[i] = rep.p_value.linear;
        pool.strong_proportions[i] = rep.strong_pairs_proportion;
    });

    auto sorted = pool.pvalues;
    std::sort(sorted.begin(), sorted.end());
    pool.min_p = sorted.front();
    pool.max_p = sorted.back();
    std::size_t half = sorted.size() / 2;
    pool.median_p =
        sorted.size() % 2 == 1 ? sorted[half] : 0.5 * (sorted[half - 1] + sorted[half]);
    std::size_t above = 0;
    for (double p : pool.pvalues)
        if (p > test.alpha) ++above;
    pool.fraction_above_alpha = static_cast<double>(above) / static_cast<double>(n);
    return pool;
}

std::vector<double> default_fraction_grid() {
    return {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

RobustnessCurve robustness_curve(const CategoricalDataset& ds,
                                 const std::vector<double>& fractions, std::uint32_t repeats,
                                 std::uint64_t seed, const TestConfig& test) {
    if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fraction outside [0, 1]");

    RobustnessCurve curve;
    curve.fractions = fractions;
    curve.repeats = repeats;
    curve.alpha = test.alpha;
    curve.clusterable_count.resize(fractions.size());
    curve.clusterable_proportion.resize(fractions.size());

    std::vector<char> clusterable(repeats);
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        detail::parallel_for(repeats, test.threads, [&](std::size_t ri) {
            // replicate index unique per (fraction, repeat)
            std::uint64_t rep = static_cast<std::uint64_t>(fi) * repeats + ri;
            auto shuffled = partial_shuffle(ds, fractions[fi], seed, rep);
            TestConfig tc = test;
            tc.threads = 1;
            clusterable[ri] = testcat_pvalue(shuffled, tc).verdict == Verdict::clusterable;
        });
        std::uint32_t count = 0;
        for (char c : clusterable) count += c;
        curve.clusterable_count[fi] = count;
        curve.clusterable_proportion[fi] =
            static_cast<double>(count) / static_cast<double>(repeats);
    }
    return curve;
}

std::string emit_report(const ClusterabilityReport& r, ReportFormat f, const ReportMeta& m) {
    if (f == ReportFormat::csv) {
        std::string out =
            "n_objects,n_attributes,chi2_sum,df_sum,p_value,log10_p,verdict,"
            "strong_pairs_total,strong_pairs_proportion\n";
        out += std::to_string(r.n_objects) + ',' + std::to_string(r.n_attributes) + ',' +
               fmt(r.chi2_sum) + ',' + std::to_string(r.df_sum) + ',' + fmt(r.p_value.linear) +
               ',' + fmt(r.p_value.log10()) + ',' + to_string(r.verdict) + ',' +
               std::to_string(r.strong_pairs_total) + ',' + fmt(r.strong_pairs_proportion) +
               '\n';
        return out;
    }
    ordered_json j;
    j["kind"] = "clusterability_report";
    attach_meta(j, m);
    j["n_objects"] = r.n_objects;
    j["n_attributes"] = r.n_attributes;
    j["alpha"] = r.alpha;
    j["chi2_sum"] = r.chi2_sum;
    j["df_sum"] = r.df_sum;
    j["p_value"] = r.p_value.linear;
    j["log10_p"] = r.p_value.log10();
    j["verdict"] = to_string(r.verdict);
    j["strong_pairs_total"] = r.strong_pairs_total;
    j["strong_pairs_proportion"] = r.strong_pairs_proportion;
    j["pairs"] = ordered_json::array();
    for (const auto& p : r.pairs) {
        ordered_json pj;
        pj["a"] = p.attr_a;
        pj["b"] = p.attr_b;
        if (!m.attribute_names.empty()) {
            pj["name_a"] = pair_name(m, p.attr_a);
            pj["name_b"] = pair_name(m, p.attr_b);
        }
        pj["chi2"] = p.chi2;
        pj["df"] = p.df;
        pj["p_value"] = p.p_value.linear;
        pj["log10_p"] = p.p_value.log10();
        pj["strong_positive"] = p.strong_positive;
        pj["strong_negative"] = p.strong_negative;
        pj["cell_count"] = p.cell_count;
        j["pairs"].push_back(std::move(pj));
    }
    return j.dump(2) + "\n";
}

std::string emit_report(const McReport& r, ReportFormat f, const ReportMeta& m) {
    if (f == ReportFormat::csv) {
        std::string out = "replicates,n_pairs,pooled_p,pooled_log10_p\n";
        out += std::to_string(r.replicates) + ',' + std::to_string(r.pairs.size()) + ',' +
               fmt(r.pooled.linear) + ',' + fmt(r.pooled.log10()) + '\n';
        return out;
    }
    ordered_json j;
    j["kind"] = "montecarlo_report";
    attach_meta(j, m);
    j["n_objects"] = r.n_objects;
    j["n_attributes"] = r.n_attributes;
    j["replicates"] = r.replicates;
    j["pooled_p"] = r.pooled.linear;
    j["pooled_log10_p"] = r.pooled.log10();
    j["pairs"] = ordered_json::array();
    for (const auto& p : r.pairs) {
        ordered_json pj;
        pj["a"] = p.attr_a;
        pj["b"] = p.attr_b;
        if (!m.attribute_names.empty()) {
            pj["name_a"] = pair_name(m, p.attr_a);
            pj["name_b"] = pair_name(m, p.attr_b);
        }
        pj["chi2"] = p.chi2;
        pj["p_value"] = p.p_value;
        j["pairs"].push_back(std::move(pj));
    }
    return j.dump(2) + "\n";
}

std::string emit_report(const ValidationOutcome& r, ReportFormat f, const ReportMeta& m) {
    if (f == ReportFormat::csv) {
        std::string out =
            "dataset,ods_p,ods_verdict,crds_p,crds_verdict,"
            "correct_ods,correct_crds,pool_median_p,pool_fraction_above_alpha\n";
        out += r.dataset_name + ',' + fmt(r.ods_pvalue.linear) + ',' +
               to_string(r.ods_verdict) + ',' + fmt(r.crds_pvalue.linear) + ',' +
               to_string(r.crds_verdict) + ',' + (r.correctly_identified_ods ? "1" : "0") +
               ',' + (r.correctly_identified_crds ? "1" : "0") + ',' + fmt(r.pool.median_p) +
               ',' + fmt(r.pool.fraction_above_alpha) + '\n';
        return out;
    }
    ordered_json j;
    j["kind"] = "validation_report";
    attach_meta(j, m);
    j["dataset"] = r.dataset_name;
    j["ods"] = {{"p_value", r.ods_pvalue.linear},
                {"log10_p", r.ods_pvalue.log10()},
                {"verdict", to_string(r.ods_verdict)}};
    j["crds"] = {{"p_value", r.crds_pvalue.linear},
                 {"log10_p", r.crds_pvalue.log10()},
                 {"verdict", to_string(r.crds_verdict)},
                 {"replicate", r.pool.selected_replicate},
                 {"pool",
                  {{"size", r.pool.pvalues.size()},
                   {"median_p", r.pool.median_p},
                   {"fraction_above_alpha", r.pool.fraction_above_alpha},
                   {"alpha", r.pool.alpha}}}};
    j["correctly_identified_ods"] = r.correctly_identified_ods;
    j["correctly_identified_crds"] = r.correctly_identified_crds;
    return j.dump(2) + "\n";
}

std::string emit_report(const PvaluePool& r, ReportFormat f, const ReportMeta& m) {
    if (f == ReportFormat::csv) {
        std::string out = "replicate,p_value,strong_proportion\n";
        for (std::size_t i = 0; i < r.pvalues.size(); ++i)
            out += std::to_string(i) + ',' + fmt(r.pvalues[i]) + ',' +
                   fmt(r.strong_proportions[i]) + '\n';
        return out;
    }
    ordered_json j;
    j["kind"] = "crds_pool";
    attach_meta(j, m);
    j["n"] = r.pvalues.size();
    j["alpha"] = r.alpha;
    j["median_p"] = r.median_p;
    j["min_p"] = r.min_p;
    j["max_p"] = r.max_p;
    j["fraction_above_alpha"] = r.fraction_above_alpha;
    j["members"] = ordered_json::array();
    for (std::size_t i = 0; i < r.pvalues.size(); ++i)
        j["members"].push_back({{"replicate", i},
                                {"p_value", r.pvalues[i]},
                                {"strong_proportion", r.strong_proportions[i]}});
    return j.dump(2) + "\n";
}

std::string emit_report(const RobustnessCurve& r, ReportFormat f, const ReportMeta& m) {
    if (f == ReportFormat::csv) {
        std::string out = "fraction,clusterable_proportion\n";
        for (std::size_t i = 0; i < r.fractions.size(); ++i)
            out += fmt(r.fractions[i]) + ',' + fmt(r.clusterable_proportion[i]) + '\n';
        return out;
    }
    ordered_json j;
    j["kind"] = "robustness_curve";
    attach_meta(j, m);
    j["repeats"] = r.repeats;
    j["alpha"] = r.alpha;
    j["points"] = ordered_json::array();
    for (std::size_t i = 0; i < r.fractions.size(); ++i)
        j["points"].push_back({{"fraction", r.fractions[i]},
                               {"clusterable_count", r.clusterable_count[i]},
                               {"clusterable_proportion", r.clusterable_proportion[i]}});
    return j.dump(2) + "\n";
}

}  // namespace testcat
