#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "testcat/contingency.hpp"
#include "testcat/dataset.hpp"
#include "testcat/harness.hpp"
#include "testcat/montecarlo.hpp"
#include "testcat/randomize.hpp"
#include "testcat/separation.hpp"
#include "testcat/testcat.hpp"

namespace tc = testcat;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string input;
    std::string delimiter = ",";
    bool header = true;
    std::string missing = "own-category";
    std::vector<std::string> drop;
    std::string output = "json";
    std::string out_path;
    double alpha = 0.01;
    unsigned threads = 0;
};

const CLI::Validator one_char(
    [](std::string& s) -> std::string {
        if (s.size() != 1 || s[0] == '"' || s[0] == '\n' || s[0] == '\r')
            return std::string("must be a single character, not a quote or newline");
        return {};
    },
    "CHAR");

const CLI::Validator open_unit(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (...) {
            return std::string("not a number");
        }
        if (!(v > 0.0 && v < 1.0)) return std::string("must lie strictly between 0 and 1");
        return {};
    },
    "IN(0,1)");

void add_input(CLI::App* sub, CommonArgs& a) {
    sub->add_option("input", a.input, "CSV path, or - for stdin")->required();
}

void add_ingest(CLI::App* sub, CommonArgs& a) {
    sub->add_option("--delimiter", a.delimiter, "field delimiter (default ,)")->check(one_char);
    sub->add_flag("--header,!--no-header", a.header,
                  "treat the first line as a header (default on)");
    sub->add_option("--missing", a.missing, "missing-value policy (default own-category)")
        ->check(CLI::IsMember({"own-category", "drop-row"}));
    sub->add_option("--drop", a.drop, "columns to drop: names or 0-based indices")
        ->delimiter(',');
}

void add_output(CLI::App* sub, CommonArgs& a) {
    sub->add_option("--output", a.output, "report format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", a.out_path, "write the report to a file instead of stdout");
}

void add_alpha(CLI::App* sub, CommonArgs& a) {
    sub->add_option("--alpha", a.alpha, "significance level (default 0.01)")->check(open_unit);
}

void add_threads(CLI::App* sub, CommonArgs& a) {
    sub->add_option("--threads", a.threads, "worker threads; 0 = all cores (default)");
}

tc::IngestOptions ingest_of(const CommonArgs& a) {
    tc::IngestOptions o;
    o.delimiter = a.delimiter[0];
    o.has_header = a.header;
    o.missing_policy =
        a.missing == "drop-row" ? tc::MissingPolicy::drop_row : tc::MissingPolicy::own_category;
    o.drop_columns = a.drop;
    return o;
}

tc::CategoricalDataset load(const CommonArgs& a) {
    auto ds = a.input == "-" ? tc::load_csv(std::cin, ingest_of(a))
                             : tc::load_csv_file(a.input, ingest_of(a));
    std::cerr << "loaded " << ds.n_objects << " objects, " << ds.n_attributes
              << " attributes\n";
    return ds;
}

tc::ReportMeta meta_of(const CommonArgs& a, const tc::CategoricalDataset& ds) {
    tc::ReportMeta m;
    m.input = a.input;
    m.attribute_names = ds.attribute_names;
    m.missing_policy = a.missing;
    m.dropped_columns = a.drop;
    m.delimiter = a.delimiter;
    m.header = a.header;
    return m;
}

tc::ReportFormat format_of(const CommonArgs& a) {
    return a.output == "csv" ? tc::ReportFormat::csv : tc::ReportFormat::json;
}

void write_out(const CommonArgs& a, const std::string& text) {
    if (a.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(a.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output '" + a.out_path + "'");
    f << text;
}

ordered_json meta_json(const CommonArgs& a) {
    return {{"delimiter", a.delimiter},
            {"header", a.header},
            {"missing_policy", a.missing},
            {"dropped_columns", a.drop}};
}

ordered_json matrix_json(std::uint32_t rows, std::uint32_t cols, auto&& cell) {
    ordered_json m = ordered_json::array();
    for (std::uint32_t i = 0; i < rows; ++i) {
        ordered_json row = ordered_json::array();
        for (std::uint32_t j = 0; j < cols; ++j) row.push_back(cell(i, j));
        m.push_back(std::move(row));
    }
    return m;
}

int run_test(const CommonArgs& a, double threshold, bool fail_if_unclusterable) {
    auto ds = load(a);
    tc::TestConfig cfg{a.alpha, threshold, a.threads};
    auto rep = tc::testcat_pvalue(ds, cfg);
    write_out(a, tc::emit_report(rep, format_of(a), meta_of(a, ds)));
    return fail_if_unclusterable && rep.verdict == tc::Verdict::unclusterable ? 3 : 0;
}

int run_residuals(const CommonArgs& a, double threshold) {
    auto ds = load(a);
    if (format_of(a) == tc::ReportFormat::csv) {
        std::string out = "attr_a,attr_b,value_a,value_b,observed,expected,residual\n";
        for (std::uint32_t x = 0; x + 1 < ds.n_attributes; ++x)
            for (std::uint32_t y = x + 1; y < ds.n_attributes; ++y) {
                auto t = tc::build_table(ds, x, y);
                if (t.rows < 2 || t.cols < 2) continue;
                auto e = tc::expected_frequencies(t);
                auto r = tc::standardized_residuals(t);
                std::ostringstream line;
                for (std::uint32_t i = 0; i < t.rows; ++i)
                    for (std::uint32_t j = 0; j < t.cols; ++j) {
                        line << ds.attribute_names[x] << ',' << ds.attribute_names[y] << ','
                             << ds.label(x, i) << ',' << ds.label(y, j) << ',' << t.at(i, j)
                             << ',' << e[static_cast<std::size_t>(i) * t.cols + j] << ','
                             << r.at(i, j) << '\n';
                    }
                out += line.str();
            }
        write_out(a, out);
        return 0;
    }
    ordered_json j;
    j["kind"] = "residuals_report";
    j["input"] = a.input;
    j["ingest"] = meta_json(a);
    j["threshold"] = threshold;
    j["pairs"] = ordered_json::array();
    for (std::uint32_t x = 0; x + 1 < ds.n_attributes; ++x)
        for (std::uint32_t y = x + 1; y < ds.n_attributes; ++y) {
            auto t = tc::build_table(ds, x, y);
            if (t.rows < 2 || t.cols < 2) continue;  // no residuals for single-category pairs
            auto e = tc::expected_frequencies(t);
            auto r = tc::standardized_residuals(t);
            auto strong = tc::count_strong_cells(r, threshold);
            ordered_json pj;
            pj["a"] = x;
            pj["b"] = y;
            pj["name_a"] = ds.attribute_names[x];
            pj["name_b"] = ds.attribute_names[y];
            pj["values_a"] = ds.dictionaries[x];
            pj["values_b"] = ds.dictionaries[y];
            pj["observed"] =
                matrix_json(t.rows, t.cols, [&](auto i, auto jj) { return t.at(i, jj); });
            pj["expected"] = matrix_json(t.rows, t.cols, [&](auto i, auto jj) {
                return e[static_cast<std::size_t>(i) * t.cols + jj];
            });
            pj["residuals"] =
                matrix_json(t.rows, t.cols, [&](auto i, auto jj) { return r.at(i, jj); });
            pj["strong_positive"] = strong.positive;
            pj["strong_negative"] = strong.negative;
            j["pairs"].push_back(std::move(pj));
        }
    write_out(a, j.dump(2) + "\n");
    return 0;
}

int run_randomize(const CommonArgs& a, std::uint64_t seed, double fraction,
                  std::uint64_t replicate) {
    auto ds = load(a);
    auto shuffled = tc::partial_shuffle(ds, fraction, seed, replicate);
    std::ostringstream out;
    tc::write_csv(shuffled, out, a.delimiter[0], a.header);
    write_out(a, out.str());
    return 0;
}

int run_separation(const CommonArgs& a) {
    auto ds = load(a);
    if (ds.n_attributes != 2)
        throw std::runtime_error("separation needs exactly 2 attributes after drops, got " +
                                 std::to_string(ds.n_attributes));
    auto t = tc::build_table(ds, 0, 1);
    auto bf = tc::separation_bruteforce(ds);
    if (bf.pair_count == 0)
        throw std::runtime_error("separation undefined: single non-empty cluster");
    double norm = static_cast<double>(bf.sep) / static_cast<double>(bf.pair_count);
    auto chi = tc::chi_squared(t);
    bool is_2x2 = t.rows == 2 && t.cols == 2;

    if (format_of(a) == tc::ReportFormat::csv) {
        std::string out = "rows,cols,sep,s_total,sep_norm,chi2,df,lambda,lambda_star\n";
        std::ostringstream line;
        line << t.rows << ',' << t.cols << ',' << bf.sep << ',' << bf.pair_count << ','
             << norm << ',' << chi.statistic << ',' << chi.df << ',';
        if (is_2x2)
            line << tc::lambda_threshold(t) << ',' << tc::lambda_star(t);
        else
            line << ',';
        line << '\n';
        write_out(a, out + line.str());
        return 0;
    }
    ordered_json j;
    j["kind"] = "separation_report";
    j["input"] = a.input;
    j["ingest"] = meta_json(a);
    j["n_objects"] = ds.n_objects;
    j["rows"] = t.rows;
    j["cols"] = t.cols;
    j["sep"] = bf.sep;
    j["s_total"] = bf.pair_count;
    j["sep_norm"] = norm;
    j["chi2"] = chi.statistic;
    j["df"] = chi.df;
    if (is_2x2) {
        auto s = tc::separation_summary(t);
        j["closed_form"] = {{"sep", s.sep},
                            {"s_total", s.s_total},
                            {"sep_norm", s.sep_norm},
                            {"lambda", s.lambda},
                            {"lambda_star", s.lambda_star}};
    }
    write_out(a, j.dump(2) + "\n");
    return 0;
}

int run_montecarlo(const CommonArgs& a, std::uint64_t seed, std::uint32_t replicates) {
    auto ds = load(a);
    tc::MonteCarloConfig cfg{replicates, seed, a.threads};
    auto rep = tc::mc_testcat_pvalue(ds, cfg);
    write_out(a, tc::emit_report(rep, format_of(a), meta_of(a, ds)));
    return 0;
}

int run_robustness(const CommonArgs& a, std::uint64_t seed, std::vector<double> fractions,
                   std::uint32_t repeats) {
    auto ds = load(a);
    if (fractions.empty()) fractions = tc::default_fraction_grid();
    tc::TestConfig cfg{a.alpha, 2.0, a.threads};
    auto curve = tc::robustness_curve(ds, fractions, repeats, seed, cfg);
    write_out(a, tc::emit_report(curve, format_of(a), meta_of(a, ds)));
    return 0;
}

int run_uniformity(const CommonArgs& a, std::uint32_t crds_members, std::uint64_t seed) {
    auto ds = load(a);
    std::vector<double> ps;
    if (crds_members == 0) {
        ps = tc::per_pair_pvalues(ds, a.threads);
    } else {
        for (std::uint32_t i = 0; i < crds_members; ++i) {
            auto crds = tc::generate_crds(ds, seed, i);
            auto member = tc::per_pair_pvalues(crds, a.threads);
            ps.insert(ps.end(), member.begin(), member.end());
        }
    }
    auto ks = tc::uniformity_test(ps);
    bool uniform = ks.p_value > a.alpha;
    if (format_of(a) == tc::ReportFormat::csv) {
        std::ostringstream out;
        out << "n_pvalues,crds_members,ks_statistic,ks_pvalue,uniform\n"
            << ps.size() << ',' << crds_members << ',' << ks.statistic << ',' << ks.p_value
            << ',' << (uniform ? 1 : 0) << '\n';
        write_out(a, out.str());
        return 0;
    }
    ordered_json j;
    j["kind"] = "uniformity_report";
    j["input"] = a.input;
    j["ingest"] = meta_json(a);
    j["n_pvalues"] = ps.size();
    j["crds_members"] = crds_members;
    j["ks_statistic"] = ks.statistic;
    j["ks_pvalue"] = ks.p_value;
    j["alpha"] = a.alpha;
    j["uniform"] = uniform;
    write_out(a, j.dump(2) + "\n");
    return 0;
}

int run_validate(const CommonArgs& a, std::uint64_t seed, std::uint32_t pool_size,
                 double tolerance) {
    auto ds = load(a);
    tc::RandomizationConfig cfg;
    cfg.seed = seed;
    cfg.pool_size = pool_size;
    cfg.tolerance = tolerance;
    cfg.test = tc::TestConfig{a.alpha, 2.0, a.threads};
    auto outcome = tc::validate_dataset(ds, a.input, cfg);
    std::cerr << "representative replicate " << outcome.pool.selected_replicate
              << " (p = " << outcome.pool.selected_p << ")\n";
    write_out(a, tc::emit_report(outcome, format_of(a), meta_of(a, ds)));
    return 0;
}

int run_pool(const CommonArgs& a, std::uint64_t seed, std::uint32_t pool_size) {
    auto ds = load(a);
    tc::TestConfig cfg{a.alpha, 2.0, a.threads};
    auto pool = tc::pvalue_pool(ds, pool_size, seed, cfg);
    write_out(a, tc::emit_report(pool, format_of(a), meta_of(a, ds)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clusterability testing for categorical data"};
    app.require_subcommand(1);

    CommonArgs test_args, resid_args, rand_args, sep_args, mc_args, rob_args, uni_args,
        val_args, pool_args;
    double test_threshold = 2.0, resid_threshold = 2.0;
    bool fail_if_unclusterable = false;
    std::uint64_t rand_seed = 0, mc_seed = 0, rob_seed = 0, uni_seed = 0, val_seed = 0,
                  pool_seed = 0;
    double rand_fraction = 1.0;
    std::uint64_t rand_replicate = 0;
    std::uint32_t mc_replicates = 20000;
    std::vector<double> rob_fractions;
    std::uint32_t rob_repeats = 100;
    std::uint32_t uni_crds = 0;
    std::uint32_t val_pool = 101, pool_n = 101;
    double val_tolerance = 0.05;

    auto* test = app.add_subcommand("test", "summed pairwise chi-squared test with verdict");
    add_input(test, test_args);
    add_ingest(test, test_args);
    add_output(test, test_args);
    add_alpha(test, test_args);
    add_threads(test, test_args);
    test->add_option("--threshold", test_threshold, "strong-residual threshold (default 2.0)")
        ->check(CLI::PositiveNumber);
    test->add_flag("--fail-if-unclusterable", fail_if_unclusterable,
                   "exit with code 3 when the verdict is unclusterable");

    auto* resid = app.add_subcommand("residuals", "per-pair standardized residual matrices");
    add_input(resid, resid_args);
    add_ingest(resid, resid_args);
    add_output(resid, resid_args);
    add_threads(resid, resid_args);
    resid
        ->add_option("--threshold", resid_threshold,
                     "strong-residual threshold (default 2.0)")
        ->check(CLI::PositiveNumber);

    auto* rand = app.add_subcommand("randomize",
                                    "emit a randomized dataset with preserved marginals");
    add_input(rand, rand_args);
    add_ingest(rand, rand_args);
    rand->add_option("--out", rand_args.out_path, "write the CSV to a file instead of stdout");
    rand->add_option("--seed", rand_seed, "RNG seed")->required();
    rand->add_option("--fraction", rand_fraction,
                     "fraction of objects to shuffle (default 1.0)")
        ->check(CLI::Range(0.0, 1.0));
    rand->add_option("--replicate", rand_replicate, "replicate index (default 0)");

    auto* sep = app.add_subcommand("separation",
                                   "separation quantities for a 2-attribute dataset");
    add_input(sep, sep_args);
    add_ingest(sep, sep_args);
    add_output(sep, sep_args);

    auto* mc = app.add_subcommand("montecarlo",
                                  "permutation p-values per pair, pooled");
    add_input(mc, mc_args);
    add_ingest(mc, mc_args);
    add_output(mc, mc_args);
    add_threads(mc, mc_args);
    mc->add_option("--seed", mc_seed, "RNG seed")->required();
    mc->add_option("--replicates", mc_replicates, "permutations per pair (default 20000)")
        ->check(CLI::PositiveNumber);

    auto* rob = app.add_subcommand("robustness",
                                   "clusterable proportion across shuffle fractions");
    add_input(rob, rob_args);
    add_ingest(rob, rob_args);
    add_output(rob, rob_args);
    add_alpha(rob, rob_args);
    add_threads(rob, rob_args);
    rob->add_option("--seed", rob_seed, "RNG seed")->required();
    rob->add_option("--fractions", rob_fractions,
                    "shuffle fractions (default 0.01,0.02,0.05,0.1,0.2,...,1.0)")
        ->delimiter(',');
    rob->add_option("--repeats", rob_repeats, "repeats per fraction (default 100)")
        ->check(CLI::PositiveNumber);

    auto* uni = app.add_subcommand("uniformity",
                                   "KS uniformity check of per-pair p-values");
    add_input(uni, uni_args);
    add_ingest(uni, uni_args);
    add_output(uni, uni_args);
    add_alpha(uni, uni_args);
    add_threads(uni, uni_args);
    uni->add_option("--crds", uni_crds,
                    "pool p-values over this many randomized copies instead (default 0 = "
                    "test the input itself)");
    auto* uni_seed_opt = uni->add_option("--seed", uni_seed, "RNG seed (required with --crds)");

    auto* val = app.add_subcommand("validate",
                                   "verdicts for the dataset and a representative "
                                   "randomized counterpart");
    add_input(val, val_args);
    add_ingest(val, val_args);
    add_output(val, val_args);
    add_alpha(val, val_args);
    add_threads(val, val_args);
    val->add_option("--seed", val_seed, "RNG seed")->required();
    val->add_option("--pool-size", val_pool, "pool size for the median (default 101)")
        ->check(CLI::PositiveNumber);
    val->add_option("--tolerance", val_tolerance,
                    "acceptable |p - median| for the representative (default 0.05)")
        ->check(CLI::PositiveNumber);

    auto* pool = app.add_subcommand("pool", "p-value pool over randomized copies");
    add_input(pool, pool_args);
    add_ingest(pool, pool_args);
    add_output(pool, pool_args);
    add_alpha(pool, pool_args);
    add_threads(pool, pool_args);
    pool->add_option("--seed", pool_seed, "RNG seed")->required();
    pool->add_option("--pool-size", pool_n, "number of randomized copies (default 101)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (uni->parsed() && uni_crds > 0 && uni_seed_opt->count() == 0) {
        std::cerr << "uniformity: --seed is required with --crds\n";
        return 2;
    }

    try {
        if (test->parsed()) return run_test(test_args, test_threshold, fail_if_unclusterable);
        if (resid->parsed()) return run_residuals(resid_args, resid_threshold);
        if (rand->parsed())
            return run_randomize(rand_args, rand_seed, rand_fraction, rand_replicate);
        if (sep->parsed()) return run_separation(sep_args);
        if (mc->parsed()) return run_montecarlo(mc_args, mc_seed, mc_replicates);
        if (rob->parsed()) return run_robustness(rob_args, rob_seed, rob_fractions, rob_repeats);
        if (uni->parsed()) return run_uniformity(uni_args, uni_crds, uni_seed);
        if (val->parsed()) return run_validate(val_args, val_seed, val_pool, val_tolerance);
        if (pool->parsed()) return run_pool(pool_args, pool_seed, pool_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
