#include "testcat/separation.hpp"

#include <stdexcept>

namespace testcat {

namespace {

void require_2x2(const ContingencyTable& t) {
    if (t.rows != 2 || t.cols != 2) throw std::invalid_argument("table is not 2x2");
}

}  // namespace

std::int64_t sep_2x2(const ContingencyTable& t) {
    require_2x2(t);
    std::int64_t total = t.grand_total;
    std::int64_t r1 = t.row_marginals[0];
    std::int64_t c2 = t.col_marginals[1];
    return (total - r1 - c2) * (r1 + c2) + 2 * r1 * c2;
}

std::int64_t s_total_2x2(const ContingencyTable& t) {
    require_2x2(t);
    return sep_2x2(t) - (t.at(0, 1) * t.at(1, 0) + t.at(0, 0) * t.at(1, 1));
}

double sep_norm(const ContingencyTable& t) {
    std::int64_t st = s_total_2x2(t);
    if (st <= 0) throw std::domain_error("separation undefined: no inter-cluster pairs");
    return static_cast<double>(sep_2x2(t)) / static_cast<double>(st);
}

double lambda_threshold(const ContingencyTable& t) {
    require_2x2(t);
    return (2.0 * static_cast<double>(t.row_marginals[0]) +
            static_cast<double>(t.col_marginals[0]) -
            static_cast<double>(t.col_marginals[1])) /
           4.0;
}

double lambda_star(const ContingencyTable& t) {
    require_2x2(t);
    double r1 = static_cast<double>(t.row_marginals[0]);
    double r2 = static_cast<double>(t.row_marginals[1]);
    double c1 = static_cast<double>(t.col_marginals[0]);
    double c2 = static_cast<double>(t.col_marginals[1]);
    if (r1 <= 0 || r2 <= 0 || c1 <= 0 || c2 <= 0)
        throw std::domain_error("lambda_star needs all marginals positive");
    double total = static_cast<double>(t.grand_total);
    double c_ds = total / (r1 * c1 * c2 * r2);
    double core = total * lambda_threshold(t) - r1 * c1;
    return c_ds * core * core;
}

SeparationSummary separation_summary(const ContingencyTable& t) {
    SeparationSummary s;
    s.sep = sep_2x2(t);
    s.s_total = s_total_2x2(t);
    if (s.s_total <= 0) throw std::domain_error("separation undefined: no inter-cluster pairs");
    s.sep_norm = static_cast<double>(s.sep) / static_cast<double>(s.s_total);
    s.lambda = lambda_threshold(t);
    s.lambda_star = lambda_star(t);
    return s;
}

BruteForceSeparation separation_bruteforce(const CategoricalDataset& ds) {
    if (ds.n_attributes != 2)
        throw std::invalid_argument("brute-force separation needs exactly 2 attributes");
    BruteForceSeparation out;
    std::uint32_t n = ds.n_objects;
    for (std::uint32_t u = 0; u < n; ++u) {
        std::uint32_t au = ds.at(u, 0), bu = ds.at(u, 1);
        for (std::uint32_t v = u + 1; v < n; ++v) {
            std::uint32_t av = ds.at(v, 0), bv = ds.at(v, 1);
            if (au == av && bu == bv) continue;  // same cluster cell
            out.sep += (au != av) + (bu != bv);
            ++out.pair_count;
        }
    }
    return out;
}

double sep_norm_bruteforce(const CategoricalDataset& ds) {
    auto bf = separation_bruteforce(ds);
    if (bf.pair_count == 0)
        throw std::domain_error("separation undefined: single non-empty cluster");
    return static_cast<double>(bf.sep) / static_cast<double>(bf.pair_count);
}

Theorem1Verdict check_theorem1(const ContingencyTable& t1, const ContingencyTable& t2) {
    require_2x2(t1);
    require_2x2(t2);
    if (t1.row_marginals != t2.row_marginals || t1.col_marginals != t2.col_marginals)
        throw std::invalid_argument("tables must share identical marginals");

    Theorem1Verdict v;
    v.chi2_1 = chi_squared(t1).statistic;
    v.chi2_2 = chi_squared(t2).statistic;
    v.lambda_star_value = lambda_star(t1);
    v.sep_norm_1 = sep_norm(t1);
    v.sep_norm_2 = sep_norm(t2);
    if (!(v.chi2_1 > v.chi2_2 && v.chi2_2 > v.lambda_star_value)) {
        v.outcome = Theorem1Outcome::premise_not_met;
    } else {
        v.outcome = v.sep_norm_1 > v.sep_norm_2 ? Theorem1Outcome::holds
                                                : Theorem1Outcome::violated;
    }
    return v;
}

}  // namespace testcat
