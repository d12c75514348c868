#pragma once

#include <cstdint>

#include "testcat/contingency.hpp"
#include "testcat/dataset.hpp"

namespace testcat {

// 2x2 separation quantities; clusters are the four value-pair cells and
// distances are Hamming distances between the two attribute values
struct SeparationSummary {
    std::int64_t sep = 0;      // sum of inter-cluster Hamming distances
    std::int64_t s_total = 0;  // number of inter-cluster sample pairs
    double sep_norm = 0.0;
    double lambda = 0.0;       // critical point of sep_norm in the leading cell
    double lambda_star = 0.0;  // chi-squared level above which ordering transfers
};

std::int64_t sep_2x2(const ContingencyTable& t);
std::int64_t s_total_2x2(const ContingencyTable& t);
double sep_norm(const ContingencyTable& t);
double lambda_threshold(const ContingencyTable& t);
double lambda_star(const ContingencyTable& t);

SeparationSummary separation_summary(const ContingencyTable& t);

struct BruteForceSeparation {
    std::int64_t sep = 0;
    std::int64_t pair_count = 0;
};

// enumerates all object pairs of a 2-attribute dataset; works for any
// table shape, not just 2x2
BruteForceSeparation separation_bruteforce(const CategoricalDataset& ds);
double sep_norm_bruteforce(const CategoricalDataset& ds);

enum class Theorem1Outcome { premise_not_met, holds, violated };

struct Theorem1Verdict {
    Theorem1Outcome outcome = Theorem1Outcome::premise_not_met;
    double chi2_1 = 0.0;
    double chi2_2 = 0.0;
    double lambda_star_value = 0.0;
    double sep_norm_1 = 0.0;
    double sep_norm_2 = 0.0;
};

// premise: chi2(t1) > chi2(t2) > lambda_star under identical marginals;
// conclusion: sep_norm(t1) > sep_norm(t2)
Theorem1Verdict check_theorem1(const ContingencyTable& t1, const ContingencyTable& t2);

}  // namespace testcat
