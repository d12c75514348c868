#pragma once

#include <cmath>
#include <cstdint>

namespace testcat {

// Survival probability carried in log space so that values far below the
// smallest normal double (observed down to ~1e-310 and beyond on real data)
// stay meaningful. `linear` is exp(log_e) and underflows to 0 where it must.
struct LogProb {
    double log_e;   // natural log of p; 0 means p=1, -inf means p=0
    double linear;  // exp(log_e)

    double log10() const { return log_e / 2.302585092994045684; }

    static LogProb from_log(double le) {
        if (le > 0.0) le = 0.0;  // clamp roundoff overshoot
        return {le, std::exp(le)};
    }
    static LogProb from_linear(double p) { return {std::log(p), p}; }
    static LogProb one() { return {0.0, 1.0}; }
};

// log of the gamma function for x > 0. Lanczos approximation (g=7, 9 terms)
// with reflection below 0.5; relative error stays under 1e-13 across
// [1e-3, 1e6]. Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a) for
// a > 0, x >= 0. Series branch below x < a+1, Lentz continued fraction
// otherwise; the prefactor exp(a ln x - x - lgamma(a)) is kept in log space
// so extreme tails survive. Throws std::domain_error outside the domain.
LogProb regularized_gamma_q(double a, double x);

// Chi-squared survival function P[X >= x] with df >= 1, i.e. Q(df/2, x/2).
LogProb chi2_survival(double x, std::int64_t df);

// Asymptotic two-sided Kolmogorov-Smirnov p-value for statistic d on sample
// size n: K(sqrt(n)*d) with the alternating series truncated once terms fall
// below 1e-12. Clamped to [0, 1]. Throws std::domain_error for n < 1 or
// d outside [0, 1].
double kolmogorov_ks_pvalue(double d, std::int64_t n);

}  // namespace testcat
