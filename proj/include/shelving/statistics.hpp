#pragma once

#include <functional>
#include <span>
#include <vector>

namespace shelving {

struct KsResult {
    double statistic = 0;
    double p_value = 1;
    std::size_t n_a = 0, n_b = 0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_q(double lambda);

/// Two-sample test with the asymptotic distribution (Stephens' small-sample
/// correction on the effective size).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

double mean(std::span<const double> x);
/// Median of a copy; x need not be sorted.
double median(std::span<const double> x);

}  // namespace shelving
