#include "shelving/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace shelving {

double kolmogorov_q(double lambda) {
    if (lambda <= 0) return 1.0;
    if (lambda < 1.18) {
        // Dual series, fast for small lambda.
        const double k = std::numbers::pi * std::numbers::pi / (8 * lambda * lambda);
        double sum = 0;
        for (int j = 1; j <= 20; ++j) sum += std::exp(-(2 * j - 1) * (2 * j - 1) * k);
        return std::clamp(1.0 - std::sqrt(2 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    double sum = 0, sign = 1;
    for (int j = 1; j <= 100; ++j, sign = -sign) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-300) break;
    }
    return std::clamp(2 * sum, 0.0, 1.0);
}

namespace {

double p_from(double d, double n_eff) {
    const double root = std::sqrt(n_eff);
    return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    KsResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    if (a.empty() || b.empty()) return r;
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    r.statistic = d;
    r.p_value = p_from(d, na * nb / (na + nb));
    return r;
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
    KsResult r;
    r.n_a = sample.size();
    if (sample.empty()) return r;
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    r.statistic = d;
    r.p_value = p_from(d, n);
    return r;
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::span<const double> x) {
    if (x.empty()) return 0;
    std::vector<double> v(x.begin(), x.end());
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

}  // namespace shelving
