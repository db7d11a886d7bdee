#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Quantile with linear interpolation between order statistics
/// (q(p) = x[(n-1)p] interpolated). `sorted` must be ascending and non-empty.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

inline double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

inline double sample_variance(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return acc / static_cast<double>(values.size() - 1);
}

struct WilcoxonResult {
    double statistic = 0.0;   // W: sum of ranks of positive differences
    double p_value = 1.0;     // two-sided
    std::size_t n_effective = 0;  // pairs left after zero-difference removal
    enum class Method { Exact, NormalApprox, Degenerate } method = Method::Degenerate;
};

inline std::string to_string(WilcoxonResult::Method m) {
    switch (m) {
        case WilcoxonResult::Method::Exact: return "exact";
        case WilcoxonResult::Method::NormalApprox: return "normal_approx";
        case WilcoxonResult::Method::Degenerate: return "degenerate";
    }
    return "degenerate";
}

/// Paired Wilcoxon signed-rank test. Zero differences are dropped, tied
/// absolute differences receive mid-ranks. For n_effective <= 25 the two-sided
/// p-value is exact, from full enumeration of the 2^n sign assignments; above
/// that a normal approximation with tie and continuity corrections is used.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                           std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    if (x.empty()) throw std::invalid_argument("wilcoxon_signed_rank: empty input");

    std::vector<double> diff;
    diff.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diff.push_back(d);
    }

    WilcoxonResult res;
    res.n_effective = diff.size();
    if (diff.empty()) return res;  // all differences zero: degenerate, p = 1

    const std::size_t n = diff.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(diff[a]) < std::fabs(diff[b]);
    });

    // mid-ranks over groups of tied |d|; track tie sizes for the variance
    std::vector<double> rank(n, 0.0);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(diff[order[j + 1]]) == std::fabs(diff[order[i]])) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }

    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (diff[i] > 0.0) w += rank[i];
    res.statistic = w;

    if (n <= 25) {
        // doubled ranks are exact integers even with mid-ranks
        std::vector<std::int64_t> r2(n);
        for (std::size_t i = 0; i < n; ++i) r2[i] = std::llround(2.0 * rank[i]);
        const std::int64_t w2 = std::llround(2.0 * w);

        const std::uint64_t total = std::uint64_t{1} << n;
        std::uint64_t count_le = 0, count_ge = 0;
        std::int64_t sum = 0;  // Gray-code walk over all sign assignments
        std::uint64_t gray = 0;
        for (std::uint64_t k = 0;; ++k) {
            if (sum <= w2) ++count_le;
            if (sum >= w2) ++count_ge;
            if (k + 1 == total) break;
            const unsigned bit = static_cast<unsigned>(std::countr_zero(k + 1));
            const std::uint64_t mask = std::uint64_t{1} << bit;
            gray ^= mask;
            sum += (gray & mask) ? r2[bit] : -r2[bit];
        }
        const double tail = static_cast<double>(std::min(count_le, count_ge)) /
                            static_cast<double>(total);
        res.p_value = std::min(1.0, 2.0 * tail);
        res.method = WilcoxonResult::Method::Exact;
        return res;
    }

    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    double tie_corr = 0.0;
    for (std::size_t t : tie_sizes) {
        const double td = static_cast<double>(t);
        tie_corr += (td * td * td - td) / 48.0;
    }
    const double sigma = std::sqrt(nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_corr);
    const double d = w - mu;
    const double z = (d - 0.5 * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0))) / sigma;
    res.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
    res.method = WilcoxonResult::Method::NormalApprox;
    return res;
}

}  // namespace hawkes
