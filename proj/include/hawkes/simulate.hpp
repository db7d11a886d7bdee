#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hawkes/core.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

struct SimConfig {
    KernelParams params;
    double horizon = 0.0;          // T in hours, > 0
    std::uint64_t seed = 0;
    double immigrant_time = 0.0;   // absolute time of the immigrant event
    std::size_t max_events = 100000;

    void require_valid() const {
        params.require_valid();
        if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon must be > 0");
        if (max_events < 1) throw std::invalid_argument("SimConfig: max_events must be >= 1");
        if (!(immigrant_time >= 0.0) || !(immigrant_time < horizon))
            throw std::invalid_argument("SimConfig: immigrant_time must lie in [0, horizon)");
    }
};

namespace detail {

// Ogata thinning on [0, span) with an immigrant at 0 and an optional kernel
// switch at `barrier`. Both kernel families decay monotonically between
// events, so the intensity immediately after the current position dominates
// the intensity until the next event or the barrier; candidates that would
// cross the barrier advance time to it and the bound is rebuilt under the
// post-switch kernel.
inline EventSeries thinning_core(const KernelParams& before, const KernelParams* after,
                                 double barrier, double span, Rng& rng,
                                 std::size_t max_events) {
    EventSeries series;
    series.times.push_back(0.0);
    series.observation_end = span;

    auto params_at = [&](double t) -> const KernelParams& {
        return (after != nullptr && t >= barrier) ? *after : before;
    };
    auto lambda_from = [&](const std::vector<double>& ts, double t, bool inclusive) {
        const KernelParams& p = params_at(t);
        double lam = 0.0;
        for (double ti : ts) {
            if (inclusive ? ti > t : ti >= t) break;
            lam += kernel_value(p, t - ti);
        }
        return lam;
    };

    double s = 0.0;
    while (true) {
        if (series.times.size() >= max_events) {
            series.truncated = true;
            // recording stopped at the cap, so the observed window ends there
            series.observation_end = series.times.back();
            break;
        }
        const double bound = lambda_from(series.times, s, /*inclusive=*/true);
        if (!(bound > 0.0)) break;
        double w = rng.exponential(bound);
        while (!(w > 0.0)) w = rng.exponential(bound);
        const double cand = s + w;
        if (after != nullptr && s < barrier && cand >= barrier) {
            s = barrier;  // kernel switch invalidates the bound; no accept here
            continue;
        }
        if (cand >= span) break;
        s = cand;
        const double lam = lambda_from(series.times, s, /*inclusive=*/false);
        if (rng.uniform() * bound <= lam) series.times.push_back(s);
    }
    return series;
}

// Delay drawn from the kernel restricted to [0, window], by CDF inversion.
inline double truncated_kernel_delay(const KernelParams& p, double window, double u) {
    if (p.family == KernelFamily::Exponential) {
        const double total = -std::expm1(-p.theta * window);
        return -std::log1p(-u * total) / p.theta;
    }
    const double lo = neg_pow(window + p.c, p.theta);  // (window+c)^-theta
    const double hi = neg_pow(p.c, p.theta);
    const double x = hi - u * (hi - lo);
    return std::exp(-std::log(x) / p.theta) - p.c;
}

inline void finalize_sorted(EventSeries& series) {
    std::sort(series.times.begin(), series.times.end());
    for (std::size_t i = 1; i < series.times.size(); ++i) {
        if (!(series.times[i] > series.times[i - 1]))
            series.times[i] = std::nextafter(series.times[i - 1],
                                             std::numeric_limits<double>::infinity());
    }
}

}  // namespace detail

/// Exact simulation by Ogata thinning. The returned series starts with the
/// immigrant at t = 0 (times are relative to cfg.immigrant_time) and every
/// event falls strictly inside the horizon. Identical configs give identical
/// series.
inline EventSeries simulate_thinning(const SimConfig& cfg) {
    cfg.require_valid();
    Rng rng(cfg.seed);
    EventSeries s = detail::thinning_core(cfg.params, nullptr, 0.0,
                                          cfg.horizon - cfg.immigrant_time, rng,
                                          cfg.max_events);
    s.validate();
    return s;
}

/// Cluster (branching) construction: generation by generation, each event
/// spawns Poisson(kernel mass within the remaining horizon) offspring with
/// delays drawn from the normalized kernel; output is the sorted merge.
inline EventSeries simulate_branching(const SimConfig& cfg) {
    cfg.require_valid();
    Rng rng(cfg.seed);
    const double span = cfg.horizon - cfg.immigrant_time;

    EventSeries series;
    series.observation_end = span;
    series.times.push_back(0.0);

    std::vector<double> frontier{0.0};
    while (!frontier.empty() && !series.truncated) {
        std::vector<double> next_gen;
        for (double parent : frontier) {
            const double window = span - parent;
            const std::uint64_t kids = rng.poisson(kernel_integral(cfg.params, 0.0, window));
            for (std::uint64_t k = 0; k < kids; ++k) {
                const double child =
                    parent + detail::truncated_kernel_delay(cfg.params, window, rng.uniform());
                next_gen.push_back(child);
                series.times.push_back(child);
                if (series.times.size() >= cfg.max_events) {
                    series.truncated = true;
                    break;
                }
            }
            if (series.truncated) break;
        }
        frontier = std::move(next_gen);
    }
    detail::finalize_sorted(series);
    if (series.truncated) series.observation_end = series.times.back();
    series.validate();
    return series;
}

/// Thinning with a kernel switch at s2: events before s2 are driven by
/// `before`; from s2 on, the intensity applies `after` to the entire history.
inline EventSeries simulate_regime_change(const KernelParams& before,
                                          const KernelParams& after, double s2,
                                          double horizon, std::uint64_t seed,
                                          std::size_t max_events = 100000) {
    before.require_valid();
    after.require_valid();
    if (!(s2 > 0.0) || !(s2 < horizon))
        throw std::invalid_argument("simulate_regime_change: need 0 < s2 < horizon");
    Rng rng(seed);
    EventSeries s = detail::thinning_core(before, &after, s2, horizon, rng, max_events);
    s.validate();
    return s;
}

}  // namespace hawkes
