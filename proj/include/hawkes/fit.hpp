#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/core.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/optimize.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// Box-constrained MLE configuration. Bounds cover hour-scale human
/// communication dynamics; optimization runs over log-parameters with starts
/// drawn log-uniformly inside the box.
struct FitConfig {
    KernelFamily family = KernelFamily::PowerLaw;
    double kappa_lo = 1e-6, kappa_hi = 1e4;
    double theta_lo = 1e-3, theta_hi = 1e2;
    double c_lo = 1e-4, c_hi = 1e3;  // hours, PL only
    int n_starts = 10;
    double tolerance = 1e-5;  // L2 gradient norm per event, natural parameters
    int max_iterations = 500;
    std::uint64_t seed = 0;

    void require_valid() const {
        if (!(kappa_lo >= 1e-6) || !(theta_lo > 0.0) || !(c_lo > 0.0))
            throw std::invalid_argument("FitConfig: lower bounds must be positive (kappa_lo >= 1e-6)");
        if (!(kappa_lo < kappa_hi) || !(theta_lo < theta_hi) || !(c_lo < c_hi))
            throw std::invalid_argument("FitConfig: empty parameter box");
        if (n_starts < 1) throw std::invalid_argument("FitConfig: n_starts must be >= 1");
    }
};

struct StartDiagnostic {
    double nll = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

struct FittedModel {
    KernelParams params;
    double nll = std::numeric_limits<double>::infinity();
    double n_star = 0.0;
    bool converged = false;
    std::size_t n_events = 0;
    double train_window_end = 0.0;         // fitted over [0, train_window_end]
    std::vector<StartDiagnostic> starts;   // per-start diagnostics, start order
};

namespace detail {

inline FittedModel fit_group(std::span<const EventSeries> group, const FitConfig& cfg) {
    cfg.require_valid();
    if (group.empty()) throw std::invalid_argument("fit: empty series group");
    std::size_t total_events = 0;
    double window_end = 0.0;
    for (const auto& s : group) {
        s.validate();
        total_events += s.size();
        window_end = std::max(window_end, s.observation_end);
    }
    if (total_events < 2) throw std::invalid_argument("fit: need at least 2 events");

    const bool pl = cfg.family == KernelFamily::PowerLaw;
    const std::size_t dim = pl ? 3 : 2;

    opt::Box box;
    box.lo = {std::log(cfg.kappa_lo), std::log(cfg.theta_lo)};
    box.hi = {std::log(cfg.kappa_hi), std::log(cfg.theta_hi)};
    if (pl) {
        box.lo.push_back(std::log(cfg.c_lo));
        box.hi.push_back(std::log(cfg.c_hi));
    }

    auto params_at = [&](std::span<const double> z) {
        KernelParams p;
        p.family = cfg.family;
        p.kappa = std::exp(z[0]);
        p.theta = std::exp(z[1]);
        p.c = pl ? std::exp(z[2]) : 1.0;
        return p;
    };

    // negative joint log-likelihood over log-parameters
    opt::Objective objective = [&](std::span<const double> z, std::span<double> grad) {
        const KernelParams p = params_at(z);
        const LogLikGradient g = joint_log_likelihood_gradient(p, group);
        grad[0] = -g.grad[0] * p.kappa;
        grad[1] = -g.grad[1] * p.theta;
        if (pl) grad[2] = -g.grad[2] * p.c;
        return -g.value;
    };

    opt::Options options;
    options.max_iterations = cfg.max_iterations;
    const double n_scale = static_cast<double>(total_events);
    options.stop = [&](std::span<const double> z, std::span<const double> pg) {
        double sq = 0.0;
        for (std::size_t i = 0; i < pg.size(); ++i) {
            const double natural = pg[i] / std::exp(z[i]);  // dNLL/dp from dNLL/dlog p
            sq += natural * natural;
        }
        return std::sqrt(sq) / n_scale < cfg.tolerance;
    };

    FittedModel best;
    best.n_events = total_events;
    best.train_window_end = window_end;
    best.starts.reserve(static_cast<std::size_t>(cfg.n_starts));

    std::vector<opt::Result> results;
    results.reserve(static_cast<std::size_t>(cfg.n_starts));
    for (int start = 0; start < cfg.n_starts; ++start) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(start));
        std::vector<double> z0(dim);
        for (std::size_t i = 0; i < dim; ++i) z0[i] = rng.uniform(box.lo[i], box.hi[i]);
        results.push_back(opt::minimize_box(objective, std::move(z0), box, options));
        const opt::Result& r = results.back();
        best.starts.push_back({r.f, r.converged, r.iterations});
    }

    // lowest NLL among converged starts; fall back to the best finite
    // incumbent when nothing converged (degenerate starts are skipped)
    int pick = -1;
    for (int i = 0; i < cfg.n_starts; ++i) {
        const opt::Result& r = results[static_cast<std::size_t>(i)];
        if (!std::isfinite(r.f)) continue;
        if (pick < 0) {
            pick = i;
            continue;
        }
        const opt::Result& cur = results[static_cast<std::size_t>(pick)];
        if (r.converged != cur.converged ? r.converged : r.f < cur.f) pick = i;
    }
    if (pick >= 0) {
        const opt::Result& r = results[static_cast<std::size_t>(pick)];
        best.params = params_at(r.x);
        best.nll = r.f;
        best.converged = r.converged;
    }
    best.n_star = branching_factor(best.params);
    return best;
}

}  // namespace detail

/// Maximum-likelihood fit of one series: best converged result across
/// n_starts projected quasi-Newton runs (lowest NLL); if no start converges,
/// the best incumbent is returned with converged = false.
inline FittedModel fit_series(const EventSeries& series, const FitConfig& cfg) {
    if (series.size() < 2) throw std::invalid_argument("fit_series: need at least 2 events");
    return detail::fit_group(std::span<const EventSeries>(&series, 1), cfg);
}

/// Joint MLE across a group of series sharing one parameter set.
inline FittedModel fit_joint(std::span<const EventSeries> group, const FitConfig& cfg) {
    return detail::fit_group(group, cfg);
}

}  // namespace hawkes
