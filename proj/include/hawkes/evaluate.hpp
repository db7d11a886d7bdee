#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/core.hpp"
#include "hawkes/fit.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

enum class SplitMode { EventCount, TimeFraction };

inline std::string to_string(SplitMode m) {
    return m == SplitMode::EventCount ? "events" : "time";
}

/// Temporal-holdout generalization score for one series.
struct HoldoutReport {
    double nll_train = 0.0;
    double nll_total = 0.0;
    double nll_holdout_per_event = 0.0;  // (nll_total - nll_train) / n_test
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double split_time = 0.0;  // hours; end of the training window
    FittedModel model;        // fitted on the training window
};

namespace detail {

/// Events strictly before `cutoff` as a series observed on [0, cutoff].
inline EventSeries prefix_window(const EventSeries& s, double cutoff) {
    EventSeries out;
    out.sender = s.sender;
    out.receiver = s.receiver;
    out.start_epoch = s.start_epoch;
    for (double t : s.times) {
        if (t >= cutoff) break;
        out.times.push_back(t);
    }
    out.observation_end = cutoff;
    return out;
}

inline std::size_t count_in(const EventSeries& s, double lo, double hi) {
    std::size_t n = 0;
    for (double t : s.times)
        if (t >= lo && t < hi) ++n;
    return n;
}

}  // namespace detail

/// Fits on the leading part of the series and scores generalization as the
/// holdout negative log-likelihood per test event: the model is evaluated over
/// the full window and the training NLL is subtracted, so that training events
/// stay in the conditioning history.
inline HoldoutReport holdout_eval(const EventSeries& series, const FitConfig& cfg,
                                  double split_fraction,
                                  SplitMode mode = SplitMode::EventCount) {
    series.validate();
    if (!(split_fraction > 0.0) || !(split_fraction < 1.0))
        throw std::invalid_argument("holdout_eval: split_fraction must be in (0, 1)");

    const std::size_t n = series.size();
    std::size_t n_train = 0;
    double train_end = 0.0;
    if (mode == SplitMode::EventCount) {
        n_train = static_cast<std::size_t>(
            std::ceil(split_fraction * static_cast<double>(n)));
        if (n_train >= n) n_train = n - 1;
        train_end = series.times[n_train - 1];
    } else {
        train_end = split_fraction * series.observation_end;
        for (double t : series.times)
            if (t <= train_end) ++n_train;
    }
    if (n_train < 2)
        throw std::invalid_argument("holdout_eval: training side has fewer than 2 events");
    if (n_train >= n)
        throw std::invalid_argument("holdout_eval: test side has no events");

    EventSeries train;
    train.sender = series.sender;
    train.receiver = series.receiver;
    train.times.assign(series.times.begin(),
                       series.times.begin() + static_cast<std::ptrdiff_t>(n_train));
    train.observation_end = train_end;

    HoldoutReport rep;
    rep.n_train = n_train;
    rep.n_test = n - n_train;
    rep.split_time = train_end;
    rep.model = fit_series(train, cfg);
    rep.nll_train = -log_likelihood(rep.model.params, train);
    rep.nll_total = -log_likelihood(rep.model.params, series);
    rep.nll_holdout_per_event =
        (rep.nll_total - rep.nll_train) / static_cast<double>(rep.n_test);
    return rep;
}

struct SummaryStats {
    double median = 0.0, q25 = 0.0, q75 = 0.0, variance = 0.0;
    std::size_t n = 0;
};

inline SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    s.n = values.size();
    if (values.empty()) return s;
    s.variance = sample_variance(values);
    std::sort(values.begin(), values.end());
    s.median = quantile_sorted(values, 0.5);
    s.q25 = quantile_sorted(values, 0.25);
    s.q75 = quantile_sorted(values, 0.75);
    return s;
}

struct PairedHoldout {
    std::size_t index = 0;
    std::string sender, receiver;
    std::size_t n_events = 0;
    double score_exp = 0.0;  // holdout NLL per event, exponential kernel
    double score_pl = 0.0;   // holdout NLL per event, power-law kernel
};

struct KernelComparisonReport {
    std::vector<PairedHoldout> pairs;
    SummaryStats exp_summary, pl_summary;
    std::size_t pl_wins = 0, exp_wins = 0, ties = 0;
    std::vector<std::pair<std::size_t, std::string>> failures;
};

/// Paired temporal-holdout comparison of the two kernel families over a
/// series set. Per-series failures are recorded and excluded from pairing.
inline KernelComparisonReport compare_kernels(std::span<const EventSeries> series_set,
                                              const FitConfig& cfg_exp,
                                              const FitConfig& cfg_pl,
                                              double split_fraction,
                                              SplitMode mode = SplitMode::EventCount,
                                              int jobs = 1) {
    if (series_set.empty()) throw std::invalid_argument("compare_kernels: empty series set");

    struct Slot {
        bool ok = false;
        std::string error;
        PairedHoldout pair;
    };
    std::vector<Slot> slots(series_set.size());
    parallel_for(series_set.size(), jobs, [&](std::size_t i) {
        Slot& slot = slots[i];
        try {
            FitConfig ce = cfg_exp;
            ce.family = KernelFamily::Exponential;
            FitConfig cp = cfg_pl;
            cp.family = KernelFamily::PowerLaw;
            const HoldoutReport he = holdout_eval(series_set[i], ce, split_fraction, mode);
            const HoldoutReport hp = holdout_eval(series_set[i], cp, split_fraction, mode);
            slot.pair = {i, series_set[i].sender, series_set[i].receiver,
                         series_set[i].size(), he.nll_holdout_per_event,
                         hp.nll_holdout_per_event};
            slot.ok = std::isfinite(slot.pair.score_exp) && std::isfinite(slot.pair.score_pl);
            if (!slot.ok) slot.error = "non-finite holdout score";
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    KernelComparisonReport rep;
    std::vector<double> exp_scores, pl_scores;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].ok) {
            rep.failures.emplace_back(i, slots[i].error);
            continue;
        }
        rep.pairs.push_back(slots[i].pair);
        exp_scores.push_back(slots[i].pair.score_exp);
        pl_scores.push_back(slots[i].pair.score_pl);
        if (slots[i].pair.score_pl < slots[i].pair.score_exp)
            ++rep.pl_wins;
        else if (slots[i].pair.score_exp < slots[i].pair.score_pl)
            ++rep.exp_wins;
        else
            ++rep.ties;
    }
    rep.exp_summary = summarize(std::move(exp_scores));
    rep.pl_summary = summarize(std::move(pl_scores));
    return rep;
}

/// Before/after generalization scores around a suspected tipping point.
struct ChangePointReport {
    std::string sender, receiver;
    double nll_before_per_event = 0.0;
    double nll_after_per_event = 0.0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;  // hours, s1 < s2 < s3
    bool artificial_s1 = false;
    bool degenerate = false;  // a score came out non-finite
};

/// Fits one model on events before s1 and scores it per event on [s1, s2);
/// fits a second on events before s2 and scores it on [s2, s3). A change at
/// s2 shows up as the second score degrading relative to the first.
inline ChangePointReport detect_change(const EventSeries& series, double s1, double s2,
                                       double s3, const FitConfig& cfg) {
    series.validate();
    if (!(s1 < s2) || !(s2 < s3))
        throw std::invalid_argument("detect_change: need s1 < s2 < s3");

    const auto need = [&](bool ok, const std::string& window) {
        if (!ok)
            throw std::invalid_argument("detect_change: window " + window +
                                        " has too few events");
    };
    need(detail::count_in(series, 0.0, s1) >= 2, "[0,S1)");
    need(detail::count_in(series, s1, s2) >= 1, "[S1,S2)");
    need(detail::count_in(series, 0.0, s2) >= 2, "[0,S2)");
    need(detail::count_in(series, s2, s3) >= 1, "[S2,S3)");

    ChangePointReport rep;
    rep.sender = series.sender;
    rep.receiver = series.receiver;
    rep.s1 = s1;
    rep.s2 = s2;
    rep.s3 = s3;

    const auto window_score = [&](double fit_end, double score_end) {
        const EventSeries train = detail::prefix_window(series, fit_end);
        const EventSeries full = detail::prefix_window(series, score_end);
        const FittedModel model = fit_series(train, cfg);
        const double nll_train = -log_likelihood(model.params, train);
        const double nll_total = -log_likelihood(model.params, full);
        const double n_test = static_cast<double>(full.size() - train.size());
        return (nll_total - nll_train) / n_test;
    };
    rep.nll_before_per_event = window_score(s1, s2);
    rep.nll_after_per_event = window_score(s2, s3);
    rep.degenerate = !std::isfinite(rep.nll_before_per_event) ||
                     !std::isfinite(rep.nll_after_per_event);
    return rep;
}

/// Artificial tipping point: the midpoint of [t0, s2] on the time axis, for
/// series lacking a surveyed change time.
inline double artificial_tipping_point(const EventSeries& series, double s2) {
    if (series.times.empty() || !(s2 > series.times.front()))
        throw std::invalid_argument("artificial_tipping_point: s2 must exceed the first event");
    return 0.5 * (series.times.front() + s2);
}

}  // namespace hawkes
