#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hawkes::opt {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Objective callback: returns f(x) and fills the gradient.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct Options {
    int max_iterations = 500;
    double grad_tolerance = 1e-8;  // inf-norm of the projected gradient
    /// Optional custom convergence test on (x, projected gradient); when set
    /// it replaces the grad_tolerance check.
    std::function<bool(std::span<const double>, std::span<const double>)> stop;
};

struct Result {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    std::vector<double> grad;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline void clip(std::vector<double>& x, const Box& box) {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::min(box.hi[i], std::max(box.lo[i], x[i]));
}

}  // namespace detail

/// Projected BFGS for low-dimensional box-constrained minimization. Gradient
/// components pushing into an active bound are zeroed; the inverse-Hessian
/// estimate is rebuilt whenever the active set changes.
inline Result minimize_box(const Objective& fg, std::vector<double> x0, const Box& box,
                           const Options& opts = {}) {
    const std::size_t d = x0.size();
    if (box.lo.size() != d || box.hi.size() != d)
        throw std::invalid_argument("minimize_box: box dimension mismatch");
    for (std::size_t i = 0; i < d; ++i)
        if (!(box.lo[i] <= box.hi[i]))
            throw std::invalid_argument("minimize_box: empty box");

    detail::clip(x0, box);

    Result res;
    res.x = x0;
    res.grad.assign(d, 0.0);
    res.f = fg(res.x, res.grad);
    if (!std::isfinite(res.f)) return res;  // caller discards this start

    // dense inverse-Hessian estimate
    std::vector<double> H(d * d, 0.0);
    auto reset_H = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) H[i * d + i] = 1.0;
    };
    reset_H();

    auto active_set = [&](const std::vector<double>& x, const std::vector<double>& g,
                          std::vector<bool>& act) {
        for (std::size_t i = 0; i < d; ++i) {
            const bool at_lo = x[i] <= box.lo[i] + 1e-14 * (1.0 + std::fabs(box.lo[i]));
            const bool at_hi = x[i] >= box.hi[i] - 1e-14 * (1.0 + std::fabs(box.hi[i]));
            act[i] = (at_lo && g[i] > 0.0) || (at_hi && g[i] < 0.0);
        }
    };

    std::vector<double> g = res.grad, pg(d), dir(d), x_new(d), g_new(d), s(d), y(d);
    std::vector<bool> act(d), act_new(d);

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter - 1;
        active_set(res.x, g, act);
        double pg_norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            pg[i] = act[i] ? 0.0 : g[i];
            pg_norm = std::max(pg_norm, std::fabs(pg[i]));
        }
        const bool done = opts.stop ? opts.stop(res.x, pg) : (pg_norm < opts.grad_tolerance);
        if (done) {
            res.converged = true;
            return res;
        }

        // quasi-Newton direction restricted to the free variables
        double descent = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double v = 0.0;
            if (!act[i])
                for (std::size_t j = 0; j < d; ++j)
                    if (!act[j]) v += H[i * d + j] * g[j];
            dir[i] = -v;
            descent += dir[i] * g[i];
        }
        if (!(descent < 0.0)) {
            reset_H();
            descent = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dir[i] = -pg[i];
                descent += dir[i] * g[i];
            }
            if (!(descent < 0.0)) return res;  // projected gradient exhausted
        }

        // backtracking Armijo search along the projected path
        double alpha = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < d; ++i) x_new[i] = res.x[i] + alpha * dir[i];
            detail::clip(x_new, box);
            double step_dot_g = 0.0;
            for (std::size_t i = 0; i < d; ++i) step_dot_g += (x_new[i] - res.x[i]) * g[i];
            f_new = fg(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= res.f + 1e-4 * step_dot_g && step_dot_g < 0.0) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return res;  // stalled; incumbent returned unconverged

        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = x_new[i] - res.x[i];
            y[i] = g_new[i] - g[i];
            sy += s[i] * y[i];
            ss += s[i] * s[i];
            yy += y[i] * y[i];
        }
        active_set(x_new, g_new, act_new);
        if (act_new != act) {
            reset_H();
        } else if (sy > 1e-12 * std::sqrt(ss * yy)) {
            // inverse BFGS update: H <- (I - r s y')H(I - r y s') + r s s'
            const double r = 1.0 / sy;
            std::vector<double> Hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) Hy[i] += H[i * d + j] * y[j];
            double yHy = 0.0;
            for (std::size_t i = 0; i < d; ++i) yHy += y[i] * Hy[i];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    H[i * d + j] += r * ((1.0 + r * yHy) * s[i] * s[j] - Hy[i] * s[j] -
                                         s[i] * Hy[j]);
        }

        res.x = x_new;
        res.f = f_new;
        g = g_new;
        res.grad = g;
    }
    res.iterations = opts.max_iterations;
    return res;
}

}  // namespace hawkes::opt
