#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/core.hpp"
#include "hawkes/kernels.hpp"

namespace hawkes {

/// Event intensity at time t: sum of kernel contributions from strictly
/// earlier events. The background rate is zero for call-series modeling, so
/// the intensity before the first event is 0.
inline double intensity(const KernelParams& p, const EventSeries& series, double t) {
    double lambda = 0.0;
    for (double ti : series.times) {
        if (ti >= t) break;
        lambda += kernel_value(p, t - ti);
    }
    return lambda;
}

/// Log-likelihood value together with its gradient in (kappa, theta[, c]).
struct LogLikGradient {
    double value = 0.0;
    std::array<double, 3> grad{};  // d/dkappa, d/dtheta, d/dc (last unused for EXP)
    std::size_t dim = 2;
};

namespace detail {

// Shared evaluation core. The process is conditioned on the initial event:
// log-intensity terms run over j >= 1 and the compensator covers the offspring
// mass of every event, the initial one included. Sums over event pairs are
// computed with the largest kernel term factored out so that long gaps with
// fast decay cannot underflow the intensity to zero.
template <bool WithGrad>
LogLikGradient log_likelihood_impl(const KernelParams& p, const EventSeries& series) {
    p.require_valid();
    const auto& t = series.times;
    const std::size_t n = t.size();
    const double T = series.observation_end;

    LogLikGradient out;
    out.dim = p.dim();

    const bool exp_family = p.family == KernelFamily::Exponential;
    const double kappa = p.kappa, theta = p.theta, c = p.c;

    if (n > 1 && kappa <= 0.0) {
        // zero intensity at every conditioned event: degenerate fit
        out.value = -std::numeric_limits<double>::infinity();
        return out;
    }

    double log_sum = 0.0;        // sum over j>=1 of log lambda(t_j)
    double d_theta_log = 0.0;    // d/dtheta of the log-intensity sum
    double d_c_log = 0.0;        // d/dc of the log-intensity sum (PL)

    for (std::size_t j = 1; j < n; ++j) {
        const double prev = t[j - 1];
        double s = 0.0;   // shifted kernel-term sum, largest term == 1
        double num_theta = 0.0;
        double num_c = 0.0;
        if (exp_family) {
            for (std::size_t i = 0; i < j; ++i) {
                const double w = std::exp(theta * (t[i] - prev));
                s += w;
                if constexpr (WithGrad) num_theta += (t[j] - t[i]) * w;
            }
            const double shift = -theta * (t[j] - prev);
            log_sum += std::log(kappa) + std::log(theta) + shift + std::log(s);
            if constexpr (WithGrad) d_theta_log += 1.0 / theta - num_theta / s;
        } else {
            const double lmin = std::log(t[j] - prev + c);
            for (std::size_t i = 0; i < j; ++i) {
                const double dc = t[j] - t[i] + c;
                const double li = std::log(dc);
                const double w = std::exp(-(1.0 + theta) * (li - lmin));
                s += w;
                if constexpr (WithGrad) {
                    num_theta += li * w;
                    num_c += w / dc;
                }
            }
            log_sum += std::log(kappa) - (1.0 + theta) * lmin + std::log(s);
            if constexpr (WithGrad) {
                d_theta_log -= num_theta / s;
                d_c_log -= (1.0 + theta) * num_c / s;
            }
        }
    }

    // Compensator: total offspring mass of all events within [0, T].
    double comp = 0.0;
    double d_kappa_comp = 0.0, d_theta_comp = 0.0, d_c_comp = 0.0;
    if (exp_family) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = T - t[i];
            const double eu = std::exp(-theta * u);
            comp += kappa * (1.0 - eu);
            if constexpr (WithGrad) {
                d_kappa_comp += 1.0 - eu;
                d_theta_comp += kappa * u * eu;
            }
        }
    } else {
        const double log_c = std::log(c);
        const double c_mt = std::exp(-theta * log_c);        // c^-theta
        const double c_m1t = std::exp(-(1.0 + theta) * log_c);  // c^-(1+theta)
        for (std::size_t i = 0; i < n; ++i) {
            const double u = T - t[i];
            const double log_uc = std::log(u + c);
            const double uc_mt = std::exp(-theta * log_uc);
            const double mass = (c_mt - uc_mt) / theta;
            comp += kappa * mass;
            if constexpr (WithGrad) {
                d_kappa_comp += mass;
                d_theta_comp += kappa * (-mass / theta +
                                         (-log_c * c_mt + log_uc * uc_mt) / theta);
                d_c_comp += kappa * (std::exp(-(1.0 + theta) * log_uc) - c_m1t);
            }
        }
    }

    out.value = log_sum - comp;
    if constexpr (WithGrad) {
        if (kappa <= 0.0)
            throw std::domain_error("log_likelihood_gradient: kappa must be > 0");
        const double m = static_cast<double>(n - 1);
        out.grad[0] = m / kappa - d_kappa_comp;
        out.grad[1] = d_theta_log - d_theta_comp;
        if (!exp_family) out.grad[2] = d_c_log - d_c_comp;
    }
    return out;
}

}  // namespace detail

/// Log-likelihood of the series under kernel p (nats). Returns -infinity when
/// the intensity vanishes at a conditioned event (kappa == 0); the -inf value
/// is the degenerate-fit flag.
inline double log_likelihood(const KernelParams& p, const EventSeries& series) {
    return detail::log_likelihood_impl<false>(p, series).value;
}

/// Log-likelihood and its analytic gradient. Requires kappa > 0.
inline LogLikGradient log_likelihood_gradient(const KernelParams& p,
                                              const EventSeries& series) {
    if (!(p.kappa > 0.0))
        throw std::domain_error("log_likelihood_gradient: kappa must be > 0");
    return detail::log_likelihood_impl<true>(p, series);
}

/// Joint log-likelihood of a series group sharing one parameter set.
struct JointLogLik {
    double value = 0.0;
    std::optional<std::size_t> degenerate_member;  // first member that returned -inf
};

inline JointLogLik joint_log_likelihood(const KernelParams& p,
                                        std::span<const EventSeries> group) {
    if (group.empty()) throw std::invalid_argument("joint_log_likelihood: empty group");
    JointLogLik out;
    for (std::size_t k = 0; k < group.size(); ++k) {
        const double v = log_likelihood(p, group[k]);
        if (std::isinf(v) && v < 0.0) {
            out.value = v;
            out.degenerate_member = k;
            return out;
        }
        out.value += v;
    }
    return out;
}

/// Joint value + gradient, summed member-wise in input order.
inline LogLikGradient joint_log_likelihood_gradient(const KernelParams& p,
                                                    std::span<const EventSeries> group) {
    if (group.empty())
        throw std::invalid_argument("joint_log_likelihood_gradient: empty group");
    LogLikGradient total;
    total.dim = p.dim();
    for (const auto& s : group) {
        const LogLikGradient g = log_likelihood_gradient(p, s);
        total.value += g.value;
        for (std::size_t i = 0; i < 3; ++i) total.grad[i] += g.grad[i];
    }
    return total;
}

}  // namespace hawkes
