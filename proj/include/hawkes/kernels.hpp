#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hawkes {

enum class KernelFamily { Exponential, PowerLaw };

inline std::string to_string(KernelFamily f) {
    return f == KernelFamily::Exponential ? "EXP" : "PL";
}

inline KernelFamily kernel_family_from_string(const std::string& s) {
    if (s == "EXP" || s == "exp") return KernelFamily::Exponential;
    if (s == "PL" || s == "pl") return KernelFamily::PowerLaw;
    throw std::invalid_argument("unknown kernel family: " + s);
}

/// Parameters of one triggering kernel.
///   EXP: phi(t) = kappa * theta * exp(-theta * t)
///   PL:  phi(t) = kappa * (t + c)^-(1 + theta)
struct KernelParams {
    KernelFamily family = KernelFamily::Exponential;
    double kappa = 0.0;  // scale, >= 0
    double theta = 1.0;  // decay rate (EXP) or tail exponent (PL), > 0
    double c = 1.0;      // shift in hours, > 0 (PL only)

    static KernelParams exponential(double kappa, double theta) {
        return {KernelFamily::Exponential, kappa, theta, 1.0};
    }
    static KernelParams power_law(double kappa, double c, double theta) {
        return {KernelFamily::PowerLaw, kappa, theta, c};
    }

    std::size_t dim() const { return family == KernelFamily::PowerLaw ? 3 : 2; }

    bool valid() const {
        if (!(kappa >= 0.0) || !(theta > 0.0)) return false;
        if (family == KernelFamily::PowerLaw && !(c > 0.0)) return false;
        return true;
    }

    void require_valid() const {
        if (!valid()) throw std::invalid_argument("invalid kernel parameters");
    }
};

namespace detail {
// x^-e computed as exp(-e * ln x); stays finite for tiny x where pow underflows
// in intermediate forms.
inline double neg_pow(double x, double e) { return std::exp(-e * std::log(x)); }
}  // namespace detail

/// Kernel density phi(t) at elapsed time t >= 0, in events/hour.
inline double kernel_value(const KernelParams& p, double t) {
    if (!(t >= 0.0)) throw std::domain_error("kernel_value: t must be >= 0");
    if (p.family == KernelFamily::Exponential)
        return p.kappa * p.theta * std::exp(-p.theta * t);
    return p.kappa * detail::neg_pow(t + p.c, 1.0 + p.theta);
}

/// Expected direct offspring in the elapsed-time window [a, b], 0 <= a <= b.
/// b may be +infinity.
inline double kernel_integral(const KernelParams& p, double a, double b) {
    if (!(a >= 0.0) || !(a <= b)) throw std::domain_error("kernel_integral: need 0 <= a <= b");
    if (a == b) return 0.0;
    if (p.family == KernelFamily::Exponential) {
        const double upper = std::isinf(b) ? 0.0 : std::exp(-p.theta * b);
        return p.kappa * (std::exp(-p.theta * a) - upper);
    }
    const double upper = std::isinf(b) ? 0.0 : detail::neg_pow(b + p.c, p.theta);
    return p.kappa / p.theta * (detail::neg_pow(a + p.c, p.theta) - upper);
}

/// Branching factor n* = integral of phi over [0, inf).
inline double branching_factor(const KernelParams& p) {
    if (p.family == KernelFamily::Exponential) return p.kappa;
    return p.kappa * detail::neg_pow(p.c, p.theta) / p.theta;
}

}  // namespace hawkes
