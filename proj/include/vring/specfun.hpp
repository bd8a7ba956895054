#pragma once

// Half-integer Bessel functions J_{3/2}, J_{5/2}, their first zeros, and the
// profile constants B(kappa), C(kappa) of the explicit vortex family.
//
// Only these two orders are ever needed, so the closed spherical-Bessel forms
//   J_{3/2}(x) = sqrt(2/(pi x)) (sin x / x - cos x)
//   J_{5/2}(x) = sqrt(2/(pi x)) ((3/x^2 - 1) sin x - (3/x) cos x)
// are the primary evaluation path, with an ascending series below x = 0.5
// where the closed forms lose digits to cancellation.

#include <cmath>
#include <stdexcept>
#include <string>

namespace vring::specfun {

inline constexpr double kPi = 3.14159265358979323846;

enum class BesselOrder { three_halves, five_halves };

namespace detail {

// J_nu(x) / x^nu for nu = 3/2 resp. 5/2, by the ascending series
//   sum_k (-1)^k x^{2k} / (2^{2k+nu} k! Gamma(k+nu+1)).
// Finite at x = 0 and free of cancellation for small x.
inline double scaled_j_series(double x, double nu) {
    double x2 = x * x;
    double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 30; ++k) {
        term *= -x2 / (4.0 * k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double j32_closed(double x) {
    return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
}

inline double j52_closed(double x) {
    return std::sqrt(2.0 / (kPi * x)) * ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 * std::cos(x) / x);
}

}  // namespace detail

// J_{3/2}(x) / x^{3/2}; defined and positive at x = 0.
inline double scaled_j32(double x) {
    if (x < 0.5) return detail::scaled_j_series(x, 1.5);
    return detail::j32_closed(x) / (x * std::sqrt(x));
}

// J_{5/2}(x) / x^{5/2}; defined and positive at x = 0.
inline double scaled_j52(double x) {
    if (x < 0.5) return detail::scaled_j_series(x, 2.5);
    return detail::j52_closed(x) / (x * x * std::sqrt(x));
}

inline double bessel_j_half(BesselOrder order, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_j_half: requires x > 0");
    if (order == BesselOrder::three_halves) {
        if (x < 0.5) return scaled_j32(x) * x * std::sqrt(x);
        return detail::j32_closed(x);
    }
    if (x < 0.5) return scaled_j52(x) * x * x * std::sqrt(x);
    return detail::j52_closed(x);
}

// First positive zero, bracketed by a coarse scan and bisected to 1e-12.
inline double bessel_zero(BesselOrder order) {
    auto f = [order](double x) { return bessel_j_half(order, x); };
    double lo = 0.5, hi = lo;
    double flo = f(lo);
    for (double x = 0.75; x < 30.0; x += 0.25) {
        double fx = f(x);
        if (flo > 0.0 && fx <= 0.0) { hi = x; break; }
        lo = x;
        flo = fx;
    }
    if (hi == 0.5) throw std::runtime_error("bessel_zero: no sign change found");
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double first_zero_32() {
    static const double z = bessel_zero(BesselOrder::three_halves);
    return z;
}

inline double first_zero_52() {
    static const double z = bessel_zero(BesselOrder::five_halves);
    return z;
}

// B(kappa) = J_{3/2}(kappa) / (kappa J_{5/2}(kappa)), strictly decreasing on
// (0, c_{5/2}) from +inf to -inf; evaluated through the scaled functions so
// the small-kappa limit B ~ 5/kappa^2 comes out clean.
inline double profile_B(double kappa) {
    return scaled_j32(kappa) / (kappa * kappa * scaled_j52(kappa));
}

// C(kappa) = kappa^{1/2} / J_{5/2}(kappa).
inline double profile_C(double kappa) {
    return 1.0 / (kappa * kappa * scaled_j52(kappa));
}

// Solves lambda1 = (3/2) W B(kappa) lambda2 for kappa in (0, c_{5/2}) by
// bisection on the decreasing B. lambda1 = 0 gives kappa = c_{3/2} exactly.
inline double find_kappa(double lambda1, double lambda2, double W) {
    if (!(lambda2 > 0.0)) throw std::invalid_argument("find_kappa: requires lambda2 > 0");
    if (!(W > 0.0)) throw std::invalid_argument("find_kappa: requires W > 0");
    if (lambda1 == 0.0) return first_zero_32();
    const double target = 2.0 * lambda1 / (3.0 * W * lambda2);
    double lo = 1e-6, hi = first_zero_52() - 1e-9;
    if (target > profile_B(lo) || target < profile_B(hi)) {
        throw std::domain_error("find_kappa: target " + std::to_string(target) +
                                " outside the evaluable range of B");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (profile_B(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace vring::specfun
