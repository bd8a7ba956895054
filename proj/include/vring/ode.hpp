#pragma once

// Adaptive Dormand-Prince 5(4) integrator on small fixed-size states, with a
// caller hook for extra step-rejection (Hamiltonian drift control) and event
// location by bisection of the final step.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace vring {

template <int N>
struct RK45 {
    using State = std::array<double, N>;
    using Rhs = std::function<void(const State&, State&)>;

    double rtol = 1e-11;
    double atol = 1e-13;
    double max_step = 1e30;
    long max_steps = 2000000;

    // One adaptive step from (t, y) with proposed size h (modified in place to
    // the size actually taken; hnext suggests the following size). err_scale
    // lets the caller reject steps on top of the embedded-error control.
    template <class Reject>
    bool step(const Rhs& f, double& t, State& y, double& h, double& hnext, Reject&& reject) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        State k1, k2, k3, k4, k5, k6, k7, yt, ynew;
        f(y, k1);
        for (int it = 0; it < 60; ++it) {
            auto comb = [&](const State& base, std::initializer_list<std::pair<const State*, double>> terms) {
                State out = base;
                for (auto& [k, c] : terms)
                    for (int m = 0; m < N; ++m) out[m] += h * c * (*k)[m];
                return out;
            };
            yt = comb(y, {{&k1, a21}});
            f(yt, k2);
            yt = comb(y, {{&k1, a31}, {&k2, a32}});
            f(yt, k3);
            yt = comb(y, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
            f(yt, k4);
            yt = comb(y, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
            f(yt, k5);
            yt = comb(y, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
            f(yt, k6);
            ynew = comb(y, {{&k1, b1}, {&k3, b3}, {&k4, b4}, {&k5, b5}, {&k6, b6}});
            f(ynew, k7);
            double err = 0.0;
            for (int m = 0; m < N; ++m) {
                double e = h * (e1 * k1[m] + e3 * k3[m] + e4 * k4[m] + e5 * k5[m] + e6 * k6[m] + e7 * k7[m]);
                double sc = atol + rtol * std::max(std::abs(y[m]), std::abs(ynew[m]));
                err = std::max(err, std::abs(e) / sc);
            }
            bool ok = err <= 1.0 && reject(ynew) == false;
            if (ok) {
                t += h;
                y = ynew;
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                hnext = h * std::clamp(fac, 0.2, 5.0);
                hnext = std::min(hnext, max_step);
                return true;
            }
            double fac = err > 1.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.7) : 0.5;
            h *= fac;
            if (!(h > 0.0) || h < 1e-15) return false;
        }
        return false;
    }
};

}  // namespace vring
