#pragma once

// Stream/vortex-line tracing. In coordinates y = (z, r^2/2) the cross-section
// motion is canonically Hamiltonian with Hamiltonian Psi, so an orbit is the
// closed level curve Psi = l; the azimuthal angle accumulates as
// theta' = Gamma(l) / r(tau)^2, and Theta(l) is its increment over one period.
// Closed versus quasi-periodic is decided, at finite precision, by whether a
// continued-fraction convergent p/q with q <= 1000 matches Theta/2pi to 1e-9.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vring/interp.hpp"
#include "vring/model.hpp"
#include "vring/ode.hpp"
#include "vring/parallel.hpp"

namespace vring::dynamics {

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Classification {
    bool closed = false;
    long p = 0;      // convergent numerator when closed
    long q_den = 1;  // convergent denominator when closed
    double match_error = 0.0;
};

struct TorusDiagnostics {
    double level = 0.0;
    double period = 0.0;
    double theta_increment = 0.0;
    double rotation_ratio = 0.0;   // Theta / 2 pi
    Classification cls;
    double drift = 0.0;            // max |Psi - l| along the orbit
    std::string note;
    bool ok = false;
};

struct OrbitSample {
    double tau, z, r, theta;
};

struct Orbit {
    std::vector<OrbitSample> samples;
    double period = 0.0;
    double theta_increment = 0.0;
    double drift = 0.0;
    double start_r = 0.0;
};

// Best rational approximation with bounded denominator, by continued-fraction
// convergents.
inline Classification classify_ratio(double x, long max_den = 1000, double tol = 1e-9) {
    Classification out;
    double best_err = 1e300;
    long best_p = 0, best_q = 1;
    // convergents of |x|
    double a = std::abs(x);
    long p0 = 1, q0 = 0;
    long p1 = static_cast<long>(std::floor(a)), q1 = 1;
    double frac = a - std::floor(a);
    {
        double err = std::abs(a - static_cast<double>(p1));
        if (err < best_err) { best_err = err; best_p = p1; best_q = 1; }
    }
    for (int it = 0; it < 64 && frac > 1e-15; ++it) {
        double inv = 1.0 / frac;
        long ai = static_cast<long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        double err = std::abs(a - static_cast<double>(p2) / static_cast<double>(q2));
        if (err < best_err) { best_err = err; best_p = p2; best_q = q2; }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    out.match_error = best_err;
    if (best_err <= tol) {
        out.closed = true;
        out.p = x < 0 ? -best_p : best_p;
        out.q_den = best_q;
    }
    return out;
}

struct TraceOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
    double drift_cap_rel = 1e-7;   // per-step rejection threshold, relative to l0
    int max_crossings_scan = 64;
};

class Tracer {
public:
    explicit Tracer(const StreamSolution& sol)
        : surface_(sol.shifted()), profile_(sol.profile()) {
        const GridField Psi = sol.shifted();
        const AxiGrid& g = Psi.grid;
        l0_ = 0.0;
        for (int j = 1; j < g.nr - 1; ++j)
            for (int i = 1; i < g.nz - 1; ++i)
                if (Psi(i, j) > l0_) { l0_ = Psi(i, j); zi_ = i; rj_ = j; }
        grid_ = g;
    }

    double l0() const { return l0_; }
    const SwirlProfile& profile() const { return profile_; }
    const BicubicField& surface() const { return surface_; }

    // Outer intersection of {Psi = l} with the section z = 0.
    double section_start(double l) const {
        if (!(l > 0.0) || !(l < l0_))
            throw TraceError("trace: level " + std::to_string(l) + " outside (0, l0)");
        double rlo = grid_.r(rj_), rhi = rlo;
        double vlo = surface_.value(0.0, rlo);
        if (vlo < l) throw TraceError("trace: level above the interpolated maximum");
        for (int j = rj_ + 1; j < grid_.nr; ++j) {
            double rv = grid_.r(j);
            double v = surface_.value(0.0, rv);
            if (v < l) { rhi = rv; break; }
            rlo = rv;
        }
        if (rhi == grid_.r(rj_)) throw TraceError("trace: no outer crossing of the level");
        for (int it = 0; it < 200 && rhi - rlo > 1e-14 * grid_.R; ++it) {
            double mid = 0.5 * (rlo + rhi);
            (surface_.value(0.0, mid) >= l ? rlo : rhi) = mid;
        }
        return 0.5 * (rlo + rhi);
    }

    // One cross-section period starting on z = 0 at the outer branch.
    Orbit trace_cross_section(double l, const TraceOptions& opts = {}) const {
        const double r0 = section_start(l);
        const double Gam = profile_.Gamma(l);
        RK45<3> rk;
        rk.rtol = opts.rtol;
        rk.atol = opts.atol * std::max(1.0, r0 * r0);
        using State = RK45<3>::State;  // (z, y2 = r^2/2, theta)
        auto rhs = [&](const State& s, State& d) {
            double r = std::sqrt(2.0 * s[1]);
            auto e = surface_.eval(s[0], r);
            d[0] = e.dr / r;
            d[1] = -e.dz;
            d[2] = Gam / (r * r);
        };
        const double drift_cap = opts.drift_cap_rel * l0_;
        auto reject = [&](const State& s) {
            double r = std::sqrt(std::max(2.0 * s[1], 0.0));
            if (!(r > 0.0)) return true;
            return std::abs(surface_.value(s[0], r) - l) > drift_cap;
        };
        State y{0.0, 0.5 * r0 * r0, 0.0};
        State d0;
        rhs(y, d0);
        const double zdir = d0[0] > 0.0 ? 1.0 : -1.0;
        Orbit orbit;
        orbit.start_r = r0;
        double tau = 0.0;
        double h = 1e-3 / std::max({std::abs(d0[0]), std::abs(d0[1]), 1e-12});
        double hnext = h;
        orbit.samples.push_back({0.0, 0.0, r0, 0.0});
        int crossings = 0;
        long steps = 0;
        while (true) {
            if (++steps > rk.max_steps) throw TraceError("trace: step cap exceeded");
            State yprev = y;
            double tprev = tau;
            h = hnext;
            if (!rk.step(rhs, tau, y, h, hnext, reject))
                throw TraceError("trace: step size collapsed (drift guard)");
            double r = std::sqrt(2.0 * y[1]);
            orbit.drift = std::max(orbit.drift, std::abs(surface_.value(y[0], r) - l));
            orbit.samples.push_back({tau, y[0], r, y[2]});
            // section crossing: sign change of z with matching direction
            if (yprev[0] != 0.0 && (yprev[0] < 0.0) != (y[0] < 0.0)) {
                State d;
                rhs(y, d);
                if (d[0] * zdir > 0.0) {
                    // bisect the crossing by re-integration from yprev
                    State a = yprev;
                    double ta = tprev, dt = tau - tprev;
                    for (int it = 0; it < 200 && std::abs(a[0]) > 1e-13 * grid_.R; ++it) {
                        dt *= 0.5;
                        State b = a;
                        double tb = ta, hh = dt, hn = dt;
                        if (!rk.step(rhs, tb, b, hh, hn, reject)) break;
                        if ((b[0] < 0.0) == (yprev[0] < 0.0)) { a = b; ta = tb; }
                    }
                    orbit.period = ta;
                    orbit.theta_increment = a[2];
                    double rr = std::sqrt(2.0 * a[1]);
                    orbit.drift = std::max(orbit.drift, std::abs(surface_.value(a[0], rr) - l));
                    orbit.samples.push_back({ta, a[0], rr, a[2]});
                    return orbit;
                }
                if (++crossings > opts.max_crossings_scan)
                    throw TraceError("trace: no matching-direction return found");
            }
        }
    }

    TorusDiagnostics theta_increment(double l, const TraceOptions& opts = {}) const {
        TorusDiagnostics d;
        d.level = l;
        Orbit orbit = trace_cross_section(l, opts);
        d.period = orbit.period;
        d.theta_increment = orbit.theta_increment;
        d.rotation_ratio = orbit.theta_increment / (2.0 * specfun::kPi);
        d.cls = classify_ratio(d.rotation_ratio);
        d.drift = orbit.drift;
        d.ok = true;
        return d;
    }

    std::vector<TorusDiagnostics> torus_spectrum(int n_levels, const TraceOptions& opts = {}) const {
        std::vector<TorusDiagnostics> out(n_levels);
        parallel_for(static_cast<std::size_t>(n_levels), [&](std::size_t k) {
            double l = l0_ * (k + 1.0) / (n_levels + 1.0);
            try {
                out[k] = theta_increment(l, opts);
            } catch (const std::exception& e) {
                out[k].level = l;
                out[k].ok = false;
                out[k].note = e.what();
            }
        });
        return out;
    }

    // Independent 3d route: integrate the Cartesian stream line xdot = u(x)
    // from (r0, 0, 0) until the first matching-direction return to z = 0, and
    // accumulate the azimuthal angle along the way.
    struct Trace3d {
        double period = 0.0;
        double delta_theta = 0.0;
        std::vector<std::array<double, 3>> polyline;
    };

    Trace3d trace_streamline_3d(double l, const TraceOptions& opts = {},
                                bool keep_polyline = false) const {
        const double r0 = section_start(l);
        RK45<4> rk;
        rk.rtol = opts.rtol;
        rk.atol = opts.atol * std::max(1.0, r0);
        using State = RK45<4>::State;  // (x, y, z, theta)
        auto rhs = [&](const State& s, State& d) {
            double r = std::hypot(s[0], s[1]);
            auto e = surface_.eval(s[2], r);
            double ur = -e.dz / r;
            double uth = profile_.Gamma(e.value) / r;
            double uz = e.dr / r;
            double cx = s[0] / r, sy = s[1] / r;
            d[0] = ur * cx - uth * sy;
            d[1] = ur * sy + uth * cx;
            d[2] = uz;
            d[3] = (s[0] * d[1] - s[1] * d[0]) / (r * r);
        };
        auto reject = [&](const State&) { return false; };
        State y{r0, 0.0, 0.0, 0.0};
        State d0;
        rhs(y, d0);
        const double zdir = d0[2] > 0.0 ? 1.0 : -1.0;
        Trace3d out;
        double tau = 0.0;
        double h = 1e-3 / std::max({std::abs(d0[0]), std::abs(d0[1]), std::abs(d0[2]), 1e-12});
        double hnext = h;
        long steps = 0;
        if (keep_polyline) out.polyline.push_back({y[0], y[1], y[2]});
        while (true) {
            if (++steps > rk.max_steps) throw TraceError("trace3d: step cap exceeded");
            State yprev = y;
            double tprev = tau;
            h = hnext;
            if (!rk.step(rhs, tau, y, h, hnext, reject))
                throw TraceError("trace3d: step size collapsed");
            if (keep_polyline) out.polyline.push_back({y[0], y[1], y[2]});
            if (yprev[2] != 0.0 && (yprev[2] < 0.0) != (y[2] < 0.0)) {
                State d;
                rhs(y, d);
                if (d[2] * zdir > 0.0) {
                    State a = yprev;
                    double ta = tprev, dt = tau - tprev;
                    for (int it = 0; it < 200 && std::abs(a[2]) > 1e-13 * grid_.R; ++it) {
                        dt *= 0.5;
                        State b = a;
                        double tb = ta, hh = dt, hn = dt;
                        if (!rk.step(rhs, tb, b, hh, hn, reject)) break;
                        if ((b[2] < 0.0) == (yprev[2] < 0.0)) { a = b; ta = tb; }
                    }
                    out.period = ta;
                    out.delta_theta = a[3];
                    return out;
                }
            }
        }
    }

private:
    BicubicField surface_;
    SwirlProfile profile_;
    AxiGrid grid_;
    double l0_ = 0.0;
    int zi_ = 0, rj_ = 0;
};

}  // namespace vring::dynamics
