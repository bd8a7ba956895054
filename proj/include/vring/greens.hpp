#pragma once

// Green function of the Dirichlet problem -L psi = r^2 zeta on the half
// plane, its integral representation, and the pointwise stream-function
// bound as a verifiable diagnostic.
//
//   G(z,r,z',r') = (r r' / 2 pi) int_0^pi cos(theta) dtheta / sqrt(D),
//   D = |z-z'|^2 + |r-r'|^2 + 2 r r' (1 - cos theta).
//
// The radicand is the squared 5d distance |y - y'|^2 written in slice
// coordinates, so it is nonnegative; the agreement test against the 5d
// Newtonian-potential reduction pins this form down.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vring/grid.hpp"
#include "vring/model.hpp"
#include "vring/parallel.hpp"

namespace vring::greens {

struct KernelPoint {
    double z, r, zp, rp;
};

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [0, 1].
struct GL16 {
    std::array<double, 16> x, w;
    GL16() {
        static const double xs[8] = {
            0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
            0.3318686022821276498, 0.4213512761306353454, 0.5068999089322293900,
            0.5877157572407623290, 0.6630442669302152009};
        static const double ws[8] = {
            0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
            0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
            0.0781938957870703065, 0.0723457941088485062};
        for (int k = 0; k < 8; ++k) {
            x[2 * k] = 0.5 * (1.0 - xs[k]);
            x[2 * k + 1] = 0.5 * (1.0 + xs[k]);
            w[2 * k] = w[2 * k + 1] = 0.5 * ws[k];
        }
    }
};

inline const GL16& gl16() {
    static const GL16 g;
    return g;
}

template <class Fn>
double panel(Fn&& f, double a, double b) {
    const GL16& g = gl16();
    double acc = 0.0;
    for (int k = 0; k < 16; ++k) acc += g.w[k] * f(a + (b - a) * g.x[k]);
    return acc * (b - a);
}

}  // namespace detail

inline constexpr double kPi = 3.14159265358979323846;

// Kernel by panel quadrature in theta, graded geometrically toward theta = 0
// where the integrand peaks like 1/sqrt(s^2 + r r' theta^2) near the diagonal.
inline double green_kernel(const KernelPoint& p) {
    if (!(p.r > 0.0) || !(p.rp > 0.0)) {
        if (p.r < 0.0 || p.rp < 0.0) throw std::domain_error("green_kernel: negative radius");
        return 0.0;  // rr' prefactor
    }
    const double s2 = (p.z - p.zp) * (p.z - p.zp) + (p.r - p.rp) * (p.r - p.rp);
    if (s2 == 0.0) throw std::domain_error("green_kernel: coincident points");
    const double rr = p.r * p.rp;
    auto f = [&](double th) { return std::cos(th) / std::sqrt(s2 + 2.0 * rr * (1.0 - std::cos(th))); };
    const double xi = std::sqrt(s2 / (4.0 * rr));
    double acc = 0.0;
    if (xi >= 2.0) {
        for (int k = 0; k < 3; ++k) acc += detail::panel(f, kPi * k / 3.0, kPi * (k + 1) / 3.0);
    } else {
        double t0 = std::max(0.5 * std::sqrt(s2 / rr), 1e-14);
        t0 = std::min(t0, kPi / 8.0);
        acc += detail::panel(f, 0.0, t0);
        double a = t0;
        while (a < kPi) {
            double b = std::min(2.0 * a, kPi);
            acc += detail::panel(f, a, b);
            a = b;
        }
    }
    return rr / (2.0 * kPi) * acc;
}

inline double green_kernel(double z, double r, double zp, double rp) {
    return green_kernel(KernelPoint{z, r, zp, rp});
}

struct Target {
    double z, r;
};

// psi(z, r) = int G(z,r,z',r') zeta(z',r') r' dz' dr' over the support of
// zeta, by node-centered cell quadrature. Cells within a few spacings of the
// target are subsampled so the logarithmic diagonal stays integrable.
inline std::vector<double> apply_green(const GridField& zeta, const std::vector<Target>& targets) {
    const AxiGrid& g = zeta.grid;
    const double hz = g.hz(), hr = g.hr();
    const double h = std::max(hz, hr);
    struct Src {
        double z, r, w;
    };
    std::vector<Src> src;
    src.reserve(1024);
    for (int j = 1; j < g.nr; ++j)
        for (int i = 0; i < g.nz; ++i)
            if (zeta(i, j) != 0.0) src.push_back({g.z(i), g.r(j), zeta(i, j)});

    const int sub = 8;
    std::vector<double> out(targets.size(), 0.0);
    parallel_for(targets.size(), [&](std::size_t t) {
        const double zt = targets[t].z, rt = targets[t].r;
        if (rt <= 0.0) { out[t] = 0.0; return; }
        double acc = 0.0;
        const double near2 = (3.0 * h) * (3.0 * h);
        for (const Src& s : src) {
            double d2 = (s.z - zt) * (s.z - zt) + (s.r - rt) * (s.r - rt);
            if (d2 > near2) {
                acc += green_kernel(zt, rt, s.z, s.r) * s.w * s.r * hz * hr;
            } else {
                // local desingularized quadrature: sub x sub midpoint samples
                double local = 0.0;
                for (int a = 0; a < sub; ++a) {
                    for (int b = 0; b < sub; ++b) {
                        double zs = s.z + ((a + 0.5) / sub - 0.5) * hz;
                        double rs = s.r + ((b + 0.5) / sub - 0.5) * hr;
                        if (rs <= 0.0) continue;
                        double dd = (zs - zt) * (zs - zt) + (rs - rt) * (rs - rt);
                        if (dd == 0.0) continue;
                        local += green_kernel(zt, rt, zs, rs) * rs;
                    }
                }
                acc += local / (sub * sub) * s.w * hz * hr;
            }
        }
        out[t] = acc;
    });
    return out;
}

struct BoundReport {
    double c_star = 0.0;        // empirical constant in the pointwise bound
    double norm_r3 = 0.0;       // ||r^3 zeta||_1
    double norm_r1 = 0.0;       // ||r zeta||_1
    double norm_rb = 0.0;       // ||r^{1+2b} zeta^{1+b}||_1^{1/(1+b)}
    double beta = 0.0, delta = 0.0;
};

// Empirical constant in |psi| <= C min{r, r^{delta-1}} (||r^3 zeta||_1 +
// ||r zeta||_1 + ||r^{1+2b} zeta^{1+b}||_1^{1/(1+b)}), maximized over nodes.
inline BoundReport pointwise_bound_check(const StreamSolution& sol, double beta, double delta) {
    if (!(beta > 0.0) || beta > 1.0) throw std::invalid_argument("pointwise_bound_check: beta in (0,1]");
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("pointwise_bound_check: delta in (0,1)");
    const AxiGrid& g = sol.grid();
    GridField zeta = sol.zeta();
    BoundReport rep;
    rep.beta = beta;
    rep.delta = delta;
    const double h2 = g.hz() * g.hr();
    double s3 = 0.0, s1 = 0.0, sb = 0.0;
    for (int j = 1; j < g.nr; ++j) {
        double r = g.r(j);
        for (int i = 0; i < g.nz; ++i) {
            double zv = zeta(i, j);
            if (zv == 0.0) continue;
            s3 += std::pow(r, 3) * zv * h2;
            s1 += r * zv * h2;
            sb += std::pow(r, 1.0 + 2.0 * beta) * std::pow(zv, 1.0 + beta) * h2;
        }
    }
    rep.norm_r3 = s3;
    rep.norm_r1 = s1;
    rep.norm_rb = sb > 0.0 ? std::pow(sb, 1.0 / (1.0 + beta)) : 0.0;
    double norms = rep.norm_r3 + rep.norm_r1 + rep.norm_rb;
    if (norms == 0.0) return rep;  // zeta == 0: C* = 0 by convention
    for (int j = 1; j < g.nr; ++j) {
        double r = g.r(j);
        double env = std::min(r, std::pow(r, delta - 1.0));
        for (int i = 0; i < g.nz; ++i) {
            double ratio = std::abs(sol.psi(i, j)) / (env * norms);
            rep.c_star = std::max(rep.c_star, ratio);
        }
    }
    return rep;
}

// Impulse pi int r^3 zeta dz dr and circulation int r zeta dz dr.
inline std::pair<double, double> impulse_circulation(const GridField& zeta) {
    const AxiGrid& g = zeta.grid;
    const double h2 = g.hz() * g.hr();
    double imp = 0.0, circ = 0.0;
    for (int j = 1; j < g.nr; ++j) {
        double r = g.r(j);
        for (int i = 0; i < g.nz; ++i) {
            imp += std::pow(r, 3) * zeta(i, j);
            circ += r * zeta(i, j);
        }
    }
    return {kPi * imp * h2, circ * h2};
}

}  // namespace vring::greens
