#pragma once

// Discrete Stokes-stream operator L = dzz + drr - (1/r) dr, the weighted
// inner product (a,b) = 2 pi^2 int grad a . grad b (1/r) dz dr, and cell
// quadratures on the lattice, including subcell quadrature over {Psi > 0}
// with the cut cells clipped along the bilinear zero set.

#include <array>
#include <cmath>
#include <functional>

#include "vring/grid.hpp"

namespace vring {

inline constexpr double kTwoPiSq = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;

// Classical second-order stencil for L; defined on interior nodes, zero on
// the boundary rows/columns.
inline GridField apply_L(const GridField& f) {
    const AxiGrid& g = f.grid;
    GridField out(g);
    const double hz = g.hz(), hr = g.hr();
    for (int j = 1; j < g.nr - 1; ++j) {
        const double r = g.r(j);
        for (int i = 1; i < g.nz - 1; ++i) {
            double dzz = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (hz * hz);
            double drr = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (hr * hr);
            double dr = (f(i, j + 1) - f(i, j - 1)) / (2.0 * hr);
            out(i, j) = dzz + drr - dr / r;
        }
    }
    return out;
}

// Edge-based quadrature of 2 pi^2 int grad a . grad b / r. One-sided (edge)
// differences double as the boundary-adjacent gradients; z-edges on the axis
// row are skipped (trace-zero fields vanish there). Symmetric and positive
// definite on nonzero trace-zero fields.
inline double weighted_inner(const GridField& a, const GridField& b) {
    require_same_grid(a, b, "weighted_inner");
    const AxiGrid& g = a.grid;
    const double hz = g.hz(), hr = g.hr();
    double acc = 0.0;
    const double cz = hr / hz;
    for (int j = 1; j < g.nr - 1; ++j) {
        const double w = cz / g.r(j);
        for (int i = 0; i < g.nz - 1; ++i) {
            double da = a(i + 1, j) - a(i, j);
            double db = b(i + 1, j) - b(i, j);
            acc += w * da * db;
        }
    }
    const double cr = hz / hr;
    for (int j = 0; j < g.nr - 1; ++j) {
        const double w = cr / (0.5 * (g.r(j) + g.r(j + 1)));
        for (int i = 0; i < g.nz; ++i) {
            double da = a(i, j + 1) - a(i, j);
            double db = b(i, j + 1) - b(i, j);
            acc += w * da * db;
        }
    }
    return kTwoPiSq * acc;
}

inline double weighted_norm(const GridField& a) { return std::sqrt(weighted_inner(a, a)); }

// Node quadrature of 2 pi^2 int f / r over interior nodes.
template <class Fn>
double weighted_cell_sum(const AxiGrid& g, Fn&& fn) {
    const double h2 = g.hz() * g.hr();
    double acc = 0.0;
    for (int j = 1; j < g.nr - 1; ++j) {
        const double w = h2 / g.r(j);
        for (int i = 1; i < g.nz - 1; ++i) acc += fn(i, j) * w;
    }
    return kTwoPiSq * acc;
}

// Plain node quadrature of int f dz dr over interior nodes (no weight).
template <class Fn>
double cell_sum(const AxiGrid& g, Fn&& fn) {
    const double h2 = g.hz() * g.hr();
    double acc = 0.0;
    for (int j = 1; j < g.nr - 1; ++j)
        for (int i = 1; i < g.nz - 1; ++i) acc += fn(i, j);
    return acc * h2;
}

namespace detail {

// Fraction of the unit cell where the bilinear interpolant of the corner
// values (v00, v10, v11, v01, counterclockwise) is positive, approximated by
// clipping the cell against the edge-interpolated zero crossings.
inline double positive_cell_fraction(const std::array<double, 4>& v) {
    static constexpr double px[4] = {0.0, 1.0, 1.0, 0.0};
    static constexpr double py[4] = {0.0, 0.0, 1.0, 1.0};
    double qx[8], qy[8];
    int n = 0;
    for (int k = 0; k < 4; ++k) {
        int m = (k + 1) % 4;
        if (v[k] > 0.0) { qx[n] = px[k]; qy[n] = py[k]; ++n; }
        if ((v[k] > 0.0) != (v[m] > 0.0)) {
            double t = v[k] / (v[k] - v[m]);
            qx[n] = px[k] + t * (px[m] - px[k]);
            qy[n] = py[k] + t * (py[m] - py[k]);
            ++n;
        }
    }
    if (n < 3) return 0.0;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        int m = (k + 1) % n;
        s += qx[k] * qy[m] - qx[m] * qy[k];
    }
    return 0.5 * std::abs(s);
}

}  // namespace detail

// Quadrature of int F over the region {mask > 0} with cut cells clipped along
// the bilinear zero set of mask. F is sampled per cell (lower-left corner
// index); the caller folds in any cell-centered averaging it wants.
template <class Fn>
double clipped_core_sum(const GridField& mask, Fn&& F) {
    const AxiGrid& g = mask.grid;
    const double h2 = g.hz() * g.hr();
    double acc = 0.0;
    for (int j = 0; j < g.nr - 1; ++j) {
        for (int i = 0; i < g.nz - 1; ++i) {
            std::array<double, 4> v{mask(i, j), mask(i + 1, j), mask(i + 1, j + 1), mask(i, j + 1)};
            double vmax = std::max(std::max(v[0], v[1]), std::max(v[2], v[3]));
            if (vmax <= 0.0) continue;
            double vmin = std::min(std::min(v[0], v[1]), std::min(v[2], v[3]));
            double frac = vmin > 0.0 ? 1.0 : detail::positive_cell_fraction(v);
            if (frac > 0.0) acc += F(i, j) * frac * h2;
        }
    }
    return acc;
}

// Cell-centered gradient from the four corners of cell (i, j).
inline std::array<double, 2> cell_gradient(const GridField& f, int i, int j) {
    const double hz = f.grid.hz(), hr = f.grid.hr();
    double gz = 0.5 * ((f(i + 1, j) - f(i, j)) + (f(i + 1, j + 1) - f(i, j + 1))) / hz;
    double gr = 0.5 * ((f(i, j + 1) - f(i, j)) + (f(i + 1, j + 1) - f(i + 1, j))) / hr;
    return {gz, gr};
}

// Centered-difference gradient at nodes (one-sided on the boundary).
inline void node_gradient(const GridField& f, GridField& dz, GridField& dr) {
    const AxiGrid& g = f.grid;
    const double hz = g.hz(), hr = g.hr();
    for (int j = 0; j < g.nr; ++j) {
        for (int i = 0; i < g.nz; ++i) {
            if (i == 0) dz(i, j) = (f(i + 1, j) - f(i, j)) / hz;
            else if (i == g.nz - 1) dz(i, j) = (f(i, j) - f(i - 1, j)) / hz;
            else dz(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2.0 * hz);
            if (j == 0) dr(i, j) = (f(i, j + 1) - f(i, j)) / hr;
            else if (j == g.nr - 1) dr(i, j) = (f(i, j) - f(i, j - 1)) / hr;
            else dr(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2.0 * hr);
        }
    }
}

}  // namespace vring
