#pragma once

// Uniform (z, r) lattice on the rectangle [-Z, Z] x [0, R] with Dirichlet
// boundary on all four sides (the r = 0 row carries the axis condition).
// Fields live on nodes; the weighted measure of the problem is r^{-1} dz dr.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vring {

struct AxiGrid {
    double Z = 0.0;   // half-extent in z: domain is [-Z, Z]
    double R = 0.0;   // extent in r: domain is [0, R]
    int nz = 0;       // node count in z
    int nr = 0;       // node count in r

    AxiGrid() = default;
    AxiGrid(double Z_, double R_, int nz_, int nr_) : Z(Z_), R(R_), nz(nz_), nr(nr_) {
        if (!(Z > 0.0) || !(R > 0.0) || nz < 3 || nr < 3)
            throw std::invalid_argument("AxiGrid: extents must be positive and node counts >= 3");
    }

    double hz() const { return 2.0 * Z / (nz - 1); }
    double hr() const { return R / (nr - 1); }
    double z(int i) const { return -Z + hz() * i; }
    double r(int j) const { return hr() * j; }
    std::size_t size() const { return static_cast<std::size_t>(nz) * nr; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nz + i; }
    bool boundary(int i, int j) const { return i == 0 || i == nz - 1 || j == 0 || j == nr - 1; }
    bool interior(int i, int j) const { return !boundary(i, j); }

    bool operator==(const AxiGrid& o) const {
        return Z == o.Z && R == o.R && nz == o.nz && nr == o.nr;
    }
    bool operator!=(const AxiGrid& o) const { return !(*this == o); }
};

struct GridField {
    AxiGrid grid;
    std::vector<double> v;

    GridField() = default;
    explicit GridField(const AxiGrid& g) : grid(g), v(g.size(), 0.0) {}
    GridField(const AxiGrid& g, double fill) : grid(g), v(g.size(), fill) {}

    double& operator()(int i, int j) { return v[grid.index(i, j)]; }
    double operator()(int i, int j) const { return v[grid.index(i, j)]; }

    void zero_boundary() {
        for (int i = 0; i < grid.nz; ++i) { (*this)(i, 0) = 0.0; (*this)(i, grid.nr - 1) = 0.0; }
        for (int j = 0; j < grid.nr; ++j) { (*this)(0, j) = 0.0; (*this)(grid.nz - 1, j) = 0.0; }
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
};

template <class Fn>
GridField make_field(const AxiGrid& g, Fn&& fn) {
    GridField f(g);
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.nz; ++i) f(i, j) = fn(g.z(i), g.r(j));
    return f;
}

inline void require_same_grid(const GridField& a, const GridField& b, const char* where) {
    if (a.grid != b.grid) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace vring
