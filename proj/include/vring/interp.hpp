#pragma once

// C^1 bicubic interpolation of a grid field (Hermite form with centered
// finite-difference derivatives at the nodes). The traced Hamiltonian is the
// interpolant, so its flow conserves it to integrator accuracy.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vring/grid.hpp"

namespace vring {

class BicubicField {
public:
    explicit BicubicField(const GridField& f) : grid_(f.grid) {
        const AxiGrid& g = grid_;
        const int nz = g.nz, nr = g.nr;
        fv_ = f.v;
        fz_.assign(g.size(), 0.0);
        fr_.assign(g.size(), 0.0);
        fzr_.assign(g.size(), 0.0);
        auto at = [&](int i, int j) { return fv_[g.index(i, j)]; };
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nz; ++i) {
                int il = std::max(i - 1, 0), ih = std::min(i + 1, nz - 1);
                fz_[g.index(i, j)] = (at(ih, j) - at(il, j)) / (ih - il);
            }
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nz; ++i) {
                int jl = std::max(j - 1, 0), jh = std::min(j + 1, nr - 1);
                fr_[g.index(i, j)] = (at(i, jh) - at(i, jl)) / (jh - jl);
                fzr_[g.index(i, j)] = (fz_[g.index(i, jh)] - fz_[g.index(i, jl)]) / (jh - jl);
            }
        coeff_.assign(static_cast<std::size_t>(nz - 1) * (nr - 1), {});
        have_.assign(coeff_.size(), 0);
    }

    const AxiGrid& grid() const { return grid_; }

    struct Eval {
        double value, dz, dr;
    };

    Eval eval(double z, double r) const {
        const AxiGrid& g = grid_;
        double x = (z + g.Z) / g.hz();
        double y = r / g.hr();
        int i = static_cast<int>(std::floor(x));
        int j = static_cast<int>(std::floor(y));
        i = std::clamp(i, 0, g.nz - 2);
        j = std::clamp(j, 0, g.nr - 2);
        double u = x - i, v = y - j;
        if (u < -0.5 || u > 1.5 || v < -0.5 || v > 1.5)
            throw std::domain_error("BicubicField::eval: point outside the grid");
        const auto& a = cell(i, j);
        // value, d/du, d/dv of sum a[m][n] u^m v^n
        double um[4] = {1.0, u, u * u, u * u * u};
        double vn[4] = {1.0, v, v * v, v * v * v};
        double dum[4] = {0.0, 1.0, 2.0 * u, 3.0 * u * u};
        double dvn[4] = {0.0, 1.0, 2.0 * v, 3.0 * v * v};
        double val = 0.0, du = 0.0, dv = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                double c = a[m * 4 + n];
                val += c * um[m] * vn[n];
                du += c * dum[m] * vn[n];
                dv += c * um[m] * dvn[n];
            }
        return {val, du / g.hz(), dv / g.hr()};
    }

    double value(double z, double r) const { return eval(z, r).value; }

private:
    using Coeff = std::array<double, 16>;

    const Coeff& cell(int i, int j) const {
        std::size_t k = static_cast<std::size_t>(j) * (grid_.nz - 1) + i;
        if (!have_[k]) {
            build(i, j, coeff_[k]);
            have_[k] = 1;
        }
        return coeff_[k];
    }

    void build(int i, int j, Coeff& a) const {
        const AxiGrid& g = grid_;
        auto idx = [&](int di, int dj) { return g.index(i + di, j + dj); };
        // Hermite data in cell units
        double f00 = fv_[idx(0, 0)], f10 = fv_[idx(1, 0)], f01 = fv_[idx(0, 1)], f11 = fv_[idx(1, 1)];
        double fx00 = fz_[idx(0, 0)], fx10 = fz_[idx(1, 0)], fx01 = fz_[idx(0, 1)], fx11 = fz_[idx(1, 1)];
        double fy00 = fr_[idx(0, 0)], fy10 = fr_[idx(1, 0)], fy01 = fr_[idx(0, 1)], fy11 = fr_[idx(1, 1)];
        double fxy00 = fzr_[idx(0, 0)], fxy10 = fzr_[idx(1, 0)], fxy01 = fzr_[idx(0, 1)], fxy11 = fzr_[idx(1, 1)];
        // standard bicubic coefficient solve, a[m*4+n] multiplies u^m v^n
        static const int Ainv[16][16] = {
            {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
            {-3, 3, 0, 0, -2, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
            {2, -2, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
            {0, 0, 0, 0, 0, 0, 0, 0, -3, 3, 0, 0, -2, -1, 0, 0},
            {0, 0, 0, 0, 0, 0, 0, 0, 2, -2, 0, 0, 1, 1, 0, 0},
            {-3, 0, 3, 0, 0, 0, 0, 0, -2, 0, -1, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, -3, 0, 3, 0, 0, 0, 0, 0, -2, 0, -1, 0},
            {9, -9, -9, 9, 6, 3, -6, -3, 6, -6, 3, -3, 4, 2, 2, 1},
            {-6, 6, 6, -6, -3, -3, 3, 3, -4, 4, -2, 2, -2, -2, -1, -1},
            {2, 0, -2, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0},
            {0, 0, 0, 0, 2, 0, -2, 0, 0, 0, 0, 0, 1, 0, 1, 0},
            {-6, 6, 6, -6, -4, -2, 4, 2, -3, 3, -3, 3, -2, -1, -2, -1},
            {4, -4, -4, 4, 2, 2, -2, -2, 2, -2, 2, -2, 1, 1, 1, 1}};
        double xvec[16] = {f00, f10, f01, f11, fx00, fx10, fx01, fx11,
                           fy00, fy10, fy01, fy11, fxy00, fxy10, fxy01, fxy11};
        // Ainv above is laid out for the (u-major) ordering a[n*4+m]; fill then transpose
        double tmp[16];
        for (int row = 0; row < 16; ++row) {
            double s = 0.0;
            for (int col = 0; col < 16; ++col) s += Ainv[row][col] * xvec[col];
            tmp[row] = s;
        }
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) a[m * 4 + n] = tmp[n * 4 + m];
    }

    AxiGrid grid_;
    std::vector<double> fv_, fz_, fr_, fzr_;
    mutable std::vector<Coeff> coeff_;
    mutable std::vector<char> have_;
};

}  // namespace vring
