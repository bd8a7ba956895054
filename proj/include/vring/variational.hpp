#pragma once

// Constructive grand-state machinery: the functional
//   I[psi] = (1/2) |psi|_H^2 - (pi^2 lambda / q) int (psi - r^2 - gamma)_+^{2q} / r,
// its Frechet pairing, the Nehari scale t(psi), Steiner symmetrization, the
// grand-state iteration on the rectangle, and domain continuation.
//
// Everything here works in the W = 2 normalized frame (obstacle r^2 + gamma);
// solve_grand_state converts general parameters in and out via
//   lambda_n = lambda (W/2)^{2(q-1)},  gamma_n = 2 gamma / W,  psi = (W/2) psi_n.
//
// The iteration is the inverse-operator fixed point with Nehari rescaling and
// Steiner symmetrization per step, damped toward the H-gradient flow when a
// full step fails to lower the energy (the blend (1-s) psi + s phi IS the
// damped H-gradient step, since grad_H I[psi] = psi - phi). A terminal Newton
// phase on the discrete system removes the fixed-point tail so the archive
// field satisfies the lattice equation to solver precision.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "vring/dirichlet.hpp"
#include "vring/grid.hpp"
#include "vring/model.hpp"
#include "vring/operators.hpp"

namespace vring::variational {

struct NehariBracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters of the homogeneous problem in the W = 2 frame.
struct NehariProblem {
    double lambda = 1.0;
    double q = 2.0;
    double gamma = 0.1;

    static NehariProblem normalized(const ProblemParams& p) {
        p.validate();
        return {p.lambda * std::pow(0.5 * p.W, 2.0 * (p.q - 1.0)), p.q, 2.0 * p.gamma / p.W};
    }
    double obstacle(double r) const { return r * r + gamma; }
};

inline GridField shifted_positive(const GridField& psi, const NehariProblem& np) {
    GridField out(psi.grid);
    for (int j = 0; j < psi.grid.nr; ++j) {
        double obs = np.obstacle(psi.grid.r(j));
        for (int i = 0; i < psi.grid.nz; ++i) out(i, j) = std::max(psi(i, j) - obs, 0.0);
    }
    return out;
}

struct EnergyParts {
    double I = 0.0;
    double J = 0.0;
};

inline EnergyParts functional_I(const GridField& psi, const NehariProblem& np) {
    GridField P = shifted_positive(psi, np);
    double J = np.lambda / (2.0 * np.q) *
               weighted_cell_sum(psi.grid, [&](int i, int j) { return std::pow(P(i, j), 2.0 * np.q); });
    return {0.5 * weighted_inner(psi, psi) - J, J};
}

// I'[psi]phi = (psi, phi)_H - 2 pi^2 lambda int (psi - r^2 - gamma)_+^{2q-1} phi / r.
inline double I_prime_pairing(const GridField& psi, const GridField& phi, const NehariProblem& np) {
    require_same_grid(psi, phi, "I_prime_pairing");
    GridField P = shifted_positive(psi, np);
    double jp = np.lambda * weighted_cell_sum(psi.grid, [&](int i, int j) {
        return std::pow(P(i, j), 2.0 * np.q - 1.0) * phi(i, j);
    });
    return weighted_inner(psi, phi) - jp;
}

// The unique t > 0 with I'[t psi](t psi) = 0, found by bracket expansion and
// bisection on the strictly decreasing g'(t)/t. Throws NehariBracketError when
// the scaled graph never clears the obstacle (psi <= 0 wherever it matters).
inline double nehari_scale(const GridField& psi, const NehariProblem& np) {
    const AxiGrid& g = psi.grid;
    const double norm2 = weighted_inner(psi, psi);
    if (!(norm2 > 0.0)) throw NehariBracketError("nehari_scale: psi = 0");
    // nodes that can ever activate the nonlinearity
    struct Node {
        double v, obs, w;
    };
    std::vector<Node> nodes;
    const double h2 = g.hz() * g.hr();
    for (int j = 1; j < g.nr - 1; ++j) {
        double obs = np.obstacle(g.r(j));
        double w = kTwoPiSq * h2 / g.r(j);
        for (int i = 1; i < g.nz - 1; ++i)
            if (psi(i, j) > 0.0) nodes.push_back({psi(i, j), obs, w});
    }
    if (nodes.empty()) throw NehariBracketError("nehari_scale: psi has no positive part");
    // g'(t)/t = |psi|^2 - (2 pi^2 lambda / t) int (t psi - r^2 - gamma)_+^{2q-1} psi / r,
    // strictly decreasing with positive limit at t -> 0+
    auto hval = [&](double t) {
        double acc = 0.0;
        for (const Node& n : nodes) {
            double s = t * n.v - n.obs;
            if (s > 0.0) acc += std::pow(s, 2.0 * np.q - 1.0) * n.v * n.w;
        }
        return norm2 - np.lambda * acc / t;
    };
    double lo = 1.0, hi = 1.0;
    if (hval(1.0) > 0.0) {
        for (int k = 0;; ++k) {
            if (k > 60) throw NehariBracketError("nehari_scale: bracket expansion cap reached");
            hi *= 2.0;
            if (hval(hi) <= 0.0) break;
        }
        lo = hi / 2.0;
    } else {
        for (int k = 0;; ++k) {
            if (k > 200) throw NehariBracketError("nehari_scale: lower bracket vanished");
            lo /= 2.0;
            if (hval(lo) > 0.0) break;
        }
        hi = lo * 2.0;
    }
    while ((hi - lo) > 1e-12 * hi) {
        double mid = 0.5 * (lo + hi);
        (hval(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Per-row decreasing rearrangement in |z|: the sorted values are placed at
// interior columns ordered by increasing |z| (stable, original z-order breaks
// ties), preserving the row's value multiset exactly.
inline GridField steiner_symmetrize(const GridField& psi) {
    const AxiGrid& g = psi.grid;
    GridField out = psi;
    std::vector<int> order(g.nz - 2);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double za = std::abs(g.z(a)), zb = std::abs(g.z(b));
        if (za != zb) return za < zb;
        return g.z(a) > g.z(b);
    });
    std::vector<double> vals(g.nz - 2);
    for (int j = 1; j < g.nr - 1; ++j) {
        for (int i = 1; i < g.nz - 1; ++i) vals[i - 1] = psi(i, j);
        std::stable_sort(vals.begin(), vals.end(), std::greater<double>());
        for (std::size_t k = 0; k < order.size(); ++k) out(order[k], j) = vals[k];
    }
    return out;
}

struct SolveOptions {
    double tol_energy = 1e-8;   // relative energy stall
    double tol_nehari = 1e-6;   // |I'[psi]psi| / |psi|^2 at acceptance
    int max_iter = 500;
    double cg_tol = 1e-10;
    int cg_max_iter = 20000;
    bool newton_polish = true;
    double newton_tol = 1e-12;
    int newton_max_iter = 30;
    double seed_radius = 1.0;   // seed disk radius (normalized frame)
    std::optional<GridField> warm_start;  // normalized-frame initial iterate
};

namespace detail {

inline void evenize(GridField& f) {
    const AxiGrid& g = f.grid;
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.nz / 2; ++i) {
            double m = 0.5 * (f(i, j) + f(g.nz - 1 - i, j));
            f(i, j) = m;
            f(g.nz - 1 - i, j) = m;
        }
}

inline void clamp_negative(GridField& f) {
    for (double& x : f.v) x = std::max(x, 0.0);
}

inline GridField picard_rhs(const GridField& psi, const NehariProblem& np) {
    GridField P = shifted_positive(psi, np);
    GridField rhs(psi.grid);
    for (std::size_t k = 0; k < rhs.v.size(); ++k)
        rhs.v[k] = P.v[k] > 0.0 ? np.lambda * std::pow(P.v[k], 2.0 * np.q - 1.0) : 0.0;
    return rhs;
}

// Terminal Newton phase on K psi = load(lambda (psi - r^2 - gamma)_+^{2q-1}).
// Returns the Newton step count, or -1 when the phase had to give up.
inline int newton_polish(const DirichletSolver& ds, GridField& psi, const NehariProblem& np,
                         double tol, int max_iter) {
    const AxiGrid& g = ds.grid();
    Eigen::VectorXd v = ds.pack(psi);
    auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& F) {
        GridField f = ds.unpack(x);
        F = ds.stiffness() * x - ds.load(picard_rhs(f, np));
    };
    Eigen::VectorXd F;
    residual(v, F);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    for (int it = 0; it < max_iter; ++it) {
        double scale = std::max({(ds.stiffness() * v).norm(), F.norm(), 1e-300});
        if (F.norm() <= tol * scale) { psi = ds.unpack(v); return it; }
        // Jacobian: K - diag(lambda (2q-1) P^{2q-2} * 2 pi^2 h^2 / r)
        GridField f = ds.unpack(v);
        GridField P = shifted_positive(f, np);
        Eigen::SparseMatrix<double> J = ds.stiffness();
        const double c = kTwoPiSq * g.hz() * g.hr();
        Eigen::VectorXd diag(v.size());
        std::size_t k = 0;
        for (int j = 1; j < g.nr - 1; ++j) {
            double w = c / g.r(j);
            for (int i = 1; i < g.nz - 1; ++i) {
                double t = P(i, j);
                diag[k++] = t > 0.0 ? np.lambda * (2.0 * np.q - 1.0) * std::pow(t, 2.0 * np.q - 2.0) * w : 0.0;
            }
        }
        Eigen::SparseMatrix<double> D(v.size(), v.size());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(v.size());
        for (long m = 0; m < v.size(); ++m)
            if (diag[m] != 0.0) trip.emplace_back(m, m, diag[m]);
        D.setFromTriplets(trip.begin(), trip.end());
        J -= D;
        if (!analyzed) { lu.analyzePattern(J); analyzed = true; }
        lu.factorize(J);
        if (lu.info() != Eigen::Success) return -1;
        Eigen::VectorXd dv = lu.solve(-F);
        double nF = F.norm(), s = 1.0;
        Eigen::VectorXd vt, Ft;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            vt = v + s * dv;
            residual(vt, Ft);
            if (Ft.norm() < (1.0 - 1e-4 * s) * nF) { improved = true; break; }
            s *= 0.5;
        }
        if (!improved) return -1;
        v = vt;
        F = Ft;
    }
    return -1;
}

}  // namespace detail

// Grand-state solve in the normalized frame on the given grid.
inline StreamSolution solve_grand_state(const ProblemParams& params, const AxiGrid& grid,
                                        const SolveOptions& opts = {}) {
    NehariProblem np = NehariProblem::normalized(params);
    DirichletSolver ds(grid, opts.cg_tol, opts.cg_max_iter);

    GridField psi(grid);
    if (opts.warm_start && opts.warm_start->grid == grid) {
        psi = *opts.warm_start;
    } else {
        // seed: unit-strength disk of r^2 forcing centered where the obstacle
        // is easiest to clear, then project onto the Nehari manifold
        const double r_seed = std::sqrt(np.gamma) + 1.0;
        const double rad = std::max(std::min(opts.seed_radius, grid.R / 3.0), 3.0 * std::max(grid.hz(), grid.hr()));
        GridField disk = make_field(grid, [&](double z, double r) {
            double d2 = z * z + (r - r_seed) * (r - r_seed);
            return d2 < rad * rad ? r * r : 0.0;
        });
        disk.zero_boundary();
        psi = ds.solve(disk);
    }
    detail::clamp_negative(psi);
    psi = steiner_symmetrize(psi);
    detail::evenize(psi);
    psi = [&] {
        double t = nehari_scale(psi, np);
        GridField out = psi;
        for (double& x : out.v) x *= t;
        return out;
    }();

    double E = functional_I(psi, np).I;
    int iters = 0;
    double fp_res = 1.0;
    bool stalled = false;
    GridField phi(grid);
    for (; iters < opts.max_iter; ++iters) {
        phi = ds.solve_with_guess(detail::picard_rhs(psi, np), psi);
        detail::clamp_negative(phi);
        phi = steiner_symmetrize(phi);
        detail::evenize(phi);
        double dn = 0.0, dd = 0.0;
        {
            GridField diff = phi;
            for (std::size_t k = 0; k < diff.v.size(); ++k) diff.v[k] -= psi.v[k];
            dn = weighted_inner(diff, diff);
            dd = weighted_inner(psi, psi);
        }
        fp_res = std::sqrt(dn / dd);
        GridField cand = phi;
        double t = nehari_scale(cand, np);
        for (double& x : cand.v) x *= t;
        double Ec = functional_I(cand, np).I;
        double s = 1.0;
        while (Ec > E + 1e-14 * std::abs(E) && s > 1.0 / 128.0) {
            s *= 0.5;
            GridField blend = psi;
            for (std::size_t k = 0; k < blend.v.size(); ++k)
                blend.v[k] = (1.0 - s) * psi.v[k] + s * phi.v[k];
            double tb = nehari_scale(blend, np);
            for (double& x : blend.v) x *= tb;
            cand = std::move(blend);
            Ec = functional_I(cand, np).I;
        }
        double dE = std::abs(Ec - E);
        psi = std::move(cand);
        E = Ec;
        if (dE <= opts.tol_energy * std::abs(E) && s == 1.0) { stalled = true; ++iters; break; }
    }

    int newton_iters = -1;
    if (opts.newton_polish) {
        GridField polished = psi;
        newton_iters = detail::newton_polish(ds, polished, np, opts.newton_tol, opts.newton_max_iter);
        if (newton_iters >= 0) {
            psi = polished;
            detail::evenize(psi);
            E = functional_I(psi, np).I;
        }
    }

    StreamSolution sol;
    sol.kind = "solve";
    sol.params = params;
    sol.psi = psi;
    const double amp = 0.5 * params.W;  // back to the external frame
    for (double& x : sol.psi.v) x *= amp;
    sol.info.energy = E;
    sol.info.nehari_residual = I_prime_pairing(psi, psi, np);
    sol.info.iterations = iters + std::max(newton_iters, 0);
    double n2 = weighted_inner(psi, psi);
    sol.info.fixed_point_residual = fp_res;
    sol.info.converged = stalled && (opts.newton_polish ? newton_iters >= 0 : true) &&
                         std::abs(sol.info.nehari_residual) <= opts.tol_nehari * n2;
    if (!stalled)
        throw SolverError("solve_grand_state: no energy stall within the iteration cap");
    // a posteriori: the core must stay off the grid boundary by two cells
    sol.info.core_fits = true;
    GridField P = shifted_positive(psi, np);
    for (int j = 0; j < grid.nr && sol.info.core_fits; ++j)
        for (int i = 0; i < grid.nz; ++i)
            if (P(i, j) > 0.0 &&
                (i < 2 || i > grid.nz - 3 || j > grid.nr - 3)) {
                sol.info.core_fits = false;
                break;
            }
    return sol;
}

// Solves on a growing family of rectangles (Z = R = radius, spacing inherited
// from the base grid), warm-starting each run from the zero-extended previous
// solution. Energies are nonincreasing along the sweep.
inline std::vector<StreamSolution> continuation_sweep(const ProblemParams& params,
                                                      const std::vector<double>& radii,
                                                      const AxiGrid& base,
                                                      const SolveOptions& opts = {}) {
    if (radii.empty()) throw std::invalid_argument("continuation_sweep: empty radius list");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1]))
            throw std::invalid_argument("continuation_sweep: radii must be increasing");
    const double cz = (base.nz - 1) / (2.0 * base.Z);
    const double cr = (base.nr - 1) / base.R;
    std::vector<StreamSolution> out;
    out.reserve(radii.size());
    for (double R : radii) {
        int nz = static_cast<int>(std::llround(2.0 * R * cz)) + 1;
        int nr = static_cast<int>(std::llround(R * cr)) + 1;
        AxiGrid g(R, R, nz, nr);
        SolveOptions o = opts;
        o.warm_start.reset();
        if (!out.empty()) {
            // zero extension: node positions align because the spacing is shared
            const StreamSolution& prev = out.back();
            const AxiGrid& pg = prev.grid();
            GridField w(g);
            int di = (g.nz - pg.nz) / 2;
            if (std::abs(g.hz() - pg.hz()) < 1e-12 && std::abs(g.hr() - pg.hr()) < 1e-12 && di >= 0 &&
                pg.nr <= g.nr) {
                const double amp = 2.0 / params.W;  // external -> normalized frame
                for (int j = 0; j < pg.nr - 1; ++j)
                    for (int i = 1; i < pg.nz - 1; ++i) w(i + di, j) = amp * prev.psi(i, j);
                w.zero_boundary();
                o.warm_start = std::move(w);
            }
        }
        out.push_back(solve_grand_state(params, g, o));
    }
    return out;
}

}  // namespace vring::variational
