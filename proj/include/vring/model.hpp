#pragma once

// Problem data shared across the solver, field reconstruction, tracing and
// verification: the parameter set (lambda, q, W, gamma), the swirl profile
// Gamma and its derivative (the Beltrami proportionality factor), and the
// solution record that archives carry.
//
// The power-law profile Gamma'(t) = (lambda q)^{1/2} t_+^{q-1} with q > 1 is
// the solver family; q = 1 with Gamma'(t) = lambda2^{1/2} 1_{t>0} is the
// explicit-family limit. Both integrate to Gamma(t) = (lambda/q)^{1/2} t_+^q.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "vring/grid.hpp"
#include "vring/hicks_moffatt.hpp"

namespace vring {

struct ProblemParams {
    double lambda = 1.0;
    double q = 2.0;
    double W = 2.0;
    double gamma = 0.1;

    void validate() const {
        if (!(q > 1.0)) throw std::invalid_argument("ProblemParams: requires q > 1");
        if (!(lambda > 0.0)) throw std::invalid_argument("ProblemParams: requires lambda > 0");
        if (!(W > 0.0)) throw std::invalid_argument("ProblemParams: requires W > 0");
        if (!(gamma > 0.0)) throw std::invalid_argument("ProblemParams: requires gamma > 0");
    }
};

// Circulation/2pi as a function of the shifted stream value, and the factor
// f = Gamma'(Psi). q = 1 encodes the indicator profile of the explicit family.
struct SwirlProfile {
    double lambda = 0.0;
    double q = 1.0;

    double Gamma(double t) const {
        if (t <= 0.0 || lambda == 0.0) return 0.0;
        return std::sqrt(lambda / q) * std::pow(t, q);
    }
    double dGamma(double t) const {
        if (t <= 0.0 || lambda == 0.0) return 0.0;
        return std::sqrt(lambda * q) * std::pow(t, q - 1.0);
    }
    // k0 such that f ranges over (0, k0] on the core; l0 = max Psi_+.
    double k0(double l0) const { return std::sqrt(lambda * q) * std::pow(l0, q - 1.0); }
    // level l with f = k on {Psi = l}; only meaningful for q > 1.
    double level_for(double k) const {
        if (q == 1.0) throw std::domain_error("level_for: factor is piecewise constant at q = 1");
        return std::pow(k / std::sqrt(lambda * q), 1.0 / (q - 1.0));
    }
};

struct SolveInfo {
    double energy = 0.0;           // I[psi] in the W = 2 normalized frame
    double nehari_residual = 0.0;  // I'[psi]psi in the same frame
    int iterations = 0;            // fixed-point + Newton steps
    bool converged = false;
    double fixed_point_residual = 0.0;  // |phi - psi|_H / |psi|_H at exit
    bool core_fits = false;             // core closure stays off the grid boundary
};

// A stream solution: grid samples of psi with parameters, the shifted field
// Psi = psi - (W/2) r^2 - gamma, and metadata. Explicit oracle fields carry
// kind != "solve" plus their Hicks-Moffatt parameters (with q = 1 semantics).
struct StreamSolution {
    std::string kind = "solve";
    ProblemParams params;
    GridField psi;
    SolveInfo info;
    std::optional<hm::HicksMoffattParams> hm_params;

    const AxiGrid& grid() const { return psi.grid; }

    bool is_explicit() const { return kind != "solve"; }

    // Obstacle (W/2) r^2 + gamma at node (i, j).
    double obstacle(int i, int j) const {
        double r = grid().r(j);
        return 0.5 * params.W * r * r + params.gamma;
    }

    GridField shifted() const {
        GridField out(grid());
        for (int j = 0; j < grid().nr; ++j)
            for (int i = 0; i < grid().nz; ++i) out(i, j) = psi(i, j) - obstacle(i, j);
        return out;
    }

    SwirlProfile profile() const {
        if (is_explicit()) return {hm_params ? hm_params->lambda2 : 0.0, 1.0};
        return {params.lambda, params.q};
    }

    // -Pi'(t): lambda1 1_{t>0} for the explicit family, 0 for the solver family.
    double pressure_jump() const {
        return is_explicit() && hm_params ? hm_params->lambda1 : 0.0;
    }

    // Azimuthal vorticity density zeta = omega_theta / r on nodes (0 on the axis row).
    GridField zeta() const {
        GridField Psi = shifted();
        GridField out(grid());
        SwirlProfile pr = profile();
        double lam1 = pressure_jump();
        for (int j = 1; j < grid().nr; ++j) {
            double r = grid().r(j);
            for (int i = 0; i < grid().nz; ++i) {
                double t = Psi(i, j);
                if (t <= 0.0) continue;
                // -L Psi = lam1 r^2 1_{Psi>0} + Gamma'(Psi) Gamma(Psi); zeta = -L Psi / r^2
                out(i, j) = lam1 + pr.dGamma(t) * pr.Gamma(t) / (r * r);
            }
        }
        return out;
    }

    double l0() const {
        GridField Psi = shifted();
        double m = 0.0;
        for (double x : Psi.v) m = std::max(m, x);
        return m;
    }
};

}  // namespace vring
