#pragma once

// Velocity, vorticity, swirl and the proportionality factor reconstructed
// from a stream solution, plus the Beltrami-relation residual.
//
//   u_r = -dz(Psi)/r,  u_z = dr(Psi)/r,  u_theta = Gamma(Psi)/r,
//   f = Gamma'(Psi),
//   omega_r = f u_r,  omega_theta = lambda1 r 1_{Psi>0} + f u_theta,
//   omega_z = f u_z,
// with lambda1 = -Pi' nonzero only for the explicit family.

#include <cmath>

#include "vring/grid.hpp"
#include "vring/model.hpp"
#include "vring/operators.hpp"

namespace vring::fields {

struct VelocityField {
    GridField u_r, u_theta, u_z;
    GridField omega_r, omega_theta, omega_z;
    GridField f;       // proportionality factor Gamma'(Psi)
    GridField Gamma;   // circulation / 2 pi
    GridField Psi;     // shifted stream function
    SwirlProfile profile;
    double lambda1 = 0.0;
    double W = 0.0;
};

inline VelocityField reconstruct(const StreamSolution& sol) {
    const AxiGrid& g = sol.grid();
    VelocityField vf{GridField(g), GridField(g), GridField(g), GridField(g), GridField(g),
                     GridField(g), GridField(g), GridField(g), GridField(g), sol.profile(),
                     sol.pressure_jump(), sol.params.W};
    vf.Psi = sol.shifted();
    GridField dz(g), dr(g);
    node_gradient(vf.Psi, dz, dr);
    const double hr = g.hr();
    for (int j = 0; j < g.nr; ++j) {
        double r = g.r(j);
        for (int i = 0; i < g.nz; ++i) {
            double t = vf.Psi(i, j);
            if (j == 0) {
                // axis: u_r = u_theta = 0 by symmetry; u_z = lim dr(Psi)/r with
                // psi ~ C r^2, and Psi picks up the -W shift
                vf.u_r(i, 0) = 0.0;
                vf.u_theta(i, 0) = 0.0;
                vf.u_z(i, 0) = 2.0 * sol.psi(i, 1) / (hr * hr) - sol.params.W;
                continue;
            }
            vf.u_r(i, j) = -dz(i, j) / r;
            vf.u_z(i, j) = dr(i, j) / r;
            vf.Gamma(i, j) = vf.profile.Gamma(t);
            vf.u_theta(i, j) = vf.Gamma(i, j) / r;
            vf.f(i, j) = vf.profile.dGamma(t);
            vf.omega_r(i, j) = vf.f(i, j) * vf.u_r(i, j);
            vf.omega_z(i, j) = vf.f(i, j) * vf.u_z(i, j);
            vf.omega_theta(i, j) = vf.f(i, j) * vf.u_theta(i, j) + (t > 0.0 ? vf.lambda1 * r : 0.0);
        }
    }
    return vf;
}

// Curl of (u_r, u_theta, u_z) by centered stencils on interior nodes:
//   (curl u)_r = -dz u_theta, (curl u)_theta = dz u_r - dr u_z,
//   (curl u)_z = (1/r) dr(r u_theta).
struct Curl {
    GridField r, theta, z;
};

inline Curl curl_stencil(const VelocityField& vf) {
    const AxiGrid& g = vf.u_r.grid;
    Curl c{GridField(g), GridField(g), GridField(g)};
    const double hz = g.hz(), hr = g.hr();
    for (int j = 1; j < g.nr - 1; ++j) {
        double r = g.r(j);
        for (int i = 1; i < g.nz - 1; ++i) {
            c.r(i, j) = -(vf.u_theta(i + 1, j) - vf.u_theta(i - 1, j)) / (2.0 * hz);
            c.theta(i, j) = (vf.u_r(i + 1, j) - vf.u_r(i - 1, j)) / (2.0 * hz) -
                            (vf.u_z(i, j + 1) - vf.u_z(i, j - 1)) / (2.0 * hr);
            double rup = g.r(j + 1), rdn = g.r(j - 1);
            c.z(i, j) = (rup * vf.u_theta(i, j + 1) - rdn * vf.u_theta(i, j - 1)) / (2.0 * hr * r);
        }
    }
    return c;
}

struct BeltramiReport {
    double interior_max = 0.0;   // max |curl u - f u| one cell inside the core
    double interior_l2 = 0.0;
    double exterior_max = 0.0;   // max |curl u| outside the core (f = 0 there)
    double velocity_scale = 0.0; // max |u| over the probed region
    int interior_nodes = 0;
    int exterior_nodes = 0;
};

// Residual of curl u = f u, probed one cell inside the core boundary (where
// the factor is smooth) and in the exterior (where both sides vanish up to
// the curl of the harmonic far field).
inline BeltramiReport beltrami_residual(const VelocityField& vf) {
    const AxiGrid& g = vf.u_r.grid;
    Curl c = curl_stencil(vf);
    BeltramiReport rep;
    auto in_core = [&](int i, int j) { return vf.Psi(i, j) > 0.0; };
    double l2 = 0.0;
    for (int j = 2; j < g.nr - 2; ++j) {
        for (int i = 2; i < g.nz - 2; ++i) {
            double umag = std::sqrt(vf.u_r(i, j) * vf.u_r(i, j) + vf.u_theta(i, j) * vf.u_theta(i, j) +
                                    vf.u_z(i, j) * vf.u_z(i, j));
            bool core = in_core(i, j);
            bool deep = core;
            for (int dj = -1; dj <= 1 && deep; ++dj)
                for (int di = -1; di <= 1 && deep; ++di) deep = in_core(i + di, j + dj);
            bool outside = !core;
            for (int dj = -1; dj <= 1 && outside; ++dj)
                for (int di = -1; di <= 1 && outside; ++di) outside = !in_core(i + di, j + dj);
            if (deep) {
                double er = c.r(i, j) - vf.f(i, j) * vf.u_r(i, j);
                double et = c.theta(i, j) - vf.f(i, j) * vf.u_theta(i, j);
                double ez = c.z(i, j) - vf.f(i, j) * vf.u_z(i, j);
                double e = std::sqrt(er * er + et * et + ez * ez);
                rep.interior_max = std::max(rep.interior_max, e);
                l2 += e * e;
                ++rep.interior_nodes;
                rep.velocity_scale = std::max(rep.velocity_scale, umag);
            } else if (outside) {
                double e = std::sqrt(c.r(i, j) * c.r(i, j) + c.theta(i, j) * c.theta(i, j) +
                                     c.z(i, j) * c.z(i, j));
                rep.exterior_max = std::max(rep.exterior_max, e);
                ++rep.exterior_nodes;
                rep.velocity_scale = std::max(rep.velocity_scale, umag);
            }
        }
    }
    if (rep.interior_nodes > 0)
        rep.interior_l2 = std::sqrt(l2 * g.hz() * g.hr());
    return rep;
}

// Discrete divergence max |dz(r u_z) + dr(r u_r)| over interior nodes.
inline double divergence_max(const VelocityField& vf) {
    const AxiGrid& g = vf.u_r.grid;
    const double hz = g.hz(), hr = g.hr();
    double m = 0.0;
    for (int j = 1; j < g.nr - 1; ++j) {
        for (int i = 1; i < g.nz - 1; ++i) {
            double dz = (g.r(j) * vf.u_z(i + 1, j) - g.r(j) * vf.u_z(i - 1, j)) / (2.0 * hz);
            double dr = (g.r(j + 1) * vf.u_r(i, j + 1) - g.r(j - 1) * vf.u_r(i, j - 1)) / (2.0 * hr);
            m = std::max(m, std::abs(dz + dr));
        }
    }
    return m;
}

}  // namespace vring::fields
