#pragma once

// The explicit three-parameter vortex family (lambda1, lambda2, W) and its
// limiting branches: Hill's spherical vortex (lambda2 = 0), the Beltrami ring
// of Chandrasekhar (lambda1 = 0), and the compactly supported Prendergast
// flow (W = 0). Serves as the oracle family for the variational solver.
//
// Shifted stream function, with sigma = sqrt(z^2 + r^2), a the sphere radius:
//   generic, sigma < a:   -(3/2) W r^2 (B(kappa) - C(kappa) J_{3/2}(s)/s^{3/2}),
//                         s = sqrt(lambda2) sigma
//   outside, sigma >= a:  -(1/2) W r^2 (1 - a^3/sigma^3)    (0 for W = 0)
// The leading minus sign is genuine: C(kappa) J_{3/2}(s)/s^{3/2} > B(kappa)
// for sigma < a because J_{3/2}(x)/x^{3/2} is strictly decreasing up to
// c_{5/2} and equals B(kappa)/C(kappa) at x = kappa, so Psi > 0 on the open
// ball and the vortex core {Psi > 0} is exactly {sigma < a}.

#include <cmath>
#include <stdexcept>

#include "vring/grid.hpp"
#include "vring/operators.hpp"
#include "vring/specfun.hpp"

namespace vring::hm {

enum class ExplicitKind { generic, hill, chandrasekhar, prendergast };

inline const char* kind_name(ExplicitKind k) {
    switch (k) {
        case ExplicitKind::generic: return "hicks_moffatt";
        case ExplicitKind::hill: return "hill";
        case ExplicitKind::chandrasekhar: return "chandrasekhar";
        case ExplicitKind::prendergast: return "prendergast";
    }
    return "?";
}

struct HicksMoffattParams {
    double lambda1 = 0.0;  // Bernoulli strength
    double lambda2 = 0.0;  // swirl strength, 1/length^2
    double W = 0.0;        // ring speed
    double kappa = 0.0;    // derived: B(kappa) = 2 lambda1 / (3 W lambda2)
    double a = 0.0;        // vortex radius
};

struct ExplicitStream {
    HicksMoffattParams params;
    ExplicitKind kind = ExplicitKind::generic;
};

inline ExplicitStream make_generic(double lambda1, double lambda2, double W) {
    if (!(lambda2 > 0.0) || !(W > 0.0))
        throw std::invalid_argument("hicks_moffatt generic: requires lambda2 > 0 and W > 0");
    HicksMoffattParams p{lambda1, lambda2, W, 0.0, 0.0};
    p.kappa = specfun::find_kappa(lambda1, lambda2, W);
    p.a = p.kappa / std::sqrt(lambda2);
    return {p, ExplicitKind::generic};
}

inline ExplicitStream make_hill(double lambda1, double W) {
    if (!(lambda1 > 0.0) || !(W > 0.0))
        throw std::invalid_argument("hill: requires lambda1 > 0 and W > 0");
    HicksMoffattParams p{lambda1, 0.0, W, 0.0, std::sqrt(15.0 * W / (2.0 * lambda1))};
    return {p, ExplicitKind::hill};
}

inline ExplicitStream make_chandrasekhar(double lambda2, double W) {
    if (!(lambda2 > 0.0) || !(W > 0.0))
        throw std::invalid_argument("chandrasekhar: requires lambda2 > 0 and W > 0");
    double c32 = specfun::first_zero_32();
    HicksMoffattParams p{0.0, lambda2, W, c32, c32 / std::sqrt(lambda2)};
    return {p, ExplicitKind::chandrasekhar};
}

inline ExplicitStream make_prendergast(double lambda1, double lambda2) {
    if (!(lambda1 < 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("prendergast: requires lambda1 < 0 and lambda2 > 0");
    double c52 = specfun::first_zero_52();
    HicksMoffattParams p{lambda1, lambda2, 0.0, c52, c52 / std::sqrt(lambda2)};
    return {p, ExplicitKind::prendergast};
}

// Shifted stream function Psi(z, r); continuous across sigma = a where both
// branch formulas vanish.
inline double explicit_psi(const ExplicitStream& s, double z, double r) {
    if (r == 0.0) return 0.0;
    const HicksMoffattParams& p = s.params;
    const double sigma = std::hypot(z, r);
    const double r2 = r * r;
    if (sigma >= p.a) {
        if (s.kind == ExplicitKind::prendergast) return 0.0;
        double c = p.a / sigma;
        return -0.5 * p.W * r2 * (1.0 - c * c * c);
    }
    switch (s.kind) {
        case ExplicitKind::hill:
            return 0.75 * p.W * r2 * (1.0 - sigma * sigma / (p.a * p.a));
        case ExplicitKind::chandrasekhar: {
            double x = std::sqrt(p.lambda2) * sigma;
            return 1.5 * p.W * r2 * specfun::profile_C(p.kappa) * specfun::scaled_j32(x);
        }
        case ExplicitKind::prendergast: {
            double x = std::sqrt(p.lambda2) * sigma;
            double c52 = p.kappa;
            double ratio = specfun::scaled_j32(x) / specfun::scaled_j32(c52);
            return -(p.lambda1 / p.lambda2) * r2 * (1.0 - ratio);
        }
        case ExplicitKind::generic: {
            double x = std::sqrt(p.lambda2) * sigma;
            double j = specfun::scaled_j32(x);  // J_{3/2}(x)/x^{3/2}
            return -1.5 * p.W * r2 * (specfun::profile_B(p.kappa) - specfun::profile_C(p.kappa) * j);
        }
    }
    return 0.0;
}

inline GridField sample_psi(const ExplicitStream& s, const AxiGrid& g) {
    return make_field(g, [&](double z, double r) { return explicit_psi(s, z, r); });
}

// Right-hand side of the stream equation: -L Psi = lambda1 r^2 1_{Psi>0} + lambda2 Psi_+.
inline double explicit_rhs(const ExplicitStream& s, double z, double r, double Psi) {
    const HicksMoffattParams& p = s.params;
    double out = 0.0;
    if (Psi > 0.0) out += p.lambda1 * r * r + p.lambda2 * Psi;
    return out;
}

struct ResidualReport {
    GridField field;        // |-L Psi - rhs| on probed nodes, 0 elsewhere
    double max_interior = 0.0;   // max over probed nodes
    double scale = 0.0;          // max |rhs| over the grid
    double max_relative = 0.0;   // max_interior / scale
};

// Pointwise residual of the stream equation by centered differences.
// Probes exclude a band of width 2h around the matching sphere sigma = a,
// where Psi is only C^1.
inline ResidualReport explicit_residual(const ExplicitStream& s, const AxiGrid& g) {
    GridField Psi = sample_psi(s, g);
    GridField L = apply_L(Psi);
    ResidualReport rep{GridField(g), 0.0, 0.0, 0.0};
    const double band = 2.0 * std::max(g.hz(), g.hr());
    for (int j = 1; j < g.nr - 1; ++j) {
        for (int i = 1; i < g.nz - 1; ++i) {
            double rhs = explicit_rhs(s, g.z(i), g.r(j), Psi(i, j));
            rep.scale = std::max(rep.scale, std::abs(rhs));
            double sigma = std::hypot(g.z(i), g.r(j));
            if (std::abs(sigma - s.params.a) <= band) continue;
            double e = std::abs(-L(i, j) - rhs);
            rep.field(i, j) = e;
            rep.max_interior = std::max(rep.max_interior, e);
        }
    }
    rep.max_relative = rep.scale > 0.0 ? rep.max_interior / rep.scale : rep.max_interior;
    return rep;
}

struct FactorLevelSet {
    double k = 0.0;
    enum class Kind { empty, core, complement } kind = Kind::empty;
    GridField region;      // indicator of the reported region (empty -> all zero)
    int node_count = 0;
};

// Level-set structure of the discontinuous factor f = lambda2^{1/2} 1_{Psi>0}:
// the cross section of f^{-1}(k) is {Psi > 0} at k = lambda2^{1/2}, the
// complement {Psi <= 0} at k = 0, and empty for every other k.
inline FactorLevelSet classify_factor_level_sets(const ExplicitStream& s, const AxiGrid& g, double k) {
    if (s.kind != ExplicitKind::generic && s.kind != ExplicitKind::chandrasekhar)
        throw std::invalid_argument("classify_factor_level_sets: factor is trivial without swirl");
    FactorLevelSet out;
    out.k = k;
    out.region = GridField(g);
    const double f_core = std::sqrt(s.params.lambda2);
    bool want_core = k == f_core;
    bool want_complement = k == 0.0;
    if (!want_core && !want_complement) return out;
    out.kind = want_core ? FactorLevelSet::Kind::core : FactorLevelSet::Kind::complement;
    for (int j = 0; j < g.nr; ++j) {
        for (int i = 0; i < g.nz; ++i) {
            bool in_core = explicit_psi(s, g.z(i), g.r(j)) > 0.0;
            bool in = want_core ? in_core : !in_core;
            out.region(i, j) = in ? 1.0 : 0.0;
            out.node_count += in;
        }
    }
    return out;
}

}  // namespace vring::hm
