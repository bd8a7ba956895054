#pragma once

// Test-only oracles, independent of the library's evaluation paths.

#include <cmath>

namespace oracles {

// Exact area of {u^2 + v^2 <= a^2} intersected with [z0,z1] x [r0,r1],
// by inclusion-exclusion of the signed quarter-plane areas
//   G(x, y) = area of the disk inside [0,x] x [0,y]  (signed for x, y < 0).
inline double disk_box_area(double a, double z0, double z1, double r0, double r1) {
    auto primitive = [a](double u) {  // int sqrt(a^2 - u^2) du
        return 0.5 * (u * std::sqrt(std::max(a * a - u * u, 0.0)) + a * a * std::asin(std::clamp(u / a, -1.0, 1.0)));
    };
    auto G = [&](double x, double y) -> double {
        double sx = x < 0 ? -1.0 : 1.0, sy = y < 0 ? -1.0 : 1.0;
        x = std::abs(x);
        y = std::abs(y);
        double xa = std::min(x, a);
        if (xa <= 0.0 || y <= 0.0) return 0.0;
        double ustar = y >= a ? a : std::sqrt(a * a - y * y);
        double ucut = std::min(xa, ustar);
        double area = ucut * y;
        if (xa > ucut) area += primitive(xa) - primitive(ucut);
        return sx * sy * area;
    };
    return G(z1, r1) - G(z0, r1) - G(z1, r0) + G(z0, r0);
}

// Covered fraction of the node-centered cell at (z, r) with spacings hz, hr.
inline double disk_cell_coverage(double a, double z, double r, double hz, double hr) {
    return disk_box_area(a, z - 0.5 * hz, z + 0.5 * hz, r - 0.5 * hr, r + 0.5 * hr) / (hz * hr);
}

// Manufactured solution psi* = r^2 (R - r)(Z^2 - z^2) exp(-z^2 - r^2),
// vanishing on the whole boundary of [-Z, Z] x [0, R], and its -L psi*.
inline double mms_psi(double z, double r, double Z, double R) {
    return r * r * (R - r) * (Z * Z - z * z) * std::exp(-z * z - r * r);
}

inline double mms_rhs(double z, double r, double Z, double R) {
    const double ez = std::exp(-z * z), er = std::exp(-r * r);
    const double A = (R * r * r - r * r * r) * er;
    const double B = (Z * Z - z * z) * ez;
    const double Bpp = ez * (-2.0 * (Z * Z + 1.0 - z * z) + 4.0 * z * z + 4.0 * z * z * (Z * Z + 1.0 - z * z));
    const double Astar = er * (-3.0 * r - 8.0 * R * r * r + 12.0 * r * r * r + 4.0 * R * r * r * r * r -
                               4.0 * r * r * r * r * r);  // A'' - A'/r
    return -(A * Bpp + B * Astar);
}

}  // namespace oracles
