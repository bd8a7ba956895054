#pragma once

// Marching-squares contour extraction on the node lattice, with the polygon
// predicates needed by the topology checks: closedness, simplicity, pairwise
// nesting, and shrink-to-point at the top level.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "vring/grid.hpp"
#include "vring/model.hpp"

namespace vring::contour {

struct Point {
    double z, r;
};

struct Polyline {
    std::vector<Point> pts;
    bool closed = false;

    double area() const {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
            s += pts[k].z * pts[k + 1].r - pts[k + 1].z * pts[k].r;
        if (closed && !pts.empty())
            s += pts.back().z * pts.front().r - pts.front().z * pts.back().r;
        return 0.5 * s;
    }
    Point centroid() const {
        Point c{0.0, 0.0};
        for (const Point& p : pts) { c.z += p.z; c.r += p.r; }
        if (!pts.empty()) { c.z /= pts.size(); c.r /= pts.size(); }
        return c;
    }
    double diameter() const {
        double zmin = 1e300, zmax = -1e300, rmin = 1e300, rmax = -1e300;
        for (const Point& p : pts) {
            zmin = std::min(zmin, p.z); zmax = std::max(zmax, p.z);
            rmin = std::min(rmin, p.r); rmax = std::max(rmax, p.r);
        }
        return std::hypot(zmax - zmin, rmax - rmin);
    }
};

namespace detail {

// edge key: (i, j, 0) for the z-edge from node (i,j) to (i+1,j),
//           (i, j, 1) for the r-edge from node (i,j) to (i,j+1)
using EdgeKey = std::array<int, 3>;

inline Point edge_point(const GridField& f, double level, const EdgeKey& e) {
    const AxiGrid& g = f.grid;
    int i = e[0], j = e[1];
    double va = f(i, j) - level;
    double vb = (e[2] == 0 ? f(i + 1, j) : f(i, j + 1)) - level;
    double t = va / (va - vb);
    if (e[2] == 0) return {g.z(i) + t * g.hz(), g.r(j)};
    return {g.z(i), g.r(j) + t * g.hr()};
}

}  // namespace detail

// All level-l contour components of f, chained into polylines. Saddle cells
// are disambiguated by the cell-center average.
inline std::vector<Polyline> extract_contours(const GridField& f, double level) {
    using detail::EdgeKey;
    const AxiGrid& g = f.grid;
    // per-cell segments as pairs of edge keys
    struct Seg {
        EdgeKey a, b;
    };
    std::vector<Seg> segs;
    std::map<EdgeKey, std::vector<int>> incident;
    auto add_seg = [&](const EdgeKey& a, const EdgeKey& b, int, int) {
        incident[a].push_back(static_cast<int>(segs.size()));
        incident[b].push_back(static_cast<int>(segs.size()));
        segs.push_back({a, b});
    };
    for (int j = 0; j < g.nr - 1; ++j) {
        for (int i = 0; i < g.nz - 1; ++i) {
            double v00 = f(i, j) - level, v10 = f(i + 1, j) - level;
            double v11 = f(i + 1, j + 1) - level, v01 = f(i, j + 1) - level;
            int mask = (v00 > 0) | ((v10 > 0) << 1) | ((v11 > 0) << 2) | ((v01 > 0) << 3);
            if (mask == 0 || mask == 15) continue;
            EdgeKey bottom{i, j, 0}, top{i, j + 1, 0}, left{i, j, 1}, right{i + 1, j, 1};
            switch (mask) {
                case 1: case 14: add_seg(bottom, left, i, j); break;
                case 2: case 13: add_seg(bottom, right, i, j); break;
                case 3: case 12: add_seg(left, right, i, j); break;
                case 4: case 11: add_seg(top, right, i, j); break;
                case 6: case 9: add_seg(bottom, top, i, j); break;
                case 7: case 8: add_seg(top, left, i, j); break;
                case 5: case 10: {
                    double center = 0.25 * (v00 + v10 + v11 + v01);
                    bool c = center > 0;
                    if ((mask == 5) == c) {
                        add_seg(left, top, i, j);
                        add_seg(bottom, right, i, j);
                    } else {
                        add_seg(left, bottom, i, j);
                        add_seg(top, right, i, j);
                    }
                    break;
                }
            }
        }
    }
    std::vector<Polyline> out;
    std::vector<char> used(segs.size(), 0);
    auto next_seg = [&](const EdgeKey& e) -> int {
        auto it = incident.find(e);
        if (it == incident.end()) return -1;
        for (int s : it->second)
            if (!used[s]) return s;
        return -1;
    };
    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
        if (used[s0]) continue;
        std::vector<EdgeKey> chain{segs[s0].a, segs[s0].b};
        used[s0] = 1;
        bool closed = false;
        // grow at the tail
        while (true) {
            int s = next_seg(chain.back());
            if (s < 0) break;
            used[s] = 1;
            chain.push_back(segs[s].a == chain.back() ? segs[s].b : segs[s].a);
            if (chain.back() == chain.front()) {
                closed = true;
                chain.pop_back();
                break;
            }
        }
        if (!closed) {
            // grow at the head (open chains hitting the domain boundary)
            while (true) {
                int s = next_seg(chain.front());
                if (s < 0) break;
                used[s] = 1;
                chain.insert(chain.begin(), segs[s].a == chain.front() ? segs[s].b : segs[s].a);
            }
        }
        Polyline line;
        line.closed = closed;
        line.pts.reserve(chain.size());
        for (const EdgeKey& e : chain) {
            Point p = detail::edge_point(f, level, e);
            // a level passing exactly through a node puts the same point on
            // two incident edges; drop the duplicate
            if (!line.pts.empty() && line.pts.back().z == p.z && line.pts.back().r == p.r) continue;
            line.pts.push_back(p);
        }
        if (line.closed && line.pts.size() > 1 && line.pts.front().z == line.pts.back().z &&
            line.pts.front().r == line.pts.back().r)
            line.pts.pop_back();
        if (line.pts.size() >= 2) out.push_back(std::move(line));
    }
    return out;
}

// Winding-number point-in-polygon for closed polylines.
inline bool contains(const Polyline& poly, const Point& p) {
    int wn = 0;
    std::size_t n = poly.pts.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point& a = poly.pts[k];
        const Point& b = poly.pts[(k + 1) % n];
        if (a.r <= p.r) {
            if (b.r > p.r && (b.z - a.z) * (p.r - a.r) - (p.z - a.z) * (b.r - a.r) > 0) ++wn;
        } else if (b.r <= p.r && (b.z - a.z) * (p.r - a.r) - (p.z - a.z) * (b.r - a.r) < 0) {
            --wn;
        }
    }
    return wn != 0;
}

// Simplicity by pairwise segment intersection (adjacent segments share an
// endpoint and are skipped).
inline bool is_simple(const Polyline& poly) {
    auto seg = [&](std::size_t k) {
        std::size_t n = poly.pts.size();
        return std::pair<Point, Point>{poly.pts[k], poly.pts[(k + 1) % n]};
    };
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a.z - o.z) * (b.r - o.r) - (a.r - o.r) * (b.z - o.z);
    };
    std::size_t n = poly.pts.size();
    if (n < 4) return true;
    std::size_t nseg = poly.closed ? n : n - 1;
    for (std::size_t p = 0; p < nseg; ++p) {
        for (std::size_t q = p + 2; q < nseg; ++q) {
            if (p == 0 && q == nseg - 1 && poly.closed) continue;
            auto [a, b] = seg(p);
            auto [c, d] = seg(q);
            double d1 = cross(a, b, c), d2 = cross(a, b, d);
            double d3 = cross(c, d, a), d4 = cross(c, d, b);
            // proper transversal crossing only; endpoint touches (a level
            // through a grid node) are not self-intersections
            if (d1 * d2 < 0.0 && d3 * d4 < 0.0) return false;
        }
    }
    return true;
}

struct LevelContour {
    double k = 0.0;       // factor level
    double l = 0.0;       // stream level
    bool empty = true;
    bool closed = false;
    bool simple = false;
    bool degenerate = false;   // k = k0: a point, reported via the argmax
    Point center{0.0, 0.0};
    double diameter = 0.0;
    Polyline curve;
};

struct TopologyReport {
    double k0 = 0.0;
    double l0 = 0.0;
    Point argmax{0.0, 0.0};
    std::vector<LevelContour> levels;
    bool nested = false;       // successive contours strictly contained
    bool shrink_to_core = false;
};

// Interpolation-refined argmax of the shifted field.
inline Point refine_argmax(const GridField& Psi) {
    const AxiGrid& g = Psi.grid;
    int bi = 1, bj = 1;
    double best = -1e300;
    for (int j = 1; j < g.nr - 1; ++j)
        for (int i = 1; i < g.nz - 1; ++i)
            if (Psi(i, j) > best) { best = Psi(i, j); bi = i; bj = j; }
    auto peak1d = [](double vm, double v0, double vp) {
        double den = vm - 2.0 * v0 + vp;
        if (den >= 0.0) return 0.0;
        return 0.5 * (vm - vp) / den;
    };
    double dz = peak1d(Psi(bi - 1, bj), Psi(bi, bj), Psi(bi + 1, bj));
    double dr = peak1d(Psi(bi, bj - 1), Psi(bi, bj), Psi(bi, bj + 1));
    return {g.z(bi) + dz * g.hz(), g.r(bj) + dr * g.hr()};
}

// Level sets of the factor f = Gamma'(Psi): for 0 < k < k0 the cross section
// is the closed stream contour Psi = (k / sqrt(lambda q))^{1/(q-1)}; outside
// (0, k0) it is empty, and it degenerates to the argmax point at k = k0.
inline TopologyReport factor_level_sets(const StreamSolution& sol, const std::vector<double>& ks) {
    TopologyReport rep;
    GridField Psi = sol.shifted();
    SwirlProfile prof = sol.profile();
    rep.l0 = sol.l0();
    rep.k0 = prof.k0(rep.l0);
    rep.argmax = refine_argmax(Psi);
    for (double k : ks) {
        LevelContour lc;
        lc.k = k;
        if (k <= 0.0 || k > rep.k0) {
            if (k == rep.k0) {
                lc.degenerate = true;
                lc.empty = false;
                lc.center = rep.argmax;
            }
            rep.levels.push_back(lc);
            continue;
        }
        lc.l = prof.level_for(k);
        if (lc.l >= rep.l0) {
            lc.degenerate = true;
            lc.empty = false;
            lc.center = rep.argmax;
            rep.levels.push_back(lc);
            continue;
        }
        auto curves = extract_contours(Psi, lc.l);
        if (curves.empty()) { rep.levels.push_back(lc); continue; }
        std::size_t biggest = 0;
        for (std::size_t c = 1; c < curves.size(); ++c)
            if (std::abs(curves[c].area()) > std::abs(curves[biggest].area())) biggest = c;
        lc.curve = curves[biggest];
        lc.empty = false;
        lc.closed = lc.curve.closed && curves.size() == 1;
        lc.simple = is_simple(lc.curve);
        lc.center = lc.curve.centroid();
        lc.diameter = lc.curve.diameter();
        rep.levels.push_back(std::move(lc));
    }
    // nesting: for increasing k inside (0, k0), each contour strictly inside the previous
    rep.nested = true;
    rep.shrink_to_core = true;
    const LevelContour* prev = nullptr;
    for (const LevelContour& lc : rep.levels) {
        if (lc.empty || lc.degenerate || lc.curve.pts.empty()) continue;
        if (prev) {
            if (!(lc.k > prev->k)) continue;
            for (const Point& p : lc.curve.pts)
                if (!contains(prev->curve, p)) { rep.nested = false; break; }
            if (!(lc.diameter < prev->diameter)) rep.shrink_to_core = false;
        }
        prev = &lc;
    }
    if (prev) {
        // the innermost contour must enclose the argmax
        if (!contains(prev->curve, rep.argmax)) rep.nested = false;
    }
    return rep;
}

}  // namespace vring::contour
