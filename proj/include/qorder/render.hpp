#pragma once

// SVG rendering of the dim-3 fundamental-domain geometry: the fundamental
// parallelogram of the planar lattice, unit circles centered at lattice
// points, and the region not covered by the unit disks.  Emptiness of the
// uncovered region (covering radius <= 1) is decided exactly; its area is
// reported as a certified rational interval from an exact grid subdivision.
// Drawing coordinates are fixed-precision decimals derived deterministically
// from the exact data, so identical inputs produce identical bytes.

#include "geometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace qorder {

struct RenderResult {
    std::string svg;
    Rat uncovered_area_lo, uncovered_area_hi;  // certified interval
    bool uncovered_empty;                      // covering radius <= 1, exact
};

namespace render_detail {

struct Pt {
    double x, y;
};

inline std::string fmt(double v) {
    char buf[40];
    // normalize negative zero for byte-stable output
    if (v == 0) v = 0;
    snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// Exact squared distance from a point to a segment, all in the plane with a
// diagonal quadratic form.
inline Rat seg_dist_sq(const QMat& form, const QVec& p, const QVec& a, const QVec& b) {
    QVec ab = qvec_sub(b, a), ap = qvec_sub(p, a);
    Rat denom = form_norm(form, ab);
    Rat t = denom == 0 ? Rat(0) : form_inner(form, ap, ab) / denom;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    QVec closest = qvec_add(a, qvec_scale(t, ab));
    return form_norm(form, qvec_sub(p, closest));
}

// Exact squared distance from a point to the (closed) parallelogram cell
// {s u + t v : 0 <= s, t <= 1}.
inline Rat cell_dist_sq(const QMat& form, const QVec& p, const QVec& u, const QVec& v) {
    // inside test in cell coordinates
    QMat B = {u, v};
    auto st = qmat_solve(qmat_transpose(B), p);
    if (st && (*st)[0] >= 0 && (*st)[0] <= 1 && (*st)[1] >= 0 && (*st)[1] <= 1) return Rat(0);
    QVec zero(2, Rat(0));
    Rat best = seg_dist_sq(form, p, zero, u);
    best = std::min(best, seg_dist_sq(form, p, zero, v));
    best = std::min(best, seg_dist_sq(form, p, u, qvec_add(u, v)));
    best = std::min(best, seg_dist_sq(form, p, v, qvec_add(u, v)));
    return best;
}

}  // namespace render_detail

// Deterministic SVG for a dim-3 order.  Canvas 800x800; red circle strokes,
// blue cell fill at 40% opacity, grey fill for the uncovered region.
inline RenderResult render_figures(const OrderLattice& O, int grid = 64) {
    if (O.dim() != 3)
        throw std::invalid_argument("render_figures: only dim 3 is supported");
    RenderResult out;
    GramLattice L = O.lattice;  // rank 2, coordinates over (1, sqrt(-d))
    const QMat& form = L.form;
    Rat d = form[1][1];
    double sd = std::sqrt(num(d).get_d() / den(d).get_d());
    auto euclid = [&](const QVec& v) -> render_detail::Pt {
        double x = num(v[0]).get_d() / den(v[0]).get_d();
        double y = (num(v[1]).get_d() / den(v[1]).get_d()) * sd;
        return {x, y};
    };

    const QVec& u = L.basis[0];
    const QVec& v = L.basis[1];

    // lattice points whose unit disks can meet the cell: exact coefficient box
    QMat ginv = *qmat_inverse(L.gram);
    Int r0 = ceil_sqrt(ginv[0][0]), r1 = ceil_sqrt(ginv[1][1]);
    std::vector<QVec> centers;
    for (Int m = -r0 - 1; m <= r0 + 2; ++m)
        for (Int n = -r1 - 1; n <= r1 + 2; ++n) {
            QVec c = qvec_add(qvec_scale(Rat(m), u), qvec_scale(Rat(n), v));
            if (render_detail::cell_dist_sq(form, c, u, v) <= 1) centers.push_back(c);
        }
    std::sort(centers.begin(), centers.end());

    // exact emptiness and certified area interval of the uncovered region
    auto rep = covering_radius(L);
    out.uncovered_empty = rep.covering_radius_sq <= 1;
    if (out.uncovered_empty) {
        out.uncovered_area_lo = out.uncovered_area_hi = 0;
    } else {
        Rat cell_area_sq = covolume_sq(L);  // (area of P)^2
        Rat sub_area = *exact_sqrt(cell_area_sq) / (Rat(grid) * Rat(grid));
        Rat lo = 0, hi = 0;
        for (int gi = 0; gi < grid; ++gi)
            for (int gj = 0; gj < grid; ++gj) {
                QVec corner[4];
                int k = 0;
                for (int di = 0; di <= 1; ++di)
                    for (int dj = 0; dj <= 1; ++dj) {
                        Rat s = make_rat(gi + di, grid), t = make_rat(gj + dj, grid);
                        corner[k++] = qvec_add(qvec_scale(s, u), qvec_scale(t, v));
                    }
                bool covered = false;
                for (auto& c : centers) {
                    bool all_in = true;
                    for (auto& p : corner)
                        if (form_norm(form, qvec_sub(p, c)) > 1) { all_in = false; break; }
                    if (all_in) { covered = true; break; }
                }
                if (covered) continue;
                bool empty = true;
                QVec su = qvec_scale(make_rat(1, grid), u), sv = qvec_scale(make_rat(1, grid), v);
                for (auto& c : centers) {
                    QVec rel = qvec_sub(c, corner[0]);
                    if (render_detail::cell_dist_sq(form, rel, su, sv) <= 1) { empty = false; break; }
                }
                if (empty) lo += sub_area;
                hi += sub_area;
            }
        out.uncovered_area_lo = lo;
        out.uncovered_area_hi = hi;
    }

    // ---- assemble the SVG ----
    using render_detail::Pt;
    using render_detail::fmt;
    Pt pu = euclid(u), pv = euclid(v);
    double xs[] = {0, pu.x, pv.x, pu.x + pv.x}, ys[] = {0, pu.y, pv.y, pu.y + pv.y};
    double minx = 0, maxx = 0, miny = 0, maxy = 0;
    for (double x : xs) { minx = std::min(minx, x); maxx = std::max(maxx, x); }
    for (double y : ys) { miny = std::min(miny, y); maxy = std::max(maxy, y); }
    minx -= 1.3; maxx += 1.3; miny -= 1.3; maxy += 1.3;
    double span = std::max(maxx - minx, maxy - miny);
    double scale = 800.0 / span;
    auto map = [&](Pt p) -> Pt {
        return {(p.x - minx) * scale, 800.0 - (p.y - miny) * scale};
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"800\" viewBox=\"0 0 800 800\">\n";
    svg << "<desc>fundamental cell with unit circles; uncovered-area-interval=["
        << rat_str(out.uncovered_area_lo) << "," << rat_str(out.uncovered_area_hi) << "]</desc>\n";
    // blue cell
    {
        Pt q0 = map({0, 0}), q1 = map(pu), q2 = map({pu.x + pv.x, pu.y + pv.y}), q3 = map(pv);
        svg << "<polygon points=\"" << fmt(q0.x) << "," << fmt(q0.y) << " " << fmt(q1.x) << ","
            << fmt(q1.y) << " " << fmt(q2.x) << "," << fmt(q2.y) << " " << fmt(q3.x) << ","
            << fmt(q3.y) << "\" fill=\"#3366cc\" fill-opacity=\"0.4\" stroke=\"none\"/>\n";
    }
    // grey uncovered region: exact circle-arc boundary paths
    if (!out.uncovered_empty) {
        // On each circle, collect the angular intervals covered by the other
        // disks; the complementary arcs bound the uncovered region.  Arc data
        // is exact; angles are evaluated numerically only for drawing.
        struct Arc {
            Pt a, b;      // endpoints (euclidean, unmapped)
            Pt center;
            int large;    // svg large-arc flag
        };
        std::vector<Arc> arcs;
        for (auto& ci : centers) {
            Pt pc = euclid(ci);
            std::vector<std::pair<double, double>> covered;
            for (auto& cj : centers) {
                if (&ci == &cj) continue;
                Rat d2 = form_norm(form, qvec_sub(ci, cj));
                if (d2 >= 4 || d2 == 0) continue;
                Pt pj = euclid(cj);
                double dist = std::sqrt(num(d2).get_d() / den(d2).get_d());
                double theta = std::atan2(pj.y - pc.y, pj.x - pc.x);
                double delta = std::acos(dist / 2.0);
                covered.push_back({theta - delta, theta + delta});
            }
            // normalize and merge intervals on [0, 2pi)
            const double TwoPi = 8 * std::atan(1.0);
            std::vector<std::pair<double, double>> norm;
            for (auto [a, b] : covered) {
                while (a < 0) { a += TwoPi; b += TwoPi; }
                if (b <= TwoPi) norm.push_back({a, b});
                else { norm.push_back({a, TwoPi}); norm.push_back({0, b - TwoPi}); }
            }
            std::sort(norm.begin(), norm.end());
            std::vector<std::pair<double, double>> merged;
            for (auto& iv : norm) {
                if (!merged.empty() && iv.first <= merged.back().second + 1e-12)
                    merged.back().second = std::max(merged.back().second, iv.second);
                else merged.push_back(iv);
            }
            // complement = uncovered arcs of this circle
            std::vector<std::pair<double, double>> gaps;
            if (merged.empty()) {
                gaps.push_back({0, TwoPi});
            } else {
                for (size_t k = 0; k + 1 < merged.size(); ++k)
                    gaps.push_back({merged[k].second, merged[k + 1].first});
                double wrap_gap = merged.front().first + TwoPi - merged.back().second;
                if (wrap_gap > 1e-12) gaps.push_back({merged.back().second, merged.back().second + wrap_gap});
            }
            for (auto [a, b] : gaps) {
                if (b - a < 1e-9) continue;
                // keep only arcs along the cell (midpoint inside the closed cell)
                double mid = (a + b) / 2;
                Pt pm = {pc.x + std::cos(mid), pc.y + std::sin(mid)};
                // map back to coefficient coordinates numerically
                // (selection only; harmless near ties)
                double det = pu.x * pv.y - pu.y * pv.x;
                double s = (pm.x * pv.y - pm.y * pv.x) / det;
                double t = (pu.x * pm.y - pu.y * pm.x) / det;
                if (s < -1e-9 || s > 1 + 1e-9 || t < -1e-9 || t > 1 + 1e-9) continue;
                arcs.push_back({{pc.x + std::cos(a), pc.y + std::sin(a)},
                                {pc.x + std::cos(b), pc.y + std::sin(b)},
                                pc,
                                (b - a) > TwoPi / 2 ? 1 : 0});
            }
        }
        std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
            return std::tie(x.a.x, x.a.y, x.b.x, x.b.y) < std::tie(y.a.x, y.a.y, y.b.x, y.b.y);
        });
        svg << "<g fill=\"none\" stroke=\"#888888\" stroke-width=\"3\">\n";
        for (auto& arc : arcs) {
            Pt A = map(arc.a), B = map(arc.b);
            double r = scale;  // unit radius in canvas units
            // svg y-axis points down, so the sweep flag flips
            svg << "<path d=\"M " << fmt(A.x) << " " << fmt(A.y) << " A " << fmt(r) << " " << fmt(r)
                << " 0 " << arc.large << " 0 " << fmt(B.x) << " " << fmt(B.y) << "\"/>\n";
        }
        svg << "</g>\n";
    }
    // red unit circles
    svg << "<g fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\">\n";
    for (auto& c : centers) {
        Pt pc = map(euclid(c));
        svg << "<circle cx=\"" << fmt(pc.x) << "\" cy=\"" << fmt(pc.y) << "\" r=\"" << fmt(scale)
            << "\"/>\n";
    }
    svg << "</g>\n";
    // cell outline on top
    {
        Pt q0 = map({0, 0}), q1 = map(pu), q2 = map({pu.x + pv.x, pu.y + pv.y}), q3 = map(pv);
        svg << "<polygon points=\"" << fmt(q0.x) << "," << fmt(q0.y) << " " << fmt(q1.x) << ","
            << fmt(q1.y) << " " << fmt(q2.x) << "," << fmt(q2.y) << " " << fmt(q3.x) << ","
            << fmt(q3.y) << "\" fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1\"/>\n";
    }
    svg << "</svg>\n";
    out.svg = svg.str();
    return out;
}

}  // namespace qorder
