#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "kleinjac/curve.hpp"

namespace kleinjac {

// Piecewise-linear path in the x-plane with a sheet label at the first
// waypoint. Closed paths do not repeat the initial waypoint; the last
// segment wraps around.
struct SurfacePath {
    std::vector<Complex> waypoints;
    int start_sheet = +1;
    bool closed = false;

    std::size_t segment_count() const {
        if (waypoints.size() < 2) return 0;
        return closed ? waypoints.size() : waypoints.size() - 1;
    }
    Complex seg_a(std::size_t i) const { return waypoints[i]; }
    Complex seg_b(std::size_t i) const { return waypoints[(i + 1) % waypoints.size()]; }
};

inline double segment_point_distance(const Complex& a, const Complex& b, const Complex& q) {
    Complex d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(q - a);
    double t = ((q.real() - a.real()) * d.real() + (q.imag() - a.imag()) * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(q - (a + t * d));
}

namespace detail {

// One continuation step: given y0 with y0^2 = p(x0), pick the branch of
// sqrt(p(x1)) continuing y0 along the straight segment. A step is only taken
// when it is short against the distance to the branch set, which bounds the
// total argument rotation of p below pi and makes the nearest-root choice
// unambiguous; the quarter-turn dot test backstops the bound.
inline Complex continue_step(const CurveDescriptor& curve, Complex x0, Complex y0, Complex x1,
                             int depth = 0) {
    if (x0 == x1) return y0;
    if (depth <= 48) {
        double step_cap = std::sin(M_PI / (2.2 * static_cast<double>(curve.degree()))) *
                          curve.min_branch_distance(x0);
        if (std::abs(x1 - x0) > step_cap) {
            Complex mid = 0.5 * (x0 + x1);
            Complex ym = continue_step(curve, x0, y0, mid, depth + 1);
            return continue_step(curve, mid, ym, x1, depth + 1);
        }
    }
    Complex cand = std::sqrt(curve.p(x1));
    if (std::abs(-cand - y0) < std::abs(cand - y0)) cand = -cand;
    double dot = cand.real() * y0.real() + cand.imag() * y0.imag();
    double bound = 0.156 * std::abs(cand) * std::abs(y0);
    if (std::abs(cand) == 0.0 || dot > bound) return cand;
    if (depth > 48)
        fail(ErrorKind::BranchTooClose, "sheet continuation did not stabilize; path passes too "
                                        "close to a branch point");
    Complex mid = 0.5 * (x0 + x1);
    Complex ym = continue_step(curve, x0, y0, mid, depth + 1);
    return continue_step(curve, mid, ym, x1, depth + 1);
}

} // namespace detail

// The y value selected by a sheet label over a real coordinate.
inline Complex y_on_real_axis(const CurveDescriptor& curve, double t, int sheet) {
    Complex yp = curve.y_plus_real(t);
    return sheet > 0 ? yp : -yp;
}

// Canonical branch-avoiding route between two x-plane points: starts from the
// straight segment and deterministically pushes detour waypoints away from
// any branch point that comes within `clear` of a segment.
inline std::vector<Complex> route_avoiding(const CurveDescriptor& curve, Complex from, Complex to,
                                           double clear) {
    auto free_space = [&](const Complex& w) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& br : curve.branch_points) d = std::min(d, std::abs(w - br));
        return d;
    };
    std::vector<Complex> pts{from, to};
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i + 1 < pts.size() && !changed; ++i) {
            Complex a = pts[i], b = pts[i + 1];
            if (std::abs(b - a) < 1e-14 * std::max(1.0, curve.scale)) continue;
            for (const auto& br : curve.branch_points) {
                if (std::abs(br - a) < 0.5 * clear || std::abs(br - b) < 0.5 * clear) continue;
                if (segment_point_distance(a, b, br) >= clear) continue;
                Complex d = (b - a) / std::abs(b - a);
                Complex n(-d.imag(), d.real());
                double t = ((br.real() - a.real()) * d.real() + (br.imag() - a.imag()) * d.imag()) /
                           std::abs(b - a);
                t = std::clamp(t, 0.05, 0.95);
                Complex foot = a + t * (b - a);
                // Candidate detours on both sides at two depths; take the one
                // with the most space around it. Blind same-side pushes can
                // oscillate between the members of a tight cluster.
                Complex best = foot;
                double best_d = -1.0;
                for (double push : {1.7 * clear, -1.7 * clear, 3.2 * clear, -3.2 * clear}) {
                    Complex w = foot + push * n;
                    double fd = free_space(w);
                    if (fd > best_d) {
                        best_d = fd;
                        best = w;
                    }
                }
                pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(i) + 1, best);
                changed = true;
                break;
            }
        }
        if (!changed) return pts;
    }
    fail(ErrorKind::RoutingFailed, "could not route around branch points");
}

// y over an arbitrary x for a given sheet label, defined by continuation from
// the anchor along the canonical route.
inline Complex y_of(const CurveDescriptor& curve, Complex x, int sheet,
                    const Tolerances& tol = Tolerances{}) {
    if (x.imag() == 0.0) return y_on_real_axis(curve, x.real(), sheet);
    double clear = std::max(curve.clearance(tol), 0.02 * curve.min_gap);
    // Targets near a branch point still get a label; shrink the corridor.
    clear = std::min(clear, 0.45 * curve.min_branch_distance(x));
    Complex y = y_on_real_axis(curve, curve.anchor, +1);
    if (clear <= 0.0) return Complex(0.0, 0.0);  // x sits on a branch point
    std::vector<Complex> pts = route_avoiding(curve, Complex(curve.anchor, 0.0), x, clear);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        y = detail::continue_step(curve, pts[i], y, pts[i + 1]);
    return sheet > 0 ? y : -y;
}

inline int classify_sheet(const CurveDescriptor& curve, Complex x, Complex y,
                          const Tolerances& tol = Tolerances{}) {
    Complex yp = y_of(curve, x, +1, tol);
    return std::abs(y - yp) <= std::abs(y + yp) ? +1 : -1;
}

// Builds a surface point, canonicalizing the sheet at branch points.
inline SurfacePoint make_point(const CurveDescriptor& curve, Complex x, int sheet,
                               const Tolerances& tol = Tolerances{}) {
    SurfacePoint pt;
    pt.x = x;
    double snap = tol.point_eq * std::max(1.0, curve.scale);
    if (curve.min_branch_distance(x) <= snap) {
        pt.sheet = +1;  // the two sheets meet
        return pt;
    }
    pt.sheet = sheet > 0 ? +1 : -1;
    pt.y = y_of(curve, x, pt.sheet, tol);
    return pt;
}

// The anti-holomorphic involution: (x, y) -> (conj x, conj y); swaps the two
// points over infinity because the leading coefficient is negative.
inline SurfacePoint sigma_point(const CurveDescriptor& curve, const SurfacePoint& pt,
                                const Tolerances& tol = Tolerances{}) {
    if (!pt.finite())
        return SurfacePoint::infinity(pt.at == SurfacePoint::At::InfPlus ? -1 : +1);
    SurfacePoint out;
    out.x = std::conj(pt.x);
    double snap = tol.point_eq * std::max(1.0, curve.scale);
    if (curve.min_branch_distance(out.x) <= snap) {
        out.sheet = +1;
        return out;
    }
    Complex y = pt.y ? *pt.y : y_of(curve, pt.x, pt.sheet, tol);
    Complex yc = std::conj(y);
    out.sheet = classify_sheet(curve, out.x, yc, tol);
    out.y = yc;
    return out;
}

// Continues y along the waypoints. For closed paths the continued value must
// return to the starting branch, otherwise the path is not a cycle on the
// surface and SheetMismatch is raised.
inline std::vector<Complex> continue_y(const CurveDescriptor& curve, const SurfacePath& path,
                                       const Tolerances& tol = Tolerances{}) {
    if (path.waypoints.empty()) fail(ErrorKind::BadInput, "empty path");
    double clear = curve.clearance(tol);
    for (std::size_t i = 0; i < path.segment_count(); ++i)
        for (const auto& br : curve.branch_points)
            if (segment_point_distance(path.seg_a(i), path.seg_b(i), br) < clear)
                fail(ErrorKind::BranchTooClose, "path segment violates branch clearance");

    std::vector<Complex> ys;
    ys.reserve(path.waypoints.size() + 1);
    Complex y = y_of(curve, path.waypoints.front(), path.start_sheet, tol);
    ys.push_back(y);
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
        y = detail::continue_step(curve, path.waypoints[i - 1], ys.back(), path.waypoints[i]);
        ys.push_back(y);
    }
    if (path.closed && path.waypoints.size() >= 2) {
        Complex yend = detail::continue_step(curve, path.waypoints.back(), ys.back(),
                                             path.waypoints.front());
        if (std::abs(yend - ys.front()) > std::abs(yend + ys.front()))
            fail(ErrorKind::SheetMismatch, "closed flag set but continuation flips the sheet");
    }
    return ys;
}

// Reversal of a closed cycle, keeping the start point and its sheet label.
// Open paths would need the continued end sheet as the new label, which the
// caller has to supply; they are rejected here.
inline SurfacePath reverse_path(const SurfacePath& p) {
    if (!p.closed) fail(ErrorKind::BadInput, "reverse_path expects a closed cycle");
    SurfacePath r = p;
    r.waypoints.clear();
    r.waypoints.push_back(p.waypoints.front());
    for (std::size_t i = p.waypoints.size(); i-- > 1;) r.waypoints.push_back(p.waypoints[i]);
    return r;
}

// Image of a path under the involution: conjugate waypoints in order, with
// the sheet label recomputed from the conjugated seed value.
inline SurfacePath conj_path(const CurveDescriptor& curve, const SurfacePath& p,
                             const Tolerances& tol = Tolerances{}) {
    SurfacePath out = p;
    for (auto& w : out.waypoints) w = std::conj(w);
    Complex y0 = y_of(curve, p.waypoints.front(), p.start_sheet, tol);
    out.start_sheet = classify_sheet(curve, out.waypoints.front(), std::conj(y0), tol);
    return out;
}

namespace detail {

// Square detour around the first upper branch point; winding it once flips
// the sheet of everything continued through the detour.
inline void append_flip_gadget(const CurveDescriptor& curve, std::vector<Complex>& pts) {
    Complex c = curve.pairs.front().upper;
    double h = 0.15 * curve.min_gap;
    Complex entry = c + Complex(h, 0.0);
    pts.push_back(entry);
    pts.push_back(c + Complex(0.0, h));
    pts.push_back(c + Complex(-h, 0.0));
    pts.push_back(c + Complex(0.0, -h));
    pts.push_back(entry);
}

} // namespace detail

// Realizes an integer combination of closed loops as one closed path: hub ->
// loop -> hub bridges whose outgoing and returning copies cancel in every
// integral and intersection count. `salt` decorrelates hubs and applies a
// tiny scale jitter so distinct chains never overlap segment-on-segment.
inline SurfacePath realize_chain(const CurveDescriptor& curve,
                                 const std::vector<SurfacePath>& loops,
                                 const std::vector<long long>& coeffs, int salt,
                                 const Tolerances& tol = Tolerances{}) {
    if (loops.size() != coeffs.size()) fail(ErrorKind::Internal, "chain size mismatch");
    // Single-loop chains stay geometric.
    int nonzero = 0;
    std::size_t only = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) {
            ++nonzero;
            only = i;
        }
    if (nonzero == 0) fail(ErrorKind::Internal, "empty chain");
    if (nonzero == 1 && (coeffs[only] == 1 || coeffs[only] == -1))
        return coeffs[only] == 1 ? loops[only] : reverse_path(loops[only]);

    double clear = std::max(curve.clearance(tol), 0.05 * curve.min_gap);
    Complex hub(curve.anchor + (0.013 + 0.037 * static_cast<double>(salt % 17)) * curve.scale,
                0.0);
    std::vector<Complex> pts{hub};
    Complex y_hub = y_on_real_axis(curve, hub.real(), +1);

    for (std::size_t i = 0; i < loops.size(); ++i) {
        long long m = coeffs[i];
        if (m == 0) continue;
        const SurfacePath& loop = loops[i];
        Complex start = loop.waypoints.front();
        Complex y_need = y_of(curve, start, loop.start_sheet, tol);
        for (long long rep = 0; rep < std::llabs(m); ++rep) {
            std::vector<Complex> route = route_avoiding(curve, hub, start, clear);
            std::vector<Complex> bridge;
            bool reached = false;
            for (int gadgets = 0; gadgets <= 2 && !reached; ++gadgets) {
                bridge.assign(1, hub);
                for (int i = 0; i < gadgets; ++i) detail::append_flip_gadget(curve, bridge);
                bridge.insert(bridge.end(), route.begin() + 1, route.end());
                Complex y = y_hub;
                for (std::size_t k = 0; k + 1 < bridge.size(); ++k)
                    y = detail::continue_step(curve, bridge[k], y, bridge[k + 1]);
                reached = std::abs(y - y_need) <= std::abs(y + y_need);
            }
            if (!reached)
                fail(ErrorKind::Internal, "flip gadget failed to adjust arrival sheet");
            // out
            pts.insert(pts.end(), bridge.begin() + 1, bridge.end());
            // the loop itself (forwards or backwards)
            if (m > 0) {
                for (std::size_t k = 1; k < loop.waypoints.size(); ++k)
                    pts.push_back(loop.waypoints[k]);
            } else {
                for (std::size_t k = loop.waypoints.size(); k-- > 1;)
                    pts.push_back(loop.waypoints[k]);
            }
            pts.push_back(start);
            // back, retracing the bridge
            for (std::size_t k = bridge.size() - 1; k-- > 0;) pts.push_back(bridge[k]);
        }
    }
    // Drop the final duplicate hub; the closed path wraps.
    if (std::abs(pts.back() - hub) < 1e-15 * std::max(1.0, curve.scale)) pts.pop_back();

    SurfacePath chain;
    chain.waypoints = std::move(pts);
    chain.start_sheet = +1;
    chain.closed = true;

    // Tiny scale jitter about the hub so copies of the same loop embedded in
    // different chains cross transversally instead of overlapping.
    double eps = 3e-6 * (1.0 + 0.31 * static_cast<double>(salt % 13));
    for (auto& w : chain.waypoints) w = hub + (w - hub) * (1.0 + eps);
    return chain;
}

} // namespace kleinjac
