#pragma once

#include <cmath>
#include <vector>

#include "kleinjac/intmatrix.hpp"
#include "kleinjac/path.hpp"

namespace kleinjac {

// Canonical homology data: 2g closed cycles ordered gamma_1..gamma_g,
// delta_1..delta_g with intersection matrix exactly ((0, -I), (I, 0)).
struct HomologyBasis {
    std::vector<SurfacePath> cycles;
    IMat intersection;
    int genus() const { return intersection.rows / 2; }
};

// Integer matrix of the involution acting on first homology in the basis;
// S^2 = I and S^t J S = -J hold exactly.
struct SigmaHomologyAction {
    IMat matrix;
};

namespace detail {

inline double cross2(const Complex& a, const Complex& b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

struct CycleTrace {
    const SurfacePath* path;
    std::vector<Complex> y;  // continued y at each waypoint
};

inline CycleTrace trace_cycle(const CurveDescriptor& curve, const SurfacePath& p,
                              const Tolerances& tol) {
    return CycleTrace{&p, continue_y(curve, p, tol)};
}

// Signed same-sheet crossing count for one jitter attempt. Crossing sign is
// chosen so that the basis built below satisfies the ((0,-I),(I,0))
// convention with positive-definite Im tau.
inline double crossing_sum(const CurveDescriptor& curve, const CycleTrace& ta,
                           const SurfacePath& b, const std::vector<Complex>& yb,
                           const Tolerances& tol) {
    (void)tol;
    const SurfacePath& a = *ta.path;
    double scale = std::max(1.0, curve.scale);
    double total = 0.0;
    for (std::size_t i = 0; i < a.segment_count(); ++i) {
        Complex a0 = a.seg_a(i), a1 = a.seg_b(i);
        Complex d1 = a1 - a0;
        double l1 = std::abs(d1);
        if (l1 < 1e-14 * scale) continue;
        for (std::size_t j = 0; j < b.segment_count(); ++j) {
            Complex b0 = b.seg_a(j), b1 = b.seg_b(j);
            Complex d2 = b1 - b0;
            double l2 = std::abs(d2);
            if (l2 < 1e-14 * scale) continue;
            double den = cross2(d1, d2);
            if (std::abs(den) < 1e-12 * l1 * l2) {
                // parallel: reject overlapping collinear segments
                double off = std::abs(cross2(b0 - a0, d1)) / l1;
                if (off < 1e-11 * scale) {
                    double t0 = ((b0.real() - a0.real()) * d1.real() +
                                 (b0.imag() - a0.imag()) * d1.imag()) /
                                (l1 * l1);
                    double t1 = ((b1.real() - a0.real()) * d1.real() +
                                 (b1.imag() - a0.imag()) * d1.imag()) /
                                (l1 * l1);
                    double lo = std::min(t0, t1), hi = std::max(t0, t1);
                    if (hi > 1e-9 && lo < 1.0 - 1e-9)
                        fail(ErrorKind::NonTransversal, "collinear overlapping segments");
                }
                continue;
            }
            Complex r = b0 - a0;
            double s = cross2(r, d2) / den;
            double t = cross2(r, d1) / den;
            double margin = 1e-7;
            if (s < -margin || s > 1.0 + margin || t < -margin || t > 1.0 + margin) continue;
            if (s < margin || s > 1.0 - margin || t < margin || t > 1.0 - margin)
                fail(ErrorKind::NonTransversal, "crossing too close to a segment endpoint");
            Complex x = a0 + s * d1;
            Complex y1 = continue_step(curve, a0, ta.y[i], x);
            Complex y2 = continue_step(curve, b0, yb[j], x);
            bool same_sheet = std::abs(y1 - y2) <= std::abs(y1 + y2);
            if (same_sheet) total += den > 0.0 ? -1.0 : 1.0;
        }
    }
    return total;
}

} // namespace detail

// Signed crossing count of two closed cycles on the surface: an x-plane
// crossing contributes its orientation sign when both lifts run on the same
// sheet there. Retries with a tiny deterministic jitter on near-degenerate
// crossings.
inline long long intersection_number(const CurveDescriptor& curve, const SurfacePath& c1,
                                     const SurfacePath& c2, const Tolerances& tol = Tolerances{}) {
    if (c1.waypoints == c2.waypoints && c1.start_sheet == c2.start_sheet) return 0;
    detail::CycleTrace t1 = detail::trace_cycle(curve, c1, tol);
    for (int attempt = 0; attempt < 7; ++attempt) {
        SurfacePath b = c2;
        if (attempt > 0) {
            // Jitter big enough to clear the endpoint margins yet far below
            // every routing clearance, so the homotopy class is untouched.
            // The translation part handles vertices lying exactly on the
            // other cycle's carrier lines (e.g. real-axis start points).
            Complex centroid(0.0, 0.0);
            for (const auto& w : b.waypoints) centroid += w;
            centroid /= static_cast<double>(b.waypoints.size());
            double f = 1.0 + 1.7e-5 * static_cast<double>(attempt * attempt);
            Complex rot = std::polar(f, 1.3e-6 * static_cast<double>(attempt));
            Complex shift = std::polar(1e-4 * curve.min_gap * static_cast<double>(attempt), 0.7);
            for (auto& w : b.waypoints) w = centroid + (w - centroid) * rot + shift;
        }
        try {
            std::vector<Complex> yb = continue_y(curve, b, tol);
            double sum = detail::crossing_sum(curve, t1, b, yb, tol);
            double rounded = std::floor(sum + 0.5);
            if (std::abs(sum - rounded) > 0.25)
                fail(ErrorKind::NonTransversal, "crossing sum is not close to an integer");
            return static_cast<long long>(rounded);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonTransversal || attempt == 6) throw;
        }
    }
    fail(ErrorKind::NonTransversal, "unreachable");
}

namespace detail {

// ---------------------------------------------------------------------------
// Cycle construction. Branch points come in conjugate pairs; each pair is
// joined by a conjugation-symmetric staple-shaped cut (straight when nothing
// blocks a vertical segment, bowed to the right otherwise). The gamma
// candidates are rectilinear tubes around the cuts; the delta candidates are
// nested dumbbell regions whose boundaries pass between the two members of
// exactly one cut.
// ---------------------------------------------------------------------------

struct CutLayout {
    double rho = 0.0;               // routing unit
    std::vector<double> bow;        // rightward bow per pair
    std::vector<double> tube;       // tube half-width per pair
    double lane = 0.0;              // sleeve x position
};

inline double puncture_segment_clearance(const CurveDescriptor& curve, Complex a, Complex b,
                                         const Complex& skip1, const Complex& skip2) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& q : curve.branch_points) {
        if (q == skip1 || q == skip2) continue;
        d = std::min(d, segment_point_distance(a, b, q));
    }
    return d;
}

inline CutLayout plan_cuts(const CurveDescriptor& curve, int attempt) {
    std::size_t n = curve.pairs.size();
    CutLayout lay;
    lay.rho = 0.25 * curve.min_gap * (1.0 - 0.04 * static_cast<double>(attempt));
    lay.bow.assign(n, 0.0);
    lay.tube.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        lay.tube[j] = lay.rho * (0.22 + 0.02 * static_cast<double>(j + 1));

    for (std::size_t j = 0; j < n; ++j) {
        Complex u = curve.pairs[j].upper;
        Complex l = curve.pairs[j].lower();
        double needed = 1.4 * lay.rho;
        if (puncture_segment_clearance(curve, l, u, u, l) >= needed) {
            lay.bow[j] = 0.0;
            continue;
        }
        double extent = 0.0;
        for (std::size_t i = 0; i < j; ++i) {
            if (std::abs(curve.pairs[i].upper.real() - u.real()) >
                lay.bow[i] + lay.tube[i] + 2.0 * lay.rho)
                continue;
            extent = std::max(extent, lay.bow[i] + lay.tube[i]);
        }
        lay.bow[j] = extent + lay.tube[j] + 1.0 * lay.rho;
        // verify the bowed staple keeps clear of foreign punctures
        for (int grow = 0; grow < 8; ++grow) {
            Complex c1 = u + Complex(lay.bow[j], 0.0);
            Complex c2 = l + Complex(lay.bow[j], 0.0);
            double d = std::min({puncture_segment_clearance(curve, u, c1, u, l),
                                 puncture_segment_clearance(curve, c1, c2, u, l),
                                 puncture_segment_clearance(curve, c2, l, u, l)});
            if (d >= 0.5 * lay.rho) break;
            lay.bow[j] += 0.7 * lay.rho;
            if (grow == 7) fail(ErrorKind::CutCollision, "cannot bow cut clear of punctures");
        }
    }
    double extent = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        extent = std::max(extent,
                          curve.pairs[j].upper.real() + lay.bow[j] + lay.tube[j]);
    }
    lay.lane = extent + (1.1 + 0.17 * static_cast<double>(attempt % 3)) * lay.rho;
    for (int shift = 0; shift < 24; ++shift) {
        bool clear = true;
        for (const auto& q : curve.branch_points)
            if (std::abs(q.real() - lay.lane) < 0.7 * lay.rho) clear = false;
        if (clear) break;
        lay.lane += 0.53 * lay.rho;
        if (shift == 23) fail(ErrorKind::CutCollision, "no free lane for delta corridors");
    }
    return lay;
}

inline double shoelace(const std::vector<Complex>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex& a = v[i];
        const Complex& b = v[(i + 1) % v.size()];
        s += cross2(a, b);
    }
    return 0.5 * s;
}

inline bool point_in_polygon(const std::vector<Complex>& poly, const Complex& q) {
    bool inside = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Complex& a = poly[i];
        const Complex& b = poly[(i + 1) % poly.size()];
        if ((a.imag() > q.imag()) == (b.imag() > q.imag())) continue;
        double xc = a.real() + (q.imag() - a.imag()) * (b.real() - a.real()) /
                                   (b.imag() - a.imag());
        if (xc > q.real()) inside = !inside;
    }
    return inside;
}

inline SurfacePath polygon_cycle(const CurveDescriptor& curve, std::vector<Complex> v,
                                 const Tolerances& tol) {
    if (shoelace(v) < 0.0) std::reverse(v.begin(), v.end());
    SurfacePath p;
    p.waypoints = std::move(v);
    p.closed = true;
    p.start_sheet = +1;
    (void)curve;
    (void)tol;
    return p;
}

// Rotates the vertex list so the waypoint closest to the positive real axis
// crossing of edge (x = xr) comes first, inserting the exact axis point. The
// first waypoint of every gamma cycle then lies on the real axis, which makes
// the homology involution fix the gamma classes on the nose.
inline std::vector<Complex> with_axis_start(std::vector<Complex> v, double xr) {
    std::vector<Complex> out;
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& a = v[i];
        const Complex& b = v[(i + 1) % n];
        if (std::abs(a.real() - xr) < 1e-12 && std::abs(b.real() - xr) < 1e-12 &&
            ((a.imag() < 0.0 && b.imag() > 0.0) || (a.imag() > 0.0 && b.imag() < 0.0))) {
            out.push_back(Complex(xr, 0.0));
            for (std::size_t k = 0; k < n; ++k) out.push_back(v[(i + 1 + k) % n]);
            return out;
        }
    }
    return v;  // no axis crossing on that edge; keep as built
}

inline SurfacePath ring_around_pair(const CurveDescriptor& curve, std::size_t j,
                                    const CutLayout& lay, const Tolerances& tol) {
    Complex u = curve.pairs[j].upper;
    double re = u.real(), h = u.imag();
    double t = lay.tube[j], bow = lay.bow[j];
    std::vector<Complex> v;
    if (bow == 0.0) {
        double r = re + t, l = re - t, top = h + t;
        v = {Complex(r, -top), Complex(r, top), Complex(l, top), Complex(l, -top)};
        v = with_axis_start(v, r);
    } else {
        double r = re + bow + t, l = re - t, ri = re + bow - t;
        double top = h + t, ti = h - t;
        v = {Complex(r, -top), Complex(r, top),  Complex(l, top),  Complex(l, ti),
             Complex(ri, ti),  Complex(ri, -ti), Complex(l, -ti),  Complex(l, -top)};
        v = with_axis_start(v, r);
    }
    SurfacePath p = polygon_cycle(curve, std::move(v), tol);
    // enclosure: exactly this conjugate pair
    for (std::size_t q = 0; q < curve.branch_points.size(); ++q) {
        bool inside = point_in_polygon(p.waypoints, curve.branch_points[q]);
        bool expected = std::abs(curve.branch_points[q] - u) < 1e-12 ||
                        std::abs(curve.branch_points[q] - std::conj(u)) < 1e-12;
        if (inside != expected)
            fail(ErrorKind::CutCollision, "ring encloses the wrong branch points");
    }
    return p;
}

struct Box {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    bool contains(const Complex& q, double margin) const {
        return q.real() > x0 + margin && q.real() < x1 - margin && q.imag() > y0 + margin &&
               q.imag() < y1 - margin;
    }
};

inline Box fit_box(const std::vector<Complex>& included, const std::vector<Complex>& excluded,
                   double m, double bias, double rho) {
    Box b;
    b.x0 = b.x1 = included.front().real();
    b.y0 = b.y1 = included.front().imag();
    for (const auto& q : included) {
        b.x0 = std::min(b.x0, q.real());
        b.x1 = std::max(b.x1, q.real());
        b.y0 = std::min(b.y0, q.imag());
        b.y1 = std::max(b.y1, q.imag());
    }
    double ix0 = b.x0, ix1 = b.x1, iy0 = b.y0, iy1 = b.y1;
    b.x0 -= m;
    b.x1 += m;
    b.y0 -= m;
    b.y1 += m;
    for (int pass = 0; pass < 64; ++pass) {
        bool dirty = false;
        for (const auto& q : excluded) {
            if (!b.contains(q, 0.15 * rho)) continue;
            // shrink the edge with the widest separating gap
            double gl = q.real() < ix0 ? ix0 - q.real() : -1.0;
            double gr = q.real() > ix1 ? q.real() - ix1 : -1.0;
            double gb = q.imag() < iy0 ? iy0 - q.imag() : -1.0;
            double gt = q.imag() > iy1 ? q.imag() - iy1 : -1.0;
            double best = std::max({gl, gr, gb, gt});
            if (best < 0.35 * rho)
                fail(ErrorKind::CutCollision, "no separating edge for excluded branch point");
            if (best == gl) b.x0 = q.real() + (ix0 - q.real()) * bias;
            else if (best == gr) b.x1 = q.real() - (q.real() - ix1) * bias;
            else if (best == gb) b.y0 = q.imag() + (iy0 - q.imag()) * bias;
            else b.y1 = q.imag() - (q.imag() - iy1) * bias;
            dirty = true;
        }
        if (!dirty) return b;
    }
    fail(ErrorKind::CutCollision, "box fitting did not converge");
}

// Delta candidate k (1-based): boundary of the region made of a box around
// the upper points of pairs k..g+1, a box around the lower points of pairs
// k+1..g, and a sleeve at the lane connecting them. Encloses exactly one
// member of cut k and one of cut g+1, and both members of everything between.
inline SurfacePath delta_candidate(const CurveDescriptor& curve, int k, const CutLayout& lay,
                                   const Tolerances& tol) {
    int g = curve.genus;
    std::vector<Complex> up, low, excluded;
    for (int j = k; j <= g + 1; ++j) up.push_back(curve.pairs[static_cast<std::size_t>(j - 1)].upper);
    for (int j = k + 1; j <= g; ++j) low.push_back(curve.pairs[static_cast<std::size_t>(j - 1)].lower());
    for (const auto& q : curve.branch_points) {
        bool is_up = false, is_low = false;
        for (const auto& p : up)
            if (std::abs(q - p) < 1e-12) is_up = true;
        for (const auto& p : low)
            if (std::abs(q - p) < 1e-12) is_low = true;
        if (!is_up && !is_low) excluded.push_back(q);
    }
    double m = lay.rho * (1.0 - 0.06 * static_cast<double>(k));
    double bias = 0.42 + 0.03 * static_cast<double>(k);
    Box ub = fit_box(up, excluded, m, bias, lay.rho);

    if (low.empty()) {
        std::vector<Complex> v{Complex(ub.x1, ub.y0), Complex(ub.x1, ub.y1),
                               Complex(ub.x0, ub.y1), Complex(ub.x0, ub.y0)};
        SurfacePath p = polygon_cycle(curve, std::move(v), tol);
        for (const auto& q : curve.branch_points) {
            bool inside = point_in_polygon(p.waypoints, q);
            bool expected = false;
            for (const auto& pt : up)
                if (std::abs(q - pt) < 1e-12) expected = true;
            if (inside != expected)
                fail(ErrorKind::CutCollision, "delta rectangle encloses the wrong points");
        }
        return p;
    }

    Box lb = fit_box(low, excluded, 0.92 * m, bias, lay.rho);
    double w = lay.rho * (0.20 - 0.015 * static_cast<double>(k));
    // widen both boxes to reach the sleeve
    double need = lay.lane + w + 0.25 * m;
    ub.x1 = std::max(ub.x1, need);
    lb.x1 = std::max(lb.x1, need);
    for (const auto& q : excluded)
        if (ub.contains(q, 0.15 * lay.rho) || lb.contains(q, 0.15 * lay.rho))
            fail(ErrorKind::CutCollision, "sleeve widening swallowed a branch point");
    // sleeve must be clear of punctures over its whole vertical span
    for (const auto& q : curve.branch_points)
        if (q.imag() > lb.y1 && q.imag() < ub.y0 && std::abs(q.real() - lay.lane) < w + 0.3 * lay.rho)
            fail(ErrorKind::CutCollision, "sleeve blocked by a branch point");

    std::vector<Complex> v{
        Complex(ub.x1, ub.y0),        Complex(ub.x1, ub.y1),        Complex(ub.x0, ub.y1),
        Complex(ub.x0, ub.y0),        Complex(lay.lane - w, ub.y0), Complex(lay.lane - w, lb.y1),
        Complex(lb.x0, lb.y1),        Complex(lb.x0, lb.y0),        Complex(lb.x1, lb.y0),
        Complex(lb.x1, lb.y1),        Complex(lay.lane + w, lb.y1), Complex(lay.lane + w, 0.0),
        Complex(lay.lane + w, ub.y0)};
    SurfacePath p = polygon_cycle(curve, std::move(v), tol);
    for (const auto& q : curve.branch_points) {
        bool inside = point_in_polygon(p.waypoints, q);
        bool expected = false;
        for (const auto& pt : up)
            if (std::abs(q - pt) < 1e-12) expected = true;
        for (const auto& pt : low)
            if (std::abs(q - pt) < 1e-12) expected = true;
        if (inside != expected) fail(ErrorKind::CutCollision, "dumbbell encloses the wrong points");
    }
    return p;
}

// Thin dog-bone fallback: a corridor from one upper point to another with a
// small square loop around each end. The corridor is offset perpendicular to
// the connecting line so it can never run through either endpoint puncture,
// whatever the configuration. Valid homology cycles even when the nested
// regions cannot be fit; canonicalized afterwards over the integers.
inline SurfacePath dogbone(const CurveDescriptor& curve, int k, const Tolerances& tol) {
    int g = curve.genus;
    Complex a = curve.pairs[static_cast<std::size_t>(k - 1)].upper;
    Complex b = curve.pairs[static_cast<std::size_t>(g)].upper;
    double h = 0.18 * curve.min_gap;
    Complex dir = (b - a) / std::abs(b - a);
    Complex n = Complex(0.0, 1.0) * dir;
    Complex ea = a + h * n, eb = b + h * n;
    std::vector<Complex> corridor = route_avoiding(curve, ea, eb, 2.2 * h);
    auto square = [&](Complex c, std::vector<Complex>& v) {
        v.push_back(c + h * (n * Complex(0.0, 1.0)));
        v.push_back(c - h * n);
        v.push_back(c - h * (n * Complex(0.0, 1.0)));
    };
    std::vector<Complex> v;
    v.push_back(ea);
    v.insert(v.end(), corridor.begin() + 1, corridor.end());
    square(b, v);
    v.push_back(eb);
    for (std::size_t i = corridor.size() - 1; i-- > 0;) v.push_back(corridor[i]);
    square(a, v);
    SurfacePath p;
    p.waypoints = std::move(v);
    p.closed = true;
    p.start_sheet = +1;
    (void)tol;
    return p;
}

inline IMat measure_gram(const CurveDescriptor& curve, const std::vector<SurfacePath>& cycles,
                         const Tolerances& tol) {
    int n = static_cast<int>(cycles.size());
    IMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            long long v = intersection_number(curve, cycles[static_cast<std::size_t>(i)],
                                              cycles[static_cast<std::size_t>(j)], tol);
            m(i, j) = v;
            m(j, i) = -v;
        }
    return m;
}

inline std::vector<long long> column_ll(const IMat& t, int j) {
    std::vector<long long> v(static_cast<std::size_t>(t.rows));
    for (int i = 0; i < t.rows; ++i) {
        const BigInt& e = t(i, j);
        if (e > 1000000 || e < -1000000)
            fail(ErrorKind::Internal, "basis change coefficient unreasonably large");
        v[static_cast<std::size_t>(i)] = e.convert_to<long long>();
    }
    return v;
}

} // namespace detail

// Builds the canonical homology basis from conjugation-symmetric branch cuts.
// The fast path uses nested regions whose Gram matrix is already standard up
// to orientation flips; if the geometry refuses (exotic configurations), a
// dog-bone candidate set is canonicalized over the integers instead.
inline HomologyBasis canonical_homology_basis(const CurveDescriptor& curve,
                                              const Config& config = Config{}) {
    const Tolerances& tol = config.tol;
    int g = curve.genus;
    IMat jstd = standard_symplectic_form(g);
    Error last(ErrorKind::CutCollision, "unattempted");
    auto recoverable = [](const Error& e) {
        return e.kind() == ErrorKind::CutCollision || e.kind() == ErrorKind::NonTransversal ||
               e.kind() == ErrorKind::NonIntegralCoefficient ||
               e.kind() == ErrorKind::BranchTooClose;
    };
    for (int attempt = 0; attempt <= tol.routing_retries; ++attempt) {
        int jat = attempt + static_cast<int>(config.seed % 3);
        detail::CutLayout lay;
        std::vector<SurfacePath> rings;
        try {
            lay = detail::plan_cuts(curve, jat);
            for (int k = 1; k <= g; ++k)
                rings.push_back(detail::ring_around_pair(curve, static_cast<std::size_t>(k - 1),
                                                         lay, tol));
            for (const auto& c : rings) continue_y(curve, c, tol);  // sheet-consistency check
        } catch (const Error& e) {
            if (!recoverable(e)) throw;
            last = e;
            continue;
        }

        // Fast path: nested regions measure to the standard form directly.
        try {
            std::vector<SurfacePath> cycles = rings;
            for (int k = 1; k <= g; ++k)
                cycles.push_back(detail::delta_candidate(curve, k, lay, tol));
            for (const auto& c : cycles) continue_y(curve, c, tol);

            IMat m = detail::measure_gram(curve, cycles, tol);
            bool fixable = true;
            for (int k = 0; k < g && fixable; ++k) {
                const BigInt& v = m(k, g + k);
                if (v == 1) {
                    cycles[static_cast<std::size_t>(g + k)] =
                        reverse_path(cycles[static_cast<std::size_t>(g + k)]);
                    for (int i = 0; i < 2 * g; ++i) {
                        m(i, g + k) = -m(i, g + k);
                        m(g + k, i) = -m(g + k, i);
                    }
                } else if (v != -1) {
                    fixable = false;
                }
            }
            if (fixable && m == jstd) {
                HomologyBasis basis;
                basis.cycles = std::move(cycles);
                basis.intersection = std::move(m);
                return basis;
            }
        } catch (const Error& e) {
            if (!recoverable(e)) throw;
            last = e;
        }

        // Fallback: dog-bone candidates canonicalized over the integers and
        // realized as closed chains.
        try {
            std::vector<SurfacePath> cand = rings;
            for (int k = 1; k <= g; ++k) cand.push_back(detail::dogbone(curve, k, tol));
            for (const auto& c : cand) continue_y(curve, c, tol);
            IMat m2 = detail::measure_gram(curve, cand, tol);
            IMat t = symplectic_reduce(m2);
            std::vector<SurfacePath> reduced;
            for (int j = 0; j < 2 * g; ++j)
                reduced.push_back(
                    realize_chain(curve, cand, detail::column_ll(t, j), 17 * jat + j, tol));
            IMat m3 = detail::measure_gram(curve, reduced, tol);
            if (!(m3 == jstd))
                fail(ErrorKind::CutCollision, "canonicalized Gram matrix is not standard");
            HomologyBasis basis;
            basis.cycles = std::move(reduced);
            basis.intersection = std::move(m3);
            return basis;
        } catch (const Error& e) {
            if (!recoverable(e)) throw;
            last = e;
        }
    }
    throw last;
}

// The homology action of the involution, column by column: conjugate each
// basis cycle, expand it against the basis via intersection numbers with the
// symplectic duals, and round to integers.
inline SigmaHomologyAction sigma_homology_matrix(const CurveDescriptor& curve,
                                                 const HomologyBasis& basis,
                                                 const Tolerances& tol = Tolerances{}) {
    int g = basis.genus();
    int n = 2 * g;
    IMat jstd = standard_symplectic_form(g);
    IMat s(n, n);
    for (int k = 0; k < n; ++k) {
        SurfacePath sc = conj_path(curve, basis.cycles[static_cast<std::size_t>(k)], tol);
        IMat pairings(n, 1);
        for (int q = 0; q < n; ++q) {
            long long v;
            try {
                v = intersection_number(curve, sc, basis.cycles[static_cast<std::size_t>(q)], tol);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::NonTransversal)
                    fail(ErrorKind::NonIntegralCoefficient,
                         "conjugated cycle does not resolve against the basis");
                throw;
            }
            pairings(q, 0) = v;
        }
        IMat coeffs = jstd * pairings;  // x = J m inverts m_q = <v, c_q>
        for (int i = 0; i < n; ++i) s(i, k) = coeffs(i, 0);
    }
    IMat s2 = s * s;
    if (!(s2 == IMat::identity(n)))
        fail(ErrorKind::SigmaActionInvalid, "homology involution does not square to identity");
    IMat anti = s.transposed() * (jstd * s);
    IMat minus_j(n, n);
    for (int i = 0; i < n; ++i)
        for (int j2 = 0; j2 < n; ++j2) minus_j(i, j2) = -jstd(i, j2);
    if (!(anti == minus_j))
        fail(ErrorKind::SigmaActionInvalid, "homology involution is not anti-symplectic");
    return SigmaHomologyAction{std::move(s)};
}

// Replaces the basis by a canonical one whose first g cycles are fixed by the
// involution. Integer-exact: fixed sublattice via Smith normal form, then a
// symplectic completion; new cycles are realized as closed chains of the old
// ones.
inline std::pair<HomologyBasis, SigmaHomologyAction> adapt_basis_to_sigma(
    const CurveDescriptor& curve, const HomologyBasis& basis, const SigmaHomologyAction& action,
    const Tolerances& tol = Tolerances{}) {
    int g = basis.genus();
    int n = 2 * g;
    IMat t = symplectic_adapt_to_involution(action.matrix);
    IMat tinv = inverse_unimodular(t);
    IMat snew = tinv * (action.matrix * t);
    for (int k = 0; k < g; ++k)
        for (int i = 0; i < n; ++i)
            if (snew(i, k) != (i == k ? 1 : 0))
                fail(ErrorKind::Internal, "adapted involution does not fix the gamma block");

    if (t == IMat::identity(n)) {
        return {basis, action};
    }
    HomologyBasis out;
    for (int j = 0; j < n; ++j)
        out.cycles.push_back(
            realize_chain(curve, basis.cycles, detail::column_ll(t, j), 7 + j, tol));
    out.intersection = detail::measure_gram(curve, out.cycles, tol);
    if (!(out.intersection == standard_symplectic_form(g)))
        fail(ErrorKind::Internal, "adapted basis lost the canonical intersection matrix");
    return {std::move(out), SigmaHomologyAction{std::move(snew)}};
}

} // namespace kleinjac
