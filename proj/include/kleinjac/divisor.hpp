#pragma once

#include <vector>

#include "kleinjac/path.hpp"

namespace kleinjac {

// Finite integer-weighted point set on the double cover. Terms are kept
// merged under the canonical point equality; zero weights are dropped.
struct Divisor {
    std::vector<std::pair<SurfacePoint, long long>> terms;
};

// Divisor on the quotient surface; support points are stored through their
// canonical representatives upstairs.
struct QuotientDivisor {
    std::vector<std::pair<SurfacePoint, long long>> terms;
};

namespace detail {

inline void add_term(std::vector<std::pair<SurfacePoint, long long>>& terms,
                     const CurveDescriptor& curve, const SurfacePoint& pt, long long mult,
                     const Tolerances& tol) {
    if (mult == 0) return;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (same_point(terms[i].first, pt, curve, tol)) {
            terms[i].second += mult;
            if (terms[i].second == 0) terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
            return;
        }
    }
    terms.emplace_back(pt, mult);
}

} // namespace detail

inline void divisor_add(Divisor& d, const CurveDescriptor& curve, const SurfacePoint& pt,
                        long long mult, const Tolerances& tol = Tolerances{}) {
    detail::add_term(d.terms, curve, pt, mult, tol);
}

template <typename D>
inline long long degree(const D& d) {
    long long sum = 0;
    for (const auto& [pt, n] : d.terms) sum += n;
    return sum;
}

// Canonical representative of the orbit {P, sigma(P)}: the member with
// positive Im x; over a real x-coordinate the member with positive Im y
// (sheet +1); for the points over infinity, the plus one.
inline SurfacePoint canonical_rep(const CurveDescriptor& curve, const SurfacePoint& pt,
                                  const Tolerances& tol = Tolerances{}) {
    if (!pt.finite()) return SurfacePoint::infinity(+1);
    double eps = tol.point_eq * std::max(1.0, curve.scale);
    if (pt.x.imag() > eps) return pt;
    if (pt.x.imag() < -eps) return sigma_point(curve, pt, tol);
    return pt.sheet > 0 ? pt : sigma_point(curve, pt, tol);
}

inline void quotient_add(QuotientDivisor& d, const CurveDescriptor& curve, const SurfacePoint& pt,
                         long long mult, const Tolerances& tol = Tolerances{}) {
    detail::add_term(d.terms, curve, canonical_rep(curve, pt, tol), mult, tol);
}

inline Divisor sigma_star(const CurveDescriptor& curve, const Divisor& d,
                          const Tolerances& tol = Tolerances{}) {
    Divisor out;
    for (const auto& [pt, n] : d.terms) divisor_add(out, curve, sigma_point(curve, pt, tol), n, tol);
    return out;
}

// pi^* : each point downstairs pulls back to the full fiber P + sigma(P).
inline Divisor pullback(const CurveDescriptor& curve, const QuotientDivisor& d,
                        const Tolerances& tol = Tolerances{}) {
    Divisor out;
    for (const auto& [pt, n] : d.terms) {
        divisor_add(out, curve, pt, n, tol);
        divisor_add(out, curve, sigma_point(curve, pt, tol), n, tol);
    }
    return out;
}

// pi_* : project every point to its orbit representative, merging weights.
inline QuotientDivisor pushforward(const CurveDescriptor& curve, const Divisor& d,
                                   const Tolerances& tol = Tolerances{}) {
    QuotientDivisor out;
    for (const auto& [pt, n] : d.terms) quotient_add(out, curve, pt, n, tol);
    return out;
}

inline bool divisors_equal(const CurveDescriptor& curve, const Divisor& a, const Divisor& b,
                           const Tolerances& tol = Tolerances{}) {
    Divisor diff = a;
    for (const auto& [pt, n] : b.terms) divisor_add(diff, curve, pt, -n, tol);
    return diff.terms.empty();
}

inline bool quotient_divisors_equal(const CurveDescriptor& curve, const QuotientDivisor& a,
                                    const QuotientDivisor& b, const Tolerances& tol = Tolerances{}) {
    QuotientDivisor diff = a;
    for (const auto& [pt, n] : b.terms) quotient_add(diff, curve, pt, -n, tol);
    return diff.terms.empty();
}

// Divisor of the rational function x - a: two zeros over a (or one double
// zero at a branch point when allowed), poles at the two points over
// infinity. Degree zero by construction.
inline Divisor div_of_x_translate(const CurveDescriptor& curve, Complex a,
                                  bool allow_branch = false,
                                  const Tolerances& tol = Tolerances{}) {
    Divisor d;
    double snap = tol.point_eq * std::max(1.0, curve.scale);
    bool at_branch = curve.min_branch_distance(a) <= snap;
    if (at_branch && !allow_branch)
        fail(ErrorKind::BranchValue, "x-translate vanishes at a branch point");
    if (at_branch) {
        divisor_add(d, curve, make_point(curve, a, +1, tol), 2, tol);
    } else {
        divisor_add(d, curve, make_point(curve, a, +1, tol), 1, tol);
        divisor_add(d, curve, make_point(curve, a, -1, tol), 1, tol);
    }
    divisor_add(d, curve, SurfacePoint::infinity(+1), -1, tol);
    divisor_add(d, curve, SurfacePoint::infinity(-1), -1, tol);
    return d;
}

} // namespace kleinjac
