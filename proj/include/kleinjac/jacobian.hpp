#pragma once

#include <Eigen/Dense>

#include "kleinjac/divisor.hpp"
#include "kleinjac/periods.hpp"

namespace kleinjac {

// The period lattice in C^g spanned by the columns of [I | tau], in the
// adapted sigma-invariant basis. Conjugation maps the lattice to itself;
// construction verifies both nondegeneracy and that stability.
struct Lattice {
    Eigen::MatrixXcd generators;          // g x 2g
    Eigen::MatrixXd real_system;          // 2g x 2g stacked [Re; Im]
    Eigen::PartialPivLU<Eigen::MatrixXd> solver;
    int genus = 0;
};

struct JacobianPoint {
    Eigen::VectorXcd value;          // reduced representative
    double reduction_residual = 0.0; // norm of the lattice vector subtracted
};

inline JacobianPoint reduce_mod_lattice(const Lattice& lat, const Eigen::VectorXcd& v,
                                        Eigen::VectorXd* integers = nullptr) {
    int g = lat.genus;
    Eigen::VectorXd rhs(2 * g);
    for (int i = 0; i < g; ++i) {
        rhs(i) = v(i).real();
        rhs(g + i) = v(i).imag();
    }
    Eigen::VectorXd coords = lat.solver.solve(rhs);
    Eigen::VectorXd n(2 * g);
    for (int i = 0; i < 2 * g; ++i) n(i) = std::floor(coords(i) + 0.5);
    Eigen::VectorXcd shift = Eigen::VectorXcd::Zero(g);
    for (int c = 0; c < 2 * g; ++c)
        if (n(c) != 0.0) shift += n(c) * lat.generators.col(c);
    JacobianPoint out;
    out.value = v - shift;
    out.reduction_residual = shift.norm();
    if (integers) *integers = n;
    return out;
}

inline double lattice_distance(const Lattice& lat, const Eigen::VectorXcd& v) {
    return reduce_mod_lattice(lat, v).value.norm();
}

inline Lattice lattice_from_periods(const PeriodData& periods,
                                    const Tolerances& tol = Tolerances{}) {
    int g = periods.genus();
    Lattice lat;
    lat.genus = g;
    lat.generators.resize(g, 2 * g);
    lat.generators.leftCols(g) = Eigen::MatrixXcd::Identity(g, g);
    lat.generators.rightCols(g) = periods.tau;
    lat.real_system.resize(2 * g, 2 * g);
    for (int c = 0; c < 2 * g; ++c)
        for (int r = 0; r < g; ++r) {
            lat.real_system(r, c) = lat.generators(r, c).real();
            lat.real_system(g + r, c) = lat.generators(r, c).imag();
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lat.real_system);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > tol.lattice_condition)
        fail(ErrorKind::RankDeficient, "lattice generators are not independent over the reals");
    lat.solver = Eigen::PartialPivLU<Eigen::MatrixXd>(lat.real_system);
    for (int c = 0; c < 2 * g; ++c) {
        Eigen::VectorXcd conj_gen = lat.generators.col(c).conjugate();
        if (lattice_distance(lat, conj_gen) > tol.lattice_sigma_stable * std::max(1.0, smax))
            fail(ErrorKind::LatticeNotSigmaStable,
                 "conjugate of a generator does not lie in the lattice");
    }
    return lat;
}

namespace detail {

// Monomial Abel integrals from the basepoint to one surface point, handling
// branch-point and infinity targets through the substituted quadratures.
inline Eigen::VectorXcd abel_monomials(const CurveDescriptor& curve, const SurfacePoint& base,
                                       const SurfacePoint& target, const Tolerances& tol) {
    int g = curve.genus;
    auto as_vec = [g](const std::vector<Complex>& v) {
        Eigen::VectorXcd out(g);
        for (int k = 0; k < g; ++k) out(k) = v[static_cast<std::size_t>(k)];
        return out;
    };
    double clear = std::max(curve.clearance(tol), 0.02 * curve.min_gap);
    Complex x0 = base.x;

    // Prepending one more gadget square multiplies the arrival value by
    // exactly -1 (the square winds one branch point once), so some count in
    // {0, 1, 2} always reaches the requested sheet.
    auto integrate_route = [&](const std::vector<Complex>& pts, int gadgets) {
        SurfacePath p;
        p.waypoints.clear();
        p.waypoints.push_back(pts.front());
        for (int i = 0; i < gadgets; ++i) append_flip_gadget(curve, p.waypoints);
        p.waypoints.insert(p.waypoints.end(), pts.begin() + 1, pts.end());
        p.start_sheet = base.sheet;
        p.closed = false;
        std::vector<Complex> ys = continue_y(curve, p, tol);
        return std::make_pair(as_vec(integrate_monomials(curve, p, tol)), ys.back());
    };

    if (!target.finite()) {
        double radius = 10.0 * curve.scale;
        Complex rim(radius, 0.0);
        std::vector<Complex> pts = route_avoiding(curve, x0, rim, clear);
        Complex expect = Complex(0.0, std::sqrt(std::abs(curve.dcoeffs.back()))) *
                         std::pow(rim, curve.genus + 1);
        bool want_plus = target.at == SurfacePoint::At::InfPlus;
        for (int gadgets = 0; gadgets <= 2; ++gadgets) {
            auto [vals, y_rim] = integrate_route(pts, gadgets);
            TailResult tail = tail_to_infinity(curve, rim, y_rim, tol);
            bool reaches_plus =
                std::abs(tail.w_limit - expect) <= std::abs(tail.w_limit + expect);
            if (reaches_plus == want_plus) return vals + as_vec(tail.values);
        }
        fail(ErrorKind::Internal, "could not reach the requested point at infinity");
    }

    double snap = tol.point_eq * std::max(1.0, curve.scale);
    if (curve.min_branch_distance(target.x) <= snap) {
        // approach the branch point from a rim point via the desingularized
        // quadrature; the sheets meet there, so no arrival check is needed
        Complex b = target.x;
        Complex dir = x0 - b;
        dir = std::abs(dir) > 0.0 ? dir / std::abs(dir) : Complex(1.0, 0.0);
        Complex rim = b + 0.3 * curve.min_gap * dir;
        std::vector<Complex> pts = route_avoiding(curve, x0, rim, clear);
        auto [vals, y_rim] = integrate_route(pts, 0);
        return vals + as_vec(integrate_to_branch(curve, rim, b, y_rim, tol));
    }

    std::vector<Complex> pts = route_avoiding(curve, x0, target.x, clear);
    Complex y_target = target.y ? *target.y : y_of(curve, target.x, target.sheet, tol);
    for (int gadgets = 0; gadgets <= 2; ++gadgets) {
        auto [vals, y_end] = integrate_route(pts, gadgets);
        if (std::abs(y_end - y_target) <= std::abs(y_end + y_target)) return vals;
    }
    fail(ErrorKind::Internal, "could not reach the requested sheet");
}

} // namespace detail

inline SurfacePoint default_basepoint(const CurveDescriptor& curve,
                                      const Tolerances& tol = Tolerances{}) {
    return make_point(curve, Complex(curve.anchor, 0.0), +1, tol);
}

// Abel-Jacobi image of a degree-zero divisor: route from the basepoint to
// every support point, integrate the adapted basis, weight by multiplicity,
// and reduce modulo the period lattice.
inline JacobianPoint abel_jacobi(const CurveDescriptor& curve, const PeriodData& periods,
                                 const Lattice& lat, const Divisor& d, const SurfacePoint& base,
                                 const Tolerances& tol = Tolerances{}) {
    if (degree(d) != 0)
        fail(ErrorKind::DegreeNonzero,
             "Abel-Jacobi image of a divisor of degree " + std::to_string(degree(d)));
    int g = curve.genus;
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(g);
    for (const auto& [pt, n] : d.terms)
        total += static_cast<double>(n) * detail::abel_monomials(curve, base, pt, tol);
    Eigen::VectorXcd value = periods.normalization * total;
    return reduce_mod_lattice(lat, value);
}

inline JacobianPoint abel_jacobi(const CurveDescriptor& curve, const PeriodData& periods,
                                 const Divisor& d, const SurfacePoint& base,
                                 const Tolerances& tol = Tolerances{}) {
    Lattice lat = lattice_from_periods(periods, tol);
    return abel_jacobi(curve, periods, lat, d, base, tol);
}

// Coordinatewise conjugation on the quotient; an involution because the
// lattice is conjugation-stable.
inline JacobianPoint sigma1(const Lattice& lat, const JacobianPoint& z) {
    return reduce_mod_lattice(lat, z.value.conjugate());
}

struct FixednessResult {
    bool fixed = false;
    double residual = 0.0;
};

inline FixednessResult is_sigma1_fixed(const Lattice& lat, const JacobianPoint& z,
                                       const Tolerances& tol = Tolerances{}) {
    Eigen::VectorXcd diff = z.value - z.value.conjugate();
    double r = lattice_distance(lat, diff);
    return FixednessResult{r < tol.lattice, r};
}

// Class-level action of the involution on divisor classes: the Abel-Jacobi
// image of sigma^* D. Equals coordinatewise conjugation of the image of D.
inline JacobianPoint sigma0_class(const CurveDescriptor& curve, const PeriodData& periods,
                                  const Lattice& lat, const Divisor& d, const SurfacePoint& base,
                                  const Tolerances& tol = Tolerances{}) {
    return abel_jacobi(curve, periods, lat, sigma_star(curve, d, tol), base, tol);
}

// One representative per connected component of the fixed locus of
// conjugation. Candidates are the half-lattice translates (2 Im z must fall
// in half the imaginary-part lattice); components are separated by their
// imaginary parts modulo the imaginary-part lattice.
inline std::vector<JacobianPoint> fixed_component_representatives(
    const Lattice& lat, const Tolerances& tol = Tolerances{}) {
    int g = lat.genus;
    if (g > 3) fail(ErrorKind::GenusTooLarge, "component enumeration supports genus <= 3");
    Eigen::MatrixXd im_tau(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) im_tau(i, j) = lat.generators(i, g + j).imag();
    Eigen::PartialPivLU<Eigen::MatrixXd> im_solver(im_tau);

    auto same_component = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
        Eigen::VectorXd d(g);
        for (int i = 0; i < g; ++i) d(i) = a(i).imag() - b(i).imag();
        Eigen::VectorXd c = im_solver.solve(d);
        for (int i = 0; i < g; ++i)
            if (std::abs(c(i) - std::floor(c(i) + 0.5)) > 1e-6) return false;
        return true;
    };

    std::vector<JacobianPoint> reps;
    for (unsigned mask = 0; mask < (1u << (2 * g)); ++mask) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g);
        for (int c = 0; c < 2 * g; ++c)
            if (mask & (1u << c)) v += 0.5 * lat.generators.col(c);
        JacobianPoint z = reduce_mod_lattice(lat, v);
        if (!is_sigma1_fixed(lat, z, tol).fixed) continue;
        bool dup = false;
        for (const auto& r : reps)
            if (same_component(z.value, r.value)) dup = true;
        if (!dup) reps.push_back(z);
    }
    // the origin component comes first
    std::sort(reps.begin(), reps.end(), [](const JacobianPoint& a, const JacobianPoint& b) {
        return a.value.norm() < b.value.norm();
    });
    return reps;
}

// ---------------------------------------------------------------------------
// Harmonic one-forms on the quotient surface, stored by their coefficients
// against the adapted basis. The correspondence eta <-> omega identifies the
// real span of the adapted forms with the harmonic forms downstairs; the
// coefficients of an invariant form are real.
// ---------------------------------------------------------------------------

struct HarmonicFormY {
    Eigen::VectorXd coeffs;
};

inline Eigen::VectorXcd omega_from_eta(const HarmonicFormY& eta) {
    return eta.coeffs.cast<Complex>();
}

inline HarmonicFormY eta_from_omega(const Eigen::VectorXcd& coeffs,
                                    const Tolerances& tol = Tolerances{}) {
    for (int i = 0; i < coeffs.size(); ++i)
        if (std::abs(coeffs(i).imag()) > tol.harmonic_reality)
            fail(ErrorKind::NotSigmaInvariant,
                 "coefficient " + std::to_string(i) + " has a nonreal part");
    HarmonicFormY eta;
    eta.coeffs = coeffs.real();
    return eta;
}

} // namespace kleinjac
