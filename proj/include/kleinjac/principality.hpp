#pragma once

#include "kleinjac/jacobian.hpp"

namespace kleinjac {

struct PrincipalityResult {
    bool principal = false;
    double residual = 0.0;
    std::string reason;  // "DegreeNonzero" when the degree test already fails
};

// Abel's criterion: a degree-zero divisor is principal exactly when its
// Abel-Jacobi image reduces into the lattice. The residual is the reduced
// distance, reported so callers can see the margin.
inline PrincipalityResult is_principal_X(const CurveDescriptor& curve, const PeriodData& periods,
                                         const Lattice& lat, const Divisor& d,
                                         const SurfacePoint& base,
                                         const Tolerances& tol = Tolerances{}) {
    PrincipalityResult out;
    if (degree(d) != 0) {
        out.principal = false;
        out.residual = std::numeric_limits<double>::infinity();
        out.reason = "DegreeNonzero";
        return out;
    }
    if (d.terms.empty()) {
        out.principal = true;
        out.residual = 0.0;
        return out;
    }
    JacobianPoint z = abel_jacobi(curve, periods, lat, d, base, tol);
    out.residual = z.value.norm();
    out.principal = out.residual < tol.lattice;
    return out;
}

// Principality downstairs reduces to principality of the pullback: the
// pullback is automatically fixed by sigma^*, so the two-condition criterion
// collapses to one Abel test upstairs.
inline PrincipalityResult is_principal_Y(const CurveDescriptor& curve, const PeriodData& periods,
                                         const Lattice& lat, const QuotientDivisor& d,
                                         const SurfacePoint& base,
                                         const Tolerances& tol = Tolerances{}) {
    if (degree(d) != 0) {
        PrincipalityResult out;
        out.principal = false;
        out.residual = std::numeric_limits<double>::infinity();
        out.reason = "DegreeNonzero";
        return out;
    }
    return is_principal_X(curve, periods, lat, pullback(curve, d, tol), base, tol);
}

} // namespace kleinjac
