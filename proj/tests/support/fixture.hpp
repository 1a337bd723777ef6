#pragma once

#include "kleinjac/homology.hpp"
#include "kleinjac/jacobian.hpp"
#include "kleinjac/periods.hpp"
#include "support/curves.hpp"

namespace testsupport {

struct Pipeline {
    kleinjac::CurveDescriptor curve;
    kleinjac::HomologyBasis basis;
    kleinjac::SigmaHomologyAction action;
    kleinjac::PeriodData periods;
    kleinjac::Lattice lattice;
    kleinjac::SurfacePoint basepoint;
};

inline Pipeline build_pipeline(const kleinjac::CurveDescriptor& curve) {
    Pipeline p;
    p.curve = curve;
    kleinjac::HomologyBasis raw = kleinjac::canonical_homology_basis(curve);
    kleinjac::SigmaHomologyAction raw_action = kleinjac::sigma_homology_matrix(curve, raw);
    auto adapted = kleinjac::adapt_basis_to_sigma(curve, raw, raw_action);
    p.basis = adapted.first;
    p.action = adapted.second;
    p.periods = kleinjac::period_matrix(curve, p.basis);
    p.lattice = kleinjac::lattice_from_periods(p.periods);
    p.basepoint = kleinjac::default_basepoint(curve);
    return p;
}

inline const Pipeline& g1_pipeline() {
    static const Pipeline p = build_pipeline(g1_curve());
    return p;
}

inline const Pipeline& g2_pipeline() {
    static const Pipeline p = build_pipeline(g2_curve());
    return p;
}

inline const Pipeline& g3_pipeline() {
    static const Pipeline p = build_pipeline(g3_curve());
    return p;
}

inline const Pipeline& g1_spread_pipeline() {
    static const Pipeline p = build_pipeline(g1_spread_curve());
    return p;
}

} // namespace testsupport
