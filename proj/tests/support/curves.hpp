#pragma once

#include <string>
#include <vector>

#include "kleinjac/curve.hpp"

namespace testsupport {

// p(x) = -(x^2+1)(x^2+4) = -4 - 5 x^2 - x^4, genus 1, branch points +-i, +-2i.
inline std::vector<std::string> g1_coeffs() { return {"-4", "0", "-5", "0", "-1"}; }

// p(x) = -(x^2+1)(x^2+4)(x^2+9), genus 2.
// (x^2+1)(x^2+4)(x^2+9) = x^6 + 14 x^4 + 49 x^2 + 36.
inline std::vector<std::string> g2_coeffs() {
    return {"-36", "0", "-49", "0", "-14", "0", "-1"};
}

// p(x) = -(x^2+1)(x^2+4)(x^2+9)(x^2+16), genus 3.
// product = x^8 + 30 x^6 + 273 x^4 + 820 x^2 + 576.
inline std::vector<std::string> g3_coeffs() {
    return {"-576", "0", "-820", "0", "-273", "0", "-30", "0", "-1"};
}

// genus 4, for the size bound: -(x^2+1)(x^2+4)(x^2+9)(x^2+16)(x^2+25).
// product = x^10 + 55 x^8 + 1023 x^6 + 7645 x^4 + 21076 x^2 + 14400.
inline std::vector<std::string> g4_coeffs() {
    return {"-14400", "0", "-21076", "0", "-7645", "0", "-1023", "0", "-55", "0", "-1"};
}

// Spread branch pairs: p(x) = -((x-1)^2+1)((x+1)^2+1), genus 1,
// branch points 1 +- i and -1 +- i.
// ((x-1)^2+1)((x+1)^2+1) = (x^2-2x+2)(x^2+2x+2) = x^4 + 4.
inline std::vector<std::string> g1_spread_coeffs() { return {"-4", "0", "0", "0", "-1"}; }

inline kleinjac::CurveDescriptor g1_curve() {
    return kleinjac::validate_curve_strings(g1_coeffs());
}
inline kleinjac::CurveDescriptor g2_curve() {
    return kleinjac::validate_curve_strings(g2_coeffs());
}
inline kleinjac::CurveDescriptor g3_curve() {
    return kleinjac::validate_curve_strings(g3_coeffs());
}
inline kleinjac::CurveDescriptor g1_spread_curve() {
    return kleinjac::validate_curve_strings(g1_spread_coeffs());
}

} // namespace testsupport
