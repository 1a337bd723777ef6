#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kleinjac/errors.hpp"

namespace kleinjac {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Parses "num/den" or "num". Whitespace around tokens is tolerated.
inline BigRat parse_rational(const std::string& text) {
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        auto b = s.find_first_not_of(ws);
        auto e = s.find_last_not_of(ws);
        if (b == std::string::npos) return std::string();
        return s.substr(b, e - b + 1);
    };
    std::string t = trim(text);
    if (t.empty()) fail(ErrorKind::BadInput, "empty rational literal");
    try {
        auto slash = t.find('/');
        if (slash == std::string::npos) return BigRat(BigInt(t));
        BigInt num(trim(t.substr(0, slash)));
        BigInt den(trim(t.substr(slash + 1)));
        if (den == 0) fail(ErrorKind::BadInput, "zero denominator in \"" + text + "\"");
        return BigRat(num, den);
    } catch (const std::exception&) {
        fail(ErrorKind::BadInput, "cannot parse rational \"" + text + "\"");
    }
}

// Exact univariate polynomial over the rationals, coefficients low to high.
// Trailing zero coefficients are stripped; the zero polynomial has empty
// coefficient list and degree -1.
struct RatPoly {
    std::vector<BigRat> c;

    static RatPoly from(std::vector<BigRat> coeffs) {
        RatPoly p;
        p.c = std::move(coeffs);
        p.normalize();
        return p;
    }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const BigRat& lead() const { return c.back(); }

    BigRat eval(const BigRat& x) const {
        BigRat acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    RatPoly derivative() const {
        RatPoly d;
        for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * BigInt(k));
        d.normalize();
        return d;
    }
};

// Named rather than an operator: a BigRat operator overload in this namespace
// would enter overload resolution for unrelated products (Eigen expressions)
// and trip a hard error inside boost's converting-constructor SFINAE.
inline RatPoly poly_scale(const BigRat& s, const RatPoly& p) {
    RatPoly r;
    r.c.reserve(p.c.size());
    for (const auto& a : p.c) r.c.push_back(s * a);
    r.normalize();
    return r;
}

// Euclidean remainder of a by b, b nonzero.
inline RatPoly poly_rem(RatPoly a, const RatPoly& b) {
    if (b.is_zero()) fail(ErrorKind::Internal, "polynomial division by zero");
    while (!a.is_zero() && a.degree() >= b.degree()) {
        BigRat q = a.lead() / b.lead();
        int shift = a.degree() - b.degree();
        for (int k = 0; k <= b.degree(); ++k)
            a.c[static_cast<std::size_t>(k + shift)] -= q * b.c[static_cast<std::size_t>(k)];
        a.normalize();
    }
    return a;
}

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = poly_rem(a, b);
        a = b;
        // Scale to monic to keep rationals small.
        if (!r.is_zero()) r = poly_scale(BigRat(1) / r.lead(), r);
        b = r;
    }
    if (!a.is_zero()) a = poly_scale(BigRat(1) / a.lead(), a);
    return a;
}

inline int sign_of(const BigRat& x) {
    if (x > 0) return 1;
    if (x < 0) return -1;
    return 0;
}

// Number of distinct real roots via a Sturm chain; exact. Requires a
// squarefree input for the textbook statement, but the count of sign-change
// differences at +-infinity equals the number of distinct real roots for any
// nonzero polynomial once p is replaced by p/gcd(p,p'); callers pass the
// squarefree part.
inline int count_real_roots(const RatPoly& p) {
    if (p.degree() <= 0) return 0;
    std::vector<RatPoly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero()) {
        RatPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.is_zero()) break;
        chain.push_back(poly_scale(BigRat(-1), r));
    }
    // Sign at -inf: sign(lead) * (-1)^deg; at +inf: sign(lead).
    auto changes = [&](bool at_minus) {
        int count = 0, prev = 0;
        for (const auto& q : chain) {
            if (q.is_zero()) continue;
            int s = sign_of(q.lead());
            if (at_minus && (q.degree() % 2 == 1)) s = -s;
            if (prev != 0 && s != 0 && s != prev) ++count;
            if (s != 0) prev = s;
        }
        return count;
    };
    return changes(true) - changes(false);
}

inline bool poly_squarefree(const RatPoly& p) {
    if (p.degree() <= 1) return true;
    return poly_gcd(p, p.derivative()).degree() == 0;
}

inline double to_double(const BigRat& x) {
    return x.convert_to<double>();
}

} // namespace kleinjac
