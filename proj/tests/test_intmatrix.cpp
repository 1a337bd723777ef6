#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kleinjac/intmatrix.hpp"

using namespace kleinjac;

namespace {

IMat from_rows(const std::vector<std::vector<long long>>& rows) {
    IMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

// random unimodular matrix as a product of elementary row operations
IMat random_unimodular(int n, std::mt19937_64& rng) {
    IMat m = IMat::identity(n);
    std::uniform_int_distribution<int> idx(0, n - 1);
    std::uniform_int_distribution<int> val(-2, 2);
    for (int step = 0; step < 3 * n; ++step) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        long long c = val(rng);
        for (int k = 0; k < n; ++k) m(i, k) += c * m(j, k);
    }
    return m;
}

} // namespace

TEST_CASE("determinant") {
    CHECK(det(IMat::identity(4)) == 1);
    IMat m = from_rows({{2, 1}, {7, 4}});
    CHECK(det(m) == 1);
    IMat s = from_rows({{0, 1}, {1, 0}});
    CHECK(det(s) == -1);
    IMat z = from_rows({{1, 2}, {2, 4}});
    CHECK(det(z) == 0);
}

TEST_CASE("smith normal form") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        int c = 2 + static_cast<int>(rng() % 4);
        IMat a(n, c);
        std::uniform_int_distribution<int> val(-6, 6);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < c; ++j) a(i, j) = val(rng);
        SmithResult s = smith_normal_form(a);
        IMat lhs = s.u * (a * s.v);
        CHECK(lhs == s.d);
        // diagonal with divisibility chain
        for (int i = 0; i < s.d.rows; ++i)
            for (int j = 0; j < s.d.cols; ++j)
                if (i != j) CHECK(s.d(i, j) == 0);
        int m = std::min(s.d.rows, s.d.cols);
        for (int i = 0; i + 1 < m; ++i) {
            if (s.d(i + 1, i + 1) == 0) continue;
            REQUIRE(s.d(i, i) != 0);
            CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
        }
        CHECK(abs(det(s.u)) == 1);
        CHECK(abs(det(s.v)) == 1);
    }
}

TEST_CASE("kernel basis") {
    // rank-1 map (1, 2): kernel generated by (-2, 1) up to sign
    IMat a = from_rows({{1, 2}});
    IMat k = kernel_basis(a);
    REQUIRE(k.cols == 1);
    IMat prod = a * k;
    CHECK(prod(0, 0) == 0);
    // saturated: gcd of entries is 1
    BigInt g = gcd(abs(k(0, 0)), abs(k(1, 0)));
    CHECK(g == 1);
}

TEST_CASE("unimodular inverse") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        IMat m = random_unimodular(4, rng);
        IMat inv = inverse_unimodular(m);
        CHECK(m * inv == IMat::identity(4));
        CHECK(inv * m == IMat::identity(4));
    }
}

TEST_CASE("symplectic reduction of a shuffled form") {
    std::mt19937_64 rng(13);
    for (int g = 1; g <= 3; ++g) {
        IMat j = standard_symplectic_form(g);
        for (int trial = 0; trial < 8; ++trial) {
            IMat u = random_unimodular(2 * g, rng);
            IMat m = u.transposed() * (j * u);
            IMat t = symplectic_reduce(m);
            CHECK(t.transposed() * (m * t) == j);
        }
    }
}

TEST_CASE("adaptation to an anti-symplectic involution") {
    std::mt19937_64 rng(17);
    for (int g = 1; g <= 3; ++g) {
        IMat j = standard_symplectic_form(g);
        // seed involution: fixes e_1..e_g, anti-symplectic
        IMat s0(2 * g, 2 * g);
        for (int i = 0; i < g; ++i) {
            s0(i, i) = 1;
            s0(g + i, g + i) = -1;
        }
        for (int trial = 0; trial < 8; ++trial) {
            // conjugate by a random symplectic matrix to hide the fixed block
            IMat u = random_unimodular(2 * g, rng);
            IMat m = u.transposed() * (j * u);
            IMat w = symplectic_reduce(m);
            IMat q = u * w;  // q^t J q = J
            REQUIRE(q.transposed() * (j * q) == j);
            IMat s = q * (s0 * inverse_unimodular(q));
            // sanity: involution, anti-symplectic
            REQUIRE(s * s == IMat::identity(2 * g));
            IMat anti = s.transposed() * (j * s);
            IMat mj(2 * g, 2 * g);
            for (int a = 0; a < 2 * g; ++a)
                for (int b = 0; b < 2 * g; ++b) mj(a, b) = -j(a, b);
            REQUIRE(anti == mj);

            IMat t = symplectic_adapt_to_involution(s);
            CHECK(t.transposed() * (j * t) == j);
            IMat st = s * t;
            for (int k = 0; k < g; ++k)
                for (int i = 0; i < 2 * g; ++i) CHECK(st(i, k) == t(i, k));
            // fixed vectors of an anti-symplectic involution pair to zero
            IMat fixed = kernel_basis([&] {
                IMat sm = s;
                for (int i = 0; i < 2 * g; ++i) sm(i, i) -= 1;
                return sm;
            }());
            for (int a = 0; a < fixed.cols; ++a)
                for (int b = 0; b < fixed.cols; ++b) {
                    BigInt acc = 0;
                    for (int r = 0; r < 2 * g; ++r)
                        for (int c = 0; c < 2 * g; ++c)
                            acc += fixed(r, a) * j(r, c) * fixed(c, b);
                    CHECK(acc == 0);
                }
        }
    }
}
