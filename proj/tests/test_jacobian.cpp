#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kleinjac/jacobian.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

using namespace kleinjac;
using Catch::Approx;

namespace {

// Synthetic period data for lattice-level tests: [I | tau].
PeriodData synthetic_periods(const Eigen::MatrixXcd& tau) {
    PeriodData p;
    int g = static_cast<int>(tau.rows());
    p.full.resize(g, 2 * g);
    p.full.leftCols(g) = Eigen::MatrixXcd::Identity(g, g);
    p.full.rightCols(g) = tau;
    p.normalization = Eigen::MatrixXcd::Identity(g, g);
    p.tau = tau;
    return p;
}

} // namespace

TEST_CASE("lattice construction and reduction") {
    Eigen::MatrixXcd tau(1, 1);
    tau(0, 0) = Complex(0.0, 1.0);
    Lattice lat = lattice_from_periods(synthetic_periods(tau));
    // a lattice vector reduces to zero
    Eigen::VectorXcd v(1);
    v(0) = Complex(3.0, 2.0);  // 3 * 1 + 2 * i
    CHECK(reduce_mod_lattice(lat, v).value.norm() < 1e-12);
    // hand reduction in the square lattice
    v(0) = Complex(0.75, 0.25);
    JacobianPoint z = reduce_mod_lattice(lat, v);
    CHECK(std::abs(z.value(0) - Complex(-0.25, 0.25)) < 1e-12);
    // periodicity
    Eigen::VectorXcd w(1);
    w(0) = Complex(0.31, -0.47);
    Eigen::VectorXcd shifted = w;
    shifted(0) += Complex(1.0, 1.0);
    CHECK((reduce_mod_lattice(lat, w).value - reduce_mod_lattice(lat, shifted).value).norm() <
          1e-12);
    // degenerate tau is rejected
    Eigen::MatrixXcd zero(1, 1);
    zero(0, 0) = Complex(0.0, 0.0);
    CHECK_THROWS_MATCHES(lattice_from_periods(synthetic_periods(zero)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::RankDeficient;
                         }));
}

TEST_CASE("lattice sigma stability on computed curves") {
    for (const auto* p : {&testsupport::g1_pipeline(), &testsupport::g2_pipeline()}) {
        for (int c = 0; c < 2 * p->lattice.genus; ++c) {
            Eigen::VectorXcd conj_gen = p->lattice.generators.col(c).conjugate();
            CHECK(lattice_distance(p->lattice, conj_gen) < 1e-8);
        }
    }
}

TEST_CASE("abel-jacobi basics") {
    const auto& p = testsupport::g1_pipeline();
    // empty divisor maps to zero
    JacobianPoint zero = abel_jacobi(p.curve, p.periods, p.lattice, Divisor{}, p.basepoint);
    CHECK(zero.value.norm() == 0.0);
    // degree precondition
    Divisor one;
    divisor_add(one, p.curve, make_point(p.curve, Complex(0.5, 0.5), +1), 1);
    CHECK_THROWS_MATCHES(abel_jacobi(p.curve, p.periods, p.lattice, one, p.basepoint), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::DegreeNonzero;
                         }));
    // Abel's theorem for div(x - a)
    JacobianPoint za = abel_jacobi(p.curve, p.periods, p.lattice,
                                   div_of_x_translate(p.curve, Complex(3.0, 0.0)), p.basepoint);
    CHECK(za.value.norm() < 1e-6);
}

TEST_CASE("abel-jacobi is additive and routing independent") {
    const auto& p = testsupport::g1_pipeline();
    std::mt19937_64 rng(61);
    Divisor d1 = testsupport::random_degree_zero_divisor(p.curve, rng);
    Divisor d2 = testsupport::random_degree_zero_divisor(p.curve, rng);
    Divisor sum = d1;
    for (const auto& [pt, n] : d2.terms) divisor_add(sum, p.curve, pt, n);
    JacobianPoint z1 = abel_jacobi(p.curve, p.periods, p.lattice, d1, p.basepoint);
    JacobianPoint z2 = abel_jacobi(p.curve, p.periods, p.lattice, d2, p.basepoint);
    JacobianPoint zs = abel_jacobi(p.curve, p.periods, p.lattice, sum, p.basepoint);
    Eigen::VectorXcd diff = zs.value - z1.value - z2.value;
    CHECK(lattice_distance(p.lattice, diff) < 1e-7);

    // different basepoint shifts cancel on degree-zero divisors
    SurfacePoint other_base = make_point(p.curve, Complex(0.5, 0.0), +1);
    JacobianPoint zb = abel_jacobi(p.curve, p.periods, p.lattice, d1, other_base);
    CHECK(lattice_distance(p.lattice, zb.value - z1.value) < 1e-7);
}

TEST_CASE("sigma1 involution and fixedness") {
    Eigen::MatrixXcd tau(1, 1);
    tau(0, 0) = Complex(0.0, 2.0);
    Lattice lat = lattice_from_periods(synthetic_periods(tau));
    Eigen::VectorXcd v(1);
    v(0) = Complex(0.3, 0.77);
    JacobianPoint z = reduce_mod_lattice(lat, v);
    JacobianPoint zz = sigma1(lat, sigma1(lat, z));
    CHECK(lattice_distance(lat, zz.value - z.value) < 1e-10);
    // real points are fixed
    v(0) = Complex(0.41, 0.0);
    JacobianPoint zr = reduce_mod_lattice(lat, v);
    CHECK(is_sigma1_fixed(lat, zr).fixed);
    // origin is fixed
    JacobianPoint origin = reduce_mod_lattice(lat, Eigen::VectorXcd::Zero(1));
    CHECK(is_sigma1_fixed(lat, origin).fixed);
    // z = i/4 with tau = 2i: residual is one half of the imaginary generator
    v(0) = Complex(0.0, 0.25);
    JacobianPoint znf = reduce_mod_lattice(lat, v);
    FixednessResult fr = is_sigma1_fixed(lat, znf);
    CHECK_FALSE(fr.fixed);
    CHECK(fr.residual == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sigma0 equals conjugation through abel-jacobi") {
    const auto& p = testsupport::g1_pipeline();
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 5; ++trial) {
        Divisor d = testsupport::random_degree_zero_divisor(p.curve, rng);
        JacobianPoint zd = abel_jacobi(p.curve, p.periods, p.lattice, d, p.basepoint);
        JacobianPoint zs = sigma0_class(p.curve, p.periods, p.lattice, d, p.basepoint);
        Eigen::VectorXcd diff = zs.value - zd.value.conjugate();
        CHECK(lattice_distance(p.lattice, diff) < 1e-7);
    }
    // sigma-star fixed divisor: identical images by construction
    SurfacePoint pt = testsupport::random_point(p.curve, rng);
    Divisor fixed;
    divisor_add(fixed, p.curve, pt, 1);
    divisor_add(fixed, p.curve, sigma_point(p.curve, pt), 1);
    divisor_add(fixed, p.curve, SurfacePoint::infinity(+1), -1);
    divisor_add(fixed, p.curve, SurfacePoint::infinity(-1), -1);
    CHECK(divisors_equal(p.curve, sigma_star(p.curve, fixed), fixed));
    // sigma of a principal divisor is principal
    JacobianPoint zp = sigma0_class(p.curve, p.periods, p.lattice,
                                    div_of_x_translate(p.curve, Complex(0.9, 0.6)), p.basepoint);
    CHECK(zp.value.norm() < 1e-6);
}

TEST_CASE("fixed components for rectangular lattices") {
    Eigen::MatrixXcd tau(1, 1);
    tau(0, 0) = Complex(0.0, 1.3);
    Lattice lat = lattice_from_periods(synthetic_periods(tau));
    std::vector<JacobianPoint> reps = fixed_component_representatives(lat);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].value.norm() < 1e-12);
    for (const auto& r : reps) CHECK(is_sigma1_fixed(lat, r).residual < 1e-8);
    // dense sampling lands in one of the components
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::PartialPivLU<Eigen::MatrixXd> im_solver(tau.imag());
    for (int s = 0; s < 200; ++s) {
        int m2 = s % 2;
        Eigen::VectorXcd z(1);
        z(0) = Complex(unit(rng), 0.5 * 1.3 * m2);
        REQUIRE(is_sigma1_fixed(lat, reduce_mod_lattice(lat, z)).fixed);
        bool matched = false;
        for (const auto& r : reps) {
            double dim = z(0).imag() - r.value(0).imag();
            double c = dim / 1.3;
            if (std::abs(c - std::floor(c + 0.5)) < 1e-6) matched = true;
        }
        CHECK(matched);
    }
    // genus bound
    Eigen::MatrixXcd tau4 = Eigen::MatrixXcd::Identity(4, 4) * Complex(0.0, 1.0);
    CHECK_THROWS_MATCHES(fixed_component_representatives(
                             lattice_from_periods(synthetic_periods(tau4))),
                         Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::GenusTooLarge;
                         }));
}

TEST_CASE("fixed components on the computed genus-one curve") {
    const auto& p = testsupport::g1_pipeline();
    std::vector<JacobianPoint> reps = fixed_component_representatives(p.lattice);
    CHECK((reps.size() == 1 || reps.size() == 2));
    bool has_origin = false;
    for (const auto& r : reps) {
        CHECK(is_sigma1_fixed(p.lattice, r).residual < 1e-8);
        if (r.value.norm() < 1e-9) has_origin = true;
    }
    CHECK(has_origin);
}

TEST_CASE("reduced representatives have half-open unit coordinates") {
    const auto& p = testsupport::g2_pipeline();
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> box(-7.0, 7.0);
    int g = p.lattice.genus;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXcd v(g);
        for (int i = 0; i < g; ++i) v(i) = Complex(box(rng), box(rng));
        JacobianPoint z = reduce_mod_lattice(p.lattice, v);
        Eigen::VectorXd rhs(2 * g);
        for (int i = 0; i < g; ++i) {
            rhs(i) = z.value(i).real();
            rhs(g + i) = z.value(i).imag();
        }
        Eigen::VectorXd coords = p.lattice.solver.solve(rhs);
        for (int i = 0; i < 2 * g; ++i) {
            CHECK(coords(i) >= -0.5 - 1e-12);
            CHECK(coords(i) < 0.5 + 1e-12);
        }
        // the subtracted shift is itself recorded
        CHECK(z.reduction_residual >= 0.0);
    }
}

TEST_CASE("fixed components on higher-genus curves") {
    for (const auto* p : {&testsupport::g2_pipeline(), &testsupport::g3_pipeline()}) {
        int g = p->lattice.genus;
        std::vector<JacobianPoint> reps = fixed_component_representatives(p->lattice);
        CHECK(reps.size() >= 1);
        CHECK(reps.size() <= (1u << g));
        bool origin = false;
        for (const auto& r : reps) {
            CHECK(is_sigma1_fixed(p->lattice, r).residual < 1e-8);
            if (r.value.norm() < 1e-9) origin = true;
        }
        CHECK(origin);
        // sampling oracle: random points of the fixed set match some listed
        // component
        Eigen::MatrixXd im_tau(g, g), re_tau(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                im_tau(i, j) = p->lattice.generators(i, g + j).imag();
                re_tau(i, j) = p->lattice.generators(i, g + j).real();
            }
        Eigen::PartialPivLU<Eigen::MatrixXd> im_solver(im_tau);
        std::mt19937_64 rng(97);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int s = 0; s < 60; ++s) {
            // a point is fixed only when Re tau maps its imaginary-part index
            // into the integers; sample n2 accordingly
            Eigen::VectorXd n2(g);
            bool admissible = false;
            while (!admissible) {
                for (int i = 0; i < g; ++i) n2(i) = static_cast<double>(rng() % 2);
                Eigen::VectorXd rt = re_tau * n2;
                admissible = true;
                for (int i = 0; i < g; ++i)
                    if (std::abs(rt(i) - std::floor(rt(i) + 0.5)) > 1e-9) admissible = false;
            }
            Eigen::VectorXd imp = im_tau * (0.5 * n2);
            Eigen::VectorXcd z(g);
            for (int i = 0; i < g; ++i) z(i) = Complex(unit(rng), imp(i));
            JacobianPoint zr = reduce_mod_lattice(p->lattice, z);
            REQUIRE(is_sigma1_fixed(p->lattice, zr).fixed);
            bool matched = false;
            for (const auto& r : reps) {
                Eigen::VectorXd d(g);
                for (int i = 0; i < g; ++i) d(i) = zr.value(i).imag() - r.value(i).imag();
                Eigen::VectorXd c = im_solver.solve(d);
                bool integral = true;
                for (int i = 0; i < g; ++i)
                    if (std::abs(c(i) - std::floor(c(i) + 0.5)) > 1e-6) integral = false;
                if (integral) matched = true;
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("pullback classes are fixed by conjugation") {
    const auto& p = testsupport::g1_pipeline();
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        QuotientDivisor q = testsupport::random_degree_zero_quotient(p.curve, rng);
        Divisor up = pullback(p.curve, q);
        JacobianPoint z = abel_jacobi(p.curve, p.periods, p.lattice, up, p.basepoint);
        FixednessResult fr = is_sigma1_fixed(p.lattice, z);
        CHECK(fr.residual < 1e-6);
    }
}

TEST_CASE("harmonic correspondence") {
    HarmonicFormY eta;
    eta.coeffs = Eigen::VectorXd(2);
    eta.coeffs << 1.0, -0.5;
    Eigen::VectorXcd omega = omega_from_eta(eta);
    CHECK(omega(0) == Complex(1.0, 0.0));
    CHECK(omega(1) == Complex(-0.5, 0.0));
    HarmonicFormY back = eta_from_omega(omega);
    CHECK((back.coeffs - eta.coeffs).norm() == 0.0);
    // zero maps to zero
    HarmonicFormY zero;
    zero.coeffs = Eigen::VectorXd::Zero(2);
    CHECK(omega_from_eta(zero).norm() == 0.0);
    // nonreal coefficients are rejected
    Eigen::VectorXcd bad(2);
    bad << Complex(0.0, 1.0), Complex(1.0, 0.0);
    CHECK_THROWS_MATCHES(eta_from_omega(bad), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::NotSigmaInvariant;
                         }));
    // sub-tolerance imaginary dust is stripped
    Eigen::VectorXcd dusty(2);
    dusty << Complex(0.7, 1e-12), Complex(-0.1, -1e-13);
    HarmonicFormY stripped = eta_from_omega(dusty);
    CHECK(stripped.coeffs(0) == Approx(0.7));
}
