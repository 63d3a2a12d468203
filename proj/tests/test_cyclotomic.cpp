#include <catch2/catch_amalgamated.hpp>

#include <starhex/cyclotomic.hpp>

#include <cmath>
#include <random>

using namespace starhex;

TEST_CASE("zeta * zeta^3 reduces to zeta^2 - 1") {
    const CycNum z = CycNum::zeta();
    const CycNum z3 = CycNum::zeta_pow(3);
    CHECK(z * z3 == CycNum(-1, 0, 1, 0));
}

TEST_CASE("one is the multiplicative identity") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> coeff(-50, 50);
    for (int i = 0; i < 100; ++i) {
        const CycNum x(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        CHECK(CycNum::one() * x == x);
        CHECK(x * CycNum::one() == x);
    }
}

TEST_CASE("omega = zeta^2 is a primitive 6th root of unity") {
    const CycNum w = CycNum::omega();
    CycNum p = CycNum::one();
    for (int k = 1; k <= 6; ++k) {
        p = p * w;
        if (k < 6) CHECK(p != CycNum::one());
    }
    CHECK(p == CycNum::one());
}

TEST_CASE("zeta^6 = -1 and zeta^12 = 1 under repeated multiplication") {
    CycNum p = CycNum::one();
    for (int k = 0; k < 6; ++k) p = p * CycNum::zeta();
    CHECK(p == -CycNum::one());
    for (int k = 0; k < 6; ++k) p = p * CycNum::zeta();
    CHECK(p == CycNum::one());
    for (int k = -24; k <= 24; ++k) {
        CHECK(CycNum::zeta_pow(k) == CycNum::zeta_pow(k + 12));
    }
}

TEST_CASE("embedding of basis elements") {
    CHECK(std::abs(CycNum::zeta().embed() - Complex(0.86602540378443865, 0.5)) < 1e-12);
    CHECK(CycNum::zero().embed() == Complex(0.0, 0.0));
    // 2z - z^3 is sqrt(3)
    CHECK(std::abs(CycNum::sqrt3().embed() - Complex(1.7320508075688772, 0.0)) < 1e-12);
    CHECK(std::abs(CycNum::imag_unit().embed() - Complex(0.0, 1.0)) < 1e-12);
}

TEST_CASE("embedding is a ring homomorphism on random pairs") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> coeff(-1000000, 1000000);
    for (int i = 0; i < 10000; ++i) {
        const CycNum a(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const CycNum b(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const Complex lhs = (a * b).embed();
        const Complex rhs = a.embed() * b.embed();
        const double scale = std::max(1.0, std::abs(rhs));
        CHECK(std::abs(lhs - rhs) / scale < 1e-9);
        CHECK(std::abs((a + b).embed() - (a.embed() + b.embed())) / scale < 1e-9);
    }
}

TEST_CASE("ring axioms hold exactly on random triples") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> coeff(-300, 300);
    for (int i = 0; i < 500; ++i) {
        const CycNum a(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const CycNum b(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const CycNum c(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("conjugation") {
    SECTION("zeta maps to zeta - zeta^3") {
        CHECK(CycNum::zeta().conj() == CycNum(0, 1, 0, -1));
        CHECK(CycNum::zeta().conj() == CycNum::zeta_pow(11));
    }
    SECTION("real elements are fixed") {
        const CycNum r = CycNum::from_int(5) + CycNum::sqrt3() * 3;
        REQUIRE(r.is_real());
        CHECK(r.conj() == r);
    }
    SECTION("involution and ring homomorphism, exactly") {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::int64_t> coeff(-1000, 1000);
        for (int i = 0; i < 1000; ++i) {
            const CycNum a(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
            const CycNum b(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
            CHECK(a.conj().conj() == a);
            CHECK((a * b).conj() == a.conj() * b.conj());
            CHECK((a + b).conj() == a.conj() + b.conj());
            // conj embeds to the complex conjugate
            CHECK(std::abs(a.conj().embed() - std::conj(a.embed())) < 1e-6);
        }
    }
}

TEST_CASE("overflow is detected, not wrapped") {
    const std::int64_t big = std::int64_t{1} << 62;
    const CycNum huge(big, 0, 0, 0);
    CHECK_THROWS_AS(huge + huge, overflow_error);
    CHECK_THROWS_AS(huge * CycNum::from_int(4), overflow_error);
}

TEST_CASE("exact sign of p + q*sqrt(3)") {
    CHECK(sign_with_sqrt3(0, 0) == 0);
    CHECK(sign_with_sqrt3(1, 0) == 1);
    CHECK(sign_with_sqrt3(-1, 0) == -1);
    CHECK(sign_with_sqrt3(0, 1) == 1);
    // 7 - 4*sqrt(3) = 7 - 6.928... > 0, 17 - 10*sqrt(3) < 0 (brute check vs doubles
    // would already be borderline-safe; the point is the integer route).
    CHECK(sign_with_sqrt3(7, -4) == 1);
    CHECK(sign_with_sqrt3(-7, 4) == -1);
    CHECK(sign_with_sqrt3(17, -10) == -1);
    // Agreement with floating point on random small pairs
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> v(-10000, 10000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t p = v(rng), q = v(rng);
        const double x = static_cast<double>(p) + std::sqrt(3.0) * static_cast<double>(q);
        if (std::abs(x) > 1e-3) {
            CHECK(sign_with_sqrt3(p, q) == (x > 0 ? 1 : -1));
        }
    }
}

TEST_CASE("exact lexicographic order matches the embedding") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> coeff(-20, 20);
    for (int i = 0; i < 2000; ++i) {
        const CycNum u(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const CycNum v(coeff(rng), coeff(rng), coeff(rng), coeff(rng));
        const Complex eu = u.embed(), ev = v.embed();
        if (std::abs(eu.real() - ev.real()) > 1e-6) {
            CHECK(lex_less(u, v) == (eu.real() < ev.real()));
        } else if (u == v) {
            CHECK_FALSE(lex_less(u, v));
            CHECK_FALSE(lex_less(v, u));
        }
    }
}

TEST_CASE("PlanePoint keeps exact and approximate views consistent") {
    const PlanePoint p(CycNum::sqrt3() * 2 + CycNum::imag_unit());
    REQUIRE(p.is_exact());
    CHECK(std::abs(p.approx - p.exact->embed()) < 1e-12);
    const PlanePoint q(0.25, -0.5);
    CHECK_FALSE(q.is_exact());
}
