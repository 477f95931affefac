#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qga/cyclotomic.hpp"
#include "qga/laurent.hpp"

using namespace qga;

static CycNum random_cyc(unsigned long ell, std::mt19937& rng) {
    CycNum z(ell, 0);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    for (auto& c : z.coeffs) c = Rational(num(rng), den(rng));
    return z;
}

TEST_CASE("laurent polynomial ring basics") {
    LaurentPoly q = LaurentPoly::var_pow(1);
    LaurentPoly p = q + q.pow(-1);
    CHECK(p * p == q.pow(2) + LaurentPoly(Rational(2)) + q.pow(-2));
    CHECK((p - p).is_zero());
    CHECK(p.eval_one() == 2);
    // exact division
    LaurentPoly num = q.pow(2) - q.pow(-2);
    LaurentPoly den = q - q.pow(-1);
    CHECK(num.divide_exact(den) == q + q.pow(-1));
    CHECK_THROWS(p.divide_exact(q - LaurentPoly::one()));
}

TEST_CASE("cyclotomic arithmetic at ell=3") {
    // Phi_3 = x^2 + x + 1
    CycNum z = CycNum::zeta_pow(3, 1);
    CHECK(z * CycNum::zeta_pow(3, 2) == CycNum::one(3));
    CycNum z2 = z * z;
    CHECK(z2 == -CycNum::one(3) - z); // zeta^2 = -1 - zeta
    // (1+zeta)(1+zeta^2) = 1
    CHECK((CycNum::one(3) + z) * (CycNum::one(3) + z2) == CycNum::one(3));
}

TEST_CASE("cyclotomic field axioms on random triples") {
    std::mt19937 rng(12345);
    for (unsigned long ell : {3ul, 5ul, 9ul}) {
        for (int rep = 0; rep < 20; ++rep) {
            CycNum a = random_cyc(ell, rng), b = random_cyc(ell, rng), c = random_cyc(ell, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            if (!a.is_zero()) {
                CHECK(a * a.inverse() == CycNum::one(ell));
            }
        }
    }
}

TEST_CASE("specialize is a ring morphism hitting the right root") {
    std::mt19937 rng(999);
    auto random_laurent = [&](int terms) {
        LaurentPoly p;
        std::uniform_int_distribution<int> e(-6, 6), num(-4, 4);
        for (int i = 0; i < terms; ++i) p += LaurentPoly::var_pow(e(rng), Rational(num(rng)));
        return p;
    };
    for (auto [ell, D] : std::vector<std::pair<long, long>>{{3, 2}, {5, 2}, {7, 3}}) {
        for (int rep = 0; rep < 10; ++rep) {
            LaurentPoly p = random_laurent(4), r = random_laurent(4);
            CHECK(specialize(p * r, ell, D) == specialize(p, ell, D) * specialize(r, ell, D));
            CHECK(specialize(p + r, ell, D) == specialize(p, ell, D) + specialize(r, ell, D));
        }
        CycNum epsd = specialize(LaurentPoly::var_pow(1), ell, D);
        CHECK(epsd.pow(ell) == CycNum::one(ell));
        CHECK(epsd.pow(D) == CycNum::zeta_pow(ell, 1)); // eps_D^D = eps
    }
    // q_D^D at ell=3, D=2 -> zeta
    CHECK(specialize(LaurentPoly::var_pow(2), 3, 2) == CycNum::zeta_pow(3, 1));
    // constants are fixed
    CHECK(specialize(LaurentPoly::one(), 3, 2) == CycNum::one(3));
    // q_D at ell=5, D=2 -> zeta^3 since 2*3 = 1 (mod 5)
    CHECK(specialize(LaurentPoly::var_pow(1), 5, 2) == CycNum::zeta_pow(5, 3));
    CHECK_THROWS(specialize(LaurentPoly::one(), 6, 2));
    CHECK_THROWS(specialize(LaurentPoly::one(), 9, 3));
}

TEST_CASE("square root of eps_D inside mu_ell") {
    // ell=3, D=2: Dbar=2, (ell+1)/2=2 -> zeta^4 = zeta
    CHECK(sqrt_eps_d(3, 2) == CycNum::zeta_pow(3, 1));
    // ell=5, D=2: Dbar=3, exponent 9 -> zeta^4
    CHECK(sqrt_eps_d(5, 2) == CycNum::zeta_pow(5, 4));
    for (auto [ell, D] : std::vector<std::pair<long, long>>{{3, 2}, {5, 2}, {7, 3}, {9, 2}}) {
        CycNum s = sqrt_eps_d(ell, D);
        CHECK(s * s == specialize(LaurentPoly::var_pow(1), ell, D));
    }
    CHECK_THROWS(sqrt_eps_d(6, 5));
}

TEST_CASE("inverse_mod basics") {
    CHECK(inverse_mod(2, 3) == 2);
    CHECK(inverse_mod(2, 5) == 3);
    CHECK(inverse_mod(3, 7) == 5);
    CHECK_THROWS(inverse_mod(3, 9));
}
