#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qga/cartan.hpp"

using namespace qga;

TEST_CASE("A1 root datum") {
    RootDatum rd = build_root_datum('A', 1);
    CHECK(rd.cartan == std::vector<std::vector<long>>{{2}});
    CHECK(rd.d == std::vector<long>{1});
    CHECK(rd.D == 2);
    CHECK(rd.num_pos_roots() == 1);
    CHECK(rd.dim_g() == 3);
    CHECK(rd.pos_roots == std::vector<std::vector<long>>{{1}});
}

TEST_CASE("A2 positive roots in normal order") {
    RootDatum rd = build_root_datum('A', 2);
    CHECK(rd.D == 3);
    // word (1,2,1): alpha_1, alpha_1+alpha_2, alpha_2
    std::vector<std::vector<long>> expect = {{1, 0}, {1, 1}, {0, 1}};
    CHECK(rd.pos_roots == expect);
    CHECK(rd.dim_g() == 8);
}

TEST_CASE("B2 and G2 data") {
    RootDatum b2 = build_root_datum('B', 2);
    CHECK(b2.D == 2);
    CHECK(b2.num_pos_roots() == 4);
    CHECK(b2.dim_g() == 10);
    // word (1,2,1,2): alpha1, 2a1+a2, a1+a2, a2
    std::vector<std::vector<long>> expect = {{1, 0}, {2, 1}, {1, 1}, {0, 1}};
    CHECK(b2.pos_roots == expect);

    RootDatum g2 = build_root_datum('G', 2);
    CHECK(g2.D == 1);
    CHECK(*std::max_element(g2.d.begin(), g2.d.end()) == 3);
    CHECK(g2.num_pos_roots() == 6);
    CHECK(g2.dim_g() == 14);
}

TEST_CASE("sum of positive roots is 2*rho and roots are positive") {
    for (auto [t, r] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 2}, {'B', 2}, {'G', 2}}) {
        RootDatum rd = build_root_datum(t, r);
        std::vector<long> sum(rd.rank, 0);
        for (const auto& root : rd.pos_roots) {
            bool nonneg = true, nonzero = false;
            for (int i = 0; i < rd.rank; ++i) {
                sum[i] += root[i];
                if (root[i] < 0) nonneg = false;
                if (root[i] != 0) nonzero = true;
            }
            CHECK(nonneg);
            CHECK(nonzero);
        }
        // 2*rho in simple-root coords, converted to weight coords, equals 2*(1,..,1)
        Weight two_rho = rd.root_to_weight(sum);
        for (int i = 0; i < rd.rank; ++i) CHECK(two_rho.coords[i] == 2);
    }
}

TEST_CASE("symmetrized cartan matrix and integral pairing") {
    for (auto [t, r] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 2}, {'B', 2}, {'G', 2}}) {
        RootDatum rd = build_root_datum(t, r);
        for (int i = 0; i < rd.rank; ++i)
            for (int j = 0; j < rd.rank; ++j)
                CHECK(rd.d[i] * rd.cartan[i][j] == rd.d[j] * rd.cartan[j][i]);
        // (alpha_i, alpha_j) computed through the weight pairing agrees with d_i a_ij
        for (int i = 0; i < rd.rank; ++i)
            for (int j = 0; j < rd.rank; ++j) {
                long lhs = rd.pair_scaled(rd.simple_root(i), rd.simple_root(j));
                CHECK(lhs == rd.D * rd.d[i] * rd.cartan[i][j]);
            }
    }
}

TEST_CASE("admissibility of ell") {
    CHECK(is_admissible(3, build_root_datum('A', 1)));
    CHECK(is_admissible(5, build_root_datum('A', 1)));
    CHECK_FALSE(is_admissible(6, build_root_datum('A', 1))); // even
    CHECK_FALSE(is_admissible(3, build_root_datum('A', 2))); // gcd(3, D=3)
    CHECK(is_admissible(5, build_root_datum('A', 2)));
    CHECK_FALSE(is_admissible(9, build_root_datum('G', 2))); // gcd(ell,3) for G2
    CHECK(is_admissible(5, build_root_datum('G', 2)));
    CHECK_THROWS(is_admissible(2, build_root_datum('A', 1)));
}

TEST_CASE("q-combinatorics") {
    LaurentPoly q = LaurentPoly::var_pow(1);
    CHECK(qint(2) == q + q.pow(-1));
    CHECK(qint(0).is_zero());
    CHECK(qint(3) == q.pow(2) + LaurentPoly::one() + q.pow(-2));
    CHECK(qfact(3) == qint(2) * qint(3));
    // [q^m; t] vanishing below the diagonal
    CHECK(qbinom_bracket(1, 2).is_zero());
    // (q^2; 1) = q + 1
    CHECK(qbinom_paren(2, 1) == q + LaurentPoly::one());
    // bracket binomial at q=1 is the ordinary binomial
    for (long m = 0; m <= 6; ++m)
        for (long t = 0; t <= m; ++t) {
            Rational expect = 1;
            for (long s = 0; s < t; ++s) expect *= Rational(m - s, s + 1);
            CHECK(qbinom_bracket(m, t).eval_one() == expect);
        }
    // [k]_q at q=1 equals k; composition with specialize gives cyclotomic q-integers
    for (long k = 0; k < 6; ++k) {
        CHECK(qint(k).eval_one() == k);
        CycNum lhs = specialize(qint(k, 2), 3, 2); // q = q_D^D, D=2
        CycNum eps = CycNum::zeta_pow(3, 1);
        CycNum expect = CycNum::zero(3);
        for (long e = k - 1; e >= 1 - k; e -= 2) expect += eps.pow(e);
        CHECK(lhs == expect);
    }
    // step embedding: qint(k, D) is [k]_q written in the variable q_D
    CHECK(qint(2, 2) == LaurentPoly::var_pow(2) + LaurentPoly::var_pow(-2));
}
