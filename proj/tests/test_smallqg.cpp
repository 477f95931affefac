#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qga/smallqg.hpp"

using namespace qga;

namespace {
SmallQG make_a1(long ell) { return build_small_qg(build_root_datum('A', 1), ell); }
} // namespace

TEST_CASE("dimension and defining relations at l=3") {
    SmallQG Q = make_a1(3);
    CHECK(Q.H.n == 27);
    const unsigned long l = 3;
    SV E = Q.H.basis_elt(Q.idxE), K = Q.H.basis_elt(Q.idxK), F = Q.H.basis_elt(Q.idxF);
    // K E = eps^2 E K
    CHECK(Q.H.mul(K, E) == sv_scale(Q.H.mul(E, K), CycNum::zeta_pow(l, 2)));
    // K F = eps^{-2} F K
    CHECK(Q.H.mul(K, F) == sv_scale(Q.H.mul(F, K), CycNum::zeta_pow(l, -2)));
    // E F - F E = (K - K^{-1}) / (eps - eps^{-1})
    SV comm = sv_sub(Q.H.mul(E, F), Q.H.mul(F, E));
    SV rhs;
    CycNum c = (CycNum::zeta_pow(l, 1) - CycNum::zeta_pow(l, -1)).inverse();
    sv_add(rhs, Q.enc(0, 1, 0), c);
    sv_add(rhs, Q.enc(0, 2, 0), -c); // K^{-1} = K^2
    CHECK(comm == rhs);
    // nilpotency and K-order in the tensor
    SV E2 = Q.H.mul(E, E);
    CHECK(Q.H.mul(E2, E).empty());
    SV K2 = Q.H.mul(K, K);
    CHECK(Q.H.mul(K2, K) == Q.H.unit);
    SV F2 = Q.H.mul(F, F);
    CHECK(Q.H.mul(F2, F).empty());
}

TEST_CASE("dimension 125 and E^5 = 0 at l=5") {
    SmallQG Q = make_a1(5);
    CHECK(Q.H.n == 125);
    SV E = Q.H.basis_elt(Q.idxE);
    SV p = E;
    for (int k = 1; k < 5; ++k) p = Q.H.mul(p, E);
    CHECK(p.empty());
}

TEST_CASE("inadmissible orders are rejected") {
    CHECK_THROWS(build_small_qg(build_root_datum('A', 1), 6)); // even
    CHECK_THROWS(build_small_qg(build_root_datum('A', 2), 3)); // gcd(l, D) = 3
}

TEST_CASE("Hopf axioms for u_eps(sl2), l=3") {
    SmallQG Q = make_a1(3);
    auto rep = verify_hopf(Q.H);
    for (const auto& item : rep.items) {
        INFO(item.name << ": " << item.witness);
        CHECK(item.pass);
    }
}

TEST_CASE("Borel pairing generator values and Hopf-pairing identity") {
    SmallQG Q = make_a1(3);
    const unsigned long l = 3;
    auto unitv = [&](int i) { return Q.H.basis_elt(i); };
    // rho(F, E) = 1/(eps - eps^{-1})
    SV F = unitv(Q.enc(0, 0, 1)), E = unitv(Q.enc(1, 0, 0)), K = unitv(Q.enc(0, 1, 0));
    CHECK(borel_pairing_rho(Q, F, E) ==
          (CycNum::zeta_pow(l, 1) - CycNum::zeta_pow(l, -1)).inverse());
    // rho(K, K) = q^{(alpha,alpha)} = eps^2
    CHECK(borel_pairing_rho(Q, K, K) == CycNum::zeta_pow(l, 2));
    // rho(K, E) = 0 and tau(K, F) = 0
    CHECK(borel_pairing_rho(Q, K, E).is_zero());
    CHECK(borel_pairing_tau(Q, K, F).is_zero());
    // mixed support is rejected
    CHECK_THROWS(borel_pairing_tau(Q, F, F));
    // Hopf-pairing identity: tau(x x', y) = sum tau(x, y_(1)) tau(x', y_(2))
    // on Borel basis pairs (x, x' in b+, y in b-)
    const int samples[][3] = {{Q.enc(1, 0, 0), Q.enc(0, 1, 0), Q.enc(0, 1, 1)},
                              {Q.enc(1, 1, 0), Q.enc(1, 0, 0), Q.enc(0, 2, 2)},
                              {Q.enc(0, 2, 0), Q.enc(1, 2, 0), Q.enc(0, 1, 1)},
                              {Q.enc(2, 1, 0), Q.enc(0, 1, 0), Q.enc(0, 0, 2)}};
    for (const auto& s : samples) {
        SV x = unitv(s[0]), xp = unitv(s[1]), y = unitv(s[2]);
        CycNum lhs = borel_pairing_tau(Q, Q.H.mul(x, xp), y);
        CycNum rhs = CycNum::zero(l);
        for (const auto& [ab, c] : Q.H.comult[s[2]]) {
            int y1 = (int)(ab / Q.H.n), y2 = (int)(ab % Q.H.n);
            int a, b, t1, t2, r1, r2;
            Q.dec(y1, a, r1, t1);
            Q.dec(y2, b, r2, t2);
            if (a != 0 || b != 0) continue; // outside the negative Borel: pairs to 0
            rhs += c * borel_pairing_tau(Q, x, unitv(y1)) * borel_pairing_tau(Q, xp, unitv(y2));
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Drinfeld-double R-matrix at l=3") {
    SmallQG Q = make_a1(3);
    const RMat& R = build_rmatrix(Q);
    auto rep = verify_quasitriangular(Q.H, R);
    for (const auto& item : rep.items) {
        INFO(item.name << ": " << item.witness);
        CHECK(item.pass);
    }
    // legs live in the correct Borels
    for (const auto& [ij, c] : R.R) {
        int s, r, t;
        Q.dec((int)(ij / Q.H.n), s, r, t);
        CHECK(t == 0); // first leg in b+
        Q.dec((int)(ij % Q.H.n), s, r, t);
        CHECK(s == 0); // second leg in b-
    }
    // factorizability (rank of phi_{0,1}) and ribbon structure
    CHECK(factorizable(Q.H, R));
    auto rd = ribbon_data(Q.H, R);
    for (const auto& item : rd.report.items) {
        INFO(item.name << ": " << item.witness);
        CHECK(item.pass);
    }
    // pivot is K_{2 rho} = K
    CHECK(rd.pivot == Q.enc(0, 1, 0));
}

TEST_CASE("Steinberg representation") {
    for (long ell : {3L, 5L}) {
        SmallQG Q = make_a1(ell);
        auto rep = steinberg_rep(Q);
        CHECK((long)rep[0].size() == ell);
        // it is a representation: rep(e_i) rep(e_j) = rep(e_i e_j) on generators
        const unsigned long l = (unsigned long)ell;
        auto matmul = [&](const CycMat& A, const CycMat& B) {
            int d = (int)A.size();
            CycMat C((size_t)d, std::vector<CycNum>(d, CycNum::zero(l)));
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k)
                    for (int j = 0; j < d; ++j) C[i][j] += A[i][k] * B[k][j];
            return C;
        };
        for (int gi : {Q.idxE, Q.idxK, Q.idxF})
            for (int gj : {Q.idxE, Q.idxK, Q.idxF}) {
                CycMat lhs = matmul(rep[gi], rep[gj]);
                CycMat rhs((size_t)ell, std::vector<CycNum>(ell, CycNum::zero(l)));
                for (const auto& [k, c] : Q.H.product(gi, gj))
                    for (int a = 0; a < ell; ++a)
                        for (int b = 0; b < ell; ++b) rhs[a][b] += rep[k][a][b] * c;
                CHECK(lhs == rhs);
            }
        // irreducibility: commutant of the generator images has dimension 1
        CHECK(commutant_dim({rep[Q.idxE], rep[Q.idxK], rep[Q.idxF]}, l) == 1);
    }
}
