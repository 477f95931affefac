#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qga/graphalg.hpp"
#include "qga/modp.hpp"
#include "qga/smallqg.hpp"

using namespace qga;

namespace {

constexpr unsigned long kEll = 3;
constexpr int kN = 27;

struct Fix {
    SmallQG Q;
    FinHopf D; // dual of H
    Heisenberg W;
    GraphAlgebra A01, A10, A02, A11;
    Fix()
        : Q(build_small_qg(build_root_datum('A', 1), (long)kEll)),
          D(),
          W(),
          A01(),
          A10(),
          A02(),
          A11() {
        build_rmatrix(Q);
        D = dual_hopf(Q.H);
        W = make_heisenberg(Q.H);
        A01 = make_graph_algebra(Q.H, Q.R, 0, 1);
        A10 = make_graph_algebra(A01, 1, 0);
        A02 = make_graph_algebra(A01, 0, 2);
        A11 = make_graph_algebra(A01, 1, 1);
    }
};

Fix& fix() {
    static Fix f;
    return f;
}

SV dbasis(int i) {
    SV e;
    e[(uint64_t)i] = CycNum::one(kEll);
    return e;
}

GraphElt mono(uint64_t key) {
    GraphElt e;
    e[key] = CycNum::one(kEll);
    return e;
}

CycNum pairR(const RMat& R, uint64_t a, uint64_t b) {
    auto it = R.R.find(a * kN + b);
    return it == R.R.end() ? CycNum::zero(kEll) : it->second;
}

std::mt19937 rng_for(uint32_t seed) { return std::mt19937(seed); }

} // namespace

TEST_CASE("one-slot product matches both coaction rewrites") {
    auto& f = fix();
    const auto& D = f.D;
    int nonzero = 0;
    for (int i = 0; i < kN; ++i)
        for (int j = 0; j < kN; ++j) {
            const GraphElt prod = graph_mul(f.A01, mono(i), mono(j));
            // rewrite 1: phi psi = sum R(psi_[1] (x) S(phi_(2))) phi_(1) * psi_[2]
            SV o1;
            const SV dphi = D.delta(dbasis(i));
            const SV cops = coact_dual(D, dbasis(j));
            for (const auto& [pk, pc] : dphi) {
                const uint64_t p1 = pk / kN, p2 = pk % kN;
                for (const auto& [ck, cc] : cops) {
                    const uint64_t a = ck / kN, b = ck % kN;
                    CycNum coef = CycNum::zero(kEll);
                    for (const auto& [s2, s2c] : D.antipode[p2]) coef += s2c * pairR(f.Q.R, a, s2);
                    if (!coef.is_zero()) sv_axpy(o1, pc * cc * coef, D.product((int)p1, (int)b));
                }
            }
            CHECK(prod == o1);
            // rewrite 2: phi psi = sum R(psi_(1) (x) phi_[1]) psi_(2) * phi_[2]
            SV o2;
            const SV dpsi = D.delta(dbasis(j));
            const SV cophi = coact_dual(D, dbasis(i));
            for (const auto& [pk, pc] : dpsi) {
                const uint64_t p1 = pk / kN, p2 = pk % kN;
                for (const auto& [ck, cc] : cophi) {
                    const uint64_t a = ck / kN, b = ck % kN;
                    const CycNum coef = pairR(f.Q.R, p1, a);
                    if (!coef.is_zero()) sv_axpy(o2, pc * cc * coef, D.product((int)p2, (int)b));
                }
            }
            CHECK(prod == o2);
            if (!prod.empty()) ++nonzero;
        }
    CHECK(nonzero > 0);
}

TEST_CASE("unit laws") {
    auto& f = fix();
    const GraphElt u01 = f.A01.unit();
    for (int b = 0; b < kN; ++b) {
        CHECK(graph_mul(f.A01, u01, mono(b)) == mono(b));
        CHECK(graph_mul(f.A01, mono(b), u01) == mono(b));
    }
    const GraphElt u11 = f.A11.unit();
    auto rng = rng_for(11);
    const uint64_t N11 = (uint64_t)kN * kN * kN;
    for (int t = 0; t < 12; ++t) {
        const uint64_t b = rng() % N11;
        CHECK(graph_mul(f.A11, u11, mono(b)) == mono(b));
        CHECK(graph_mul(f.A11, mono(b), u11) == mono(b));
    }
}

TEST_CASE("associativity on random monomials") {
    auto& f = fix();
    auto rng = rng_for(22);
    const uint64_t N11 = (uint64_t)kN * kN * kN;
    for (int t = 0; t < 5; ++t) {
        const GraphElt x = mono(rng() % N11), y = mono(rng() % N11), z = mono(rng() % N11);
        CHECK(graph_mul(f.A11, graph_mul(f.A11, x, y), z) ==
              graph_mul(f.A11, x, graph_mul(f.A11, y, z)));
    }
}

TEST_CASE("slot embeddings are algebra morphisms") {
    auto& f = fix();
    auto rng = rng_for(33);
    for (int s = 0; s < f.A11.k; ++s)
        for (int t = 0; t < 8; ++t) {
            const int i = (int)(rng() % kN), j = (int)(rng() % kN);
            const GraphElt lhs =
                graph_mul(f.A11, f.A11.embed(s, dbasis(i)), f.A11.embed(s, dbasis(j)));
            CHECK(lhs == f.A11.embed(s, f.A11.fus[(size_t)i * kN + j]));
        }
}

TEST_CASE("braided exchange of distinct punctures") {
    auto& f = fix();
    const auto& D = f.D;
    auto rng = rng_for(44);
    for (int t = 0; t < 12; ++t) {
        const int xi = (int)(rng() % kN), yi = (int)(rng() % kN);
        // j_1(y) j_0(x) = sum R(x_[1] (x) y_[1]) j_0(x_[2]) j_1(y_[2])
        const GraphElt lhs =
            graph_mul(f.A02, f.A02.embed(1, dbasis(yi)), f.A02.embed(0, dbasis(xi)));
        GraphElt rhs;
        for (const auto& [xk, xc] : coact_dual(D, dbasis(xi))) {
            const uint64_t x1 = xk / kN, x2 = xk % kN;
            for (const auto& [yk, yc] : coact_dual(D, dbasis(yi))) {
                const uint64_t y1 = yk / kN, y2 = yk % kN;
                const CycNum coef = pairR(f.Q.R, x1, y1);
                if (coef.is_zero()) continue;
                sv_add(rhs, x2 * kN + y2, xc * yc * coef);
            }
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("coadjoint action is a module-algebra action") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(55);
    const uint64_t N02 = (uint64_t)kN * kN;
    // coad(1) = id, coad(h)(unit) = eps(h) unit
    for (int t = 0; t < 6; ++t) {
        const GraphElt x = mono(rng() % N02);
        CHECK(coad_graph(f.A02, H.unit, x) == x);
    }
    for (int m : {f.Q.idxE, f.Q.idxK, f.Q.idxF})
        CHECK(coad_graph(f.A02, H.basis_elt(m), f.A02.unit()) ==
              sv_scale(f.A02.unit(), H.counit[m]));
    // coad(h)(x y) = sum coad(h1)(x) coad(h2)(y)
    for (int m : {f.Q.idxE, f.Q.idxK, f.Q.idxF, f.Q.enc(1, 1, 1)})
        for (int t = 0; t < 3; ++t) {
            const GraphElt x = mono(rng() % N02), y = mono(rng() % N02);
            const GraphElt lhs = coad_graph(f.A02, H.basis_elt(m), graph_mul(f.A02, x, y));
            GraphElt rhs;
            for (const auto& [dk, c] : H.delta(H.basis_elt(m))) {
                const uint64_t h1 = dk / kN, h2 = dk % kN;
                sv_axpy(rhs, c,
                        graph_mul(f.A02, coad_graph(f.A02, H.basis_elt((int)h1), x),
                                  coad_graph(f.A02, H.basis_elt((int)h2), y)));
            }
            CHECK(lhs == rhs);
        }
}

TEST_CASE("braided antipode satisfies the antipode law") {
    auto& f = fix();
    const auto& D = f.D;
    const GraphElt u01 = f.A01.unit();
    for (int i = 0; i < kN; ++i) {
        // sum phi1 * S_L(phi2) = S_L(phi1) * phi2 = phi(1_H) unit
        GraphElt l1, l2;
        for (const auto& [dk, c] : D.delta(dbasis(i))) {
            const uint64_t p1 = dk / kN, p2 = dk % kN;
            sv_axpy(l1, c, graph_mul(f.A01, mono(p1), f.A01.sl_antipode[p2]));
            sv_axpy(l2, c, graph_mul(f.A01, f.A01.sl_antipode[p1], mono(p2)));
        }
        auto it = f.Q.H.unit.find((uint64_t)i);
        const CycNum val = it == f.Q.H.unit.end() ? CycNum::zero(kEll) : it->second;
        CHECK(l1 == sv_scale(u01, val));
        CHECK(l2 == sv_scale(u01, val));
    }
}

TEST_CASE("one-puncture invariants match the all-generators kernel") {
    auto& f = fix();
    const auto& H = f.Q.H;
    const auto inv = graph_invariants(f.A01, {f.Q.idxE, f.Q.idxK, f.Q.idxF});
    // brute force over every basis element of H
    CycMat M((size_t)kN * kN, std::vector<CycNum>(kN, CycNum::zero(kEll)));
    for (int m = 0; m < kN; ++m)
        for (int b = 0; b < kN; ++b) {
            SV w = coad_graph(f.A01, H.basis_elt(m), mono(b));
            sv_add(w, (uint64_t)b, -H.counit[m]);
            for (const auto& [key, c] : w) M[(size_t)m * kN + key][b] = c;
        }
    std::vector<std::vector<CycNum>> ker;
    cyc_rank(M, kEll, &ker);
    CHECK(inv.size() == ker.size());
    REQUIRE(!inv.empty());
    // same span: stacked rank equals either dimension
    CycMat S((size_t)kN, std::vector<CycNum>(inv.size() + ker.size(), CycNum::zero(kEll)));
    for (size_t j = 0; j < inv.size(); ++j)
        for (const auto& [key, c] : inv[j]) S[(size_t)key][j] = c;
    for (size_t j = 0; j < ker.size(); ++j)
        for (int b = 0; b < kN; ++b) S[(size_t)b][inv.size() + j] = ker[j][b];
    CHECK((size_t)cyc_rank(S, kEll) == inv.size());
}

TEST_CASE("Heisenberg double exchange relation and representation") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(66);
    // h phi = sum (h1 |> phi) h2
    for (int t = 0; t < 20; ++t) {
        const int h = (int)(rng() % kN), p = (int)(rng() % kN);
        const SV lhs = heis_mul(f.W, heis_from_alg(f.W, H.basis_elt(h)),
                                heis_from_dual(f.W, dbasis(p)));
        SV rhs;
        for (const auto& [dk, c] : H.comult[h]) {
            const uint64_t h1 = dk / kN, h2 = dk % kN;
            for (const auto& [q, qc] : f.W.lcoreg[(size_t)h1 * kN + p])
                sv_add(rhs, q * kN + h2, c * qc);
        }
        CHECK(lhs == rhs);
    }
    // rho is an algebra morphism and rho(1) = id
    const uint64_t N2 = (uint64_t)kN * kN;
    for (int t = 0; t < 8; ++t) {
        const SV x = mono(rng() % N2), y = mono(rng() % N2);
        const SV ps = dbasis((int)(rng() % kN));
        CHECK(heis_rep(f.W, heis_mul(f.W, x, y), ps) == heis_rep(f.W, x, heis_rep(f.W, y, ps)));
    }
    for (int p = 0; p < kN; ++p) CHECK(heis_rep(f.W, heis_unit(f.W), dbasis(p)) == dbasis(p));
}

TEST_CASE("handle morphism into the Heisenberg double") {
    auto& f = fix();
    auto rng = rng_for(77);
    CHECK(phi10_apply(f.A10, f.W, f.A10.unit()) == heis_unit(f.W));
    const uint64_t N2 = (uint64_t)kN * kN;
    for (int t = 0; t < 8; ++t) {
        const GraphElt x = mono(rng() % N2), y = mono(rng() % N2);
        CHECK(phi10_apply(f.A10, f.W, graph_mul(f.A10, x, y)) ==
              heis_mul(f.W, phi10_apply(f.A10, f.W, x), phi10_apply(f.A10, f.W, y)));
    }
}

TEST_CASE("hat elements represent right division") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(88);
    for (int t = 0; t < 10; ++t) {
        const int h = (int)(rng() % kN), p = (int)(rng() % kN);
        const SV hat = hat_elt(f.A10, f.W, H.basis_elt(h));
        // rho(hat(h))(psi) = psi <| S^{-1}(h)
        CHECK(heis_rep(f.W, hat, dbasis(p)) ==
              coreg_right(H, dbasis(p), H.apply_Sinv(H.basis_elt(h))));
    }
    for (int t = 0; t < 6; ++t) {
        const int h = (int)(rng() % kN), a = (int)(rng() % kN);
        const SV hat = hat_elt(f.A10, f.W, H.basis_elt(h));
        const SV ea = heis_from_alg(f.W, H.basis_elt(a));
        CHECK(heis_mul(f.W, hat, ea) == heis_mul(f.W, ea, hat));
    }
    for (int t = 0; t < 6; ++t) {
        const int h = (int)(rng() % kN), h2 = (int)(rng() % kN);
        const SV lhs = heis_mul(f.W, hat_elt(f.A10, f.W, H.basis_elt(h)),
                                hat_elt(f.A10, f.W, H.basis_elt(h2)));
        SV prod = H.mul(H.basis_elt(h), H.basis_elt(h2));
        CHECK(lhs == hat_elt(f.A10, f.W, prod));
    }
}

TEST_CASE("moment map factors through the Heisenberg moment map") {
    auto& f = fix();
    // Phi10 o d10 = Dhat10 o Phi01 on the dual basis
    for (int i = 0; i < kN; ++i) {
        SV ei = dbasis(i);
        CHECK(phi10_apply(f.A10, f.W, qmm_from_dual(f.A10, ei)) ==
              dhat10(f.A10, f.W, f.A10.phi01_apply(ei)));
    }
}

TEST_CASE("moment map is an algebra morphism") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(99);
    for (int t = 0; t < 5; ++t) {
        const int a = (int)(rng() % kN), b = (int)(rng() % kN);
        CHECK(qmm(f.A10, H.mul(H.basis_elt(a), H.basis_elt(b))) ==
              graph_mul(f.A10, qmm(f.A10, H.basis_elt(a)), qmm(f.A10, H.basis_elt(b))));
    }
    CHECK(qmm(f.A10, H.unit) == f.A10.unit());
    CHECK(qmm(f.A02, H.unit) == f.A02.unit());
}

TEST_CASE("quantum moment map identity") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(111);
    for (GraphAlgebra* Ap : {&f.A02, &f.A10}) {
        GraphAlgebra& A = *Ap;
        const uint64_t N = (uint64_t)kN * kN;
        for (int t = 0; t < 8; ++t) {
            const int h = (int)(rng() % kN);
            const GraphElt x = mono(rng() % N);
            const GraphElt lhs = graph_mul(A, qmm(A, H.basis_elt(h)), x);
            GraphElt rhs;
            for (const auto& [dk, c] : H.delta(H.basis_elt(h))) {
                const uint64_t h1 = dk / kN, h2 = dk % kN;
                const GraphElt cx =
                    coad_graph(A, H.apply_Sinv(H.basis_elt((int)h2)), x);
                sv_axpy(rhs, c, graph_mul(A, cx, qmm(A, H.basis_elt((int)h1))));
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("two-sided double relation") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(122);
    const uint64_t n3 = (uint64_t)kN * kN * kN;
    // b~ (psi (x) c) = sum (psi <| S^{-1}(b2)) c b~_(1)
    for (int t = 0; t < 10; ++t) {
        const int b = (int)(rng() % kN), p = (int)(rng() % kN), c = (int)(rng() % kN);
        SV bt; // 1 (x) 1 (x) b~
        for (const auto& [du, dc] : f.W.dual.unit)
            for (const auto& [u, uc] : H.unit)
                sv_add(bt, (du * kN + u) * kN + (uint64_t)b, dc * uc);
        SV mid; // psi (x) c (x) 1~
        for (const auto& [u, uc] : H.unit)
            sv_add(mid, ((uint64_t)p * kN + (uint64_t)c) * kN + u, uc);
        const SV lhs = hh_mul(f.W, 1, 0, bt, mid);
        SV rhs;
        for (const auto& [bk, bc] : H.comult[b]) {
            const uint64_t b1 = bk / kN, b2 = bk % kN;
            const SV ps = coreg_right(H, dbasis(p), H.apply_Sinv(H.basis_elt((int)b2)));
            for (const auto& [q, qc] : ps)
                sv_add(rhs, (q * kN + (uint64_t)c) * kN + b1, bc * qc);
        }
        CHECK(lhs == rhs);
    }
    // associativity on random triples
    for (int t = 0; t < 4; ++t) {
        const SV x = mono(rng() % n3), y = mono(rng() % n3), z = mono(rng() % n3);
        CHECK(hh_mul(f.W, 1, 0, hh_mul(f.W, 1, 0, x, y), z) ==
              hh_mul(f.W, 1, 0, x, hh_mul(f.W, 1, 0, y, z)));
    }
}

TEST_CASE("surface morphism into the two-sided double") {
    auto& f = fix();
    auto rng = rng_for(133);
    // base case: at one handle the morphism is Phi10 with trivial b~ leg
    const uint64_t N2 = (uint64_t)kN * kN;
    for (int t = 0; t < 4; ++t) {
        const GraphElt x = mono(rng() % N2);
        const SV ph = phi10_apply(f.A10, f.W, x);
        SV emb;
        for (const auto& [hk, c] : ph)
            for (const auto& [u, uc] : f.Q.H.unit) sv_add(emb, hk * kN + u, c * uc);
        CHECK(alekseev_apply(f.A10, f.W, x) == emb);
    }
    // algebra morphism at (1,1) and (0,2)
    const uint64_t N3 = (uint64_t)kN * kN * kN;
    for (int t = 0; t < 4; ++t) {
        const GraphElt x = mono(rng() % N3), y = mono(rng() % N3);
        CHECK(alekseev_apply(f.A11, f.W, graph_mul(f.A11, x, y)) ==
              hh_mul(f.W, 1, 1, alekseev_apply(f.A11, f.W, x), alekseev_apply(f.A11, f.W, y)));
    }
    for (int t = 0; t < 4; ++t) {
        const GraphElt x = mono(rng() % N2), y = mono(rng() % N2);
        CHECK(alekseev_apply(f.A02, f.W, graph_mul(f.A02, x, y)) ==
              hh_mul(f.W, 0, 2, alekseev_apply(f.A02, f.W, x), alekseev_apply(f.A02, f.W, y)));
    }
    CHECK(alekseev_apply(f.A11, f.W, f.A11.unit()) == hh_unit(f.W, 1, 1));
}

TEST_CASE("represented morphism linearizes the moment map") {
    auto& f = fix();
    const auto& H = f.Q.H;
    auto rng = rng_for(144);
    std::vector<int> hs = {f.Q.idxE, f.Q.idxK, f.Q.idxF};
    for (int t = 0; t < 3; ++t) hs.push_back((int)(rng() % kN));
    for (int h : hs)
        CHECK(fgn_apply(f.A10, f.W, qmm(f.A10, H.basis_elt(h))) == act_tensor(f.A10, H.basis_elt(h)));
    for (int h : {f.Q.idxK, f.Q.idxE})
        CHECK(fgn_apply(f.A11, f.W, qmm(f.A11, H.basis_elt(h))) == act_tensor(f.A11, H.basis_elt(h)));
}

TEST_CASE("exact center of small algebras") {
    auto& f = fix();
    // commutative algebra (pointwise product on idempotents): center is everything
    const auto cd = algebra_center(kN, kEll, [&](const SV& a, const SV& b) {
        SV r;
        for (const auto& [ka, ca] : a) {
            auto it = b.find(ka);
            if (it != b.end()) sv_add(r, ka, ca * it->second);
        }
        return r;
    });
    CHECK(cd.size() == (size_t)kN);
    // 2x2 matrix algebra: the center is the scalars
    auto matmul = [](const SV& a, const SV& b) {
        SV r;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                const uint64_t i = ka / 2, j = ka % 2, k2 = kb / 2, l = kb % 2;
                if (j == k2) sv_add(r, i * 2 + l, ca * cb);
            }
        return r;
    };
    const auto cm = algebra_center(4, kEll, matmul);
    CHECK(cm.size() == 1);
}

TEST_CASE("mod-p product agrees with the exact product") {
    auto& f = fix();
    const int64_t p = fp_find_prime(kEll);
    const FpGraph G = fp_graph(f.A11, p);
    auto rng = rng_for(155);
    const uint64_t N3 = (uint64_t)kN * kN * kN;
    for (int t = 0; t < 10; ++t) {
        const GraphElt x = mono(rng() % N3), y = mono(rng() % N3);
        CHECK(fp_reduce(graph_mul(f.A11, x, y), kEll, p) ==
              fp_graph_mul(G, fp_reduce(x, kEll, p), fp_reduce(y, kEll, p)));
    }
}

TEST_CASE("one-puncture centralizer certificate") {
    auto& f = fix();
    const auto rep = centralizer_check(f.A01, {f.Q.idxE, f.Q.idxK, f.Q.idxF});
    for (const auto& item : rep.items) {
        INFO(item.name << ": " << item.witness);
        CHECK(item.pass);
    }
}
