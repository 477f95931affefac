#include "qga/smallqg.hpp"

#include <stdexcept>

namespace qga {

namespace {

// q-integer, q-factorial at eps = zeta_ell
CycNum qint_eps(unsigned long ell, long k) {
    CycNum num = CycNum::zeta_pow(ell, k) - CycNum::zeta_pow(ell, -k);
    CycNum den = CycNum::zeta_pow(ell, 1) - CycNum::zeta_pow(ell, -1);
    return num / den;
}
CycNum qfact_eps(unsigned long ell, long k) {
    CycNum r = CycNum::one(ell);
    for (long j = 1; j <= k; ++j) r = r * qint_eps(ell, j);
    return r;
}

} // namespace

SmallQG build_small_qg(const RootDatum& datum, long ell) {
    if (!is_admissible(ell, datum))
        throw std::invalid_argument("build_small_qg: inadmissible order");
    if (datum.rank != 1)
        throw std::invalid_argument(
            "build_small_qg: only rank 1 is materialized as a FinHopf; "
            "rank-2 types are exposed through the Borel straightening engine");
    SmallQG Q;
    Q.datum = datum;
    Q.ell = ell;
    const unsigned long l = (unsigned long)ell;
    const int n = (int)(ell * ell * ell);
    FinHopf& H = Q.H;
    H.n = n;
    H.ell = l;
    const CycNum one = CycNum::one(l);
    auto qp = [&](long k) { return CycNum::zeta_pow(l, k); };
    const CycNum qdiff_inv = (qp(1) - qp(-1)).inverse();

    H.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int s, r, t;
        Q.dec(i, s, r, t);
        H.labels[i] = "E^" + std::to_string(s) + "K^" + std::to_string(r) + "F^" + std::to_string(t);
    }
    Q.idxE = Q.enc(1, 0, 0);
    Q.idxK = Q.enc(0, 1, 0);
    Q.idxF = Q.enc(0, 0, 1);

    // right multiplication by generators on normal-ordered monomials
    auto rmul_E = [&](const SV& a) {
        SV r_;
        for (const auto& [i, c] : a) {
            int s, r, t;
            Q.dec((int)i, s, r, t);
            // (E^s K^r F^t) E = q^{2r} E^{s+1} K^r F^t
            //   - [t]/(q - q^{-1}) (q^{t-1} E^s K^{r+1} F^{t-1} - q^{-(t-1)} E^s K^{r-1} F^{t-1})
            // (the K^{+-1} of the commutator is moved left through F^{t-1})
            if (s + 1 < ell) sv_add(r_, Q.enc(s + 1, r, t), c * qp(2 * r));
            if (t >= 1) {
                CycNum f = c * qint_eps(l, t) * qdiff_inv;
                sv_add(r_, Q.enc(s, (int)((r + 1) % ell), t - 1), -(f * qp(t - 1)));
                sv_add(r_, Q.enc(s, (int)((r - 1 + ell) % ell), t - 1), f * qp(-(t - 1)));
            }
        }
        return r_;
    };
    auto rmul_K = [&](const SV& a) {
        SV r_;
        for (const auto& [i, c] : a) {
            int s, r, t;
            Q.dec((int)i, s, r, t);
            sv_add(r_, Q.enc(s, (int)((r + 1) % ell), t), c * qp(2 * t));
        }
        return r_;
    };
    auto rmul_F = [&](const SV& a) {
        SV r_;
        for (const auto& [i, c] : a) {
            int s, r, t;
            Q.dec((int)i, s, r, t);
            if (t + 1 < ell) sv_add(r_, Q.enc(s, r, t + 1), c);
        }
        return r_;
    };

    H.mult.assign((size_t)n * n, SV{});
    for (int i = 0; i < n; ++i) {
        SV base;
        base[i] = one;
        // multiply by E^{s'} K^{r'} F^{t'} one generator at a time, caching
        // the partial results along the (s', r', t') lattice walk
        std::vector<SV> after_e(ell);
        after_e[0] = base;
        for (int sp = 1; sp < ell; ++sp) after_e[sp] = rmul_E(after_e[sp - 1]);
        for (int sp = 0; sp < ell; ++sp) {
            SV cur = after_e[sp];
            for (int rp = 0; rp < ell; ++rp) {
                SV cur2 = cur;
                for (int tp = 0; tp < ell; ++tp) {
                    H.mult[(size_t)i * n + Q.enc(sp, rp, tp)] = cur2;
                    if (tp + 1 < ell) cur2 = rmul_F(cur2);
                }
                if (rp + 1 < ell) cur = rmul_K(cur);
            }
        }
    }
    H.unit[Q.enc(0, 0, 0)] = one;

    // counit
    H.counit.assign(n, CycNum::zero(l));
    for (int r = 0; r < ell; ++r) H.counit[Q.enc(0, r, 0)] = one;

    // coproduct on generators, extended multiplicatively
    auto tens = [&](int a, int b) { return (uint64_t)a * n + b; };
    SV dE, dK, dF;
    dE[tens(Q.enc(1, 0, 0), Q.enc(0, 1, 0))] = one; // E (x) K
    dE[tens(Q.enc(0, 0, 0), Q.enc(1, 0, 0))] = one; // 1 (x) E
    dK[tens(Q.enc(0, 1, 0), Q.enc(0, 1, 0))] = one; // K (x) K
    dF[tens(Q.enc(0, 0, 1), Q.enc(0, 0, 0))] = one; // F (x) 1
    dF[tens(Q.enc(0, (int)(ell - 1), 0), Q.enc(0, 0, 1))] = one; // K^{-1} (x) F
    std::vector<SV> dEp(ell), dKp(ell), dFp(ell);
    {
        SV unit2;
        unit2[tens(Q.enc(0, 0, 0), Q.enc(0, 0, 0))] = one;
        dEp[0] = dKp[0] = dFp[0] = unit2;
        for (int k = 1; k < ell; ++k) {
            dEp[k] = H.mul_tensor(dEp[k - 1], dE, 2);
            dKp[k] = H.mul_tensor(dKp[k - 1], dK, 2);
            dFp[k] = H.mul_tensor(dFp[k - 1], dF, 2);
        }
    }
    H.comult.assign(n, SV{});
    for (int i = 0; i < n; ++i) {
        int s, r, t;
        Q.dec(i, s, r, t);
        H.comult[i] = H.mul_tensor(H.mul_tensor(dEp[s], dKp[r], 2), dFp[t], 2);
    }

    // antipode: S(E) = -E K^{-1}, S(K) = K^{-1}, S(F) = -K F, antimultiplicative
    SV sE, sK, sF;
    sE[Q.enc(1, (int)(ell - 1), 0)] = -one;
    sK[Q.enc(0, (int)(ell - 1), 0)] = one;
    sF[Q.enc(0, 1, 1)] = -one; // K F is already normal ordered
    std::vector<SV> sEp(ell), sKp(ell), sFp(ell);
    sEp[0] = sKp[0] = sFp[0] = H.basis_elt(Q.enc(0, 0, 0));
    for (int k = 1; k < ell; ++k) {
        sEp[k] = H.mul(sEp[k - 1], sE);
        sKp[k] = H.mul(sKp[k - 1], sK);
        sFp[k] = H.mul(sFp[k - 1], sF);
    }
    H.antipode.assign(n, SV{});
    for (int i = 0; i < n; ++i) {
        int s, r, t;
        Q.dec(i, s, r, t);
        // S(E^s K^r F^t) = S(F)^t S(K)^r S(E)^s
        H.antipode[i] = H.mul(H.mul(sFp[t], sKp[r]), sEp[s]);
    }
    return Q;
}

namespace {

// Basis table of the pairing rho on u(b_-)^cop x u(b_+), determined by
// rho(K,K) = q^2, rho(F,E) = 1/(q - q^{-1}), rho(K,E) = rho(F,K) = 0 and the
// Hopf pairing rules (first argument carries the opposite coproduct):
//   rho(x x', y)  = sum rho(x, y_(1)) rho(x', y_(2))
//   rho(x, y y')  = sum rho(x_(2), y) rho(x_(1), y')
const std::vector<std::vector<CycNum>>& rho_table(const SmallQG& Q) {
    if (!Q.rho_tab.empty()) return Q.rho_tab;
    const long ell = Q.ell;
    const unsigned long l = (unsigned long)ell;
    const int n = Q.H.n;
    auto qp = [&](long k) { return CycNum::zeta_pow(l, k); };
    const CycNum gFE = (qp(1) - qp(-1)).inverse();

    // elementary rows rho(K, E^s K^c) and rho(F, E^s K^c)
    std::vector<CycNum> rK(n, CycNum::zero(l)), rF(n, CycNum::zero(l));
    for (int c = 0; c < ell; ++c) {
        rK[Q.enc(0, c, 0)] = qp(2 * c);
        // rho(F, E K^c) = rho(F, E) rho(K^{-1}, K^c)
        rF[Q.enc(1, c, 0)] = gFE * qp(-2 * c);
    }
    std::vector<std::vector<CycNum>> T(n, std::vector<CycNum>(n, CycNum::zero(l)));
    // strip the leftmost factor of x = K^r F^t; legs of Delta(y) stay in b_+
    for (int r = 0; r < ell; ++r)
        for (int t = 0; t < ell; ++t) {
            const int x = Q.enc(0, r, t);
            for (int s = 0; s < ell; ++s)
                for (int c = 0; c < ell; ++c) {
                    const int y = Q.enc(s, c, 0);
                    CycNum v = CycNum::zero(l);
                    if (r == 0 && t == 0) {
                        v = (s == 0) ? CycNum::one(l) : CycNum::zero(l);
                    } else {
                        const auto& row = (r > 0) ? rK : rF;
                        const int xp = (r > 0) ? Q.enc(0, r - 1, t) : Q.enc(0, 0, t - 1);
                        for (const auto& [ab, cc] : Q.H.comult[y]) {
                            const int y1 = (int)(ab / (uint64_t)n), y2 = (int)(ab % (uint64_t)n);
                            v += cc * row[y1] * T[xp][y2];
                        }
                    }
                    T[x][y] = v;
                }
        }
    Q.rho_tab = std::move(T);
    return Q.rho_tab;
}

} // namespace

CycNum borel_pairing_rho(const SmallQG& Q, const SV& x_minus, const SV& y_plus) {
    const auto& T = rho_table(Q);
    const unsigned long l = (unsigned long)Q.ell;
    CycNum out = CycNum::zero(l);
    for (const auto& [ix, cx] : x_minus) {
        int s, r, t;
        Q.dec((int)ix, s, r, t);
        if (s != 0) throw std::invalid_argument("borel_pairing: x not in negative Borel");
        for (const auto& [iy, cy] : y_plus) {
            Q.dec((int)iy, s, r, t);
            if (t != 0) throw std::invalid_argument("borel_pairing: y not in positive Borel");
            out += cx * cy * T[ix][iy];
        }
    }
    return out;
}

CycNum borel_pairing_tau(const SmallQG& Q, const SV& x_plus, const SV& y_minus) {
    // tau(x_+, y_-) = rho(S(y_-), x_+)
    for (const auto& [ix, cx] : x_plus) {
        (void)cx;
        int s, r, t;
        Q.dec((int)ix, s, r, t);
        if (t != 0) throw std::invalid_argument("borel_pairing: x not in positive Borel");
    }
    return borel_pairing_rho(Q, Q.H.apply_S(y_minus), x_plus);
}

const RMat& build_rmatrix(SmallQG& Q) {
    if (Q.has_R) return Q.R;
    const long ell = Q.ell;
    const unsigned long l = (unsigned long)ell;
    const int n = Q.H.n;
    // R = sum_j e_j (x) d_j where {e_j} is the PBW basis of the positive
    // Borel and {d_j} is its dual basis for rho: rho(d_j, e_k) = delta_{jk}.
    // rho(K^a F^t, E^s K^r) vanishes unless s = t, so the Gram is inverted
    // in ell x ell Cartan-type blocks, one for each s.
    const auto& T = rho_table(Q);
    SV R;
    for (int s = 0; s < ell; ++s) {
        CycMat G((size_t)ell, std::vector<CycNum>(ell, CycNum::zero(l)));
        for (int a = 0; a < ell; ++a)
            for (int r = 0; r < ell; ++r) G[a][r] = T[Q.enc(0, a, s)][Q.enc(s, r, 0)];
        CycMat Gi = cyc_inverse(G, l); // throws if degenerate
        // R block = sum_{r,a} (G^{-1})_{r, a} (E^s K^r) (x) (K^a F^s)
        for (int r = 0; r < ell; ++r)
            for (int a = 0; a < ell; ++a) {
                if (Gi[r][a].is_zero()) continue;
                sv_add(R, (uint64_t)Q.enc(s, r, 0) * n + Q.enc(0, a, s), Gi[r][a]);
            }
    }
    Q.R = make_rmat(Q.H, R);
    Q.has_R = true;
    return Q.R;
}

std::vector<CycMat> steinberg_rep(const SmallQG& Q) {
    const long ell = Q.ell;
    const unsigned long l = (unsigned long)ell;
    const int d = (int)ell;              // dim = ell^N with N = 1
    const long lam = ell - 1;            // highest weight (ell-1) omega
    auto Z = [&] { return CycMat((size_t)d, std::vector<CycNum>(d, CycNum::zero(l))); };
    CycMat ME = Z(), MK = Z(), MF = Z();
    for (int k = 0; k < d; ++k) {
        MK[k][k] = CycNum::zeta_pow(l, lam - 2 * k);
        if (k + 1 < d) MF[k + 1][k] = CycNum::one(l);
        if (k >= 1) ME[k - 1][k] = qint_eps(l, k) * qint_eps(l, lam - k + 1);
    }
    auto matmul = [&](const CycMat& A, const CycMat& B) {
        CycMat C = Z();
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                if (A[i][k].is_zero()) continue;
                for (int j = 0; j < d; ++j)
                    if (!B[k][j].is_zero()) C[i][j] += A[i][k] * B[k][j];
            }
        return C;
    };
    std::vector<CycMat> Ep(ell), Kp(ell), Fp(ell);
    CycMat I = Z();
    for (int i = 0; i < d; ++i) I[i][i] = CycNum::one(l);
    Ep[0] = Kp[0] = Fp[0] = I;
    for (int k = 1; k < ell; ++k) {
        Ep[k] = matmul(Ep[k - 1], ME);
        Kp[k] = matmul(Kp[k - 1], MK);
        Fp[k] = matmul(Fp[k - 1], MF);
    }
    std::vector<CycMat> rep(Q.H.n);
    for (int i = 0; i < Q.H.n; ++i) {
        int s, r, t;
        Q.dec(i, s, r, t);
        rep[i] = matmul(matmul(Ep[s], Kp[r]), Fp[t]);
    }
    return rep;
}

long commutant_dim(const std::vector<CycMat>& mats, unsigned long ell) {
    if (mats.empty()) return 0;
    const int d = (int)mats[0].size();
    // unknowns X (d^2), equations X M - M X = 0 stacked over all M
    CycMat sys;
    for (const auto& M : mats) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::vector<CycNum> row((size_t)d * d, CycNum::zero(ell));
                // (XM - MX)_{ij} = sum_k X_{ik} M_{kj} - M_{ik} X_{kj}
                for (int k = 0; k < d; ++k) {
                    row[(size_t)i * d + k] += M[k][j];
                    row[(size_t)k * d + j] -= M[i][k];
                }
                sys.push_back(std::move(row));
            }
    }
    std::vector<std::vector<CycNum>> ker;
    cyc_rank(std::move(sys), ell, &ker);
    return (long)ker.size();
}

} // namespace qga
