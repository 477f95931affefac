#pragma once

#include "qga/cartan.hpp"
#include "qga/hopf.hpp"

namespace qga {

// Small quantum group u_eps(sl2) at an odd root of unity, materialized as a
// FinHopf with PBW basis E^s K^r F^t (indices (s*l + r)*l + t).
// eps = zeta_ell (the specialization of q = q_D^D).
struct SmallQG {
    RootDatum datum;
    long ell = 3;
    FinHopf H;
    RMat R;          // filled by build_rmatrix
    bool has_R = false;
    int idxE = -1, idxK = -1, idxF = -1;
    // lazily built table of the Borel pairing on basis elements:
    // rho_tab[x][y] with x = K^r F^t in the negative Borel, y = E^s K^c in
    // the positive Borel (zero rows/columns elsewhere)
    mutable std::vector<std::vector<CycNum>> rho_tab;

    int enc(int s, int r, int t) const { return (int)((s * ell + r) * ell + t); }
    void dec(int i, int& s, int& r, int& t) const {
        t = (int)(i % ell);
        r = (int)((i / ell) % ell);
        s = (int)(i / (ell * ell));
    }
    CycNum eps_pow(long k) const { return CycNum::zeta_pow((unsigned long)ell, k); }
};

// Builds u_eps for the given root datum. Rank 1 (A1) is materialized fully;
// rank-2 data are available through the Borel straightening engine
// (borel2.hpp), not as a FinHopf. Throws on inadmissible ell or rank >= 2.
SmallQG build_small_qg(const RootDatum& datum, long ell);

// tau-bar pairing u_eps(b+)^cop x u_eps(b-) -> C.
// x must be supported on monomials E^s K^r (t = 0), y on K^r F^t (s = 0);
// otherwise throws std::invalid_argument.
CycNum borel_pairing_tau(const SmallQG& Q, const SV& x_plus, const SV& y_minus);
// rho-bar pairing u_eps(b-)^cop x u_eps(b+) -> C, rho(x,y) = tau(S(y), x).
CycNum borel_pairing_rho(const SmallQG& Q, const SV& x_minus, const SV& y_plus);

// Drinfeld-double R-matrix: R = sum_i h_i^+ (x) h_i^- for tau-bar-dual bases
// of the two Borels, computed by blockwise Gram inversion. Stores the result
// in Q.R and returns it. Throws if the Gram matrix is degenerate.
const RMat& build_rmatrix(SmallQG& Q);

// Irreducible representation of dimension ell (highest weight (ell-1) omega):
// rep[i] = ell x ell matrix of the i-th PBW basis element.
std::vector<CycMat> steinberg_rep(const SmallQG& Q);

// commutant dimension of a list of matrices (exact): dim { X : XM = MX }
long commutant_dim(const std::vector<CycMat>& mats, unsigned long ell);

} // namespace qga
