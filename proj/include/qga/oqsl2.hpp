#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qga/cyclotomic.hpp"
#include "qga/hopf.hpp"
#include "qga/laurent.hpp"
#include "qga/smallqg.hpp"

// Degree-truncated exact model of the quantized coordinate ring of SL2 at
// generic q and at odd roots of unity, together with the restricted form of
// the quantum group it pairs against, the quantum Frobenius morphism and its
// dual, the projection onto the small-quantum-group dual, quantum traces,
// the quantum Killing form, and the classical moment map.
//
// Scalar convention: all generic scalars are Laurent polynomials in one
// variable v with
//     q_D = v^2,   q = q_D^2 = v^4      (sl2: D = 2).
// At an odd root of unity of order ell the specialization sends
// v -> sqrt_eps_d(ell, 2), so that q -> zeta_ell, matching the scalar used
// by build_small_qg.

namespace qga {

// ---- scalar helpers --------------------------------------------------------

inline LaurentPoly v_pow(long k) { return LaurentPoly::var_pow(k); }
inline LaurentPoly q_pow(long k) { return LaurentPoly::var_pow(4 * k); }

// q-combinatorics in the variable v: qint(k, 4), qfact(k, 4), ... from
// cartan.hpp (step 4 since q = v^4)

// Gaussian binomial [m choose t]_q for any integer m (Laurent polynomial)
LaurentPoly qbinom(long m, long t);

// specialize a v-polynomial at the root of unity of order ell (sl2: D = 2)
CycNum eps_eval(const LaurentPoly& p, long ell);

// Rational function num/den in v, normalized (gcd 1, den monic-ish). Used in
// the layers where intermediate values genuinely leave the Laurent ring
// (dual-basis solves, Killing values at odd Cartan weights).
struct QRat {
    LaurentPoly num, den;

    QRat() : num(), den(LaurentPoly::one()) {}
    QRat(const LaurentPoly& n) : num(n), den(LaurentPoly::one()) {}
    QRat(const LaurentPoly& n, const LaurentPoly& d) : num(n), den(d) { normalize(); }
    static QRat one() { return QRat(LaurentPoly::one()); }

    bool is_zero() const { return num.is_zero(); }
    bool is_laurent() const { return den == LaurentPoly::one(); }
    void normalize();

    QRat operator+(const QRat& o) const { return QRat(num * o.den + o.num * den, den * o.den); }
    QRat operator-(const QRat& o) const { return QRat(num * o.den - o.num * den, den * o.den); }
    QRat operator*(const QRat& o) const { return QRat(num * o.num, den * o.den); }
    QRat operator/(const QRat& o) const;
    QRat operator-() const {
        QRat r = *this;
        r.num = -r.num;
        return r;
    }
    bool operator==(const QRat& o) const { return (num * o.den) == (o.num * den); }
    bool operator!=(const QRat& o) const { return !(*this == o); }

    // throws if the reduced denominator is not 1
    LaurentPoly to_laurent() const;
    std::string str() const;
};

// ---- truncated quantized coordinate ring of SL2 ----------------------------

// Normal-form monomials: a^i b^j c^k (da = 0) and b^j c^k d^da (da >= 1,
// i = 0). Exponents < 64.
inline uint64_t oq_key(int da, int i, int j, int k) {
    return (((uint64_t)da * 64 + (uint64_t)i) * 64 + (uint64_t)j) * 64 + (uint64_t)k;
}
inline void oq_dec(uint64_t m, int& da, int& i, int& j, int& k) {
    k = (int)(m % 64);
    j = (int)((m / 64) % 64);
    i = (int)((m / (64 * 64)) % 64);
    da = (int)(m / (64 * 64 * 64));
}
inline int oq_deg(uint64_t m) {
    int da, i, j, k;
    oq_dec(m, da, i, j, k);
    return da + i + j + k;
}
std::string oq_mono_str(uint64_t m);

using OqElt = std::map<uint64_t, LaurentPoly>;   // generic coefficients
using OqEltE = std::map<uint64_t, CycNum>;       // coefficients at eps
using OqTens2 = std::map<std::pair<uint64_t, uint64_t>, LaurentPoly>;
// key of a triple leg: (m1, m2, m3)
using OqTens3 = std::map<std::array<uint64_t, 3>, LaurentPoly>;

void oq_add(OqElt& x, uint64_t m, const LaurentPoly& c);
void oq_axpy(OqElt& x, const LaurentPoly& c, const OqElt& y);
OqEltE oq_spec(const OqElt& x, long ell);

// sparse matrix over LaurentPoly: rows[r] maps column -> value
using LMat = std::vector<std::map<int, LaurentPoly>>;

struct OqAlg {
    int cap = 6;

    // exchange scalars derived from the RTT system: y*x = c_yx * (x*y) for
    // the five q-commuting generator pairs, and the determinant-reduced
    // products a*d = 1 + beta_ad*(b*c), d*a = 1 + beta_da*(b*c)
    LaurentPoly c_ba, c_ca, c_cb, c_db, c_dc;
    LaurentPoly beta_ad, beta_da;
    // antipode on generators, solved from the antipode axioms
    std::array<OqElt, 4> S_gen;

    // straightening caches
    mutable std::map<std::pair<uint64_t, int>, OqElt> mono_gen_cache; // mono * generator g
    mutable std::map<uint64_t, OqTens2> delta_cache;
    mutable std::map<uint64_t, OqElt> antipode_cache;

    // per-degree module data on V^{(x)d}: index = bitmask over 2^d basis
    // vectors (bit d-1-pos: leftmost tensor leg = most significant bit),
    // bit 0 on a leg means the lowest-weight vector
    struct Rep {
        int d = 0;
        std::vector<long> wt;          // weight in units of the fundamental weight
        std::vector<LMat> Epow, Fpow;  // ordinary powers E^s, F^s, s = 0..d
    };
    mutable std::map<int, Rep> rep_cache;
    const Rep& rep(int d) const;

    // generator keys
    uint64_t ka() const { return oq_key(0, 1, 0, 0); }
    uint64_t kb() const { return oq_key(0, 0, 1, 0); }
    uint64_t kc() const { return oq_key(0, 0, 0, 1); }
    uint64_t kd() const { return oq_key(1, 0, 0, 0); }

    // letters of the normal-form word, as (row, col) indices of V_w
    std::vector<std::pair<int, int>> word(uint64_t m) const;

    // product of a normal monomial with a single generator (0=a,1=b,2=c,3=d)
    const OqElt& mono_gen(uint64_t m, int g) const;
    OqElt mono_mul(uint64_t x, uint64_t y) const;
    OqElt mul(const OqElt& x, const OqElt& y) const;
    OqEltE mul_eps(const OqEltE& x, const OqEltE& y, long ell) const;

    LaurentPoly counit(const OqElt& x) const;
    const OqTens2& delta(uint64_t m) const;
    OqTens2 delta(const OqElt& x) const;
    OqTens3 delta2(const OqElt& x) const;
    const OqElt& antipode_mono(uint64_t m) const;
    OqElt antipode(const OqElt& x) const;

    // normal form of an arbitrary word in the generators (0=a,1=b,2=c,3=d)
    OqElt word_normal_form(const std::vector<int>& letters) const;
};

// Derives the exchange relations from the RTT system with the R-matrix on
// V_w (x) V_w (computed from the theta-factor times the quasi R-matrix),
// imposes the quantum determinant relation, and solves for the antipode.
OqAlg build_oq(int degree_cap);

// all normal-form monomials of degree <= cap (sorted keys)
std::vector<uint64_t> oq_monomials(int cap);

// ---- restricted integral form at sl2 ---------------------------------------

// Basis monomial E^{(p)} K^{e - floor(t/2)} (K;t)_q F^{(s)}, e in {0,1}.
struct GammaMono {
    int p = 0, e = 0, t = 0, s = 0;
};
inline uint64_t gamma_key(const GammaMono& y) {
    return (((uint64_t)y.p * 64 + (uint64_t)y.e) * 64 + (uint64_t)y.t) * 64 + (uint64_t)y.s;
}
inline GammaMono gamma_dec(uint64_t k) {
    GammaMono y;
    y.s = (int)(k % 64);
    y.t = (int)((k / 64) % 64);
    y.e = (int)((k / (64 * 64)) % 64);
    y.p = (int)(k / (64 * 64 * 64));
    return y;
}
using GammaElt = std::map<uint64_t, LaurentPoly>;

// value of K^j (K;t)_q at K-eigenvalue v^{vexp}; exact in the Laurent ring
// when vexp*j and the binomial stay integral, otherwise a true fraction
QRat cartan_eval(int j, int t, long vexp);

// evaluation pairing: phi against a basis monomial of the restricted form,
// computed through the divided-power action on tensor powers of V_w
LaurentPoly pair_eval(const OqAlg& A, const OqElt& phi, const GammaMono& y);
LaurentPoly pair_eval(const OqAlg& A, const OqElt& phi, const GammaElt& y);
// phi against the PBW monomial E^s K^r F^t (ordinary powers)
LaurentPoly pair_eval_u(const OqAlg& A, const OqElt& phi, int s, int r, int t);

// expansion of K^r (r in Z) in the Cartan basis K^{e-floor(t/2)}(K;t)_q,
// t <= tmax; throws if tmax is too small
std::map<std::pair<int, int>, QRat> cartan_kpow_basis(int r, int tmax);

// ---- quantum Frobenius ------------------------------------------------------

// classical U(sl2) element: key packs (p, t, s) for e^p h^t f^s
inline uint64_t uc_key(int p, int t, int s) {
    return ((uint64_t)p * 64 + (uint64_t)t) * 64 + (uint64_t)s;
}
using UcElt = std::map<uint64_t, Rational>;
// same support as UcElt but with coefficients at eps (for composites)
using UcEltE = std::map<uint64_t, CycNum>;

UcElt frobenius_gamma(const GammaMono& y, long ell);
// image of the PBW basis element E^p K^r F^t of the small quantum group
// under u_eps -> restricted form -> U(sl2); coefficients at eps
UcEltE frobenius_of_small(int p, int r, int t, long ell);

// classical coordinate ring of SL2: same monomial encoding, commutative
using ClElt = std::map<uint64_t, Rational>;
ClElt cl_mul(const ClElt& f, const ClElt& g);
// pairing of a classical function with a U(sl2) PBW element
Rational cl_pair(const ClElt& f, const UcElt& u);

// dual Frobenius on a classical generator/monomial, solved at order ell from
// the orthogonality <Fr*(f), x> = <f, Fr(x)> over the truncated restricted
// form. Returns the element of the truncated coordinate ring at eps.
OqEltE frobenius_dual(const OqAlg& A, const ClElt& f, long ell);

// ---- projection onto the small-quantum-group dual --------------------------

// pi(phi) = restriction of evaluation to the PBW basis E^s K^r F^t, returned
// in dual-basis coordinates of the FinHopf produced by build_small_qg
SV pi_project(const OqAlg& A, const OqEltE& phi, long ell);
SV pi_project(const OqAlg& A, const OqElt& phi, long ell);

// ---- co-R-matrix and the genus-zero one-puncture product -------------------

// R(phi (x) psi) = (phi (x) psi)(R), with R = Theta * Rhat on the tensor
// square of the relevant tensor powers of V_w
LaurentPoly coR(const OqAlg& A, const OqElt& phi, const OqElt& psi);

// braided (transmuted) product on the truncated coordinate ring:
// phi . psi = sum R(psi_1 (x) S(phi_3)) R(psi_3 (x) phi_2) phi_1 * psi_2
OqElt l01_mul(const OqAlg& A, const OqElt& phi, const OqElt& psi);

// ---- quantum traces and coadjoint invariance --------------------------------

// pivotal trace of the simple module of highest weight lambda*w, as an
// element of the truncated coordinate ring (quantum trace)
OqElt qtrace(const OqAlg& A, int lambda);

// coadjoint invariance of a functional, checked per degree block as the
// matrix identity sum rep(S(h_2)) A rep(h_1) = eps(h) A for h = E, F, K
bool coad_invariant(const OqAlg& A, const OqElt& phi);

// ---- quantum Killing form and Phi_{0,1} -------------------------------------

// element of the quantum group written in the basis
// S(((q-q^{-1})F)^s) K_{m w} ((q-q^{-1})E)^t used by the integral Killing form
inline uint64_t uk_key(int s, long m, int t) {
    return (((uint64_t)s * 4096 + (uint64_t)(m + 2048)) * 64 + (uint64_t)t);
}
inline void uk_dec(uint64_t k, int& s, long& m, int& t) {
    t = (int)(k % 64);
    m = (long)((k / 64) % 4096) - 2048;
    s = (int)(k / (64 * 4096));
}
using UKElt = std::map<uint64_t, QRat>;

// Phi_{0,1}(phi) = (phi (x) id)(R R^{fl}) expanded in the Killing basis
UKElt phi01_u(const OqAlg& A, const OqElt& phi);

// quantum Killing form of a Killing-basis element against a basis monomial
// of the restricted form
QRat killing_pair(int s, long m, int t, const GammaMono& y);
QRat killing_pair(const UKElt& x, const GammaMono& y);

// Harish-Chandra projection: keeps the Cartan part K_{m w} with the shift
// q^{-(rho, m w)}; result maps m -> coefficient
std::map<long, QRat> p_rho(const UKElt& x);

// ---- report-producing suites -------------------------------------------------

// Z0 generators (ell-th powers) central at eps up to the cap, with a generic
// negative control
CheckReport z0_central_check(const OqAlg& A, long ell);
// co-R-matrix degenerates to counits against Z0 generators at eps, agrees
// with the R-matrix of the small quantum group through pi on generator
// pairs, and the braided product collapses to the plain product on Z0
CheckReport cormatrix_trivial_on_z0(const OqAlg& A, SmallQG& Q);
// P_rho(Phi_{0,1}(qTr_lambda)) = sum of K_{2 mu} over the weights of V_lambda,
// plus the fusion rule qTr_1^2 = qTr_2 + qTr_0 when lambda == 1
CheckReport harish_chandra_check(const OqAlg& A, int lambda);
// (Phi_{0,1}(alpha) | x) = <alpha, x> on all bidegree-bounded pairs, at
// generic q and at eps; Gram-rank nondegeneracy per bidegree block;
// orthogonality of the ell-th-power central part against ker(Fr)
CheckReport killing_phi01_check(const OqAlg& A, long ell, int bideg_cap);
// truncated exact sequence at (g,n) = (0,1): pi is a surjective algebra
// morphism with image of dimension ell^3, and its kernel on the degree
// filtration equals the ideal generated by the augmentation part of the
// dual-Frobenius image
CheckReport exact_sequence_check(const OqAlg& A, SmallQG& Q, int cap);

// ---- classical moment map ----------------------------------------------------

using Mat2 = std::array<std::array<Rational, 2>, 2>;
// evaluates f at (prod_i B_i A_i^{-1} B_i^{-1} A_i)(prod_j M_j); the matrices
// are listed as B_1, A_1, ..., B_g, A_g, M_1, ..., M_n and must have
// determinant 1
Rational classical_mm(const ClElt& f, const std::vector<Mat2>& mats, int g, int n);

} // namespace qga
