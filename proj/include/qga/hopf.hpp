#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qga/cyclotomic.hpp"

namespace qga {

// Sparse vector with integer keys; used for elements of H, H (x) H, ...
// with strides n^k. Invariant: no zero values stored.
using SV = std::map<uint64_t, CycNum>;

inline void sv_add(SV& a, uint64_t k, const CycNum& c) {
    if (c.is_zero()) return;
    auto it = a.find(k);
    if (it == a.end()) {
        a.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) a.erase(it);
    }
}
inline void sv_axpy(SV& a, const CycNum& s, const SV& b) {
    if (s.is_zero()) return;
    for (const auto& [k, c] : b) sv_add(a, k, s * c);
}
inline SV sv_scale(const SV& a, const CycNum& s) {
    SV r;
    sv_axpy(r, s, a);
    return r;
}
inline SV sv_sub(const SV& a, const SV& b) {
    SV r = a;
    for (const auto& [k, c] : b) sv_add(r, k, -c);
    return r;
}
inline bool sv_eq(const SV& a, const SV& b) { return a == b; }

// report from an axiom verification
struct CheckReport {
    struct Item {
        std::string name;
        bool pass;
        std::string witness; // empty if pass
    };
    std::vector<Item> items;
    bool all_pass() const {
        for (const auto& i : items)
            if (!i.pass) return false;
        return true;
    }
    void add(const std::string& name, bool pass, const std::string& witness = "") {
        items.push_back({name, pass, pass ? "" : witness});
    }
};

// Finite-dimensional Hopf algebra given by structure-constant tensors over
// Q(zeta_ell). Nothing is assumed about the tensors; verify_hopf checks the
// axioms and reports failures with witnesses.
struct FinHopf {
    int n = 0;               // dimension
    unsigned long ell = 3;   // cyclotomic order of the scalar field
    std::vector<std::string> labels;
    std::vector<SV> mult;    // mult[i*n+j] = e_i * e_j, keys < n
    SV unit;                 // coordinates of 1_H
    std::vector<SV> comult;  // comult[i] = Delta(e_i), keys a*n+b
    std::vector<CycNum> counit;
    std::vector<SV> antipode;           // antipode[i] = S(e_i)
    mutable std::vector<SV> antipode_inv; // computed on demand

    const SV& product(int i, int j) const { return mult[(size_t)i * n + j]; }

    SV mul(const SV& a, const SV& b) const {
        SV r;
        for (const auto& [i, ca] : a)
            for (const auto& [j, cb] : b) sv_axpy(r, ca * cb, product((int)i, (int)j));
        return r;
    }

    // product in H^{(x) k}, componentwise
    SV mul_tensor(const SV& a, const SV& b, int k) const {
        SV r;
        std::vector<uint64_t> ai(k), bi(k);
        for (const auto& [ka, ca] : a) {
            uint64_t t = ka;
            for (int s = k - 1; s >= 0; --s) {
                ai[s] = t % n;
                t /= n;
            }
            for (const auto& [kb, cb] : b) {
                t = kb;
                for (int s = k - 1; s >= 0; --s) {
                    bi[s] = t % n;
                    t /= n;
                }
                // multiply slotwise; expand the product supports
                SV acc;
                acc[0] = ca * cb; // key built incrementally
                for (int s = 0; s < k; ++s) {
                    SV nxt;
                    const SV& p = product((int)ai[s], (int)bi[s]);
                    for (const auto& [kk, cc] : acc)
                        for (const auto& [m, cm] : p) sv_add(nxt, kk * n + m, cc * cm);
                    acc.swap(nxt);
                    if (acc.empty()) break;
                }
                for (const auto& [kk, cc] : acc) sv_add(r, kk, cc);
            }
        }
        return r;
    }

    SV delta(const SV& a) const {
        SV r;
        for (const auto& [i, c] : a) sv_axpy(r, c, comult[i]);
        return r;
    }

    // iterated coproduct Delta^{(k)} : H -> H^{(x) k}
    SV delta_iter(const SV& a, int k) const {
        if (k == 1) return a;
        SV cur = delta(a); // in H^{(x)2}
        for (int j = 3; j <= k; ++j) {
            // apply Delta to the last leg: H^{(x)(j-1)} -> H^{(x)j}
            SV nxt;
            for (const auto& [key, c] : cur) {
                uint64_t last = key % n, rest = key / n;
                for (const auto& [ab, cc] : comult[last])
                    sv_add(nxt, rest * n * n + ab, c * cc);
            }
            cur.swap(nxt);
        }
        return cur;
    }

    CycNum eps(const SV& a) const {
        CycNum r = CycNum::zero(ell);
        for (const auto& [i, c] : a) r += counit[i] * c;
        return r;
    }

    SV apply_S(const SV& a) const {
        SV r;
        for (const auto& [i, c] : a) sv_axpy(r, c, antipode[i]);
        return r;
    }

    void ensure_antipode_inv() const;
    SV apply_Sinv(const SV& a) const {
        ensure_antipode_inv();
        SV r;
        for (const auto& [i, c] : a) sv_axpy(r, c, antipode_inv[i]);
        return r;
    }

    SV basis_elt(int i) const {
        SV r;
        r[i] = CycNum::one(ell);
        return r;
    }

    bool is_grouplike(int i) const {
        SV d = comult[i];
        SV gg;
        gg[(uint64_t)i * n + i] = CycNum::one(ell);
        return d == gg && counit[i] == CycNum::one(ell);
    }
    std::vector<int> grouplike_basis_elements() const {
        std::vector<int> r;
        for (int i = 0; i < n; ++i)
            if (is_grouplike(i)) r.push_back(i);
        return r;
    }
};

// ---- exact dense linear algebra over Q(zeta) -------------------------------

using CycMat = std::vector<std::vector<CycNum>>;

// Gaussian elimination; returns rank. If kernel != nullptr, a basis of the
// right kernel (vectors x with M x = 0) is appended to it.
long cyc_rank(CycMat M, unsigned long ell, std::vector<std::vector<CycNum>>* kernel = nullptr);

// inverse of a square matrix; throws if singular
CycMat cyc_inverse(const CycMat& M, unsigned long ell);

// solve M x = b; throws if no unique solution
std::vector<CycNum> cyc_solve(const CycMat& M, const std::vector<CycNum>& b, unsigned long ell);

// ---- Hopf-level operations -------------------------------------------------

FinHopf dual_hopf(const FinHopf& H);

// coregular actions of H on H^*: (h |> phi)(x) = phi(xh), (phi <| h)(x) = phi(hx).
// phi is given in dual coordinates (coefficients on the dual basis e^i).
SV coreg_left(const FinHopf& H, const SV& h, const SV& phi);  // h |> phi
SV coreg_right(const FinHopf& H, const SV& phi, const SV& h); // phi <| h

// right coadjoint action coad^r(h)(phi) = sum S(h_(2)) |> phi <| h_(1)
SV coad(const FinHopf& H, const SV& h, const SV& phi);

// coaction computed inside the given algebra A (typically the dual of H):
// delta(x) = sum x_(1) S(x_(3)) (x) x_(2), keys a*n+b.
SV coact_dual(const FinHopf& A, const SV& phi);

CheckReport verify_hopf(const FinHopf& H);

// R-matrix stored as a sparse element of H (x) H (keys i*n+j)
struct RMat {
    SV R;
    SV Rinv;    // candidate (S (x) id)(R); verified by verify_quasitriangular
    SV Rfl;     // flip of R
    SV Rflinv;  // flip of Rinv
};

RMat make_rmat(const FinHopf& H, const SV& R);

CheckReport verify_quasitriangular(const FinHopf& H, const RMat& R);

// Phi^+(phi) = (phi (x) id)(R), Phi^-(phi) = (id (x) phi)(R^{-1});
// phi in dual coordinates, result in H.
SV phi_plus(const FinHopf& H, const RMat& R, const SV& phi);
SV phi_minus(const FinHopf& H, const RMat& R, const SV& phi);

// Phi_{0,1}(phi) = (phi (x) id)(R R^{fl}); returns the n x n matrix with
// columns Phi_{0,1}(e^i), plus convenience appliers.
CycMat phi01_matrix(const FinHopf& H, const RMat& R);
long phi01_rank(const FinHopf& H, const RMat& R);
bool factorizable(const FinHopf& H, const RMat& R);

// ribbon data: Drinfeld element u = sum S(R_(2)) R_(1), pivot search among
// grouplike basis elements, ribbon v = u * pivot^{-1}, coribbon form
// v_form(phi) = phi(v). All axioms verified, reported in CheckReport.
struct RibbonData {
    SV u;       // Drinfeld element
    SV v;       // ribbon element
    int pivot = -1; // index of the grouplike pivot basis element
    CheckReport report;
};

RibbonData ribbon_data(const FinHopf& H, const RMat& R);

// ---- exact fast lane -------------------------------------------------------
// Structure constants of the algebras in this project lie in (1/d) Z[zeta]
// for a small common denominator d. Rescaled to Z[zeta] with int64
// coordinates, tensor identities can be checked with machine arithmetic;
// every operation asserts |coeff| < 2^44 so overflow is excluded and the
// computation is a proof. Falls back (throws) if the denominators or the
// intermediate values do not fit.
struct FastScal {
    std::vector<int64_t> c; // length phi(ell)
};

struct FastHopf {
    int n;
    unsigned long ell, phi;
    int64_t den_mult, den_comult, den_antipode, den_unit, den_counit;
    std::vector<std::vector<std::pair<uint32_t, FastScal>>> mult; // scaled by den_mult
    std::vector<std::pair<uint32_t, FastScal>> unit;
    std::vector<std::vector<std::pair<uint64_t, FastScal>>> comult;
    std::vector<FastScal> counit;
    std::vector<std::vector<std::pair<uint32_t, FastScal>>> antipode;
    std::vector<std::vector<int64_t>> xpow_red; // zeta^k reduction rows, k in [phi, 2phi)
};

FastHopf make_fast(const FinHopf& H);

// sparse vector in H^{(x)k} over the fast lane; represents (1/den) sum c_key e_key
struct FastSV {
    int64_t den = 1;
    std::unordered_map<uint64_t, FastScal> v;
};

FastSV fast_from_sv(const FastHopf& F, const SV& a);
// componentwise product in H^{(x)k}
FastSV fast_mul_tensor(const FastHopf& F, const FastSV& a, const FastSV& b, int k);
// exact equality of the represented vectors (cross-scaled by the denominators)
bool fast_eq(const FastHopf& F, const FastSV& a, const FastSV& b);
// scalar product in the fast lane (reduced on the zeta power basis)
FastScal fast_scal_mul(const FastHopf& F, const FastScal& a, const FastScal& b);
// exact rational reconstruction of a fast-lane vector
SV sv_from_fast(const FastHopf& F, const FastSV& a);

// associativity / coassociativity / bialgebra checked exhaustively in the
// fast lane; returns first failing witness or empty string
std::string fast_check_assoc(const FastHopf& F);
std::string fast_check_bialg(const FastHopf& F);

} // namespace qga
