#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "qga/hopf.hpp"

namespace qga {

// ---------------------------------------------------------------------------
// Graph algebra of a ribbon quasitriangular Hopf algebra H on the surface of
// genus g with n punctures (and one boundary circle). The underlying space is
// (H*)^{(x) (2g+n)}; tensor slots are labelled b_1 a_1 ... b_g a_g m_1 ... m_n
// in this order. Elements are sparse vectors whose keys are base-dim(H) digit
// strings, most significant digit = slot 0 (= b_1).
//
// The product is generated by four rules: ordered monomials, a fusion
// relation on each slot, an exchange relation between the two slots of a
// handle, and an exchange relation between slots of different index. All
// exchange/fusion data are precomputed as tables of the pairwise operations
// on dual basis vectors.
// ---------------------------------------------------------------------------

using GraphElt = SV;

struct GraphAlgebra {
    FinHopf H;     // the (ribbon, quasitriangular) Hopf algebra
    RMat R;        // its R-matrix data
    FinHopf dual;  // H* with its usual Hopf structure
    SV ribbon;     // ribbon element v of H
    SV drinfeld;   // Drinfeld element u = sum S(R_(2))R_(1)
    int g = 0;     // genus
    int punc = 0;  // number of punctures
    int k = 0;     // number of tensor slots, 2g + punc
    int n = 0;     // dim H

    // Pairwise product tables on dual basis vectors (n^2 columns each).
    //
    //   fus[i*n+j]       : the braided ("transmuted") product e^i . e^j on a
    //                      single slot; keys < n.
    //   exch_handle[i*n+j]: normalization of (slot a_m: e^i)(slot b_m: e^j),
    //                      both slots on the same handle m; keys p*n+q
    //                      meaning (slot b_m: e^p)(slot a_m: e^q).
    //   exch_far[i*n+j]  : normalization of (slot t: e^i)(slot s: e^j) with
    //                      ind(t) > ind(s); keys p*n+q meaning
    //                      (slot s: e^p)(slot t: e^q).
    std::vector<SV> fus;
    std::vector<SV> exch_handle;
    std::vector<SV> exch_far;

    // antipode of the one-slot braided dual algebra, as columns on the dual
    // basis: sl_antipode[j] = S_L(e^j)
    std::vector<SV> sl_antipode;

    // matrix of phi -> (phi (x) id)(R R^fl) and its inverse (H factorizable)
    CycMat phi01;
    CycMat phi01_inv;

    // lazily built columns (not thread-safe during first use):
    // images of the two one-handle embeddings under the map to the Heisenberg
    // double, and columns of the moment-map precursor d_{1,0}
    mutable std::vector<SV> phi10_b_cols, phi10_a_cols;
    mutable std::vector<SV> d10_cols;
    mutable std::vector<bool> d10_done;
    mutable SV ribbon_sq;                 // v^2, built on first use
    mutable std::vector<SV> d10_X, d10_Y; // staging tables for d_{1,0}
    mutable std::map<uint64_t, SV> d10_P; // cached X[m] * Y[m'] products
    mutable std::shared_ptr<struct FastGraphTables> fastg; // int64 product lane

    // slot metadata
    int slot_index(int pos) const { return pos < 2 * g ? pos / 2 : g + (pos - 2 * g); }
    bool slot_is_a(int pos) const { return pos < 2 * g && (pos % 2 == 1); }

    SV unit_one_slot() const;        // the counit of H as a dual vector
    GraphElt unit() const;           // unit of the graph algebra
    GraphElt embed(int pos, const SV& phi) const; // i_s: one slot, counit elsewhere
    SV extract(const GraphElt& x, int pos) const; // counit on all other slots

    // apply phi01 / its inverse to dual coordinates resp. H coordinates
    SV phi01_apply(const SV& phi) const;
    SV phi01_invert(const SV& h) const;
};

// Builds the algebra; verifies the ribbon structure of (H, R) and throws if
// it fails or if H is not factorizable (phi01 not invertible).
GraphAlgebra make_graph_algebra(const FinHopf& H, const RMat& R, int g, int n_punc);
// same algebra data on another surface, reusing the precomputed tables
GraphAlgebra make_graph_algebra(const GraphAlgebra& proto, int g, int n_punc);

// product and diagonal coadjoint action
GraphElt graph_mul(const GraphAlgebra& A, const GraphElt& x, const GraphElt& y);
GraphElt coad_graph(const GraphAlgebra& A, const SV& h, const GraphElt& x);

// Exact basis of the coadjoint-invariant subalgebra {x : coad(h)(x) = eps(h) x}.
// The system is solved over the listed algebra generators of H (invariance
// under generators implies invariance under all of H, coad being a right
// action and every basis element a product of generators); a random basis
// sample of H is re-checked on the result.
std::vector<GraphElt> graph_invariants(const GraphAlgebra& A, const std::vector<int>& gens);

// ---------------------------------------------------------------------------
// Heisenberg double H* # H: elements are sparse vectors with keys
// phi_idx * n + a_idx; product (phi (x) a)(psi (x) b) =
// sum phi * (a_(1) |> psi) (x) a_(2) b.
// ---------------------------------------------------------------------------
struct Heisenberg {
    FinHopf H;
    FinHopf dual;
    int n = 0;
    std::vector<SV> lcoreg; // [a*n + phi] = e_a |> e^phi, precomputed
};

Heisenberg make_heisenberg(const FinHopf& H);

SV heis_unit(const Heisenberg& W);
SV heis_mul(const Heisenberg& W, const SV& x, const SV& y);
// the faithful representation rho(phi a)(psi) = phi * (a |> psi)
SV heis_rep(const Heisenberg& W, const SV& w, const SV& psi);
// embeddings of H* and H
SV heis_from_dual(const Heisenberg& W, const SV& phi);
SV heis_from_alg(const Heisenberg& W, const SV& a);

// ---------------------------------------------------------------------------
// Morphisms into the Heisenberg double and the quantum moment map.
// ---------------------------------------------------------------------------

// Phi_{1,0}: the handle algebra L_{1,0} -> H* # H, determined by
//   i_a(phi) |-> (phi (x) id)(R R^fl)
//   i_b(phi) |-> sum Phi^+(phi_(1)) phi_(2) Phi^-(S(phi_(3)))
// A must have (g, punc) = (1, 0).
SV phi10_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x);

// hat element of h in H: hat(h) = sum phi_[1] (x) S^{-1}(phi01(phi_[2]))
// where phi = phi01^{-1}(h) and phi -> sum phi_[1] (x) phi_[2] is the
// coaction dual to coad. Satisfies rho(hat(h))(psi) = psi <| S^{-1}(h).
SV hat_elt(const GraphAlgebra& A, const Heisenberg& W, const SV& h);
// moment map of the Heisenberg double: h |-> sum hat(h_(1)) h_(2)
SV dhat10(const GraphAlgebra& A, const Heisenberg& W, const SV& h);

// quantum moment map mu_{g,n} = d_{g,n} o phi01^{-1} : H -> L_{g,n};
// satisfies mu(h) x = sum coad(S^{-1}(h_(2)))(x) mu(h_(1)).
GraphElt qmm(const GraphAlgebra& A, const SV& h);
// the underlying algebra morphism d_{g,n} : L_{0,1} -> L_{g,n}
GraphElt qmm_from_dual(const GraphAlgebra& A, const SV& phi);

// ---------------------------------------------------------------------------
// Two-sided Heisenberg double (H* # H) (x) H with the extra relation
// b~ phi a = sum (phi <| S^{-1}(b_(2))) a b~_(1), and the induced morphisms
// Phi_{g,n} : L_{g,n} -> HH^{(x)g} (x) H^{(x)n} and
// F_{g,n} = (rho~^{(x)g} (x) id^{(x)n}) o Phi_{g,n},
// rho~(phi a b~)(psi) = phi * (a |> psi <| S^{-1}(b)).
//
// Elements of HH^{(x)g} (x) H^{(x)n} are sparse vectors with mixed-radix
// keys: n^3 per HH factor (digits phi, a, b), n per H factor, first factor
// most significant. Images of F_{g,n} use radix n^2 per End(H*) factor
// (digits: row, column) and n per H factor.
// ---------------------------------------------------------------------------

SV hh_mul(const Heisenberg& W, int g, int n_punc, const SV& x, const SV& y);
SV hh_unit(const Heisenberg& W, int g, int n_punc);
// dressing morphism h -> sum h~_(1) h_(2) (x) ... (x) h_(2g+1) (x) ...
SV dressing(const Heisenberg& W, int g, int n_punc, const SV& h);

SV alekseev_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x);
SV fgn_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x);
// act(h)(phi) = sum h_(2) |> phi <| S^{-1}(h_(1)), as a matrix on H*
CycMat act_matrix(const FinHopf& H, const SV& h);
// right side of F o mu: act(h_(1)) (x) ... (x) act(h_(g)) (x) h_(g+1) (x) ...
SV act_tensor(const GraphAlgebra& A, const SV& h);

// ---------------------------------------------------------------------------
// Centers and centralizers.
// ---------------------------------------------------------------------------

// Exact basis of the center {x : x b = b x for all b} of a finite algebra
// given by its product. For small dimensions the stacked commutator system is
// eliminated exactly. For large dimensions the mod-p nullity (an upper bound
// on the exact nullity) is matched against the supplied exact central
// candidates; throws if the candidates do not reach the bound.
using MulFn = std::function<SV(const SV&, const SV&)>;
using FpVec = std::vector<std::pair<uint64_t, int64_t>>; // sorted by key
using FpMulFn = std::function<FpVec(const FpVec&, const FpVec&)>;
std::vector<SV> algebra_center(uint64_t dim, unsigned long ell, const MulFn& mul,
                               const std::vector<SV>& exact_candidates = {},
                               uint64_t exact_dim_limit = 64,
                               const FpMulFn& fp_mul_fn = nullptr, int64_t fp_p = 0);

// Certifies that the coadjoint invariants coincide with the centralizer of
// the moment-map image: the exact invariant basis is checked to commute with
// mu(e_m) for the generators m of H, and the mod-p centralizer nullity is
// matched against the exact invariant dimension.
CheckReport centralizer_check(const GraphAlgebra& A, const std::vector<int>& gens);

// ---------------------------------------------------------------------------
// Mod-p image of the graph algebra product (for rank/nullity certificates).
// ---------------------------------------------------------------------------
struct FpGraph {
    int64_t p = 0;
    int n = 0, g = 0, punc = 0, k = 0;
    std::vector<std::vector<std::pair<uint32_t, int64_t>>> fus, exch_handle, exch_far;
    int slot_index(int pos) const { return pos < 2 * g ? pos / 2 : g + (pos - 2 * g); }
};
FpGraph fp_graph(const GraphAlgebra& A, int64_t p);
FpVec fp_reduce(const SV& x, unsigned long ell, int64_t p);
FpVec fp_graph_mul(const FpGraph& G, const FpVec& x, const FpVec& y);

} // namespace qga
