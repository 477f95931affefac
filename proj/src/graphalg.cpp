#include "qga/graphalg.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "qga/modp.hpp"
#include "qga/rational.hpp"

namespace qga {

namespace {

uint64_t ipow(uint64_t b, int e) {
    uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void decode(uint64_t key, int n, int k, std::vector<int>& d) {
    d.resize(k);
    for (int s = k - 1; s >= 0; --s) {
        d[s] = (int)(key % (uint64_t)n);
        key /= (uint64_t)n;
    }
}

// acc (x) part, the new factor least significant with the given radix
SV tensor_append(const SV& acc, const SV& part, uint64_t radix) {
    SV r;
    for (const auto& [ak, ac] : acc)
        for (const auto& [pk, pc] : part) sv_add(r, ak * radix + pk, ac * pc);
    return r;
}

// ---------------------------------------------------------------------------
// Pairwise step operators on (H*)^{(x)2}. Keys are p*n+q where p indexes the
// factor headed for the lower slot (psi) and q the factor staying at the
// higher slot (phi). Each step is a sum over the terms of the R-matrix
// (resp. its inverse for none of them -- all four product rules only use R)
// of a left coregular twist on one factor and a right coregular twist on the
// other:
//   A: (psi <| r1) (x) (S(r2) |> phi)
//   B: (psi <| r1) (x) (phi <| r2)
//   C: (S(r1) |> psi) (x) (phi <| r2)
//   D: (r1 |> psi) (x) (r2 |> phi)
//   E: (r2 |> psi) (x) (phi <| r1)
// The fusion rule is mult o D o A, the same-handle exchange is E o D o B o A
// and the distinct-index exchange is C o D o B o A.
// ---------------------------------------------------------------------------
enum class Step { A, B, C, D, E };

std::vector<SV> build_step(const FinHopf& H, const RMat& R, Step st) {
    const int n = H.n;
    const uint64_t un = (uint64_t)n;
    std::vector<SV> T((size_t)n * n);
    std::vector<SV> lv(n), rv(n);
    for (const auto& [rk, rc] : R.R) {
        const int r1 = (int)(rk / un), r2 = (int)(rk % un);
        const SV b1 = H.basis_elt(r1), b2 = H.basis_elt(r2);
        for (int p = 0; p < n; ++p) {
            const SV ep = {{(uint64_t)p, CycNum::one(H.ell)}};
            switch (st) {
                case Step::A:
                case Step::B: lv[p] = coreg_right(H, ep, b1); break;
                case Step::C: lv[p] = coreg_left(H, H.antipode[r1], ep); break;
                case Step::D: lv[p] = coreg_left(H, b1, ep); break;
                case Step::E: lv[p] = coreg_left(H, b2, ep); break;
            }
        }
        for (int q = 0; q < n; ++q) {
            const SV eq = {{(uint64_t)q, CycNum::one(H.ell)}};
            switch (st) {
                case Step::A: rv[q] = coreg_left(H, H.antipode[r2], eq); break;
                case Step::B:
                case Step::C: rv[q] = coreg_right(H, eq, b2); break;
                case Step::D: rv[q] = coreg_left(H, b2, eq); break;
                case Step::E: rv[q] = coreg_right(H, eq, b1); break;
            }
        }
        for (int p = 0; p < n; ++p) {
            if (lv[p].empty()) continue;
            for (int q = 0; q < n; ++q) {
                if (rv[q].empty()) continue;
                SV& col = T[(size_t)p * n + q];
                for (const auto& [lp, lc] : lv[p]) {
                    const CycNum s = rc * lc;
                    for (const auto& [rq, rc2] : rv[q]) sv_add(col, lp * un + rq, s * rc2);
                }
            }
        }
    }
    return T;
}

SV apply_table(const std::vector<SV>& T, const SV& v) {
    SV r;
    for (const auto& [k, c] : v) sv_axpy(r, c, T[(size_t)k]);
    return r;
}

// ---------------------------------------------------------------------------
// The core product routine. The slot layout may differ from A's own (g, punc)
// so that the one-handle product can be reused for the moment-map staging.
// ---------------------------------------------------------------------------
struct SlotCtx {
    int g, k;
    int slot_index(int pos) const { return pos < 2 * g ? pos / 2 : g + (pos - 2 * g); }
};

// x * i_{slot(ps)}(e^j) with x expanded in the monomial basis
GraphElt rmul_slot(const GraphAlgebra& A, const SlotCtx& C, const GraphElt& x, int ps, int j) {
    const int n = A.n, k = C.k;
    const uint64_t un = (uint64_t)n;
    GraphElt out;
    std::vector<int> d;
    const uint64_t above = ipow(un, k - ps);     // radix of everything from slot ps down
    const uint64_t tailpow = ipow(un, k - 1 - ps); // radix below slot ps
    for (const auto& [key, c] : x) {
        decode(key, n, k, d);
        // moving state: keys m * n^L + suffix, where m is the index of the
        // factor still moving down and suffix the digits already emitted
        // below the current position
        SV state;
        state[(uint64_t)j] = c;
        uint64_t powL = 1;
        for (int p = k - 1; p > ps && !state.empty(); --p) {
            const auto& table =
                (C.slot_index(p) == C.slot_index(ps)) ? A.exch_handle : A.exch_far;
            SV nxt;
            for (const auto& [sk, sc] : state) {
                const uint64_t m = sk / powL, suf = sk % powL;
                const SV& col = table[(size_t)d[p] * n + m];
                for (const auto& [ok, oc] : col) {
                    const uint64_t pp = ok / un, qq = ok % un;
                    sv_add(nxt, (pp * un + qq) * powL + suf, sc * oc);
                }
            }
            state.swap(nxt);
            powL *= un;
        }
        if (state.empty()) continue;
        const uint64_t prefix = key / above;
        for (const auto& [sk, sc] : state) {
            const uint64_t m = sk / powL, suf = sk % powL;
            const SV& col = A.fus[(size_t)d[ps] * n + m];
            for (const auto& [f, fc] : col)
                sv_add(out, prefix * above + f * tailpow + suf, sc * fc);
        }
    }
    return out;
}

GraphElt mul_core(const GraphAlgebra& A, const SlotCtx& C, const GraphElt& x, const GraphElt& y) {
    const int n = A.n, k = C.k;
    GraphElt r;
    std::vector<int> yd;
    for (const auto& [yk, yc] : y) {
        decode(yk, n, k, yd);
        GraphElt cur = sv_scale(x, yc);
        for (int p = 0; p < k && !cur.empty(); ++p) cur = rmul_slot(A, C, cur, p, yd[p]);
        for (const auto& [kk, cc] : cur) sv_add(r, kk, cc);
    }
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// fast (scaled int64) product lane; falls back to the exact rational path on
// overflow. Every table group is normalized to one common denominator so a
// product accumulates the same scale along every path.
// ---------------------------------------------------------------------------

struct FastGraphTables {
    FastHopf F;
    int64_t den_fus = 1, den_exch = 1;
    using FCol = std::vector<std::pair<uint64_t, FastScal>>;
    std::vector<FCol> fus, exch_handle, exch_far;
};

namespace {

constexpr int64_t kFastMax = (int64_t)1 << 44;

using BigInt = boost::multiprecision::cpp_int;

BigInt table_den(const std::vector<SV>* cols, size_t count) {
    BigInt den = 1;
    for (size_t t = 0; t < count; ++t)
        for (const auto& col : cols[t])
            for (const auto& [k, c] : col)
                for (const auto& r : c.coeffs)
                    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(r));
    return den;
}

FastScal conv_scal(const CycNum& c, const BigInt& den) {
    FastScal f;
    f.c.reserve(c.coeffs.size());
    for (const auto& r : c.coeffs) {
        const BigInt v = boost::multiprecision::numerator(r) *
                         (den / boost::multiprecision::denominator(r));
        if (v >= kFastMax || v <= -kFastMax) throw std::overflow_error("fast lane overflow");
        f.c.push_back((int64_t)v);
    }
    return f;
}

std::vector<FastGraphTables::FCol> conv_table(const std::vector<SV>& src, const BigInt& den) {
    std::vector<FastGraphTables::FCol> out(src.size());
    for (size_t i = 0; i < src.size(); ++i)
        for (const auto& [k, c] : src[i]) out[i].push_back({k, conv_scal(c, den)});
    return out;
}

const FastGraphTables& fast_tables(const GraphAlgebra& A) {
    if (A.fastg) return *A.fastg;
    auto T = std::make_shared<FastGraphTables>();
    T->F = make_fast(A.H);
    const std::vector<SV> fgroup[1] = {A.fus};
    BigInt dfus = table_den(fgroup, 1);
    const std::vector<SV> egroup[2] = {A.exch_handle, A.exch_far};
    BigInt dexch = table_den(egroup, 2);
    if (dfus >= kFastMax || dexch >= kFastMax) throw std::overflow_error("fast lane overflow");
    T->den_fus = (int64_t)dfus;
    T->den_exch = (int64_t)dexch;
    T->fus = conv_table(A.fus, dfus);
    T->exch_handle = conv_table(A.exch_handle, dexch);
    T->exch_far = conv_table(A.exch_far, dexch);
    A.fastg = T;
    return *A.fastg;
}

void fadd(size_t phi, FastScal& acc, const FastScal& d) {
    if (acc.c.empty()) acc.c.assign(phi, 0);
    for (size_t i = 0; i < phi; ++i) {
        acc.c[i] += d.c[i];
        if (acc.c[i] >= kFastMax || acc.c[i] <= -kFastMax)
            throw std::overflow_error("fast lane overflow");
    }
}

bool fs_zero(const FastScal& a) {
    for (int64_t v : a.c)
        if (v) return false;
    return true;
}

FastSV fast_mul_core(const GraphAlgebra& A, const FastGraphTables& T, const SlotCtx& C,
                     const FastSV& x, const FastSV& y) {
    const int n = A.n, k = C.k;
    const uint64_t un = (uint64_t)n;
    const size_t phi = T.F.phi;
    __int128 den = (__int128)x.den * y.den;
    for (int e = 0; e < k * (k - 1) / 2; ++e) {
        den *= T.den_exch;
        if (den >= kFastMax) throw std::overflow_error("fast lane overflow");
    }
    for (int e = 0; e < k; ++e) {
        den *= T.den_fus;
        if (den >= kFastMax) throw std::overflow_error("fast lane overflow");
    }
    FastSV res;
    res.den = (int64_t)den;
    std::vector<int> yd, xd;
    std::unordered_map<uint64_t, FastScal> cur, nxt, state, st2;
    for (const auto& [yk, yc] : y.v) {
        decode(yk, n, k, yd);
        cur.clear();
        for (const auto& [xk, xc] : x.v) {
            FastScal v = fast_scal_mul(T.F, xc, yc);
            if (!fs_zero(v)) cur.emplace(xk, std::move(v));
        }
        for (int ps = 0; ps < k && !cur.empty(); ++ps) {
            const int j0 = yd[ps];
            const uint64_t above = ipow(un, k - ps);
            const uint64_t tailpow = ipow(un, k - 1 - ps);
            nxt.clear();
            for (const auto& [key, c] : cur) {
                decode(key, n, k, xd);
                state.clear();
                state.emplace((uint64_t)j0, c);
                uint64_t powL = 1;
                for (int pp = k - 1; pp > ps && !state.empty(); --pp) {
                    const auto& table = (C.slot_index(pp) == C.slot_index(ps)) ? T.exch_handle
                                                                               : T.exch_far;
                    st2.clear();
                    for (const auto& [sk, sc] : state) {
                        const uint64_t m = sk / powL, suf = sk % powL;
                        for (const auto& [ok, oc] : table[(size_t)xd[pp] * n + m])
                            fadd(phi, st2[(ok / un * un + ok % un) * powL + suf],
                                 fast_scal_mul(T.F, sc, oc));
                    }
                    state.swap(st2);
                    powL *= un;
                }
                if (state.empty()) continue;
                const uint64_t prefix = key / above;
                for (const auto& [sk, sc] : state) {
                    const uint64_t m = sk / powL, suf = sk % powL;
                    for (const auto& [f, fc] : T.fus[(size_t)xd[ps] * n + m])
                        fadd(phi, nxt[prefix * above + f * tailpow + suf],
                             fast_scal_mul(T.F, sc, fc));
                }
            }
            cur.swap(nxt);
        }
        for (const auto& [key, c] : cur)
            if (!fs_zero(c)) fadd(phi, res.v[key], c);
    }
    for (auto it = res.v.begin(); it != res.v.end();)
        it = fs_zero(it->second) ? res.v.erase(it) : std::next(it);
    return res;
}

// fast path with exact fallback
GraphElt checked_mul(const GraphAlgebra& A, const SlotCtx& C, const GraphElt& x,
                     const GraphElt& y) {
    if (x.empty() || y.empty()) return {};
    try {
        const FastGraphTables& T = fast_tables(A);
        const FastSV fx = fast_from_sv(T.F, x), fy = fast_from_sv(T.F, y);
        return sv_from_fast(T.F, fast_mul_core(A, T, C, fx, fy));
    } catch (const std::overflow_error&) {
        return mul_core(A, C, x, y);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// GraphAlgebra methods
// ---------------------------------------------------------------------------

SV GraphAlgebra::unit_one_slot() const {
    SV r;
    for (int i = 0; i < n; ++i)
        if (!H.counit[i].is_zero()) r[(uint64_t)i] = H.counit[i];
    return r;
}

GraphElt GraphAlgebra::unit() const {
    SV one = unit_one_slot();
    SV acc;
    acc[0] = CycNum::one(H.ell);
    for (int s = 0; s < k; ++s) acc = tensor_append(acc, one, (uint64_t)n);
    return acc;
}

GraphElt GraphAlgebra::embed(int pos, const SV& phi) const {
    SV one = unit_one_slot();
    SV acc;
    acc[0] = CycNum::one(H.ell);
    for (int s = 0; s < k; ++s) acc = tensor_append(acc, s == pos ? phi : one, (uint64_t)n);
    return acc;
}

SV GraphAlgebra::extract(const GraphElt& x, int pos) const {
    // evaluate every other slot against 1_H (the counit of H*)
    SV r;
    std::vector<int> d;
    for (const auto& [key, c] : x) {
        decode(key, n, k, d);
        CycNum v = c;
        for (int s = 0; s < k && !v.is_zero(); ++s) {
            if (s == pos) continue;
            auto it = H.unit.find((uint64_t)d[s]);
            if (it == H.unit.end()) {
                v = CycNum::zero(H.ell);
                break;
            }
            v = v * it->second;
        }
        if (!v.is_zero()) sv_add(r, (uint64_t)d[pos], v);
    }
    return r;
}

SV GraphAlgebra::phi01_apply(const SV& phi) const {
    SV r;
    for (const auto& [i, c] : phi)
        for (int x = 0; x < n; ++x)
            if (!phi01[x][i].is_zero()) sv_add(r, (uint64_t)x, c * phi01[x][i]);
    return r;
}

SV GraphAlgebra::phi01_invert(const SV& h) const {
    SV r;
    for (const auto& [x, c] : h)
        for (int i = 0; i < n; ++i)
            if (!phi01_inv[i][x].is_zero()) sv_add(r, (uint64_t)i, c * phi01_inv[i][x]);
    return r;
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

GraphAlgebra make_graph_algebra(const FinHopf& H, const RMat& R, int g, int n_punc) {
    if (g < 0 || n_punc < 0 || (g == 0 && n_punc == 0))
        throw std::invalid_argument("make_graph_algebra: need g >= 0, punc >= 0, not both 0");
    GraphAlgebra A;
    A.H = H;
    A.R = R;
    A.dual = dual_hopf(H);
    A.g = g;
    A.punc = n_punc;
    A.k = 2 * g + n_punc;
    A.n = H.n;
    RibbonData rd = ribbon_data(H, R);
    if (!rd.report.all_pass())
        throw std::invalid_argument("make_graph_algebra: ribbon structure checks fail");
    A.ribbon = rd.v;
    A.drinfeld = rd.u;
    A.phi01 = phi01_matrix(H, R);
    A.phi01_inv = cyc_inverse(A.phi01, H.ell); // throws unless factorizable

    const int n = A.n;
    const uint64_t un = (uint64_t)n;
    const auto TA = build_step(H, R, Step::A);
    const auto TB = build_step(H, R, Step::B);
    const auto TC = build_step(H, R, Step::C);
    const auto TD = build_step(H, R, Step::D);
    const auto TE = build_step(H, R, Step::E);

    A.fus.resize((size_t)n * n);
    A.exch_handle.resize((size_t)n * n);
    A.exch_far.resize((size_t)n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // initial pair: psi = e^j heading down, phi = e^i staying up
            SV v;
            v[(uint64_t)j * un + i] = CycNum::one(H.ell);
            const SV va = apply_table(TA, v);
            // fusion: contract phi' * psi' in H*
            SV& f = A.fus[(size_t)i * n + j];
            for (const auto& [pk, c] : apply_table(TD, va)) {
                const int p = (int)(pk / un), q = (int)(pk % un);
                sv_axpy(f, c, A.dual.product(q, p));
            }
            const SV vd = apply_table(TD, apply_table(TB, va));
            A.exch_handle[(size_t)i * n + j] = apply_table(TE, vd);
            A.exch_far[(size_t)i * n + j] = apply_table(TC, vd);
        }

    // antipode of the one-slot braided dual: S_L(phi)(x) = phi(sum Rinv_2 w S(x) Rinv_1)
    // with w = sum R_2 S^2(R_1)
    SV w;
    for (const auto& [rk, rc] : R.R) {
        const int r1 = (int)(rk / un), r2 = (int)(rk % un);
        sv_axpy(w, rc, H.mul(H.basis_elt(r2), H.apply_S(H.antipode[r1])));
    }
    std::vector<std::pair<SV, int>> lefts; // (Rinv_2 * w, Rinv_1) per term
    for (const auto& [rk, rc] : R.Rinv) {
        const int r1 = (int)(rk / un), r2 = (int)(rk % un);
        lefts.push_back({sv_scale(H.mul(H.basis_elt(r2), w), rc), r1});
    }
    A.sl_antipode.assign(n, SV{});
    for (int x = 0; x < n; ++x) {
        SV m;
        for (const auto& [lw, r1] : lefts)
            sv_axpy(m, CycNum::one(H.ell), H.mul(H.mul(lw, H.antipode[x]), H.basis_elt(r1)));
        for (const auto& [j, c] : m) sv_add(A.sl_antipode[(size_t)j], (uint64_t)x, c);
    }

    A.d10_cols.resize(n);
    A.d10_done.assign(n, false);
    return A;
}

GraphAlgebra make_graph_algebra(const GraphAlgebra& proto, int g, int n_punc) {
    if (g < 0 || n_punc < 0 || (g == 0 && n_punc == 0))
        throw std::invalid_argument("make_graph_algebra: need g >= 0, punc >= 0, not both 0");
    GraphAlgebra A = proto; // tables, antipode, phi01, caches carry over
    A.g = g;
    A.punc = n_punc;
    A.k = 2 * g + n_punc;
    return A;
}

// ---------------------------------------------------------------------------
// product, coadjoint action, invariants
// ---------------------------------------------------------------------------

GraphElt graph_mul(const GraphAlgebra& A, const GraphElt& x, const GraphElt& y) {
    return checked_mul(A, SlotCtx{A.g, A.k}, x, y);
}

GraphElt coad_graph(const GraphAlgebra& A, const SV& h, const GraphElt& x) {
    const int n = A.n, k = A.k;
    const SV hx = A.H.delta_iter(h, k);
    GraphElt r;
    std::vector<int> hd, xd;
    std::unordered_map<uint64_t, SV> cache; // (h_digit*n + phi_digit) -> coad column
    for (const auto& [hk, hc] : hx) {
        decode(hk, n, k, hd);
        for (const auto& [xk, xc] : x) {
            decode(xk, n, k, xd);
            SV acc;
            acc[0] = hc * xc;
            for (int s = 0; s < k && !acc.empty(); ++s) {
                const uint64_t ck = (uint64_t)hd[s] * n + xd[s];
                auto it = cache.find(ck);
                if (it == cache.end()) {
                    SV ep;
                    ep[(uint64_t)xd[s]] = CycNum::one(A.H.ell);
                    it = cache.emplace(ck, coad(A.H, A.H.basis_elt(hd[s]), ep)).first;
                }
                acc = tensor_append(acc, it->second, (uint64_t)n);
            }
            for (const auto& [kk, cc] : acc) sv_add(r, kk, cc);
        }
    }
    return r;
}

std::vector<GraphElt> graph_invariants(const GraphAlgebra& A, const std::vector<int>& gens) {
    const int n = A.n, k = A.k;
    const unsigned long ell = A.H.ell;
    const uint64_t N = ipow((uint64_t)n, k);
    std::vector<uint64_t> cand(N);
    for (uint64_t b = 0; b < N; ++b) cand[b] = b;

    // generators acting diagonally on the monomial basis cut the candidate
    // set directly; the rest go into one exact stacked linear system
    std::vector<int> rest;
    for (int m : gens) {
        const SV hm = A.H.basis_elt(m);
        const CycNum epsm = A.H.counit[m];
        std::vector<CycNum> eig;
        eig.reserve(cand.size());
        bool diag = true;
        for (uint64_t b : cand) {
            GraphElt eb;
            eb[b] = CycNum::one(ell);
            SV col = coad_graph(A, hm, eb);
            if (col.size() > 1 || (col.size() == 1 && col.begin()->first != b)) {
                diag = false;
                break;
            }
            eig.push_back(col.empty() ? CycNum::zero(ell) : col.begin()->second);
        }
        if (!diag) {
            rest.push_back(m);
            continue;
        }
        std::vector<uint64_t> keep;
        for (size_t i = 0; i < cand.size(); ++i)
            if (eig[i] == epsm) keep.push_back(cand[i]);
        cand.swap(keep);
    }

    std::vector<GraphElt> inv;
    if (cand.empty()) return inv;
    if (rest.empty()) {
        for (uint64_t b : cand) {
            GraphElt eb;
            eb[b] = CycNum::one(ell);
            inv.push_back(std::move(eb));
        }
    } else {
        // rows indexed by (generator, coordinate) pairs with any support
        std::map<uint64_t, size_t> rowidx;
        std::vector<std::map<size_t, CycNum>> cols(cand.size());
        for (size_t gi = 0; gi < rest.size(); ++gi) {
            const SV hm = A.H.basis_elt(rest[gi]);
            const CycNum epsm = A.H.counit[rest[gi]];
            for (size_t ci = 0; ci < cand.size(); ++ci) {
                GraphElt eb;
                eb[cand[ci]] = CycNum::one(ell);
                SV w = coad_graph(A, hm, eb);
                sv_add(w, cand[ci], -epsm);
                for (const auto& [key, c] : w) {
                    const uint64_t rk = (uint64_t)gi * N + key;
                    auto it = rowidx.find(rk);
                    if (it == rowidx.end()) it = rowidx.emplace(rk, rowidx.size()).first;
                    cols[ci][it->second] = c;
                }
            }
        }
        CycMat M(rowidx.size(), std::vector<CycNum>(cand.size(), CycNum::zero(ell)));
        for (size_t ci = 0; ci < cand.size(); ++ci)
            for (const auto& [ri, c] : cols[ci]) M[ri][ci] = c;
        std::vector<std::vector<CycNum>> ker;
        cyc_rank(M, ell, &ker);
        for (const auto& kv : ker) {
            GraphElt v;
            for (size_t ci = 0; ci < cand.size(); ++ci)
                if (!kv[ci].is_zero()) v[cand[ci]] = kv[ci];
            inv.push_back(std::move(v));
        }
    }

    // re-check invariance against a random sample of the full basis of H
    std::mt19937 rng(12345);
    for (int t = 0; t < 3; ++t) {
        const int m = (int)(rng() % (uint32_t)n);
        const SV hm = A.H.basis_elt(m);
        const CycNum epsm = A.H.counit[m];
        for (const auto& v : inv)
            if (!(coad_graph(A, hm, v) == sv_scale(v, epsm)))
                throw std::logic_error("graph_invariants: sample re-check failed");
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Heisenberg double
// ---------------------------------------------------------------------------

Heisenberg make_heisenberg(const FinHopf& H) {
    Heisenberg W{H, dual_hopf(H), H.n, {}};
    const int n = H.n;
    W.lcoreg.resize((size_t)n * n);
    for (int a = 0; a < n; ++a) {
        const SV ea = H.basis_elt(a);
        for (int f = 0; f < n; ++f) {
            SV ef;
            ef[(uint64_t)f] = CycNum::one(H.ell);
            W.lcoreg[(size_t)a * n + f] = coreg_left(H, ea, ef);
        }
    }
    return W;
}

SV heis_from_dual(const Heisenberg& W, const SV& phi) {
    SV r;
    for (const auto& [u, uc] : W.H.unit)
        for (const auto& [f, fc] : phi) sv_add(r, f * (uint64_t)W.n + u, fc * uc);
    return r;
}

SV heis_from_alg(const Heisenberg& W, const SV& a) {
    SV r;
    for (const auto& [d, dc] : W.dual.unit)
        for (const auto& [x, xc] : a) sv_add(r, d * (uint64_t)W.n + x, dc * xc);
    return r;
}

SV heis_unit(const Heisenberg& W) { return heis_from_alg(W, W.H.unit); }

SV heis_mul(const Heisenberg& W, const SV& x, const SV& y) {
    const uint64_t n = (uint64_t)W.n;
    SV r;
    for (const auto& [xk, xc] : x) {
        const uint64_t f = xk / n, a = xk % n;
        for (const auto& [ab, dc] : W.H.comult[a]) {
            const uint64_t a1 = ab / n, a2 = ab % n;
            const CycNum s = xc * dc;
            for (const auto& [yk, yc] : y) {
                const uint64_t ps = yk / n, b = yk % n;
                const SV& lp = W.lcoreg[(size_t)(a1 * n + ps)];
                if (lp.empty()) continue;
                const SV left = W.dual.mul(W.dual.basis_elt((int)f), lp);
                const SV& right = W.H.product((int)a2, (int)b);
                const CycNum s2 = s * yc;
                for (const auto& [l, lc] : left)
                    for (const auto& [rr, rc] : right) sv_add(r, l * n + rr, s2 * lc * rc);
            }
        }
    }
    return r;
}

SV heis_rep(const Heisenberg& W, const SV& w, const SV& psi) {
    const uint64_t n = (uint64_t)W.n;
    SV r;
    for (const auto& [wk, wc] : w) {
        const uint64_t f = wk / n, a = wk % n;
        SV lp;
        for (const auto& [ps, pc] : psi) sv_axpy(lp, pc, W.lcoreg[(size_t)(a * n + ps)]);
        sv_axpy(r, wc, W.dual.mul(W.dual.basis_elt((int)f), lp));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Phi_{1,0}, hat elements, moment maps
// ---------------------------------------------------------------------------

namespace {

void ensure_phi10(const GraphAlgebra& A, const Heisenberg& W) {
    if (!A.phi10_a_cols.empty()) return;
    const int n = A.n;
    const unsigned long ell = A.H.ell;
    std::vector<SV> acols(n), bcols(n);
    for (int i = 0; i < n; ++i) {
        SV ei;
        ei[(uint64_t)i] = CycNum::one(ell);
        acols[i] = heis_from_alg(W, A.phi01_apply(ei));
        SV col;
        for (const auto& [key, c] : A.dual.delta_iter(ei, 3)) {
            const uint64_t l3 = key % (uint64_t)n, rest = key / (uint64_t)n;
            const uint64_t l2 = rest % (uint64_t)n, l1 = rest / (uint64_t)n;
            SV e1, e2;
            e1[l1] = CycNum::one(ell);
            e2[l2] = CycNum::one(ell);
            const SV hp = phi_plus(A.H, A.R, e1);
            const SV hm = phi_minus(A.H, A.R, A.dual.antipode[l3]);
            sv_axpy(col, c,
                    heis_mul(W, heis_from_alg(W, hp),
                             heis_mul(W, heis_from_dual(W, e2), heis_from_alg(W, hm))));
        }
        bcols[i] = std::move(col);
    }
    A.phi10_a_cols = std::move(acols);
    A.phi10_b_cols = std::move(bcols);
}

} // namespace

SV phi10_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x) {
    ensure_phi10(A, W);
    const uint64_t n = (uint64_t)A.n;
    SV r;
    for (const auto& [key, c] : x) {
        const uint64_t beta = key / n, alpha = key % n;
        sv_axpy(r, c, heis_mul(W, A.phi10_b_cols[(size_t)beta], A.phi10_a_cols[(size_t)alpha]));
    }
    return r;
}

SV hat_elt(const GraphAlgebra& A, const Heisenberg& W, const SV& h) {
    const uint64_t n = (uint64_t)A.n;
    const SV phi = A.phi01_invert(h);
    SV r;
    for (const auto& [ck, c] : coact_dual(A.dual, phi)) {
        const uint64_t a = ck / n, b = ck % n;
        SV eb;
        eb[b] = CycNum::one(A.H.ell);
        const SV hb = A.H.apply_Sinv(A.phi01_apply(eb));
        for (const auto& [x, xc] : hb) sv_add(r, a * n + x, c * xc);
    }
    return r;
}

SV dhat10(const GraphAlgebra& A, const Heisenberg& W, const SV& h) {
    const uint64_t n = (uint64_t)A.n;
    SV r;
    for (const auto& [dk, c] : A.H.delta(h)) {
        const uint64_t h1 = dk / n, h2 = dk % n;
        const SV t = hat_elt(A, W, A.H.basis_elt((int)h1));
        // (phi (x) a)(eps (x) h2) = phi (x) a h2
        for (const auto& [tk, tc] : t) {
            const uint64_t f = tk / n, a = tk % n;
            for (const auto& [m, mc] : A.H.product((int)a, (int)h2))
                sv_add(r, f * n + m, c * tc * mc);
        }
    }
    return r;
}

namespace {

const SV& d10_col(const GraphAlgebra& A, int i) {
    if (A.d10_done[i]) return A.d10_cols[i];
    const int n = A.n;
    const uint64_t un = (uint64_t)n;
    const unsigned long ell = A.H.ell;
    if (A.ribbon_sq.empty()) A.ribbon_sq = A.H.mul(A.ribbon, A.ribbon);
    if (A.d10_X.empty()) {
        A.d10_X.resize(n);
        A.d10_Y.resize(n);
        for (int m = 0; m < n; ++m) {
            SV em;
            em[(uint64_t)m] = CycNum::one(ell);
            SV X, Y;
            for (const auto& [key, c] : A.dual.delta(em)) {
                const uint64_t l = key / un, r = key % un;
                // X: e^l (x) S_L(e^r);  Y: S_L(e^l) (x) e^r
                for (const auto& [q, qc] : A.sl_antipode[r]) sv_add(X, l * un + q, c * qc);
                for (const auto& [q, qc] : A.sl_antipode[l]) sv_add(Y, q * un + r, c * qc);
            }
            A.d10_X[m] = std::move(X);
            A.d10_Y[m] = std::move(Y);
        }
    }
    // fold the v^2 evaluation into the first coproduct leg, then expand once
    // more and pull the cached pairwise products
    SV ei;
    ei[(uint64_t)i] = CycNum::one(ell);
    SV folded;
    for (const auto& [key, c] : A.dual.delta(ei)) {
        auto it = A.ribbon_sq.find(key / un);
        if (it != A.ribbon_sq.end()) sv_add(folded, key % un, c * it->second);
    }
    const SlotCtx handle{1, 2};
    GraphElt out;
    for (const auto& [key, c] : A.dual.delta(folded)) {
        auto it = A.d10_P.find(key);
        if (it == A.d10_P.end()) {
            const uint64_t m = key / un, mp = key % un;
            it = A.d10_P
                     .emplace(key, checked_mul(A, handle, A.d10_X[(size_t)m], A.d10_Y[(size_t)mp]))
                     .first;
        }
        sv_axpy(out, c, it->second);
    }
    A.d10_cols[i] = std::move(out);
    A.d10_done[i] = true;
    return A.d10_cols[i];
}

} // namespace

GraphElt qmm_from_dual(const GraphAlgebra& A, const SV& phi) {
    if (A.g == 0 && A.punc == 1) return phi;
    const int n = A.n;
    const int parts = A.g + A.punc;
    const uint64_t un = (uint64_t)n, un2 = un * un;
    GraphElt r;
    std::vector<int> d;
    for (const auto& [key, c] : A.dual.delta_iter(phi, parts)) {
        decode(key, n, parts, d);
        SV acc;
        acc[0] = c;
        for (int i = 0; i < parts && !acc.empty(); ++i) {
            if (i < A.g)
                acc = tensor_append(acc, d10_col(A, d[i]), un2);
            else {
                SV ed;
                ed[(uint64_t)d[i]] = CycNum::one(A.H.ell);
                acc = tensor_append(acc, ed, un);
            }
        }
        for (const auto& [kk, cc] : acc) sv_add(r, kk, cc);
    }
    return r;
}

GraphElt qmm(const GraphAlgebra& A, const SV& h) { return qmm_from_dual(A, A.phi01_invert(h)); }

// ---------------------------------------------------------------------------
// two-sided Heisenberg double and the Alekseev morphisms
// ---------------------------------------------------------------------------

namespace {

// (phi a b~)(psi c d~) as elements of H* # H (x) H~, keys < n^3
SV hh_factor_mul(const Heisenberg& W, uint64_t t1, uint64_t t2) {
    const uint64_t n = (uint64_t)W.n;
    const uint64_t f1 = t1 / (n * n), a1 = (t1 / n) % n, b1 = t1 % n;
    const uint64_t f2 = t2 / (n * n), a2 = (t2 / n) % n, b2 = t2 % n;
    SV x1;
    x1[f1 * n + a1] = CycNum::one(W.H.ell);
    W.H.ensure_antipode_inv();
    SV out;
    for (const auto& [bk, bc] : W.H.comult[b1]) {
        const uint64_t bl = bk / n, br = bk % n;
        // slide b~_(2) past the middle pair: psi <| S^{-1}(b_(2))
        SV ps2;
        ps2[f2] = CycNum::one(W.H.ell);
        ps2 = coreg_right(W.H, ps2, W.H.antipode_inv[br]);
        SV y2;
        for (const auto& [q, qc] : ps2) sv_add(y2, q * n + a2, qc);
        const SV hpart = heis_mul(W, x1, y2);
        const SV& tail = W.H.product((int)bl, (int)b2);
        for (const auto& [hk, hc] : hpart)
            for (const auto& [tk, tc] : tail) sv_add(out, hk * n + tk, bc * hc * tc);
    }
    return out;
}

} // namespace

SV hh_unit(const Heisenberg& W, int g, int n_punc) {
    const uint64_t n = (uint64_t)W.n;
    SV hh1;
    for (const auto& [hk, hc] : heis_unit(W))
        for (const auto& [u, uc] : W.H.unit) sv_add(hh1, hk * n + u, hc * uc);
    SV acc;
    acc[0] = CycNum::one(W.H.ell);
    for (int f = 0; f < g; ++f) acc = tensor_append(acc, hh1, n * n * n);
    for (int j = 0; j < n_punc; ++j) acc = tensor_append(acc, W.H.unit, n);
    return acc;
}

SV hh_mul(const Heisenberg& W, int g, int n_punc, const SV& x, const SV& y) {
    const uint64_t n = (uint64_t)W.n;
    const uint64_t n3 = n * n * n;
    SV r;
    std::map<std::pair<uint64_t, uint64_t>, SV> cache;
    for (const auto& [xk, xc] : x)
        for (const auto& [yk, yc] : y) {
            // decode both keys factor by factor, most significant first
            std::vector<uint64_t> xd(g + n_punc), yd(g + n_punc);
            uint64_t kx = xk, ky = yk;
            for (int i = g + n_punc - 1; i >= 0; --i) {
                const uint64_t rad = i < g ? n3 : n;
                xd[i] = kx % rad;
                kx /= rad;
                yd[i] = ky % rad;
                ky /= rad;
            }
            SV acc;
            acc[0] = xc * yc;
            for (int i = 0; i < g + n_punc && !acc.empty(); ++i) {
                if (i < g) {
                    auto it = cache.find({xd[i], yd[i]});
                    if (it == cache.end())
                        it = cache.emplace(std::make_pair(xd[i], yd[i]),
                                           hh_factor_mul(W, xd[i], yd[i]))
                                 .first;
                    acc = tensor_append(acc, it->second, n3);
                } else {
                    acc = tensor_append(acc, W.H.product((int)xd[i], (int)yd[i]), n);
                }
            }
            for (const auto& [kk, cc] : acc) sv_add(r, kk, cc);
        }
    return r;
}

SV dressing(const Heisenberg& W, int g, int n_punc, const SV& h) {
    const uint64_t n = (uint64_t)W.n;
    const int legs = 2 * g + n_punc;
    SV r;
    std::vector<int> d;
    for (const auto& [key, c] : W.H.delta_iter(h, legs)) {
        decode(key, (int)n, legs, d);
        SV acc;
        acc[0] = c;
        for (int f = 0; f < g; ++f) {
            // factor = (eps (x) h_(2f+2)) (x) h~_(2f+1): digits (phi, a, b)
            SV part;
            for (const auto& [du, dc] : W.dual.unit)
                sv_add(part, (du * n + (uint64_t)d[2 * f + 1]) * n + (uint64_t)d[2 * f], dc);
            acc = tensor_append(acc, part, n * n * n);
        }
        for (int j = 0; j < n_punc; ++j) {
            SV part;
            part[(uint64_t)d[2 * g + j]] = CycNum::one(W.H.ell);
            acc = tensor_append(acc, part, n);
        }
        for (const auto& [kk, cc] : acc) sv_add(r, kk, cc);
    }
    return r;
}

namespace {

struct AlekCtx {
    const GraphAlgebra& A;
    const Heisenberg& W;
    std::map<std::tuple<int, int, uint64_t>, SV> memo; // per (g, punc, monomial)
};

SV alek_rec(AlekCtx& C, int g, int punc, const SV& x);

SV alek_monomial(AlekCtx& C, int g, int punc, uint64_t key) {
    auto it = C.memo.find({g, punc, key});
    if (it != C.memo.end()) return it->second;
    SV e;
    e[key] = CycNum::one(C.A.H.ell);
    SV r = alek_rec(C, g, punc, e);
    C.memo.emplace(std::make_tuple(g, punc, key), r);
    return r;
}

SV alek_rec(AlekCtx& C, int g, int punc, const SV& x) {
    const GraphAlgebra& A = C.A;
    const Heisenberg& W = C.W;
    const uint64_t n = (uint64_t)A.n;
    if (g == 0 && punc == 1) return A.phi01_apply(x);
    if (g == 1 && punc == 0) {
        const SV h = phi10_apply(A, W, x);
        SV r;
        for (const auto& [hk, c] : h)
            for (const auto& [u, uc] : A.H.unit) sv_add(r, hk * n + u, c * uc);
        return r;
    }
    const int m = g >= 1 ? 2 : 1;          // slots in the leading block
    const int gr = g >= 1 ? g - 1 : 0;     // remaining genus
    const int pr = g >= 1 ? punc : punc - 1;
    const int krest = 2 * gr + pr;
    const uint64_t block_rad = ipow(n, m);
    const uint64_t rest_rad = ipow(n, krest);
    const uint64_t head_rad = g >= 1 ? n * n * n : n;
    const uint64_t tail_rad = ipow(n, 3 * gr) * ipow(n, pr);
    SV res;
    std::map<uint64_t, SV> co_cache;
    for (const auto& [key, c] : x) {
        const uint64_t B = key / rest_rad, Wk = key % rest_rad;
        auto cit = co_cache.find(B);
        if (cit == co_cache.end()) {
            // coaction of the leading block: keys f * block_rad + B'
            SV co;
            if (m == 1) {
                SV eb;
                eb[B] = CycNum::one(A.H.ell);
                co = coact_dual(A.dual, eb);
            } else {
                const uint64_t beta = B / n, alpha = B % n;
                SV ebt, eal;
                ebt[beta] = CycNum::one(A.H.ell);
                eal[alpha] = CycNum::one(A.H.ell);
                const SV cb = coact_dual(A.dual, ebt);
                const SV ca = coact_dual(A.dual, eal);
                for (const auto& [bk, bc] : cb) {
                    const uint64_t fb = bk / n, b2 = bk % n;
                    for (const auto& [ak, ac] : ca) {
                        const uint64_t fa = ak / n, a2 = ak % n;
                        // leg in H* is beta_[1] * alpha_[1]: the b-slot comes
                        // first in the block monomial, so it pairs with h_(1)
                        const SV& left = A.dual.product((int)fb, (int)fa);
                        for (const auto& [l, lc] : left)
                            sv_add(co, l * block_rad + b2 * n + a2, bc * ac * lc);
                    }
                }
            }
            cit = co_cache.emplace(B, std::move(co)).first;
        }
        const SV restI = alek_monomial(C, gr, pr, Wk);
        for (const auto& [ck, cc] : cit->second) {
            const uint64_t f = ck / block_rad, Bp = ck % block_rad;
            const SV head = g >= 1 ? alek_monomial(C, 1, 0, Bp) : [&] {
                SV eb;
                eb[Bp] = CycNum::one(A.H.ell);
                return A.phi01_apply(eb);
            }();
            SV ef;
            ef[f] = CycNum::one(A.H.ell);
            const SV dr = dressing(W, gr, pr, phi_plus(A.H, A.R, ef));
            const SV tail = hh_mul(W, gr, pr, dr, restI);
            const CycNum s = c * cc;
            for (const auto& [hk, hc] : head)
                for (const auto& [tk, tc] : tail) sv_add(res, hk * tail_rad + tk, s * hc * tc);
        }
    }
    (void)head_rad;
    return res;
}

// rho~(phi a b~) as an operator on H*, keys row * n + col
SV rho_tilde_op(const Heisenberg& W, uint64_t t) {
    const uint64_t n = (uint64_t)W.n;
    const uint64_t f = t / (n * n), a = (t / n) % n, b = t % n;
    W.H.ensure_antipode_inv();
    const SV& sb = W.H.antipode_inv[b];
    SV op;
    for (uint64_t col = 0; col < n; ++col) {
        SV ec;
        ec[col] = CycNum::one(W.H.ell);
        const SV inner = coreg_right(W.H, ec, sb);
        SV mid;
        for (const auto& [q, qc] : inner) sv_axpy(mid, qc, W.lcoreg[(size_t)(a * n + q)]);
        const SV out = W.dual.mul(W.dual.basis_elt((int)f), mid);
        for (const auto& [row, rc] : out) sv_add(op, row * n + col, rc);
    }
    return op;
}

} // namespace

SV alekseev_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x) {
    AlekCtx ctx{A, W, {}};
    return alek_rec(ctx, A.g, A.punc, x);
}

SV fgn_apply(const GraphAlgebra& A, const Heisenberg& W, const GraphElt& x) {
    const SV al = alekseev_apply(A, W, x);
    const uint64_t n = (uint64_t)A.n;
    const uint64_t n3 = n * n * n;
    const int parts = A.g + A.punc;
    SV res;
    std::unordered_map<uint64_t, SV> opcache;
    for (const auto& [key, c] : al) {
        std::vector<uint64_t> d(parts);
        uint64_t k = key;
        for (int i = parts - 1; i >= 0; --i) {
            const uint64_t rad = i < A.g ? n3 : n;
            d[i] = k % rad;
            k /= rad;
        }
        SV acc;
        acc[0] = c;
        for (int i = 0; i < parts && !acc.empty(); ++i) {
            if (i < A.g) {
                auto it = opcache.find(d[i]);
                if (it == opcache.end()) it = opcache.emplace(d[i], rho_tilde_op(W, d[i])).first;
                acc = tensor_append(acc, it->second, n * n);
            } else {
                SV part;
                part[d[i]] = CycNum::one(A.H.ell);
                acc = tensor_append(acc, part, n);
            }
        }
        for (const auto& [kk, cc] : acc) sv_add(res, kk, cc);
    }
    return res;
}

CycMat act_matrix(const FinHopf& H, const SV& h) {
    const int n = H.n;
    const uint64_t un = (uint64_t)n;
    CycMat M((size_t)n, std::vector<CycNum>(n, CycNum::zero(H.ell)));
    H.ensure_antipode_inv();
    for (const auto& [dk, c] : H.delta(h)) {
        const uint64_t h1 = dk / un, h2 = dk % un;
        for (int col = 0; col < n; ++col) {
            SV ec;
            ec[(uint64_t)col] = CycNum::one(H.ell);
            const SV v = coreg_right(H, coreg_left(H, H.basis_elt((int)h2), ec), H.antipode_inv[h1]);
            for (const auto& [row, rc] : v) M[(size_t)row][col] += c * rc;
        }
    }
    return M;
}

SV act_tensor(const GraphAlgebra& A, const SV& h) {
    const int n = A.n;
    const uint64_t un = (uint64_t)n;
    const int parts = A.g + A.punc;
    SV res;
    std::vector<int> d;
    std::unordered_map<int, SV> mcache;
    for (const auto& [key, c] : A.H.delta_iter(h, parts)) {
        decode(key, n, parts, d);
        SV acc;
        acc[0] = c;
        for (int i = 0; i < parts && !acc.empty(); ++i) {
            if (i < A.g) {
                auto it = mcache.find(d[i]);
                if (it == mcache.end()) {
                    const CycMat M = act_matrix(A.H, A.H.basis_elt(d[i]));
                    SV flat;
                    for (int r = 0; r < n; ++r)
                        for (int cc2 = 0; cc2 < n; ++cc2)
                            if (!M[r][cc2].is_zero()) flat[(uint64_t)r * un + cc2] = M[r][cc2];
                    it = mcache.emplace(d[i], std::move(flat)).first;
                }
                acc = tensor_append(acc, it->second, un * un);
            } else {
                SV part;
                part[(uint64_t)d[i]] = CycNum::one(A.H.ell);
                acc = tensor_append(acc, part, un);
            }
        }
        for (const auto& [kk, cc] : acc) sv_add(res, kk, cc);
    }
    return res;
}

// ---------------------------------------------------------------------------
// centers and centralizers
// ---------------------------------------------------------------------------

namespace {

FpVec fp_commutator(const FpMulFn& mul, const FpVec& a, const FpVec& b, int64_t p) {
    FpVec ab = mul(a, b), ba = mul(b, a);
    FpVec r;
    size_t i = 0, j = 0;
    while (i < ab.size() || j < ba.size()) {
        if (j == ba.size() || (i < ab.size() && ab[i].first < ba[j].first))
            r.push_back(ab[i++]);
        else if (i == ab.size() || ba[j].first < ab[i].first) {
            r.push_back({ba[j].first, (p - ba[j].second) % p});
            ++j;
        } else {
            const int64_t v = fp_sub(ab[i].second, ba[j].second, p);
            if (v) r.push_back({ab[i].first, v});
            ++i;
            ++j;
        }
    }
    return r;
}

} // namespace

std::vector<SV> algebra_center(uint64_t dim, unsigned long ell, const MulFn& mul,
                               const std::vector<SV>& exact_candidates, uint64_t exact_dim_limit,
                               const FpMulFn& fp_mul_fn, int64_t fp_p) {
    const CycNum one = CycNum::one(ell);
    auto basis = [&](uint64_t b) {
        SV e;
        e[b] = one;
        return e;
    };
    if (dim <= exact_dim_limit) {
        // exact stacked commutator system over every basis element
        CycMat M((size_t)(dim * dim), std::vector<CycNum>((size_t)dim, CycNum::zero(ell)));
        for (uint64_t b = 0; b < dim; ++b) {
            const SV eb = basis(b);
            for (uint64_t i = 0; i < dim; ++i) {
                const SV w = sv_sub(mul(basis(i), eb), mul(eb, basis(i)));
                for (const auto& [key, c] : w) M[(size_t)(b * dim + key)][(size_t)i] = c;
            }
        }
        std::vector<std::vector<CycNum>> ker;
        cyc_rank(M, ell, &ker);
        std::vector<SV> out;
        for (const auto& kv : ker) {
            SV v;
            for (uint64_t i = 0; i < dim; ++i)
                if (!kv[(size_t)i].is_zero()) v[i] = kv[(size_t)i];
            out.push_back(std::move(v));
        }
        return out;
    }

    if (!fp_mul_fn || fp_p == 0)
        throw std::invalid_argument("algebra_center: large dimension needs a mod-p product");
    const int64_t p = fp_p;

    // mod-p upper bound: nullity of commutators with a few random elements
    // bounds the exact center dimension from above (the center lies in every
    // centralizer, and mod-p nullity >= exact nullity)
    std::mt19937_64 rng(987654321u);
    std::vector<FpVec> probes;
    for (int t = 0; t < 3; ++t) {
        std::map<uint64_t, int64_t> m;
        for (int s = 0; s < 4; ++s) m[rng() % dim] = (int64_t)(1 + rng() % 97);
        probes.emplace_back(m.begin(), m.end());
    }
    std::vector<std::vector<int64_t>> M((size_t)(probes.size() * dim),
                                        std::vector<int64_t>((size_t)dim, 0));
    for (uint64_t i = 0; i < dim; ++i) {
        const FpVec ei = {{i, 1}};
        for (size_t t = 0; t < probes.size(); ++t)
            for (const auto& [key, v] : fp_commutator(fp_mul_fn, ei, probes[t], p))
                M[(size_t)(t * dim + key)][(size_t)i] = v;
    }
    const long rank = fp_rank(std::move(M), p, nullptr);
    const uint64_t bound = dim - (uint64_t)rank;

    // exact lower bound: the supplied candidates, verified centrally against
    // every basis element and checked linearly independent
    for (const auto& v : exact_candidates)
        for (uint64_t b = 0; b < dim; ++b) {
            const SV eb = basis(b);
            if (!(mul(v, eb) == mul(eb, v)))
                throw std::logic_error("algebra_center: candidate is not central");
        }
    if (!exact_candidates.empty()) {
        CycMat C((size_t)dim, std::vector<CycNum>(exact_candidates.size(), CycNum::zero(ell)));
        for (size_t j = 0; j < exact_candidates.size(); ++j)
            for (const auto& [key, c] : exact_candidates[j]) C[(size_t)key][j] = c;
        if ((size_t)cyc_rank(C, ell) != exact_candidates.size())
            throw std::logic_error("algebra_center: candidates are dependent");
    }
    if (exact_candidates.size() != bound)
        throw std::logic_error("algebra_center: candidates do not reach the mod-p bound");
    return exact_candidates;
}

CheckReport centralizer_check(const GraphAlgebra& A, const std::vector<int>& gens) {
    CheckReport rep;
    const unsigned long ell = A.H.ell;
    const uint64_t N = ipow((uint64_t)A.n, A.k);

    const auto inv = graph_invariants(A, gens);

    // exact inclusion: every invariant commutes with the moment-map image of
    // each generator (mu is an algebra morphism, so this covers all of H)
    bool incl = true;
    std::string wit;
    std::vector<GraphElt> mus;
    for (int m : gens) mus.push_back(qmm(A, A.H.basis_elt(m)));
    for (size_t vi = 0; vi < inv.size() && incl; ++vi)
        for (size_t mi = 0; mi < mus.size() && incl; ++mi)
            if (!(graph_mul(A, inv[vi], mus[mi]) == graph_mul(A, mus[mi], inv[vi]))) {
                incl = false;
                wit = "invariant " + std::to_string(vi) + " vs generator " + std::to_string(mi);
            }
    rep.add("invariants-commute-with-moment-image", incl, wit);

    // mod-p centralizer dimension equals the exact invariant dimension:
    // mod-p nullity bounds the exact centralizer dimension from above, and
    // the invariants sit inside it
    const int64_t p = fp_find_prime(ell);
    const FpGraph G = fp_graph(A, p);
    std::vector<FpVec> fmus;
    for (const auto& m : mus) fmus.push_back(fp_reduce(m, ell, p));
    std::vector<std::vector<int64_t>> M((size_t)(fmus.size() * N),
                                        std::vector<int64_t>((size_t)N, 0));
    for (uint64_t b = 0; b < N; ++b) {
        const FpVec eb = {{b, 1}};
        for (size_t t = 0; t < fmus.size(); ++t) {
            const FpVec xm = fp_graph_mul(G, eb, fmus[t]);
            const FpVec mx = fp_graph_mul(G, fmus[t], eb);
            std::map<uint64_t, int64_t> diff;
            for (const auto& [key, v] : xm) diff[key] = v;
            for (const auto& [key, v] : mx) diff[key] = fp_sub(diff.count(key) ? diff[key] : 0, v, p);
            for (const auto& [key, v] : diff)
                if (v % p) M[(size_t)(t * N + key)][(size_t)b] = (v % p + p) % p;
        }
    }
    const long rank = fp_rank(std::move(M), p, nullptr);
    const uint64_t nullity = N - (uint64_t)rank;
    rep.add("centralizer-dimension-matches-invariants", nullity == inv.size(),
            "mod-p nullity " + std::to_string(nullity) + " vs invariant dimension " +
                std::to_string(inv.size()));
    return rep;
}

// ---------------------------------------------------------------------------
// mod-p image of the product
// ---------------------------------------------------------------------------

FpVec fp_reduce(const SV& x, unsigned long ell, int64_t p) {
    const FpReducer red(ell, p);
    FpVec r;
    for (const auto& [k, c] : x) {
        const int64_t v = red(c);
        if (v) r.push_back({k, v});
    }
    return r;
}

FpGraph fp_graph(const GraphAlgebra& A, int64_t p) {
    FpGraph G;
    G.p = p;
    G.n = A.n;
    G.g = A.g;
    G.punc = A.punc;
    G.k = A.k;
    const FpReducer red(A.H.ell, p);
    auto conv = [&](const std::vector<SV>& src) {
        std::vector<std::vector<std::pair<uint32_t, int64_t>>> out(src.size());
        for (size_t i = 0; i < src.size(); ++i)
            for (const auto& [k, c] : src[i]) {
                const int64_t v = red(c);
                if (v) out[i].push_back({(uint32_t)k, v});
            }
        return out;
    };
    G.fus = conv(A.fus);
    G.exch_handle = conv(A.exch_handle);
    G.exch_far = conv(A.exch_far);
    return G;
}

FpVec fp_graph_mul(const FpGraph& G, const FpVec& x, const FpVec& y) {
    const int n = G.n, k = G.k;
    const uint64_t un = (uint64_t)n;
    const int64_t p = G.p;
    std::unordered_map<uint64_t, int64_t> acc;
    std::vector<int> xd, yd;
    std::unordered_map<uint64_t, int64_t> cur, nxt, state;
    for (const auto& [yk, yc] : y) {
        decode(yk, n, k, yd);
        cur.clear();
        for (const auto& [xk, xc] : x) cur[xk] = fp_mul(xc, yc, p);
        for (int ps = 0; ps < k && !cur.empty(); ++ps) {
            const int j0 = yd[ps];
            const uint64_t above = ipow(un, k - ps);
            const uint64_t tailpow = ipow(un, k - 1 - ps);
            nxt.clear();
            for (const auto& [key, c] : cur) {
                decode(key, n, k, xd);
                state.clear();
                state[(uint64_t)j0] = c;
                uint64_t powL = 1;
                for (int pp = k - 1; pp > ps && !state.empty(); --pp) {
                    const auto& table = (G.slot_index(pp) == G.slot_index(ps))
                                            ? G.exch_handle
                                            : G.exch_far;
                    std::unordered_map<uint64_t, int64_t> st2;
                    for (const auto& [sk, sc] : state) {
                        const uint64_t m = sk / powL, suf = sk % powL;
                        for (const auto& [ok, oc] : table[(size_t)xd[pp] * n + m]) {
                            const uint64_t q1 = (uint64_t)ok / un, q2 = (uint64_t)ok % un;
                            int64_t& slot = st2[(q1 * un + q2) * powL + suf];
                            slot = fp_add(slot, fp_mul(sc, oc, p), p);
                        }
                    }
                    state.swap(st2);
                    powL *= un;
                }
                if (state.empty()) continue;
                const uint64_t prefix = key / above;
                for (const auto& [sk, sc] : state) {
                    const uint64_t m = sk / powL, suf = sk % powL;
                    for (const auto& [f, fc] : G.fus[(size_t)xd[ps] * n + m]) {
                        int64_t& slot = nxt[prefix * above + (uint64_t)f * tailpow + suf];
                        slot = fp_add(slot, fp_mul(sc, fc, p), p);
                    }
                }
            }
            cur.swap(nxt);
        }
        for (const auto& [key, c] : cur) {
            int64_t& slot = acc[key];
            slot = fp_add(slot, c, p);
        }
    }
    FpVec r;
    for (const auto& [key, c] : acc)
        if (c % p) r.push_back({key, (c % p + p) % p});
    std::sort(r.begin(), r.end());
    return r;
}

} // namespace qga
