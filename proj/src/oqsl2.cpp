#include "qga/oqsl2.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <iostream>
#include <stdexcept>

#include "qga/graphalg.hpp"

namespace qga {

// ===========================================================================
// scalar helpers
// ===========================================================================

LaurentPoly qbinom(long m, long t) {
    if (t < 0) return LaurentPoly::zero();
    LaurentPoly num = LaurentPoly::one();
    for (long u = 1; u <= t; ++u) num *= qint(m - u + 1, 4);
    return num.divide_exact(qfact(t, 4));
}

CycNum eps_eval(const LaurentPoly& p, long ell) {
    // v -> zeta^{s}, the canonical square root of eps_D for D = 2
    long dbar = inverse_mod(2, ell);
    long s = (dbar % ell) * ((ell + 1) / 2) % ell;
    CycNum r = CycNum::zero((unsigned long)ell);
    for (const auto& [e, c] : p.c) {
        long k = ((s * (e % ell)) % ell + ell) % ell;
        r += CycNum::zeta_pow((unsigned long)ell, k) * c;
    }
    return r;
}

// ===========================================================================
// QRat
// ===========================================================================

namespace {

using detail::DensePoly;

DensePoly to_dense(const LaurentPoly& p) {
    // caller must have shifted min_exp to 0
    DensePoly d;
    if (p.is_zero()) return d;
    d.assign((size_t)p.max_exp() + 1, Rational(0));
    for (const auto& [e, c] : p.c) d[(size_t)e] = c;
    return d;
}

LaurentPoly from_dense(const DensePoly& d) {
    LaurentPoly p;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) p += LaurentPoly::var_pow((long)i, d[i]);
    return p;
}

DensePoly dp_gcd(DensePoly a, DensePoly b) {
    while (!b.empty()) {
        DensePoly r = detail::dp_rem(a, b);
        a = std::move(b);
        b = std::move(r);
        if (!a.empty()) {
            Rational lead = a.back();
            for (auto& c : a) c /= lead;
        }
    }
    if (a.empty()) a = {Rational(1)};
    return a;
}

} // namespace

void QRat::normalize() {
    if (den.is_zero()) throw std::invalid_argument("QRat: zero denominator");
    if (num.is_zero()) {
        den = LaurentPoly::one();
        return;
    }
    long shift = num.min_exp() - den.min_exp();
    DensePoly n = to_dense(num.shifted(-num.min_exp()));
    DensePoly d = to_dense(den.shifted(-den.min_exp()));
    DensePoly g = dp_gcd(n, d);
    if (g.size() > 1) {
        n = detail::dp_div(n, g);
        d = detail::dp_div(d, g);
    }
    Rational lead = d.back();
    for (auto& c : n) c /= lead;
    for (auto& c : d) c /= lead;
    num = from_dense(n).shifted(shift);
    den = from_dense(d);
}

QRat QRat::operator/(const QRat& o) const {
    if (o.num.is_zero()) throw std::invalid_argument("QRat: division by zero");
    return QRat(num * o.den, den * o.num);
}

LaurentPoly QRat::to_laurent() const {
    if (den == LaurentPoly::one()) return num;
    // the denominator may still be a pure monomial
    if (den.c.size() == 1) return num * LaurentPoly::var_pow(-den.min_exp(), Rational(1) / den.c.begin()->second);
    throw std::domain_error("QRat::to_laurent: not a Laurent polynomial: (" + num.str() + ")/(" + den.str() + ")");
}

std::string QRat::str() const {
    if (is_laurent()) return num.str();
    return "(" + num.str() + ")/(" + den.str() + ")";
}

namespace {

CycNum qr_eps(const QRat& x, long ell) {
    CycNum d = eps_eval(x.den, ell);
    if (d.is_zero()) {
        // retry after exact reduction (normalize() already ran; this means a
        // genuine pole unless the value is Laurent after all)
        return eps_eval(x.to_laurent(), ell);
    }
    return eps_eval(x.num, ell) * d.inverse();
}

// Gauss-Jordan elimination over QRat on the first `ncols` columns of M
// (anything beyond is carried along as augmentation). Returns pivot column
// per used row.
std::vector<int> qr_rref(std::vector<std::vector<QRat>>& M, size_t ncols) {
    size_t rows = M.size();
    std::vector<int> pivots;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i)
            if (!M[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(M[r], M[sel]);
        QRat inv = QRat::one() / M[r][c];
        for (size_t j = c; j < M[r].size(); ++j) M[r][j] = M[r][j] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c].is_zero()) continue;
            QRat f = M[i][c];
            for (size_t j = c; j < M[i].size(); ++j) M[i][j] = M[i][j] - f * M[r][j];
        }
        pivots.push_back((int)c);
        ++r;
    }
    return pivots;
}

// unique solution of (possibly overdetermined, consistent) A x = b
std::vector<QRat> qr_solve_unique(const std::vector<std::vector<QRat>>& A, const std::vector<QRat>& b) {
    size_t rows = A.size(), cols = A.empty() ? 0 : A[0].size();
    std::vector<std::vector<QRat>> M(rows);
    for (size_t i = 0; i < rows; ++i) {
        M[i] = A[i];
        M[i].push_back(b[i]);
    }
    std::vector<int> piv = qr_rref(M, cols);
    if (piv.size() != cols) throw std::domain_error("qr_solve_unique: rank-deficient system");
    // consistency: rows past the pivot rows must have zero RHS
    for (size_t i = piv.size(); i < rows; ++i)
        if (!M[i][cols].is_zero()) throw std::domain_error("qr_solve_unique: inconsistent system");
    std::vector<QRat> x(cols);
    for (size_t i = 0; i < piv.size(); ++i) x[(size_t)piv[i]] = M[i][cols];
    return x;
}

// Gaussian elimination over CycNum for rectangular systems; returns the
// unique solution of A x = b, throwing if none or not unique.
std::vector<CycNum> cyc_solve_rect(std::vector<std::vector<CycNum>> A, std::vector<CycNum> b, unsigned long ell) {
    size_t rows = A.size(), cols = A.empty() ? 0 : A[0].size();
    std::vector<int> piv;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i)
            if (!A[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(A[r], A[sel]);
        std::swap(b[r], b[sel]);
        CycNum inv = A[r][c].inverse();
        for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv;
        b[r] = b[r] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            CycNum f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
            b[i] = b[i] - f * b[r];
        }
        piv.push_back((int)c);
        ++r;
    }
    if (piv.size() != cols) throw std::domain_error("cyc_solve_rect: system has no unique solution");
    for (size_t i = piv.size(); i < rows; ++i)
        if (!b[i].is_zero()) throw std::domain_error("cyc_solve_rect: inconsistent system");
    std::vector<CycNum> x(cols, CycNum::zero(ell));
    for (size_t i = 0; i < piv.size(); ++i) x[(size_t)piv[i]] = b[i];
    return x;
}

} // namespace

// ===========================================================================
// monomials
// ===========================================================================

std::string oq_mono_str(uint64_t m) {
    int da, i, j, k;
    oq_dec(m, da, i, j, k);
    if (m == 0) return "1";
    std::string s;
    auto app = [&](const char* g, int e) {
        if (e == 0) return;
        s += g;
        if (e > 1) s += "^" + std::to_string(e);
    };
    app("a", i);
    app("b", j);
    app("c", k);
    app("d", da);
    return s;
}

void oq_add(OqElt& x, uint64_t m, const LaurentPoly& c) {
    if (c.is_zero()) return;
    auto it = x.find(m);
    if (it == x.end()) {
        x.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

void oq_axpy(OqElt& x, const LaurentPoly& c, const OqElt& y) {
    if (c.is_zero()) return;
    for (const auto& [m, v] : y) oq_add(x, m, c * v);
}

OqEltE oq_spec(const OqElt& x, long ell) {
    OqEltE r;
    for (const auto& [m, v] : x) {
        CycNum c = eps_eval(v, ell);
        if (!c.is_zero()) r.emplace(m, c);
    }
    return r;
}

std::vector<uint64_t> oq_monomials(int cap) {
    std::vector<uint64_t> out;
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; i + j <= cap; ++j)
            for (int k = 0; i + j + k <= cap; ++k) out.push_back(oq_key(0, i, j, k));
    for (int l = 1; l <= cap; ++l)
        for (int j = 0; l + j <= cap; ++j)
            for (int k = 0; l + j + k <= cap; ++k) out.push_back(oq_key(l, 0, j, k));
    std::sort(out.begin(), out.end());
    return out;
}

// ===========================================================================
// representations on tensor powers of the defining module
// ===========================================================================

namespace {

LMat lmat_mul(const LMat& a, const LMat& b) {
    LMat r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (const auto& [k, va] : a[i])
            for (const auto& [j, vb] : b[(size_t)k]) {
                LaurentPoly t = va * vb;
                if (t.is_zero()) continue;
                auto it = r[i].find(j);
                if (it == r[i].end())
                    r[i].emplace(j, t);
                else {
                    it->second += t;
                    if (it->second.is_zero()) r[i].erase(it);
                }
            }
    return r;
}

} // namespace

const OqAlg::Rep& OqAlg::rep(int d) const {
    auto it = rep_cache.find(d);
    if (it != rep_cache.end()) return it->second;
    Rep R;
    R.d = d;
    size_t dim = (size_t)1 << d;
    R.wt.resize(dim);
    for (size_t I = 0; I < dim; ++I) R.wt[I] = d - 2 * (long)std::popcount(I);
    LMat E1(dim), F1(dim), id(dim);
    for (size_t I = 0; I < dim; ++I) {
        id[I][(int)I] = LaurentPoly::one();
        for (int b = 0; b < d; ++b) {
            bool low = (I >> b) & 1u; // bit set = lowest-weight vector on that leg
            if (low) {
                // raising on this leg; K-twist on the legs after it (lower bits)
                long tw = 0;
                for (int b2 = 0; b2 < b; ++b2) tw += ((I >> b2) & 1u) ? -1 : 1;
                size_t J = I & ~((size_t)1 << b);
                auto& cell = E1[J][(int)I];
                cell += q_pow(tw);
            } else {
                // lowering; inverse K-twist on the legs before it (higher bits)
                long tw = 0;
                for (int b2 = b + 1; b2 < d; ++b2) tw += ((I >> b2) & 1u) ? -1 : 1;
                size_t J = I | ((size_t)1 << b);
                auto& cell = F1[J][(int)I];
                cell += q_pow(-tw);
            }
        }
    }
    R.Epow.resize((size_t)d + 1);
    R.Fpow.resize((size_t)d + 1);
    R.Epow[0] = id;
    R.Fpow[0] = id;
    for (int s = 1; s <= d; ++s) {
        R.Epow[(size_t)s] = lmat_mul(E1, R.Epow[(size_t)s - 1]);
        R.Fpow[(size_t)s] = lmat_mul(F1, R.Fpow[(size_t)s - 1]);
    }
    return rep_cache.emplace(d, std::move(R)).first->second;
}

std::vector<std::pair<int, int>> OqAlg::word(uint64_t m) const {
    int da, i, j, k;
    oq_dec(m, da, i, j, k);
    std::vector<std::pair<int, int>> w;
    for (int u = 0; u < i; ++u) w.push_back({0, 0});
    for (int u = 0; u < j; ++u) w.push_back({0, 1});
    for (int u = 0; u < k; ++u) w.push_back({1, 0});
    for (int u = 0; u < da; ++u) w.push_back({1, 1});
    return w;
}

// ===========================================================================
// straightening
// ===========================================================================

namespace {

LaurentPoly mono_pow(const LaurentPoly& p, long e) { return p.pow(e); }

} // namespace

const OqElt& OqAlg::mono_gen(uint64_t m, int g) const {
    auto key = std::make_pair(m, g);
    auto it = mono_gen_cache.find(key);
    if (it != mono_gen_cache.end()) return it->second;
    int da, i, j, k;
    oq_dec(m, da, i, j, k);
    OqElt r;
    if (da == 0) {
        switch (g) {
        case 0:
            oq_add(r, oq_key(0, i + 1, j, k), mono_pow(c_ba, j) * mono_pow(c_ca, k));
            break;
        case 1:
            oq_add(r, oq_key(0, i, j + 1, k), mono_pow(c_cb, k));
            break;
        case 2:
            oq_add(r, oq_key(0, i, j, k + 1), LaurentPoly::one());
            break;
        case 3: {
            if (i == 0) {
                // b^j c^k d is already a normally ordered word
                oq_add(r, oq_key(1, 0, j, k), LaurentPoly::one());
                break;
            }
            LaurentPoly s0 = mono_pow(c_db, -j) * mono_pow(c_dc, -k);
            {
                oq_add(r, oq_key(0, i - 1, j, k), s0);
                oq_add(r, oq_key(0, i - 1, j + 1, k + 1), s0 * beta_ad);
            }
            break;
        }
        }
    } else {
        switch (g) {
        case 3:
            oq_add(r, oq_key(da + 1, 0, j, k), LaurentPoly::one());
            break;
        case 2:
            oq_add(r, oq_key(da, 0, j, k + 1), mono_pow(c_dc, da));
            break;
        case 1:
            oq_add(r, oq_key(da, 0, j + 1, k), mono_pow(c_db, da) * mono_pow(c_cb, k));
            break;
        case 0:
            oq_add(r, oq_key(da - 1, 0, j, k), LaurentPoly::one());
            oq_add(r, oq_key(da - 1, 0, j + 1, k + 1),
                   beta_da * mono_pow(c_db, da - 1) * mono_pow(c_dc, da - 1) * mono_pow(c_cb, k));
            break;
        }
    }
    return mono_gen_cache.emplace(key, std::move(r)).first->second;
}

OqElt OqAlg::mono_mul(uint64_t x, uint64_t y) const {
    OqElt acc;
    acc.emplace(x, LaurentPoly::one());
    for (auto [rr, cc] : word(y)) {
        int g = rr * 2 + cc;
        OqElt next;
        for (const auto& [m, c] : acc) oq_axpy(next, c, mono_gen(m, g));
        acc = std::move(next);
    }
    return acc;
}

OqElt OqAlg::mul(const OqElt& x, const OqElt& y) const {
    OqElt r;
    for (const auto& [mx, cx] : x)
        for (const auto& [my, cy] : y) oq_axpy(r, cx * cy, mono_mul(mx, my));
    return r;
}

OqEltE OqAlg::mul_eps(const OqEltE& x, const OqEltE& y, long ell) const {
    OqEltE r;
    for (const auto& [mx, cx] : x)
        for (const auto& [my, cy] : y) {
            CycNum s = cx * cy;
            for (const auto& [m, c] : mono_mul(mx, my)) {
                CycNum t = s * eps_eval(c, ell);
                if (t.is_zero()) continue;
                auto it = r.find(m);
                if (it == r.end())
                    r.emplace(m, t);
                else {
                    it->second += t;
                    if (it->second.is_zero()) r.erase(it);
                }
            }
        }
    return r;
}

LaurentPoly OqAlg::counit(const OqElt& x) const {
    LaurentPoly r;
    for (const auto& [m, c] : x) {
        int da, i, j, k;
        oq_dec(m, da, i, j, k);
        if (j == 0 && k == 0) r += c;
    }
    return r;
}

const OqTens2& OqAlg::delta(uint64_t m) const {
    auto it = delta_cache.find(m);
    if (it != delta_cache.end()) return it->second;
    OqTens2 acc;
    acc[{0, 0}] = LaurentPoly::one();
    for (auto [rr, cc] : word(m)) {
        OqTens2 next;
        for (const auto& [pr, c] : acc)
            for (int p = 0; p < 2; ++p) {
                // Delta(t_{rc}) = sum_p t_{rp} (x) t_{pc}
                OqElt left, right;
                for (const auto& [m1, c1] : mono_gen(pr.first, rr * 2 + p))
                    for (const auto& [m2, c2] : mono_gen(pr.second, p * 2 + cc)) {
                        LaurentPoly t = c * c1 * c2;
                        if (t.is_zero()) continue;
                        auto key = std::make_pair(m1, m2);
                        auto jt = next.find(key);
                        if (jt == next.end())
                            next.emplace(key, t);
                        else {
                            jt->second += t;
                            if (jt->second.is_zero()) next.erase(jt);
                        }
                    }
            }
        acc = std::move(next);
    }
    return delta_cache.emplace(m, std::move(acc)).first->second;
}

OqTens2 OqAlg::delta(const OqElt& x) const {
    OqTens2 r;
    for (const auto& [m, c] : x)
        for (const auto& [pr, v] : delta(m)) {
            LaurentPoly t = c * v;
            if (t.is_zero()) continue;
            auto it = r.find(pr);
            if (it == r.end())
                r.emplace(pr, t);
            else {
                it->second += t;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    return r;
}

OqTens3 OqAlg::delta2(const OqElt& x) const {
    OqTens3 r;
    for (const auto& [pr, c] : delta(x))
        for (const auto& [pq, v] : delta(pr.first)) {
            LaurentPoly t = c * v;
            if (t.is_zero()) continue;
            std::array<uint64_t, 3> key = {pq.first, pq.second, pr.second};
            auto it = r.find(key);
            if (it == r.end())
                r.emplace(key, t);
            else {
                it->second += t;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    return r;
}

const OqElt& OqAlg::antipode_mono(uint64_t m) const {
    auto it = antipode_cache.find(m);
    if (it != antipode_cache.end()) return it->second;
    auto w = word(m);
    OqElt acc;
    acc.emplace(0, LaurentPoly::one());
    for (auto rit = w.rbegin(); rit != w.rend(); ++rit) acc = mul(acc, S_gen[(size_t)(rit->first * 2 + rit->second)]);
    return antipode_cache.emplace(m, std::move(acc)).first->second;
}

OqElt OqAlg::antipode(const OqElt& x) const {
    OqElt r;
    for (const auto& [m, c] : x) oq_axpy(r, c, antipode_mono(m));
    return r;
}

OqElt OqAlg::word_normal_form(const std::vector<int>& letters) const {
    OqElt acc;
    acc.emplace(0, LaurentPoly::one());
    for (int g : letters) {
        OqElt next;
        for (const auto& [m, c] : acc) oq_axpy(next, c, mono_gen(m, g));
        acc = std::move(next);
    }
    return acc;
}

// ===========================================================================
// construction: relations from the RTT system
// ===========================================================================

OqAlg build_oq(int degree_cap) {
    OqAlg A;
    A.cap = degree_cap;

    // R-matrix on V (x) V: theta factor after the E-F part
    // (weights of the two basis vectors: +1, -1)
    auto wt1 = [](int i) { return i == 0 ? 1L : -1L; };
    LaurentPoly qmq = q_pow(1) - q_pow(-1);
    std::vector<std::vector<LaurentPoly>> R4(4, std::vector<LaurentPoly>(4));
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            LaurentPoly th = v_pow(2 * wt1(i) * wt1(k));
            // s = 0 summand
            R4[(size_t)(i * 2 + k)][(size_t)(i * 2 + k)] += th;
            // s = 1 summand: E: v1 -> v0, F: v0 -> v1
            if (i == 0 && k == 1) R4[(size_t)(i * 2 + k)][(size_t)(1 * 2 + 0)] += th * qmq;
        }

    // RTT relation space inside the 16-dimensional span of degree-2 words
    // t_g t_h, word code g*4 + h, letters a=0 b=1 c=2 d=3 via t_{rc} = r*2+c
    std::vector<std::vector<QRat>> M;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    std::vector<LaurentPoly> row(16);
                    for (int p = 0; p < 2; ++p)
                        for (int r = 0; r < 2; ++r) {
                            row[(size_t)((p * 2 + j) * 4 + (r * 2 + l))] += R4[(size_t)(i * 2 + k)][(size_t)(p * 2 + r)];
                            row[(size_t)((k * 2 + r) * 4 + (i * 2 + p))] -= R4[(size_t)(p * 2 + r)][(size_t)(j * 2 + l)];
                        }
                    bool nz = false;
                    for (auto& e : row)
                        if (!e.is_zero()) nz = true;
                    if (!nz) continue;
                    std::vector<QRat> qrow;
                    qrow.reserve(16);
                    for (auto& e : row) qrow.emplace_back(e);
                    M.push_back(std::move(qrow));
                }
    // eliminate with the out-of-order words first so the pivots express them
    // in terms of ordered words
    const int ba = 4, ca = 8, cb = 9, da = 12, db = 13, dc = 14;
    const int ab = 1, ac = 2, ad = 3, bc = 6, bd = 7, cd = 11;
    std::vector<int> order = {ba, ca, cb, da, db, dc, 0, ab, ac, ad, 5, bc, bd, 10, cd, 15};
    std::vector<std::vector<QRat>> P(M.size(), std::vector<QRat>(16));
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t c = 0; c < 16; ++c) P[i][c] = M[i][(size_t)order[c]];
    std::vector<int> piv = qr_rref(P, 16);
    if (piv.size() != 6 || piv != std::vector<int>({0, 1, 2, 3, 4, 5}))
        throw std::logic_error("build_oq: unexpected RTT relation space");
    auto rule = [&](int rowidx, int target_word) -> QRat {
        // pivot row rowidx: word order[rowidx] + sum coeff * word = 0
        QRat coeff;
        for (size_t c = 6; c < 16; ++c) {
            if (P[(size_t)rowidx][c].is_zero()) continue;
            if (order[c] != target_word) throw std::logic_error("build_oq: unexpected relation support");
            coeff = -P[(size_t)rowidx][c];
        }
        return coeff;
    };
    A.c_ba = rule(0, ab).to_laurent();
    A.c_ca = rule(1, ac).to_laurent();
    A.c_cb = rule(2, bc).to_laurent();
    A.c_db = rule(4, bd).to_laurent();
    A.c_dc = rule(5, cd).to_laurent();
    // the handle row: da = ad + gamma * bc
    LaurentPoly gamma;
    {
        QRat cad, cbc;
        for (size_t c = 6; c < 16; ++c) {
            if (P[3][c].is_zero()) continue;
            if (order[c] == ad)
                cad = -P[3][c];
            else if (order[c] == bc)
                cbc = -P[3][c];
            else
                throw std::logic_error("build_oq: unexpected da-relation support");
        }
        if (cad != QRat::one()) throw std::logic_error("build_oq: da-relation not monic in ad");
        gamma = cbc.to_laurent();
    }

    // quantum determinant ad + beta*bc: the unique degree-2 combination that
    // pairs as the counit with the quantum group (tested on a PBW batch)
    {
        const auto& R2 = A.rep(2);
        bool have = false;
        QRat beta;
        for (int s = 0; s <= 2; ++s)
            for (int r = -2; r <= 2; ++r)
                for (int t = 0; t <= 2; ++t) {
                    // entries (1,1) and (1,2) of E^s K^r F^t
                    LaurentPoly x, y;
                    for (const auto& [pp, ve] : R2.Epow[(size_t)s][1]) {
                        LaurentPoly kf = v_pow(4 * r * R2.wt[(size_t)pp]);
                        auto itf = R2.Fpow[(size_t)t][(size_t)pp].find(1);
                        if (itf != R2.Fpow[(size_t)t][(size_t)pp].end()) x += ve * kf * itf->second;
                        auto itf2 = R2.Fpow[(size_t)t][(size_t)pp].find(2);
                        if (itf2 != R2.Fpow[(size_t)t][(size_t)pp].end()) y += ve * kf * itf2->second;
                    }
                    LaurentPoly eps = (s == 0 && t == 0) ? LaurentPoly::one() : LaurentPoly::zero();
                    if (y.is_zero()) {
                        if (x != eps) throw std::logic_error("build_oq: no quantum determinant");
                        continue;
                    }
                    QRat b2 = QRat(eps - x, y);
                    if (have && b2 != beta) throw std::logic_error("build_oq: inconsistent determinant");
                    beta = b2;
                    have = true;
                }
        if (!have) throw std::logic_error("build_oq: determinant underdetermined");
        A.beta_ad = (-beta).to_laurent();
        A.beta_da = A.beta_ad + gamma;
    }

#ifdef OQ_DEBUG_BUILD
    std::cerr << "c_ba=" << A.c_ba.str() << " c_ca=" << A.c_ca.str() << " c_cb=" << A.c_cb.str()
              << " c_db=" << A.c_db.str() << " c_dc=" << A.c_dc.str() << "\n"
              << "beta_ad=" << A.beta_ad.str() << " beta_da=" << A.beta_da.str() << "\n";
#endif
    // antipode on generators: unknowns sigma[g][h] and a constant term per
    // generator, solved from both antipode axioms
    {
        // unknown index: g*5 + h for the coefficient of generator h in S(g),
        // g*5 + 4 for the constant term
        std::vector<std::vector<QRat>> E;
        std::vector<QRat> rhs;
        uint64_t genkey[4] = {A.ka(), A.kb(), A.kc(), A.kd()};
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    // left: sum_p S(t_ip) t_pj ; right: sum_p t_ip S(t_pj)
                    std::map<uint64_t, std::vector<QRat>> coeffs; // monomial -> linear form in unknowns
                    auto addform = [&](uint64_t m, int unk, const LaurentPoly& c) {
                        auto& f = coeffs[m];
                        if (f.empty()) f.assign(20, QRat());
                        f[(size_t)unk] = f[(size_t)unk] + QRat(c);
                    };
                    for (int p = 0; p < 2; ++p) {
                        int gS = side == 0 ? i * 2 + p : p * 2 + j; // the letter inside S
                        int gT = side == 0 ? p * 2 + j : i * 2 + p; // the plain letter
                        for (int h = 0; h < 4; ++h) {
                            OqElt prod = side == 0 ? A.mono_mul(genkey[h], genkey[gT])
                                                   : A.mono_mul(genkey[gT], genkey[h]);
                            for (const auto& [m, c] : prod) addform(m, gS * 5 + h, c);
                        }
                        addform(genkey[gT], gS * 5 + 4, LaurentPoly::one());
                    }
                    for (auto& [m, f] : coeffs) {
                        E.push_back(f);
                        rhs.emplace_back((i == j && m == 0) ? LaurentPoly::one() : LaurentPoly::zero());
                    }
                    if (coeffs.find(0) == coeffs.end() && i == j) {
                        E.push_back(std::vector<QRat>(20));
                        rhs.emplace_back(LaurentPoly::one());
                    }
                }
        std::vector<QRat> sol = qr_solve_unique(E, rhs);
        for (int g = 0; g < 4; ++g) {
            OqElt s;
            for (int h = 0; h < 4; ++h) {
                if (sol[(size_t)(g * 5 + h)].is_zero()) continue;
                oq_add(s, genkey[h], sol[(size_t)(g * 5 + h)].to_laurent());
            }
            if (!sol[(size_t)(g * 5 + 4)].is_zero()) oq_add(s, 0, sol[(size_t)(g * 5 + 4)].to_laurent());
            A.S_gen[(size_t)g] = std::move(s);
        }
    }
    return A;
}

// ===========================================================================
// evaluation pairings
// ===========================================================================

QRat cartan_eval(int j, int t, long vexp) {
    LaurentPoly num = v_pow(vexp * j);
    LaurentPoly den = LaurentPoly::one();
    for (int u = 1; u <= t; ++u) {
        num *= v_pow(vexp + 4 * (1 - u)) - LaurentPoly::one();
        den *= q_pow(u) - LaurentPoly::one();
    }
    return QRat(num, den);
}

namespace {

// entry (I, J) of E^p . diag . F^s on the degree-d rep, with a diagonal
// weight function
template <typename Diag>
LaurentPoly rep_entry(const OqAlg::Rep& R, int p, int s, size_t I, size_t J, Diag diag) {
    LaurentPoly val;
    if (p > R.d || s > R.d) return val;
    for (const auto& [P, ve] : R.Epow[(size_t)p][I]) {
        auto itf = R.Fpow[(size_t)s][(size_t)P].find((int)J);
        if (itf == R.Fpow[(size_t)s][(size_t)P].end()) continue;
        val += ve * diag((size_t)P) * itf->second;
    }
    return val;
}

void mono_IJ(const OqAlg& A, uint64_t m, int& d, size_t& I, size_t& J) {
    auto w = A.word(m);
    d = (int)w.size();
    I = 0;
    J = 0;
    for (auto [r, c] : w) {
        I = (I << 1) | (size_t)r;
        J = (J << 1) | (size_t)c;
    }
}

} // namespace

LaurentPoly pair_eval(const OqAlg& A, const OqElt& phi, const GammaMono& y) {
    LaurentPoly total;
    int sig = y.t / 2;
    for (const auto& [m, c] : phi) {
        int d;
        size_t I, J;
        mono_IJ(A, m, d, I, J);
        if (y.p > d || y.s > d) continue;
        const auto& R = A.rep(d);
        QRat qval;
        for (const auto& [P, ve] : R.Epow[(size_t)y.p][I]) {
            auto itf = R.Fpow[(size_t)y.s][(size_t)P].find((int)J);
            if (itf == R.Fpow[(size_t)y.s][(size_t)P].end()) continue;
            QRat ce = cartan_eval(y.e - sig, y.t, 4 * R.wt[(size_t)P]);
            qval = qval + QRat(ve * itf->second) * ce;
        }
        LaurentPoly val = qval.to_laurent(); // integer weights: always a Laurent value
        total += c * val.divide_exact(qfact(y.p, 4) * qfact(y.s, 4));
    }
    return total;
}

LaurentPoly pair_eval(const OqAlg& A, const OqElt& phi, const GammaElt& y) {
    LaurentPoly total;
    for (const auto& [k, c] : y) total += c * pair_eval(A, phi, gamma_dec(k));
    return total;
}

LaurentPoly pair_eval_u(const OqAlg& A, const OqElt& phi, int s, int r, int t) {
    LaurentPoly total;
    for (const auto& [m, c] : phi) {
        int d;
        size_t I, J;
        mono_IJ(A, m, d, I, J);
        if (s > d || t > d) continue;
        const auto& R = A.rep(d);
        total += c * rep_entry(R, s, t, I, J, [&](size_t P) { return v_pow(4L * r * R.wt[P]); });
    }
    return total;
}

std::map<std::pair<int, int>, QRat> cartan_kpow_basis(int r, int tmax) {
    // solve K^r = sum c_{e,t} K^{e - floor(t/2)} (K;t) on enough evaluation
    // points K = q^m
    int unknowns = 2 * (tmax + 1);
    std::vector<std::vector<QRat>> M;
    std::vector<QRat> b;
    for (int m = 0; m <= unknowns + 1; ++m) {
        std::vector<QRat> row;
        for (int e = 0; e < 2; ++e)
            for (int t = 0; t <= tmax; ++t) row.push_back(cartan_eval(e - t / 2, t, 4 * m));
        M.push_back(std::move(row));
        b.emplace_back(v_pow(4L * r * m));
    }
    std::vector<QRat> sol = qr_solve_unique(M, b);
    std::map<std::pair<int, int>, QRat> out;
    size_t idx = 0;
    for (int e = 0; e < 2; ++e)
        for (int t = 0; t <= tmax; ++t, ++idx)
            if (!sol[idx].is_zero()) out[{e, t}] = sol[idx];
    return out;
}

// ===========================================================================
// quantum Frobenius
// ===========================================================================

UcElt frobenius_gamma(const GammaMono& y, long ell) {
    UcElt out;
    if (y.p % ell || y.t % ell || y.s % ell) return out;
    long a = y.p / ell, n = y.t / ell, c = y.s / ell;
    // binomial coefficient polynomial C(h, n) = h(h-1)...(h-n+1)/n!
    std::vector<Rational> hpoly = {Rational(1)};
    for (long i = 0; i < n; ++i) {
        std::vector<Rational> nxt(hpoly.size() + 1, Rational(0));
        for (size_t t = 0; t < hpoly.size(); ++t) {
            nxt[t + 1] += hpoly[t];
            nxt[t] -= hpoly[t] * Rational(i);
        }
        hpoly = std::move(nxt);
    }
    Rational fact = 1;
    for (long i = 2; i <= n; ++i) fact *= i;
    for (long i = 2; i <= a; ++i) fact *= i;
    for (long i = 2; i <= c; ++i) fact *= i;
    for (size_t t = 0; t < hpoly.size(); ++t) {
        if (hpoly[t] == 0) continue;
        out[uc_key((int)a, (int)t, (int)c)] = hpoly[t] / fact;
    }
    return out;
}

UcEltE frobenius_of_small(int p, int r, int t, long ell) {
    UcEltE out;
    // E^p K^r F^t = [p]! [t]! E^{(p)} K^r F^{(t)}
    CycNum scale = eps_eval(qfact(p, 4) * qfact(t, 4), ell);
    if (scale.is_zero()) return out;
    // divided powers with exponent not divisible by ell die under Frobenius
    if (p % ell || t % ell) return out;
    auto kexp = cartan_kpow_basis(r, r);
    CycNum tot = CycNum::zero((unsigned long)ell);
    for (const auto& [et, c] : kexp) {
        GammaMono y;
        y.p = 0;
        y.e = et.first;
        y.t = et.second;
        y.s = 0;
        UcElt fr = frobenius_gamma(y, ell);
        auto it = fr.find(uc_key(0, 0, 0));
        // only the constant part of the Cartan image survives multiplication
        // by the E/F parts here (p = t = 0 within the small algebra)
        if (it != fr.end()) tot += qr_eps(c, ell) * it->second;
        for (const auto& [k, v] : fr)
            if (k != uc_key(0, 0, 0)) {
                CycNum add = qr_eps(c, ell) * v;
                if (!add.is_zero()) {
                    auto jt = out.find(k);
                    if (jt == out.end())
                        out.emplace(k, add * scale);
                    else {
                        jt->second += add * scale;
                        if (jt->second.is_zero()) out.erase(jt);
                    }
                }
            }
    }
    if (!tot.is_zero()) {
        CycNum v = tot * scale;
        auto jt = out.find(uc_key(0, 0, 0));
        if (jt == out.end())
            out.emplace(uc_key(0, 0, 0), v);
        else {
            jt->second += v;
            if (jt->second.is_zero()) out.erase(jt);
        }
    }
    return out;
}

// ===========================================================================
// classical side
// ===========================================================================

namespace {

ClElt cl_mono_mul(uint64_t x, uint64_t y) {
    int dax, ix, jx, kx, day, iy, jy, ky;
    oq_dec(x, dax, ix, jx, kx);
    oq_dec(y, day, iy, jy, ky);
    int i = ix + iy, j = jx + jy, k = kx + ky, l = dax + day;
    ClElt out;
    int m = std::min(i, l);
    // ad = 1 + bc classically
    Rational binom = 1;
    for (int r = 0; r <= m; ++r) {
        out[oq_key(l - m, i - m, j + r, k + r)] = binom;
        binom = binom * Rational(m - r) / Rational(r + 1);
    }
    return out;
}

} // namespace

ClElt cl_mul(const ClElt& f, const ClElt& g) {
    ClElt out;
    for (const auto& [mf, cf] : f)
        for (const auto& [mg, cg] : g)
            for (const auto& [m, c] : cl_mono_mul(mf, mg)) {
                Rational t = cf * cg * c;
                auto it = out.find(m);
                if (it == out.end())
                    out.emplace(m, t);
                else {
                    it->second += t;
                    if (it->second == 0) out.erase(it);
                }
            }
    return out;
}

namespace {

using QMat = std::vector<std::map<int, Rational>>;

QMat qmat_mul(const QMat& a, const QMat& b) {
    QMat r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (const auto& [k, va] : a[i])
            for (const auto& [j, vb] : b[(size_t)k]) {
                Rational t = va * vb;
                if (t == 0) continue;
                r[i][j] += t;
                if (r[i][j] == 0) r[i].erase(j);
            }
    return r;
}

// classical sl2 matrices e, f on the d-th tensor power (primitive coproduct)
void cl_rep(int d, QMat& e1, QMat& f1) {
    size_t dim = (size_t)1 << d;
    e1.assign(dim, {});
    f1.assign(dim, {});
    for (size_t I = 0; I < dim; ++I)
        for (int b = 0; b < d; ++b) {
            if ((I >> b) & 1u)
                e1[I & ~((size_t)1 << b)][(int)I] += 1;
            else
                f1[I | ((size_t)1 << b)][(int)I] += 1;
        }
}

} // namespace

Rational cl_pair(const ClElt& f, const UcElt& u) {
    Rational total = 0;
    // group the classical monomials by degree
    std::map<int, std::vector<std::pair<uint64_t, Rational>>> bydeg;
    for (const auto& [m, c] : f) bydeg[oq_deg(m)].push_back({m, c});
    for (const auto& [d, monos] : bydeg) {
        QMat e1, f1;
        cl_rep(d, e1, f1);
        std::vector<QMat> ep(1), fp(1);
        // identity
        ep[0].assign((size_t)1 << d, {});
        fp[0].assign((size_t)1 << d, {});
        for (size_t I = 0; I < ((size_t)1 << d); ++I) {
            ep[0][I][(int)I] = 1;
            fp[0][I][(int)I] = 1;
        }
        for (int s = 1; s <= d; ++s) {
            ep.push_back(qmat_mul(e1, ep.back()));
            fp.push_back(qmat_mul(f1, fp.back()));
        }
        for (const auto& [k, cu] : u) {
            int p = (int)(k / (64 * 64)), t = (int)((k / 64) % 64), s = (int)(k % 64);
            if (p > d || s > d) continue;
            for (const auto& [m, cm] : monos) {
                // row/column bit strings of the word
                int dd;
                size_t I = 0, J = 0;
                {
                    int da, i, j, kk;
                    oq_dec(m, da, i, j, kk);
                    dd = da + i + j + kk;
                    std::vector<std::pair<int, int>> w;
                    for (int uu = 0; uu < i; ++uu) w.push_back({0, 0});
                    for (int uu = 0; uu < j; ++uu) w.push_back({0, 1});
                    for (int uu = 0; uu < kk; ++uu) w.push_back({1, 0});
                    for (int uu = 0; uu < da; ++uu) w.push_back({1, 1});
                    for (auto [r, c] : w) {
                        I = (I << 1) | (size_t)r;
                        J = (J << 1) | (size_t)c;
                    }
                }
                (void)dd;
                Rational val = 0;
                for (const auto& [P, ve] : ep[(size_t)p][I]) {
                    auto itf = fp[(size_t)s][(size_t)P].find((int)J);
                    if (itf == fp[(size_t)s][(size_t)P].end()) continue;
                    long wtP = d - 2 * (long)std::popcount((size_t)P);
                    Rational hval = 1;
                    for (int u2 = 0; u2 < t; ++u2) hval *= wtP;
                    val += ve * hval * itf->second;
                }
                total += cu * cm * val;
            }
        }
    }
    return total;
}

OqEltE frobenius_dual(const OqAlg& A, const ClElt& f, long ell) {
    auto monos = oq_monomials((int)ell);
    std::vector<std::vector<CycNum>> M;
    std::vector<CycNum> rhs;
    int w = (int)ell + 1;
    for (int p = 0; p <= w; ++p)
        for (int e = 0; e < 2; ++e)
            for (int t = 0; t <= w; ++t)
                for (int s = 0; s <= w; ++s) {
                    GammaMono y{p, e, t, s};
                    std::vector<CycNum> row;
                    row.reserve(monos.size());
                    for (uint64_t m : monos) {
                        OqElt phi;
                        phi.emplace(m, LaurentPoly::one());
                        row.push_back(eps_eval(pair_eval(A, phi, y), ell));
                    }
                    M.push_back(std::move(row));
                    rhs.push_back(CycNum::zero((unsigned long)ell) + CycNum::zeta_pow((unsigned long)ell, 0) * cl_pair(f, frobenius_gamma(y, ell)));
                }
    std::vector<CycNum> sol = cyc_solve_rect(std::move(M), std::move(rhs), (unsigned long)ell);
    OqEltE out;
    for (size_t i = 0; i < monos.size(); ++i)
        if (!sol[i].is_zero()) out.emplace(monos[i], sol[i]);
    return out;
}

// ===========================================================================
// projection to the small-quantum-group dual
// ===========================================================================

namespace {

const std::map<uint64_t, SV>& pi_table(const OqAlg& A, long ell) {
    static std::map<std::pair<const OqAlg*, long>, std::map<uint64_t, SV>> cache;
    auto key = std::make_pair(&A, ell);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::map<uint64_t, SV> tab;
    for (uint64_t m : oq_monomials(A.cap)) {
        OqElt phi;
        phi.emplace(m, LaurentPoly::one());
        SV col;
        for (int s = 0; s < ell; ++s)
            for (int r = 0; r < ell; ++r)
                for (int t = 0; t < ell; ++t) {
                    CycNum v = eps_eval(pair_eval_u(A, phi, s, r, t), ell);
                    if (!v.is_zero()) col[(uint64_t)((s * ell + r) * ell + t)] = v;
                }
        tab.emplace(m, std::move(col));
    }
    return cache.emplace(key, std::move(tab)).first->second;
}

} // namespace

SV pi_project(const OqAlg& A, const OqEltE& phi, long ell) {
    const auto& tab = pi_table(A, ell);
    SV out;
    for (const auto& [m, c] : phi) {
        auto it = tab.find(m);
        if (it == tab.end()) throw std::invalid_argument("pi_project: monomial beyond the degree cap");
        sv_axpy(out, c, it->second);
    }
    return out;
}

SV pi_project(const OqAlg& A, const OqElt& phi, long ell) { return pi_project(A, oq_spec(phi, ell), ell); }

// ===========================================================================
// co-R-matrix and the braided product
// ===========================================================================

namespace {

LaurentPoly coR_mono(const OqAlg& A, uint64_t m1, uint64_t m2) {
    int d1, d2;
    size_t I1, J1, I2, J2;
    mono_IJ(A, m1, d1, I1, J1);
    mono_IJ(A, m2, d2, I2, J2);
    const auto& R1 = A.rep(d1);
    const auto& R2 = A.rep(d2);
    LaurentPoly qmq = q_pow(1) - q_pow(-1);
    LaurentPoly total;
    for (int s = 0; s <= std::min(d1, d2); ++s) {
        auto ite = R1.Epow[(size_t)s][I1].find((int)J1);
        if (ite == R1.Epow[(size_t)s][I1].end()) continue;
        auto itf = R2.Fpow[(size_t)s][I2].find((int)J2);
        if (itf == R2.Fpow[(size_t)s][I2].end()) continue;
        total += q_pow((long)s * (s - 1) / 2) * qmq.pow(s) * ite->second *
                 itf->second.divide_exact(qfact(s, 4));
    }
    // theta factor on the output weights
    return total * v_pow(2 * R1.wt[I1] * R2.wt[I2]);
}

} // namespace

LaurentPoly coR(const OqAlg& A, const OqElt& phi, const OqElt& psi) {
    LaurentPoly total;
    for (const auto& [m1, c1] : phi)
        for (const auto& [m2, c2] : psi) total += c1 * c2 * coR_mono(A, m1, m2);
    return total;
}

OqElt l01_mul(const OqAlg& A, const OqElt& phi, const OqElt& psi) {
    OqElt out;
    OqTens3 dphi = A.delta2(phi);
    OqTens3 dpsi = A.delta2(psi);
    for (const auto& [x, cx] : dphi) {
        const OqElt& sx3 = A.antipode_mono(x[2]);
        OqElt x2;
        x2.emplace(x[1], LaurentPoly::one());
        for (const auto& [y, cy] : dpsi) {
            OqElt y1, y3;
            y1.emplace(y[0], LaurentPoly::one());
            y3.emplace(y[2], LaurentPoly::one());
            LaurentPoly w = coR(A, y1, sx3) * coR(A, y3, x2) * cx * cy;
            if (w.is_zero()) continue;
            oq_axpy(out, w, A.mono_mul(x[0], y[1]));
        }
    }
    return out;
}

// ===========================================================================
// quantum traces
// ===========================================================================

OqElt qtrace(const OqAlg& A, int lambda) {
    OqElt out;
    if (lambda == 0) {
        out.emplace(0, LaurentPoly::one());
        return out;
    }
    const auto& R = A.rep(lambda);
    size_t dim = (size_t)1 << lambda;
    // columns: divided-power orbit of the highest-weight vector, then the
    // generators of the complement (invariant vector of the tensor square
    // inserted at each adjacent position)
    std::vector<std::vector<QRat>> cols;
    for (int k = 0; k <= lambda; ++k) {
        std::vector<QRat> w(dim);
        // column 0 of F^k (image of the highest-weight vector), divided by [k]!
        for (size_t P = 0; P < dim; ++P) {
            auto it = R.Fpow[(size_t)k][P].find(0);
            if (it != R.Fpow[(size_t)k][P].end()) w[P] = QRat(it->second.divide_exact(qfact(k, 4)));
        }
        cols.push_back(std::move(w));
    }
    size_t nw = cols.size();
    // u = v1 (x) v0 - q v0 (x) v1 inserted at legs (pos, pos+1)
    for (int pos = 0; pos + 1 < lambda; ++pos)
        for (size_t rest = 0; rest < ((size_t)1 << (lambda - 2)); ++rest) {
            std::vector<QRat> w(dim);
            // bit positions: leg 1 = MSB (bit lambda-1); legs pos+1, pos+2
            // (1-based) sit at bits lambda-1-pos, lambda-2-pos
            int bhi = lambda - 1 - pos, blo = lambda - 2 - pos;
            size_t base = 0;
            // distribute `rest` bits over the other legs
            int rb = 0;
            for (int b = lambda - 1; b >= 0; --b) {
                if (b == bhi || b == blo) continue;
                if ((rest >> rb) & 1u) base |= ((size_t)1 << b);
                ++rb;
            }
            size_t i10 = base | ((size_t)1 << bhi);
            size_t i01 = base | ((size_t)1 << blo);
            w[i10] = QRat(LaurentPoly::one());
            w[i01] = QRat(-q_pow(1));
            cols.push_back(std::move(w));
        }
    // Gauss-Jordan [cols | I] to express each basis vector, then keep the
    // component along the first nw columns
    size_t ncols = cols.size();
    std::vector<std::vector<QRat>> M(dim, std::vector<QRat>(ncols + dim));
    for (size_t c = 0; c < ncols; ++c)
        for (size_t r = 0; r < dim; ++r) M[r][c] = cols[c][r];
    for (size_t r = 0; r < dim; ++r) M[r][ncols + r] = QRat::one();
    std::vector<int> piv = qr_rref(M, ncols);
    if (piv.size() != dim) throw std::logic_error("qtrace: module decomposition failed");
    // P e_I = sum_k x_k w_k with x_k read from the pivot rows
    std::vector<std::vector<QRat>> P(dim, std::vector<QRat>(dim)); // P[out][in]
    for (size_t pr = 0; pr < piv.size(); ++pr) {
        if ((size_t)piv[pr] >= nw) continue;
        size_t k = (size_t)piv[pr];
        for (size_t I = 0; I < dim; ++I) {
            QRat xk = M[pr][ncols + I];
            if (xk.is_zero()) continue;
            for (size_t out_ = 0; out_ < dim; ++out_)
                if (!cols[k][out_].is_zero()) P[out_][I] = P[out_][I] + xk * cols[k][out_];
        }
    }
    // qTr(u) = Tr(rho(K) rho(u) P): coefficient of the word t_{I,J} is
    // q^{wt I} P[J][I]
    std::map<uint64_t, QRat> acc;
    for (size_t I = 0; I < dim; ++I)
        for (size_t J = 0; J < dim; ++J) {
            if (P[J][I].is_zero()) continue;
            QRat coeff = P[J][I] * QRat(q_pow(R.wt[I]));
            std::vector<int> letters;
            for (int b = lambda - 1; b >= 0; --b)
                letters.push_back((int)(((I >> b) & 1u) * 2 + ((J >> b) & 1u)));
            for (const auto& [m, c] : A.word_normal_form(letters)) {
                acc[m] = acc[m] + coeff * QRat(c);
            }
        }
    for (const auto& [m, c] : acc) {
        if (c.is_zero()) continue;
        out.emplace(m, c.to_laurent());
    }
    return out;
}

bool coad_invariant(const OqAlg& A, const OqElt& phi) {
    std::map<int, std::map<std::pair<size_t, size_t>, LaurentPoly>> blocks; // degree -> A[J][I]
    for (const auto& [m, c] : phi) {
        int d;
        size_t I, J;
        mono_IJ(A, m, d, I, J);
        auto& e = blocks[d][{J, I}];
        e += c;
    }
    for (const auto& [d, Am] : blocks) {
        const auto& R = A.rep(d);
        size_t dim = (size_t)1 << d;
        auto dense = [&](const LMat& S) {
            std::vector<std::vector<LaurentPoly>> D(dim, std::vector<LaurentPoly>(dim));
            for (size_t i = 0; i < dim; ++i)
                for (const auto& [j, v] : S[i]) D[i][(size_t)j] = v;
            return D;
        };
        std::vector<std::vector<LaurentPoly>> Amat(dim, std::vector<LaurentPoly>(dim));
        for (const auto& [ij, v] : Am) Amat[ij.first][ij.second] = v;
        auto E = dense(R.Epow[1]);
        auto F = dense(R.Fpow[1]);
        auto mm = [&](const std::vector<std::vector<LaurentPoly>>& X, const std::vector<std::vector<LaurentPoly>>& Y) {
            std::vector<std::vector<LaurentPoly>> Z(dim, std::vector<LaurentPoly>(dim));
            for (size_t i = 0; i < dim; ++i)
                for (size_t k = 0; k < dim; ++k) {
                    if (X[i][k].is_zero()) continue;
                    for (size_t j = 0; j < dim; ++j)
                        if (!Y[k][j].is_zero()) Z[i][j] += X[i][k] * Y[k][j];
                }
            return Z;
        };
        auto diagmul_l = [&](long sgn, const std::vector<std::vector<LaurentPoly>>& X) {
            // multiply on the left by rho(K^sgn)
            auto Z = X;
            for (size_t i = 0; i < dim; ++i)
                for (size_t j = 0; j < dim; ++j)
                    if (!Z[i][j].is_zero()) Z[i][j] *= q_pow(sgn * R.wt[i]);
            return Z;
        };
        auto diagmul_r = [&](long sgn, const std::vector<std::vector<LaurentPoly>>& X) {
            auto Z = X;
            for (size_t i = 0; i < dim; ++i)
                for (size_t j = 0; j < dim; ++j)
                    if (!Z[i][j].is_zero()) Z[i][j] *= q_pow(sgn * R.wt[j]);
            return Z;
        };
        auto is_zero = [&](const std::vector<std::vector<LaurentPoly>>& X) {
            for (auto& row : X)
                for (auto& e : row)
                    if (!e.is_zero()) return false;
            return true;
        };
        auto sub = [&](std::vector<std::vector<LaurentPoly>> X, const std::vector<std::vector<LaurentPoly>>& Y) {
            for (size_t i = 0; i < dim; ++i)
                for (size_t j = 0; j < dim; ++j) X[i][j] -= Y[i][j];
            return X;
        };
        // h = K: K^{-1} A K = A
        if (!is_zero(sub(diagmul_r(1, diagmul_l(-1, Amat)), Amat))) return false;
        // h = E: K^{-1} A E - E K^{-1} A = 0
        if (!is_zero(sub(diagmul_l(-1, mm(Amat, E)), mm(E, diagmul_l(-1, Amat))))) return false;
        // h = F: A F - K F A K^{-1} = 0
        if (!is_zero(sub(mm(Amat, F), diagmul_r(-1, mm(diagmul_l(1, F), Amat))))) return false;
    }
    return true;
}

// ===========================================================================
// quantum Killing form
// ===========================================================================

UKElt phi01_u(const OqAlg& A, const OqElt& phi) {
    UKElt out;
    auto addq = [&](uint64_t k, const QRat& v) {
        if (v.is_zero()) return;
        auto it = out.find(k);
        if (it == out.end())
            out.emplace(k, v);
        else {
            it->second = it->second + v;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto& [m, cm] : phi) {
        int d;
        size_t I, J;
        mono_IJ(A, m, d, I, J);
        const auto& R = A.rep(d);
        for (int s = 0; s <= d; ++s)
            for (const auto& [P, ve] : R.Epow[(size_t)s][I]) {
                long wtP = R.wt[(size_t)P];
                for (int t = 0; t <= d; ++t) {
                    auto itf = R.Fpow[(size_t)t][(size_t)P].find((int)J);
                    if (itf == R.Fpow[(size_t)t][(size_t)P].end()) continue;
                    // alpha(S(E^s) 1_wt F^t) / (rho_s rho_t) on the first leg,
                    // S(F^s) K_{2 wt} E^t on the second
                    // coefficients are taken in the rescaled basis
                    // S(((q-q^{-1})F)^s) K_{m w} ((q-q^{-1})E)^t used by the
                    // integral Killing form, which absorbs (q-q^{-1})^{s+t}
                    LaurentPoly coeff = cm * ve * itf->second.divide_exact(qfact(t, 4));
                    coeff = coeff.divide_exact(qfact(s, 4));
                    long ex = -(long)s * (s - 1) + (long)s * (s - 1) / 2 + (long)t * (t - 1) / 2 - (long)s * wtP;
                    coeff *= q_pow(ex);
                    if (s % 2) coeff = -coeff;
                    addq(uk_key(s, 2 * wtP, t), QRat(coeff));
                }
            }
    }
    return out;
}

QRat killing_pair(int s, long m, int t, const GammaMono& y) {
    int sig = y.t / 2;
    if (s != y.p || t != y.s) return QRat();
    QRat val = cartan_eval(y.p + y.e - sig, y.t, 2 * m);
    long ex = (long)y.p * (y.p - 1) - (long)s * (s - 1) / 2 - (long)t * (t - 1) / 2;
    LaurentPoly sc = q_pow(ex);
    if (y.p % 2) sc = -sc;
    return val * QRat(sc);
}

QRat killing_pair(const UKElt& x, const GammaMono& y) {
    QRat total;
    for (const auto& [k, c] : x) {
        int s, t;
        long m;
        uk_dec(k, s, m, t);
        total = total + c * killing_pair(s, m, t, y);
    }
    return total;
}

std::map<long, QRat> p_rho(const UKElt& x) {
    std::map<long, QRat> out;
    for (const auto& [k, c] : x) {
        int s, t;
        long m;
        uk_dec(k, s, m, t);
        if (s != 0 || t != 0) continue;
        QRat v = c * QRat(v_pow(-2 * m));
        if (v.is_zero()) continue;
        out[m] = out[m] + v;
        if (out[m].is_zero()) out.erase(m);
    }
    return out;
}

// ===========================================================================
// report suites
// ===========================================================================

namespace {

OqEltE oq_eps_mono(uint64_t m, long ell) {
    OqEltE r;
    r.emplace(m, CycNum::zeta_pow((unsigned long)ell, 0));
    return r;
}

bool oqe_eq(const OqEltE& a, const OqEltE& b) { return a == b; }

std::string oqe_str(const OqEltE& a) {
    std::ostringstream os;
    for (const auto& [m, c] : a) os << oq_mono_str(m) << " ";
    return os.str();
}

} // namespace

CheckReport z0_central_check(const OqAlg& A, long ell) {
    CheckReport rep;
    std::vector<uint64_t> zgens = {oq_key(0, (int)ell, 0, 0), oq_key(0, 0, (int)ell, 0), oq_key(0, 0, 0, (int)ell),
                                   oq_key((int)ell, 0, 0, 0)};
    std::vector<uint64_t> others;
    for (uint64_t m : oq_monomials(std::max(0, A.cap - (int)ell))) others.push_back(m);
    bool all = true;
    std::string wit;
    for (uint64_t z : zgens) {
        OqEltE ze = oq_eps_mono(z, ell);
        for (uint64_t m : others) {
            OqEltE me = oq_eps_mono(m, ell);
            if (!oqe_eq(A.mul_eps(ze, me, ell), A.mul_eps(me, ze, ell))) {
                all = false;
                wit = oq_mono_str(z) + " vs " + oq_mono_str(m);
            }
        }
    }
    rep.add("ell-th powers central at eps (deg <= cap)", all, wit);
    // negative control at generic q
    OqElt z, b;
    z.emplace(oq_key(0, (int)ell, 0, 0), LaurentPoly::one());
    b.emplace(oq_key(0, 0, 1, 0), LaurentPoly::one());
    rep.add("generic commutator nonzero (control)", !(A.mul(z, b) == A.mul(b, z)));
    return rep;
}

CheckReport cormatrix_trivial_on_z0(const OqAlg& A, SmallQG& Q) {
    CheckReport rep;
    long ell = Q.ell;
    std::vector<uint64_t> zgens = {oq_key(0, (int)ell, 0, 0), oq_key(0, 0, (int)ell, 0), oq_key(0, 0, 0, (int)ell),
                                   oq_key((int)ell, 0, 0, 0)};
    std::vector<uint64_t> sample = oq_monomials(std::min(A.cap, (int)ell));
    bool all = true;
    std::string wit;
    for (uint64_t z : zgens) {
        OqElt ze;
        ze.emplace(z, LaurentPoly::one());
        for (uint64_t m : sample) {
            OqElt me;
            me.emplace(m, LaurentPoly::one());
            CycNum lhs1 = eps_eval(coR(A, ze, me), ell);
            CycNum lhs2 = eps_eval(coR(A, me, ze), ell);
            CycNum want = eps_eval(A.counit(ze) * A.counit(me), ell);
            if (!(lhs1 == want && lhs2 == want)) {
                all = false;
                wit = oq_mono_str(z) + " vs " + oq_mono_str(m);
            }
        }
    }
    rep.add("co-R-matrix trivial against Z0 generators at eps", all, wit);

    // co-R-matrix realized by the R-matrix of the small quantum group
    const RMat& R = build_rmatrix(Q);
    int n = (int)Q.H.n;
    bool rall = true;
    std::string rwit;
    std::vector<uint64_t> gens = {oq_key(0, 1, 0, 0), oq_key(0, 0, 1, 0), oq_key(0, 0, 0, 1), oq_key(1, 0, 0, 0)};
    for (uint64_t g1 : gens)
        for (uint64_t g2 : gens) {
            OqElt p1, p2;
            p1.emplace(g1, LaurentPoly::one());
            p2.emplace(g2, LaurentPoly::one());
            CycNum lhs = eps_eval(coR(A, p1, p2), ell);
            SV pi1 = pi_project(A, p1, ell), pi2 = pi_project(A, p2, ell);
            CycNum rhs = CycNum::zero((unsigned long)ell);
            for (const auto& [k, c] : R.R) {
                uint64_t i = k / (uint64_t)n, j = k % (uint64_t)n;
                auto i1 = pi1.find(i);
                auto i2 = pi2.find(j);
                if (i1 == pi1.end() || i2 == pi2.end()) continue;
                rhs += c * i1->second * i2->second;
            }
            if (!(lhs == rhs)) {
                rall = false;
                rwit = oq_mono_str(g1) + " (x) " + oq_mono_str(g2);
            }
        }
    rep.add("co-R-matrix equals (pi (x) pi)(R) on generator pairs", rall, rwit);

    // braided product degenerates to the plain product against Z0 at eps
    bool ball = true;
    std::string bwit;
    std::vector<uint64_t> msample = {0, oq_key(0, 1, 0, 0), oq_key(0, 0, 1, 0), oq_key(0, 0, 0, 1), oq_key(1, 0, 0, 0),
                                     oq_key(0, 0, 1, 1)};
    for (uint64_t z : zgens) {
        if ((int)oq_deg(z) + 2 > A.cap) continue;
        OqElt ze;
        ze.emplace(z, LaurentPoly::one());
        for (uint64_t m : msample) {
            if (oq_deg(z) + oq_deg(m) > A.cap) continue;
            OqElt me;
            me.emplace(m, LaurentPoly::one());
            OqEltE lhs = oq_spec(l01_mul(A, ze, me), ell);
            OqEltE rhs = A.mul_eps(oq_spec(ze, ell), oq_spec(me, ell), ell);
            if (!oqe_eq(lhs, rhs)) {
                ball = false;
                bwit = oq_mono_str(z) + " . " + oq_mono_str(m);
            }
        }
    }
    rep.add("braided product collapses on Z0 at eps", ball, bwit);
    return rep;
}

CheckReport harish_chandra_check(const OqAlg& A, int lambda) {
    CheckReport rep;
    OqElt qt = qtrace(A, lambda);
    rep.add("quantum trace coadjoint-invariant", coad_invariant(A, qt));
    // Cartan image after the half-sum shift: sum over the weights of the
    // simple module
    std::map<long, QRat> hc = p_rho(phi01_u(A, qt));
    std::map<long, QRat> want;
    for (int k = 0; k <= lambda; ++k) want[2L * (lambda - 2 * k)] = want[2L * (lambda - 2 * k)] + QRat::one();
    bool ok = true;
    for (const auto& [m, c] : want)
        if (hc.find(m) == hc.end() || !(hc[m] == c)) ok = false;
    for (const auto& [m, c] : hc)
        if (want.find(m) == want.end()) ok = false;
    rep.add("Cartan part of the transported trace = character square support", ok);
    if (lambda == 1) {
        OqElt sq = A.mul(qt, qt);
        OqElt fus = qtrace(A, 2);
        oq_axpy(fus, LaurentPoly::one(), qtrace(A, 0));
        rep.add("fusion: qTr_1^2 = qTr_2 + qTr_0", sq == fus);
    }
    return rep;
}

CheckReport killing_phi01_check(const OqAlg& A, long ell, int bideg_cap) {
    CheckReport rep;
    int w = bideg_cap;
    auto monos = oq_monomials(std::min(A.cap, w));
    std::vector<GammaMono> window;
    for (int p = 0; p <= w; ++p)
        for (int e = 0; e < 2; ++e)
            for (int t = 0; t <= w; ++t)
                for (int s = 0; s <= w; ++s) window.push_back(GammaMono{p, e, t, s});
    bool gen_ok = true, eps_ok = true;
    std::string gwit, ewit;
    for (uint64_t m : monos) {
        OqElt phi;
        phi.emplace(m, LaurentPoly::one());
        UKElt im = phi01_u(A, phi);
        for (const auto& y : window) {
            LaurentPoly lhs;
            try {
                lhs = killing_pair(im, y).to_laurent();
            } catch (const std::exception&) {
                gen_ok = false;
                gwit = oq_mono_str(m);
                continue;
            }
            LaurentPoly rhs = pair_eval(A, phi, y);
            if (!(lhs == rhs)) {
                gen_ok = false;
                gwit = oq_mono_str(m);
            } else if (!(eps_eval(lhs, ell) == eps_eval(rhs, ell))) {
                eps_ok = false;
                ewit = oq_mono_str(m);
            }
        }
    }
    rep.add("Killing transport identity at generic q", gen_ok, gwit);
    rep.add("Killing transport identity at eps", gen_ok && eps_ok, ewit);

    // nondegeneracy (generic only): the pairing block-diagonalizes over the
    // E/F exponents, so it suffices to certify the Cartan block; a full-rank
    // rational evaluation certifies full generic rank
    {
        int tmax = w;
        int cols = 2 * (tmax + 1);
        bool full = false;
        for (long v0 : {2L, 3L}) {
            std::vector<std::vector<Rational>> G;
            for (int m = -(tmax + 1); m <= tmax; ++m) {
                std::vector<Rational> row;
                for (int e = 0; e < 2; ++e)
                    for (int t = 0; t <= tmax; ++t) {
                        QRat val = cartan_eval(e - t / 2, t, 2 * m);
                        // evaluate at v = v0
                        auto evl = [&](const LaurentPoly& p) {
                            Rational r = 0;
                            for (const auto& [ee, cc] : p.c) {
                                Rational pw = 1;
                                for (long u = 0; u < (ee < 0 ? -ee : ee); ++u) pw *= v0;
                                Rational term = cc;
                                if (ee < 0) term /= pw; else term *= pw;
                                r += term;
                            }
                            return r;
                        };
                        row.push_back(evl(val.num) / evl(val.den));
                    }
                G.push_back(std::move(row));
            }
            // rational Gaussian rank
            size_t rank = 0;
            for (size_t c = 0; c < (size_t)cols && rank < G.size(); ++c) {
                size_t sel = G.size();
                for (size_t i = rank; i < G.size(); ++i)
                    if (G[i][c] != 0) {
                        sel = i;
                        break;
                    }
                if (sel == G.size()) continue;
                std::swap(G[rank], G[sel]);
                for (size_t i = rank + 1; i < G.size(); ++i) {
                    if (G[i][c] == 0) continue;
                    Rational f = G[i][c] / G[rank][c];
                    for (size_t j = c; j < (size_t)cols; ++j) G[i][j] -= f * G[rank][j];
                }
                ++rank;
            }
            if ((int)rank == cols) {
                full = true;
                break;
            }
        }
        rep.add("Killing form nondegenerate at generic q (Cartan block, rank certificate)", full);
    }

    // orthogonality of the ell-th-power central part against ker(Fr)
    {
        bool ok = true;
        std::string wit;
        std::vector<std::array<long, 3>> zside = {
            {ell, 0, 0}, {0, 0, ell}, {0, 2 * ell, 0}, {0, -2 * ell, 0}, {ell, 2 * ell, ell}, {ell, 0, ell}};
        std::vector<GammaElt> kerfr;
        for (int p = 0; p <= (int)ell; ++p)
            for (int e = 0; e < 2; ++e)
                for (int t = 0; t <= (int)ell; ++t)
                    for (int s = 0; s <= (int)ell; ++s) {
                        if (p % ell || t % ell || s % ell) {
                            GammaElt k;
                            k.emplace(gamma_key(GammaMono{p, e, t, s}), LaurentPoly::one());
                            kerfr.push_back(std::move(k));
                        } else if (e == 1) {
                            GammaElt k;
                            k.emplace(gamma_key(GammaMono{p, 1, t, s}), LaurentPoly::one());
                            k.emplace(gamma_key(GammaMono{p, 0, t, s}), -LaurentPoly::one());
                            kerfr.push_back(std::move(k));
                        }
                    }
        for (const auto& z : zside)
            for (const auto& k : kerfr) {
                CycNum tot = CycNum::zero((unsigned long)ell);
                for (const auto& [gk, gc] : k) {
                    QRat v = killing_pair((int)z[0], z[1], (int)z[2], gamma_dec(gk));
                    tot += qr_eps(v * QRat(gc), ell);
                }
                if (!tot.is_zero()) {
                    ok = false;
                    wit = "z = (" + std::to_string(z[0]) + "," + std::to_string(z[1]) + "," + std::to_string(z[2]) + ")";
                }
            }
        rep.add("ell-th-power central part orthogonal to ker(Fr) at eps", ok, wit);
    }

    // the quantum trace of the ell-th fundamental multiple is orthogonal to
    // ker(Fr) as well (its transport lands in the Frobenius center)
    if (A.cap >= (int)ell) {
        UKElt im = phi01_u(A, qtrace(A, (int)ell));
        bool ok = true;
        for (int p = 0; p <= (int)ell; ++p)
            for (int e = 0; e < 2; ++e)
                for (int t = 0; t <= (int)ell; ++t)
                    for (int s = 0; s <= (int)ell; ++s) {
                        if (!(p % ell || t % ell || s % ell)) continue;
                        QRat v = killing_pair(im, GammaMono{p, e, t, s});
                        if (!qr_eps(v, ell).is_zero()) ok = false;
                    }
        rep.add("transported qTr_{ell} orthogonal to ker(Fr) at eps", ok);
    }
    return rep;
}

CheckReport exact_sequence_check(const OqAlg& A, SmallQG& Q, int cap) {
    CheckReport rep;
    long ell = Q.ell;
    long n = (long)Q.H.n;
    auto monos = oq_monomials(cap);

    // surjectivity: rank of pi on the degree filtration
    CycMat Mpi;
    for (uint64_t m : monos) {
        OqElt phi;
        phi.emplace(m, LaurentPoly::one());
        SV col = pi_project(A, phi, ell);
        std::vector<CycNum> row((size_t)n, CycNum::zero((unsigned long)ell));
        for (const auto& [k, c] : col) row[(size_t)k] = c;
        Mpi.push_back(std::move(row));
    }
    long rk = cyc_rank(Mpi, (unsigned long)ell, nullptr);
    rep.add("pi surjective onto the small dual (rank " + std::to_string(rk) + "/" + std::to_string(n) + ")",
            rk == n);

    // algebra morphism on sampled pairs, against the one-puncture graph
    // algebra of the small quantum group
    {
        build_rmatrix(Q);
        GraphAlgebra G = make_graph_algebra(Q.H, Q.R, 0, 1);
        bool ok = true;
        std::string wit;
        std::vector<uint64_t> sample = {oq_key(0, 1, 0, 0), oq_key(0, 0, 1, 0), oq_key(0, 0, 0, 1),
                                        oq_key(1, 0, 0, 0), oq_key(0, 1, 1, 0), oq_key(0, 0, 1, 1)};
        for (uint64_t m1 : sample)
            for (uint64_t m2 : sample) {
                if (oq_deg(m1) + oq_deg(m2) > cap) continue;
                OqElt p1, p2;
                p1.emplace(m1, LaurentPoly::one());
                p2.emplace(m2, LaurentPoly::one());
                SV lhs = pi_project(A, l01_mul(A, p1, p2), ell);
                SV rhs = graph_mul(G, pi_project(A, p1, ell), pi_project(A, p2, ell));
                if (!sv_eq(lhs, rhs)) {
                    ok = false;
                    wit = oq_mono_str(m1) + " . " + oq_mono_str(m2);
                }
            }
        rep.add("pi intertwines the braided products (sampled pairs)", ok, wit);
    }

    // kernel of pi = ideal generated by the augmentation part of the
    // Frobenius image, inside the degree filtration
    {
        std::vector<OqEltE> gens;
        for (uint64_t g : {oq_key(0, (int)ell, 0, 0), oq_key(0, 0, (int)ell, 0), oq_key(0, 0, 0, (int)ell),
                           oq_key((int)ell, 0, 0, 0)}) {
            OqEltE z = oq_eps_mono(g, ell);
            int da, i, j, k;
            oq_dec(g, da, i, j, k);
            if (j == 0 && k == 0) { // counit 1: subtract the unit
                auto it = z.find(0);
                CycNum one = CycNum::zeta_pow((unsigned long)ell, 0);
                if (it == z.end())
                    z.emplace(0, -one);
                else
                    it->second -= one;
            }
            gens.push_back(std::move(z));
        }
        std::map<uint64_t, size_t> colof;
        for (size_t i = 0; i < monos.size(); ++i) colof[monos[i]] = i;
        CycMat W;
        bool inker = true;
        for (const auto& z : gens)
            for (uint64_t m : oq_monomials(cap - (int)ell)) {
                OqEltE w = A.mul_eps(z, oq_eps_mono(m, ell), ell);
                std::vector<CycNum> row(monos.size(), CycNum::zero((unsigned long)ell));
                for (const auto& [mm, c] : w) row[colof.at(mm)] = c;
                W.push_back(std::move(row));
                if (!pi_project(A, w, ell).empty()) inker = false;
            }
        rep.add("ideal generated by the Frobenius augmentation part lies in ker(pi)", inker);
        long kdim = (long)monos.size() - rk;
        long wrk = cyc_rank(W, (unsigned long)ell, nullptr);
        rep.add("ideal fills ker(pi) on the filtration (dim " + std::to_string(wrk) + "/" + std::to_string(kdim) + ")",
                wrk == kdim);
    }
    return rep;
}

// ===========================================================================
// classical moment map
// ===========================================================================

Rational classical_mm(const ClElt& f, const std::vector<Mat2>& mats, int g, int n) {
    if ((int)mats.size() != 2 * g + n) throw std::invalid_argument("classical_mm: wrong number of matrices");
    auto det = [](const Mat2& M) { return M[0][0] * M[1][1] - M[0][1] * M[1][0]; };
    auto mul2 = [](const Mat2& X, const Mat2& Y) {
        Mat2 Z;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) Z[i][j] = X[i][0] * Y[0][j] + X[i][1] * Y[1][j];
        return Z;
    };
    auto inv2 = [&](const Mat2& M) {
        Mat2 Z;
        Z[0][0] = M[1][1];
        Z[0][1] = -M[0][1];
        Z[1][0] = -M[1][0];
        Z[1][1] = M[0][0];
        return Z;
    };
    for (const auto& M : mats)
        if (det(M) != 1) throw std::invalid_argument("classical_mm: matrix not in SL2");
    Mat2 acc = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
    for (int h = 0; h < g; ++h) {
        const Mat2& B = mats[(size_t)(2 * h)];
        const Mat2& Am = mats[(size_t)(2 * h + 1)];
        acc = mul2(acc, mul2(mul2(B, inv2(Am)), mul2(inv2(B), Am)));
    }
    for (int j = 0; j < n; ++j) acc = mul2(acc, mats[(size_t)(2 * g + j)]);
    Rational total = 0;
    for (const auto& [m, c] : f) {
        int da, i, jj, k;
        oq_dec(m, da, i, jj, k);
        Rational val = 1;
        for (int u = 0; u < i; ++u) val *= acc[0][0];
        for (int u = 0; u < jj; ++u) val *= acc[0][1];
        for (int u = 0; u < k; ++u) val *= acc[1][0];
        for (int u = 0; u < da; ++u) val *= acc[1][1];
        total += c * val;
    }
    return total;
}

} // namespace qga
