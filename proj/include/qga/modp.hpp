#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qga/cyclotomic.hpp"

namespace qga {

// ---------------------------------------------------------------------------
// Arithmetic mod a word-sized prime p with p = 1 (mod ell), used for rank /
// nullity certificates: reducing zeta to an order-ell element of F_p* gives a
// ring morphism Z[zeta] (localized away from p) -> F_p, so
//   rank_p(M) <= rank(M)   and   nullity_p(M) >= nullity(M).
// Full rank mod p therefore certifies full rank exactly, and a mod-p nullity
// equal to the number of independent exact solutions already in hand
// certifies the exact nullity.
// ---------------------------------------------------------------------------

inline int64_t fp_mul(int64_t a, int64_t b, int64_t p) {
    return (int64_t)((__int128)a * b % p);
}
inline int64_t fp_add(int64_t a, int64_t b, int64_t p) {
    int64_t r = a + b;
    return r >= p ? r - p : r;
}
inline int64_t fp_sub(int64_t a, int64_t b, int64_t p) {
    int64_t r = a - b;
    return r < 0 ? r + p : r;
}
inline int64_t fp_pow(int64_t a, int64_t e, int64_t p) {
    int64_t r = 1 % p;
    a %= p;
    for (; e > 0; e >>= 1) {
        if (e & 1) r = fp_mul(r, a, p);
        a = fp_mul(a, a, p);
    }
    return r;
}
inline int64_t fp_inv(int64_t a, int64_t p) {
    if (a % p == 0) throw std::invalid_argument("fp_inv: zero");
    return fp_pow(a, p - 2, p);
}

// smallest prime p > lo with p = 1 (mod ell); trial division (p stays small)
inline int64_t fp_find_prime(unsigned long ell, int64_t lo = 1000000) {
    auto is_prime = [](int64_t m) {
        if (m < 2) return false;
        for (int64_t d = 2; d * d <= m; ++d)
            if (m % d == 0) return false;
        return true;
    };
    int64_t p = lo + 1;
    p += (ell - (p - 1) % ell) % ell; // p = 1 (mod ell)
    while (!is_prime(p)) p += (int64_t)ell;
    return p;
}

// an element of exact multiplicative order ell in F_p*
inline int64_t fp_root_of_unity(unsigned long ell, int64_t p) {
    if ((p - 1) % (int64_t)ell != 0) throw std::invalid_argument("fp_root_of_unity: p != 1 mod ell");
    for (int64_t a = 2; a < p; ++a) {
        int64_t w = fp_pow(a, (p - 1) / (int64_t)ell, p);
        if (w == 1) continue;
        bool primitive = true;
        // ell is an odd prime in every use below, but check all proper divisors anyway
        for (unsigned long d = 1; d < ell; ++d)
            if (ell % d == 0 && fp_pow(w, (int64_t)d, p) == 1) { primitive = false; break; }
        if (primitive && fp_pow(w, (int64_t)ell, p) == 1) return w;
    }
    throw std::runtime_error("fp_root_of_unity: not found");
}

// reduction Q -> F_p (throws if p divides the denominator)
inline int64_t fp_of_rational(const Rational& r, int64_t p) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    Int pp = p;
    int64_t n = (int64_t)(((num % pp) + pp) % pp);
    int64_t d = (int64_t)(((den % pp) + pp) % pp);
    if (d == 0) throw std::invalid_argument("fp_of_rational: denominator divisible by p");
    return fp_mul(n, fp_inv(d, p), p);
}

// reduction Z[zeta] -> F_p along zeta -> omega
struct FpReducer {
    int64_t p = 0;
    unsigned long ell = 0;
    std::vector<int64_t> zpow; // omega^k for k < phi(ell)

    FpReducer() = default;
    FpReducer(unsigned long ell_, int64_t p_) : p(p_), ell(ell_) {
        int64_t w = fp_root_of_unity(ell_, p_);
        unsigned long phi = CycNum::zero(ell_).coeffs.size();
        zpow.resize(phi);
        int64_t cur = 1;
        for (unsigned long k = 0; k < phi; ++k) {
            zpow[k] = cur;
            cur = fp_mul(cur, w, p);
        }
    }
    int64_t operator()(const CycNum& c) const {
        int64_t r = 0;
        for (size_t k = 0; k < c.coeffs.size(); ++k)
            if (!c.coeffs[k].is_zero()) r = fp_add(r, fp_mul(fp_of_rational(c.coeffs[k], p), zpow[k], p), p);
        return r;
    }
};

// dense Gaussian elimination mod p; returns rank. If kernel != nullptr a
// basis of {x : M x = 0} is appended.
inline long fp_rank(std::vector<std::vector<int64_t>> M, int64_t p,
                    std::vector<std::vector<int64_t>>* kernel = nullptr) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    std::vector<long> pivot_of_col(cols, -1);
    long rank = 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && M[pr][c] % p == 0) ++pr;
        if (pr == rows) continue;
        std::swap(M[r], M[pr]);
        int64_t inv = fp_inv(M[r][c], p);
        for (size_t j = c; j < cols; ++j) M[r][j] = fp_mul(M[r][j], inv, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            int64_t f = M[i][c] % p;
            if (f == 0) continue;
            for (size_t j = c; j < cols; ++j) M[i][j] = fp_sub(M[i][j], fp_mul(f, M[r][j], p), p);
        }
        pivot_of_col[c] = (long)r;
        ++r;
        ++rank;
    }
    if (kernel) {
        for (size_t c = 0; c < cols; ++c) {
            if (pivot_of_col[c] >= 0) continue;
            std::vector<int64_t> v(cols, 0);
            v[c] = 1;
            for (size_t cc = 0; cc < cols; ++cc)
                if (pivot_of_col[cc] >= 0) v[cc] = fp_sub(0, M[(size_t)pivot_of_col[cc]][c], p);
            kernel->push_back(std::move(v));
        }
    }
    return rank;
}

// sparse-column rank mod p: columns are (row index, value) lists; useful when
// the row space is huge (e.g. maps into End spaces).
using FpCol = std::vector<std::pair<uint64_t, int64_t>>;

inline long fp_rank_sparse(std::vector<FpCol> cols, int64_t p) {
    // forward elimination: keep reduced pivots, reduce each new column
    struct Pivot {
        uint64_t row;
        FpCol col; // normalized: value at `row` is 1
    };
    std::vector<Pivot> pivots;
    auto get = [](const FpCol& c, uint64_t row) -> int64_t {
        for (const auto& [r, v] : c)
            if (r == row) return v;
        return 0;
    };
    long rank = 0;
    for (auto& c : cols) {
        std::sort(c.begin(), c.end());
        FpCol cur = c;
        for (const auto& pv : pivots) {
            int64_t f = get(cur, pv.row);
            if (f == 0) continue;
            // cur -= f * pv.col (merge of sorted lists)
            FpCol out;
            out.reserve(cur.size() + pv.col.size());
            size_t i = 0, j = 0;
            while (i < cur.size() || j < pv.col.size()) {
                if (j == pv.col.size() || (i < cur.size() && cur[i].first < pv.col[j].first)) {
                    out.push_back(cur[i++]);
                } else if (i == cur.size() || pv.col[j].first < cur[i].first) {
                    out.emplace_back(pv.col[j].first, fp_sub(0, fp_mul(f, pv.col[j].second, p), p));
                    ++j;
                } else {
                    int64_t v = fp_sub(cur[i].second, fp_mul(f, pv.col[j].second, p), p);
                    if (v) out.emplace_back(cur[i].first, v);
                    ++i;
                    ++j;
                }
            }
            out.erase(std::remove_if(out.begin(), out.end(), [](auto& e) { return e.second == 0; }), out.end());
            cur.swap(out);
        }
        if (cur.empty()) continue;
        int64_t inv = fp_inv(cur.front().second, p);
        for (auto& e : cur) e.second = fp_mul(e.second, inv, p);
        pivots.push_back({cur.front().first, std::move(cur)});
        ++rank;
    }
    return rank;
}

} // namespace qga
