#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qga/cyclotomic.hpp"
#include "qga/laurent.hpp"

namespace qga {

// Weight in the fundamental-weight basis of the weight lattice P.
struct Weight {
    std::vector<long> coords;

    bool operator==(const Weight& o) const { return coords == o.coords; }
    Weight operator+(const Weight& o) const {
        Weight r = *this;
        for (size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
        return r;
    }
    Weight operator-(const Weight& o) const {
        Weight r = *this;
        for (size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
        return r;
    }
    Weight scaled(long k) const {
        Weight r = *this;
        for (auto& c : r.coords) c *= k;
        return r;
    }
};

// Root datum of a simple Lie algebra of rank m. The pairing (.,.) on P
// takes values in (1/D)Z; we store the integer matrix D*(w_i, w_j) so all
// arithmetic stays over Z.
struct RootDatum {
    char type_letter;
    int rank;                              // m
    std::vector<std::vector<long>> cartan; // a_ij
    std::vector<long> d;                   // d_i
    long D;                                // smallest integer with D*(P,P) integral
    std::vector<int> w0_word;              // reduced word for w0, length N
    // positive roots beta_1..beta_N in the simple-root basis, in the
    // normal order determined by w0_word
    std::vector<std::vector<long>> pos_roots;
    std::vector<std::vector<long>> pairing_scaled; // D*(w_i, w_j)

    int num_pos_roots() const { return (int)pos_roots.size(); }
    int dim_g() const { return 2 * num_pos_roots() + rank; }

    // Convention: a_ij = (alpha_i, alpha_j)/d_i, so (alpha_i, alpha_j) =
    // d_i a_ij is symmetric. In the fundamental-weight basis,
    // alpha_i = sum_j a_ji w_j.
    Weight simple_root(int i) const {
        Weight w;
        w.coords.assign(rank, 0);
        for (int j = 0; j < rank; ++j) w.coords[j] = cartan[j][i];
        return w;
    }
    Weight fundamental_weight(int i) const {
        Weight w;
        w.coords.assign(rank, 0);
        w.coords[i] = 1;
        return w;
    }
    Weight rho() const { // half-sum of positive roots = sum of fundamental weights
        Weight w;
        w.coords.assign(rank, 1);
        return w;
    }
    Weight root_to_weight(const std::vector<long>& root_coords) const {
        Weight w;
        w.coords.assign(rank, 0);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) w.coords[j] += root_coords[i] * cartan[j][i];
        return w;
    }

    // D*(lambda, mu), exact integer
    long pair_scaled(const Weight& a, const Weight& b) const {
        long s = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) s += a.coords[i] * pairing_scaled[i][j] * b.coords[j];
        return s;
    }

    // (lambda, alpha_i) is always an integer multiple of ... in general it
    // lies in Z*d_i/1? For lambda in P, (lambda, alpha_i) = lambda_i d_i.
    long pair_with_simple(const Weight& lam, int i) const {
        return lam.coords[i] * d[i];
    }

    bool is_g2() const { return type_letter == 'G'; }
};

namespace detail {

inline void apply_reflection(const RootDatum& rd, int i, std::vector<long>& root) {
    // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i in simple-root coords;
    // <beta, alpha_i^vee> = sum_j beta_j a_ij with our a_ij convention
    long pairing = 0;
    for (int j = 0; j < rd.rank; ++j) pairing += root[j] * rd.cartan[i][j];
    root[i] -= pairing;
}

} // namespace detail

// Supported construction: A1, A2, B2 (=C2), G2; other A_n provided for
// convenience of the admissibility queries.
inline RootDatum build_root_datum(char type_letter, int rank) {
    RootDatum rd;
    rd.type_letter = type_letter;
    rd.rank = rank;
    if (type_letter == 'A' && rank == 1) {
        rd.cartan = {{2}};
        rd.d = {1};
        rd.D = 2;
        rd.w0_word = {0};
        rd.pairing_scaled = {{1}}; // D*(w,w) = 2 * 1/2
    } else if (type_letter == 'A' && rank == 2) {
        rd.cartan = {{2, -1}, {-1, 2}};
        rd.d = {1, 1};
        rd.D = 3;
        rd.w0_word = {0, 1, 0};
        // (w_i,w_j): [[2/3,1/3],[1/3,2/3]] -> D=3 scaling
        rd.pairing_scaled = {{2, 1}, {1, 2}};
    } else if ((type_letter == 'B' || type_letter == 'C') && rank == 2) {
        // convention: alpha_1 short (d_1=1), alpha_2 long (d_2=2)
        rd.cartan = {{2, -2}, {-1, 2}};
        rd.d = {1, 2};
        rd.D = 2;
        rd.w0_word = {0, 1, 0, 1};
        // Gram of fundamental weights: [[1,1],[1,2]] -> pairing_scaled = D*that
        rd.pairing_scaled = {{2, 2}, {2, 4}};
    } else if (type_letter == 'G' && rank == 2) {
        // convention: alpha_1 short (d_1=1), alpha_2 long (d_2=3)
        rd.cartan = {{2, -3}, {-1, 2}};
        rd.d = {1, 3};
        rd.D = 1;
        rd.w0_word = {0, 1, 0, 1, 0, 1};
        // (w_1,w_1)=2, (w_1,w_2)=3, (w_2,w_2)=6; D=1
        rd.pairing_scaled = {{2, 3}, {3, 6}};
    } else if (type_letter == 'A' && rank >= 3) {
        rd.cartan.assign(rank, std::vector<long>(rank, 0));
        for (int i = 0; i < rank; ++i) {
            rd.cartan[i][i] = 2;
            if (i > 0) rd.cartan[i][i - 1] = -1;
            if (i + 1 < rank) rd.cartan[i][i + 1] = -1;
        }
        rd.d.assign(rank, 1);
        rd.D = rank + 1;
        // (w_i, w_j) = min(i,j)*(n+1-max(i,j))/(n+1), 1-based
        rd.pairing_scaled.assign(rank, std::vector<long>(rank, 0));
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                rd.pairing_scaled[i][j] =
                    (long)(std::min(i, j) + 1) * (rank - std::max(i, j));
        // reduced word for w0: (1,2,..,n, 1,2,..,n-1, ..., 1), 0-based
        for (int k = rank; k >= 1; --k)
            for (int i = 0; i < k; ++i) rd.w0_word.push_back(i);
    } else {
        throw std::invalid_argument(
            "unsupported simple type; supported: A1, A2, B2/C2, G2 (A_n partially)");
    }

    // positive roots in the normal order of the reduced word:
    // beta_k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k})
    int N = (int)rd.w0_word.size();
    rd.pos_roots.clear();
    for (int k = 0; k < N; ++k) {
        std::vector<long> root(rd.rank, 0);
        root[rd.w0_word[k]] = 1;
        for (int j = k - 1; j >= 0; --j) detail::apply_reflection(rd, rd.w0_word[j], root);
        rd.pos_roots.push_back(root);
    }
    return rd;
}

inline bool is_admissible(long ell, const RootDatum& rd) {
    return admissible_order(ell, rd.D, rd.is_g2());
}

// ---- q-combinatorics ------------------------------------------------------
// All functions return Laurent polynomials in the generic variable; `step`
// is the exponent of the ambient variable representing one power of the
// base q in use (e.g. step = D when the ambient variable is q_D and the
// base is q = q_D^D, step = D*d_i for q_i).

inline LaurentPoly qint(long k, long step = 1) {
    // [k]_q = (q^k - q^{-k})/(q - q^{-1}) = q^{k-1} + q^{k-3} + ... + q^{1-k}
    LaurentPoly r;
    if (k < 0) return -qint(-k, step);
    for (long e = k - 1; e >= 1 - k; e -= 2) r += LaurentPoly::var_pow(e * step);
    return r;
}

inline LaurentPoly qfact(long k, long step = 1) {
    LaurentPoly r = LaurentPoly::one();
    for (long i = 2; i <= k; ++i) r *= qint(i, step);
    return r;
}

// [x; t]_q at x = q^m: product_{s=0..t-1} (q^{m-s} - q^{s-m}) / (q^{s+1} - q^{-s-1})
inline LaurentPoly qbinom_bracket(long m, long t, long step = 1) {
    if (t < 0) throw std::invalid_argument("qbinom_bracket: t >= 0 required");
    LaurentPoly num = LaurentPoly::one();
    LaurentPoly den = LaurentPoly::one();
    for (long s = 0; s < t; ++s) {
        num *= LaurentPoly::var_pow((m - s) * step) - LaurentPoly::var_pow((s - m) * step);
        den *= LaurentPoly::var_pow((s + 1) * step) - LaurentPoly::var_pow(-(s + 1) * step);
    }
    return num.divide_exact(den);
}

// (x; t)_q at x = q^m: product_{s=0..t-1} (q^{m-s} - 1) / (q^{s+1} - 1)
inline LaurentPoly qbinom_paren(long m, long t, long step = 1) {
    if (t < 0) throw std::invalid_argument("qbinom_paren: t >= 0 required");
    LaurentPoly num = LaurentPoly::one();
    LaurentPoly den = LaurentPoly::one();
    for (long s = 0; s < t; ++s) {
        num *= LaurentPoly::var_pow((m - s) * step) - LaurentPoly::one();
        den *= LaurentPoly::var_pow((s + 1) * step) - LaurentPoly::one();
    }
    return num.divide_exact(den);
}

} // namespace qga
