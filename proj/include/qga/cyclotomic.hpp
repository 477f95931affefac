#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qga/laurent.hpp"
#include "qga/rational.hpp"

namespace qga {

namespace detail {

// dense polynomial over Q, index = degree
using DensePoly = std::vector<Rational>;

inline void dp_trim(DensePoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline DensePoly dp_mul(const DensePoly& a, const DensePoly& b) {
    if (a.empty() || b.empty()) return {};
    DensePoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    dp_trim(r);
    return r;
}

// exact division, throws on nonzero remainder
inline DensePoly dp_div(DensePoly num, const DensePoly& den) {
    DensePoly q(num.size(), Rational(0));
    while (num.size() >= den.size() && !num.empty()) {
        Rational f = num.back() / den.back();
        size_t off = num.size() - den.size();
        q[off] = f;
        for (size_t i = 0; i < den.size(); ++i) num[off + i] -= f * den[i];
        dp_trim(num);
        if (!num.empty() && num.size() >= den.size() && num.back() == 0) dp_trim(num);
    }
    if (!num.empty()) throw std::domain_error("dp_div: inexact division");
    dp_trim(q);
    return q;
}

inline DensePoly dp_rem(DensePoly num, const DensePoly& den) {
    while (num.size() >= den.size() && !num.empty()) {
        Rational f = num.back() / den.back();
        size_t off = num.size() - den.size();
        for (size_t i = 0; i < den.size(); ++i) num[off + i] -= f * den[i];
        dp_trim(num);
    }
    return num;
}

inline unsigned long euler_phi(unsigned long n) {
    unsigned long r = n;
    for (unsigned long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

// Phi_n by dividing x^n - 1 by the cyclotomic polynomials of proper divisors.
inline DensePoly cyclotomic_poly(unsigned long n) {
    DensePoly num(n + 1, Rational(0));
    num[0] = -1;
    num[n] = 1;
    for (unsigned long d = 1; d < n; ++d)
        if (n % d == 0) num = dp_div(num, cyclotomic_poly(d));
    return num;
}

struct CycContext {
    unsigned long ell;
    unsigned long phi;
    DensePoly modulus;               // Phi_ell, monic, degree phi
    std::vector<DensePoly> xpow;     // x^k mod Phi_ell for k < 2*phi

    explicit CycContext(unsigned long l) : ell(l) {
        if (l < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
        modulus = cyclotomic_poly(l);
        phi = modulus.size() - 1;
        xpow.resize(2 * phi);
        for (unsigned long k = 0; k < 2 * phi; ++k) {
            DensePoly p(k + 1, Rational(0));
            p[k] = 1;
            xpow[k] = dp_rem(std::move(p), modulus);
            xpow[k].resize(phi, Rational(0));
        }
    }
};

inline const CycContext& cyc_context(unsigned long ell) {
    static std::map<unsigned long, std::unique_ptr<CycContext>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ell);
    if (it == cache.end()) it = cache.emplace(ell, std::make_unique<CycContext>(ell)).first;
    return *it->second;
}

} // namespace detail

// Element of Q(zeta_ell), stored as the canonical residue mod Phi_ell:
// coeffs has length phi(ell), coeffs[k] multiplying zeta^k.
class CycNum {
public:
    unsigned long ell = 1;
    std::vector<Rational> coeffs; // length phi(ell)

    CycNum() : ell(1), coeffs(1, Rational(0)) {}
    CycNum(unsigned long l, const Rational& r) : ell(l) {
        coeffs.assign(detail::cyc_context(l).phi, Rational(0));
        coeffs[0] = r;
    }
    static CycNum zero(unsigned long l) { return CycNum(l, 0); }
    static CycNum one(unsigned long l) { return CycNum(l, 1); }

    // zeta^k, any integer k
    static CycNum zeta_pow(unsigned long l, long k) {
        const auto& ctx = detail::cyc_context(l);
        long kk = k % (long)l;
        if (kk < 0) kk += (long)l;
        CycNum r(l, 0);
        if ((unsigned long)kk < ctx.phi) {
            r.coeffs[kk] = 1;
        } else {
            // reduce via x^ell = 1 first (kk < ell always), then mod Phi
            const auto& red = ctx.xpow[kk];
            for (unsigned long i = 0; i < ctx.phi; ++i) r.coeffs[i] = red[i];
        }
        return r;
    }

    bool is_zero() const {
        for (const auto& r : coeffs)
            if (r != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < coeffs.size(); ++i)
            if (coeffs[i] != 0) return false;
        return true;
    }
    Rational rational_part() const { return coeffs[0]; }

    bool operator==(const CycNum& o) const { return ell == o.ell && coeffs == o.coeffs; }
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    void check_order(const CycNum& o) const {
        if (ell != o.ell) throw std::invalid_argument("CycNum: cyclotomic order mismatch");
    }

    CycNum& operator+=(const CycNum& o) {
        check_order(o);
        for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    CycNum operator+(const CycNum& o) const {
        CycNum r = *this;
        r += o;
        return r;
    }
    CycNum operator-() const {
        CycNum r = *this;
        for (auto& x : r.coeffs) x = -x;
        return r;
    }
    CycNum operator-(const CycNum& o) const { return *this + (-o); }
    CycNum& operator-=(const CycNum& o) { return *this += (-o); }

    CycNum operator*(const CycNum& o) const {
        check_order(o);
        const auto& ctx = detail::cyc_context(ell);
        size_t n = ctx.phi;
        std::vector<Rational> prod(2 * n - 1, Rational(0));
        for (size_t i = 0; i < n; ++i) {
            if (coeffs[i] == 0) continue;
            for (size_t j = 0; j < n; ++j) {
                if (o.coeffs[j] == 0) continue;
                prod[i + j] += coeffs[i] * o.coeffs[j];
            }
        }
        CycNum r(ell, 0);
        for (size_t k = 0; k < n; ++k) r.coeffs[k] = prod[k];
        for (size_t k = n; k < 2 * n - 1; ++k) {
            if (prod[k] == 0) continue;
            const auto& red = ctx.xpow[k];
            for (size_t i = 0; i < n; ++i) r.coeffs[i] += prod[k] * red[i];
        }
        return r;
    }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

    CycNum operator*(const Rational& s) const {
        CycNum r = *this;
        for (auto& x : r.coeffs) x *= s;
        return r;
    }

    // inverse via extended Euclid in Q[x] against Phi_ell
    CycNum inverse() const {
        if (is_zero()) throw std::domain_error("CycNum: inverse of zero");
        using detail::DensePoly;
        const auto& ctx = detail::cyc_context(ell);
        DensePoly a = ctx.modulus;
        DensePoly b(coeffs.begin(), coeffs.end());
        detail::dp_trim(b);
        // extended euclid: find u with u*b = gcd mod a ; gcd is a nonzero constant
        DensePoly s0, s1{Rational(1)};
        DensePoly r0 = a, r1 = b;
        while (!r1.empty()) {
            // r0 = q*r1 + r
            DensePoly q(r0.size(), Rational(0));
            DensePoly rem = r0;
            while (rem.size() >= r1.size() && !rem.empty()) {
                Rational f = rem.back() / r1.back();
                size_t off = rem.size() - r1.size();
                q[off] += f;
                for (size_t i = 0; i < r1.size(); ++i) rem[off + i] -= f * r1[i];
                detail::dp_trim(rem);
            }
            detail::dp_trim(q);
            // s = s0 - q*s1
            DensePoly qs = detail::dp_mul(q, s1);
            DensePoly s = s0;
            if (s.size() < qs.size()) s.resize(qs.size(), Rational(0));
            for (size_t i = 0; i < qs.size(); ++i) s[i] -= qs[i];
            detail::dp_trim(s);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        // r0 = gcd (constant, since Phi_ell is irreducible and b != 0 mod Phi)
        if (r0.size() != 1) throw std::domain_error("CycNum: element not invertible (unexpected)");
        Rational g = r0[0];
        CycNum res(ell, 0);
        DensePoly u = detail::dp_rem(std::move(s0), ctx.modulus);
        for (size_t i = 0; i < u.size(); ++i) res.coeffs[i] = u[i] / g;
        return res;
    }
    CycNum operator/(const CycNum& o) const { return *this * o.inverse(); }

    CycNum pow(long n) const {
        CycNum b = *this;
        if (n < 0) {
            b = b.inverse();
            n = -n;
        }
        CycNum r = CycNum::one(ell);
        while (n > 0) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (i) s += ",";
            s += coeffs[i].str();
        }
        return s + "]";
    }
};

inline CycNum operator*(const Rational& s, const CycNum& z) { return z * s; }

// multiplicative inverse of d mod ell (both coprime)
inline long inverse_mod(long d, long ell) {
    long t = 0, nt = 1, r = ell, nr = ((d % ell) + ell) % ell;
    while (nr != 0) {
        long q = r / nr;
        long t2 = t - q * nt;
        t = nt;
        nt = t2;
        long r2 = r - q * nr;
        r = nr;
        nr = r2;
    }
    if (r != 1) throw std::invalid_argument("inverse_mod: arguments not coprime");
    return ((t % ell) + ell) % ell;
}

// Admissibility of the root-of-unity order for a given D (and G2 flag):
// ell odd, >= 3, coprime to D, and coprime to 3 in type G2.
inline bool admissible_order(long ell, long D, bool type_g2) {
    if (ell < 3) throw std::invalid_argument("order must be >= 3");
    if (ell % 2 == 0) return false;
    if (std::gcd((long)ell, D) != 1) return false;
    if (type_g2 && ell % 3 == 0) return false;
    return true;
}

// Specialization q_D -> eps_D = zeta^{Dbar}, where D*Dbar = 1 (mod ell).
// The input polynomial is in the variable q_D.
inline CycNum specialize(const LaurentPoly& p, long ell, long D) {
    if (ell < 3 || ell % 2 == 0) throw std::invalid_argument("specialize: order must be odd and >= 3");
    if (std::gcd(ell, D) != 1) throw std::invalid_argument("specialize: gcd(ell, D) != 1");
    long dbar = inverse_mod(D, ell);
    CycNum r = CycNum::zero((unsigned long)ell);
    for (const auto& [e, v] : p.c) {
        long k = ((dbar * (e % ell)) % ell + ell) % ell;
        r += CycNum::zeta_pow((unsigned long)ell, k) * v;
    }
    return r;
}

// The canonical square root of eps_D inside mu_ell (ell odd):
// zeta^{Dbar (ell+1)/2}, whose square is zeta^{Dbar} = eps_D.
inline CycNum sqrt_eps_d(long ell, long D) {
    if (ell % 2 == 0) throw std::invalid_argument("sqrt_eps_d: order must be odd");
    if (ell < 3 || std::gcd(ell, D) != 1)
        throw std::invalid_argument("sqrt_eps_d: inadmissible (ell, D)");
    long dbar = inverse_mod(D, ell);
    long e = (dbar % ell) * ((ell + 1) / 2) % ell;
    return CycNum::zeta_pow((unsigned long)ell, e);
}

} // namespace qga
