#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "qga/rational.hpp"

namespace qga {

// Laurent polynomial over Q in one formal variable. The variable is
// anonymous: callers fix a convention for what it denotes (q_D in most of
// the library, q_D^{1/2} in the Killing-form layer) and embed other powers
// of q through the exponent, e.g. q = var^D.
class LaurentPoly {
public:
    // invariant: no zero coefficients stored
    std::map<long, Rational> c;

    LaurentPoly() = default;
    explicit LaurentPoly(const Rational& r) {
        if (r != 0) c[0] = r;
    }
    static LaurentPoly var_pow(long e, const Rational& coeff = 1) {
        LaurentPoly p;
        if (coeff != 0) p.c[e] = coeff;
        return p;
    }
    static LaurentPoly zero() { return LaurentPoly(); }
    static LaurentPoly one() { return LaurentPoly(Rational(1)); }

    bool is_zero() const { return c.empty(); }

    bool operator==(const LaurentPoly& o) const { return c == o.c; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, r] : o.c) {
            auto it = c.find(e);
            if (it == c.end()) {
                c.emplace(e, r);
            } else {
                it->second += r;
                if (it->second == 0) c.erase(it);
            }
        }
        return *this;
    }
    LaurentPoly operator+(const LaurentPoly& o) const {
        LaurentPoly r = *this;
        r += o;
        return r;
    }
    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& [e, v] : r.c) v = -v;
        return r;
    }
    LaurentPoly operator-(const LaurentPoly& o) const { return *this + (-o); }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this += (-o); }

    LaurentPoly operator*(const LaurentPoly& o) const {
        LaurentPoly r;
        for (const auto& [e1, r1] : this->c)
            for (const auto& [e2, r2] : o.c) {
                Rational v = r1 * r2;
                auto it = r.c.find(e1 + e2);
                if (it == r.c.end()) {
                    if (v != 0) r.c.emplace(e1 + e2, v);
                } else {
                    it->second += v;
                    if (it->second == 0) r.c.erase(it);
                }
            }
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly operator*(const Rational& s) const {
        LaurentPoly r;
        if (s == 0) return r;
        r.c = c;
        for (auto& [e, v] : r.c) v *= s;
        return r;
    }

    LaurentPoly pow(long n) const {
        if (n < 0) {
            // only monomials are invertible
            if (c.size() == 1) {
                const auto& [e, v] = *c.begin();
                LaurentPoly r;
                Rational inv = Rational(1) / v;
                Rational acc = 1;
                for (long i = 0; i < -n; ++i) acc *= inv;
                r.c[e * n] = acc;
                return r;
            }
            throw std::invalid_argument("LaurentPoly::pow: negative power of non-monomial");
        }
        LaurentPoly r = one();
        LaurentPoly b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    // multiply by var^e
    LaurentPoly shifted(long e) const {
        LaurentPoly r;
        for (const auto& [k, v] : c) r.c[k + e] = v;
        return r;
    }

    long min_exp() const { return c.empty() ? 0 : c.begin()->first; }
    long max_exp() const { return c.empty() ? 0 : c.rbegin()->first; }

    Rational coeff(long e) const {
        auto it = c.find(e);
        return it == c.end() ? Rational(0) : it->second;
    }

    // evaluate at var = 1
    Rational eval_one() const {
        Rational s = 0;
        for (const auto& [e, v] : c) s += v;
        return s;
    }

    // Exact division: returns quotient and throws if the remainder is
    // nonzero. Used when an operator/scalar is known a priori to be
    // divisible (divided powers, Gram solving).
    LaurentPoly divide_exact(const LaurentPoly& d) const {
        if (d.is_zero()) throw std::invalid_argument("LaurentPoly: division by zero");
        // shift both to ordinary polynomials
        LaurentPoly num = this->shifted(-min_exp());
        LaurentPoly den = d.shifted(-d.min_exp());
        long shift = min_exp() - d.min_exp();
        LaurentPoly q;
        long dd = den.max_exp();
        Rational lead = den.c.rbegin()->second;
        while (!num.is_zero()) {
            long nd = num.max_exp();
            if (nd < dd) throw std::domain_error("LaurentPoly: inexact division");
            Rational f = num.c.rbegin()->second / lead;
            LaurentPoly t = var_pow(nd - dd, f);
            q += t;
            num -= t * den;
        }
        return q.shifted(shift);
    }

    std::string str(const std::string& var = "v") const {
        if (c.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, r] : c) {
            std::string term = r.str();
            if (!first && term[0] != '-') s += "+";
            s += term;
            if (e != 0) {
                s += "*" + var;
                if (e != 1) s += "^" + std::to_string(e);
            }
            first = false;
        }
        return s;
    }
};

inline LaurentPoly operator*(const Rational& s, const LaurentPoly& p) { return p * s; }

} // namespace qga
