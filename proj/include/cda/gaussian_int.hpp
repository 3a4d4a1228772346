#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <ostream>
#include <string>

#include "cda/errors.hpp"

namespace cda {

using Zint = boost::multiprecision::cpp_int;

/* Element of Z[i] with arbitrary-precision components. */
struct GaussianInt {
    Zint re, im;

    GaussianInt() : re(0), im(0) {}
    GaussianInt(long r) : re(r), im(0) {}
    GaussianInt(long r, long i) : re(r), im(i) {}
    GaussianInt(Zint r, Zint i) : re(std::move(r)), im(std::move(i)) {}

    GaussianInt operator-() const { return {-re, -im}; }

    GaussianInt operator+(const GaussianInt &w) const { return {re + w.re, im + w.im}; }
    GaussianInt operator-(const GaussianInt &w) const { return {re - w.re, im - w.im}; }
    GaussianInt operator*(const GaussianInt &w) const
    { return {re * w.re - im * w.im, re * w.im + im * w.re}; }

    GaussianInt &operator+=(const GaussianInt &w) { re += w.re; im += w.im; return *this; }
    GaussianInt &operator-=(const GaussianInt &w) { re -= w.re; im -= w.im; return *this; }
    GaussianInt &operator*=(const GaussianInt &w) { *this = *this * w; return *this; }

    bool operator==(const GaussianInt &w) const { return re == w.re && im == w.im; }
    bool operator!=(const GaussianInt &w) const { return !(*this == w); }

    GaussianInt conj() const { return {re, -im}; }
    Zint norm() const { return re * re + im * im; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_unit() const { return norm() == 1; }

    /* Multiply by i in place. */
    void muli() { std::swap(re, im); re = -re; }

    static GaussianInt i_pow(int k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return {1, 0};
            case 1: return {0, 1};
            case 2: return {-1, 0};
            default: return {0, -1};
        }
    }

    // hidden friend: keeps cpp_int out of unqualified operator lookup, which
    // otherwise probes its converting constructor with unrelated types
    friend GaussianInt operator*(const Zint &s, const GaussianInt &w) {
        return {s * w.re, s * w.im};
    }
};

/* Nearest-integer division, n > 0. Ties may round either way. */
inline Zint round_div(const Zint &x, const Zint &n) {
    Zint q = x / n;
    Zint r = x - q * n;
    if (2 * r > n) ++q;
    else if (2 * r < -n) --q;
    return q;
}

/* True iff d divides z exactly in Z[i]; quotient written to q when non-null. */
inline bool zi_divides(const GaussianInt &d, const GaussianInt &z, GaussianInt *q = nullptr) {
    if (d.is_zero()) return z.is_zero();
    Zint nd = d.norm();
    GaussianInt p = z * d.conj();
    if (p.re % nd != 0 || p.im % nd != 0) return false;
    if (q) *q = {p.re / nd, p.im / nd};
    return true;
}

inline GaussianInt zi_exact_div(const GaussianInt &z, const GaussianInt &d) {
    GaussianInt q;
    if (!zi_divides(d, z, &q))
        throw internal_error("zi_exact_div: not divisible");
    return q;
}

/* Rounded division; remainder z - q*d has norm <= norm(d)/2. */
inline GaussianInt zi_round_div(const GaussianInt &z, const GaussianInt &d) {
    Zint nd = d.norm();
    GaussianInt p = z * d.conj();
    return {round_div(p.re, nd), round_div(p.im, nd)};
}

inline GaussianInt zi_gcd(GaussianInt a, GaussianInt b) {
    while (!b.is_zero()) {
        GaussianInt q = zi_round_div(a, b);
        GaussianInt r = a - q * b;
        a = b;
        b = r;
    }
    return a;
}

/* The unique associate i^k * z with re > 0, im >= 0 (zero maps to zero). */
inline GaussianInt canonical_assoc(GaussianInt z) {
    if (z.is_zero()) return z;
    for (int k = 0; k < 4; ++k) {
        if (z.re > 0 && z.im >= 0) return z;
        z.muli();
    }
    throw internal_error("canonical_assoc: no canonical associate found");
}

/* Inverse of a Z[i] unit. */
inline GaussianInt zi_unit_inv(const GaussianInt &u) {
    if (!u.is_unit())
        throw std::invalid_argument("zi_unit_inv: argument is not a unit");
    return u.conj();
}

inline Zint parse_zint(const std::string &s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    bool ok = s.size() > start;
    for (std::size_t k = start; ok && k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') ok = false;
    if (!ok)
        throw config_error("not a decimal integer: '" + s + "'");
    return Zint(s);
}

inline std::string to_string(const GaussianInt &z) {
    std::string s = z.re.str();
    if (z.im != 0) {
        s += (z.im > 0 ? "+" : "") + z.im.str() + "i";
    }
    return s;
}

inline std::ostream &operator<<(std::ostream &os, const GaussianInt &z) {
    return os << to_string(z);
}

} // namespace cda
