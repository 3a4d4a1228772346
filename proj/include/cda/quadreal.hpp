#pragma once

#include <cmath>

namespace cda {

/* 113-bit-mantissa reals for Gram/Cholesky intermediates. Only the handful of
 * operations the lattice builder needs; sqrt avoids libquadmath by polishing a
 * double seed with Newton steps (each step doubles the correct digits). */
using qreal = __float128;

inline double to_double(qreal x) { return static_cast<double>(x); }

inline qreal qabs(qreal x) { return x < 0 ? -x : x; }

inline qreal qsqrt(qreal x) {
    if (x <= 0) return 0;
    double seed = std::sqrt(to_double(x));
    if (seed <= 0) return 0;
    qreal y = seed;
    y = qreal(0.5) * (y + x / y);
    y = qreal(0.5) * (y + x / y);
    y = qreal(0.5) * (y + x / y);
    return y;
}

struct qcomplex {
    qreal re = 0, im = 0;

    qcomplex() = default;
    qcomplex(qreal r) : re(r) {}
    qcomplex(qreal r, qreal i) : re(r), im(i) {}

    qcomplex operator-() const { return {-re, -im}; }
    qcomplex operator+(const qcomplex &w) const { return {re + w.re, im + w.im}; }
    qcomplex operator-(const qcomplex &w) const { return {re - w.re, im - w.im}; }
    qcomplex operator*(const qcomplex &w) const
    { return {re * w.re - im * w.im, re * w.im + im * w.re}; }
    qcomplex &operator+=(const qcomplex &w) { re += w.re; im += w.im; return *this; }

    qcomplex conj() const { return {re, -im}; }
    qreal norm_sq() const { return re * re + im * im; }
    qreal abs() const { return qsqrt(norm_sq()); }
};

inline qcomplex qdiv(const qcomplex &a, const qcomplex &b) {
    qreal n = b.norm_sq();
    qcomplex p = a * b.conj();
    return {p.re / n, p.im / n};
}

} // namespace cda
