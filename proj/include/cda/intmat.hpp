#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cda/errors.hpp"
#include "cda/gaussian_int.hpp"

namespace cda {

/* Exact determinant of a dim x dim integer matrix, fraction-free Bareiss. */
inline Zint bareiss_det(std::vector<Zint> m, int dim) {
    if (dim == 0) return Zint(1);
    Zint prev(1);
    int sign = 1;
    for (int k = 0; k < dim - 1; ++k) {
        if (m[std::size_t(k) * dim + k] == 0) {
            int p = -1;
            for (int r = k + 1; r < dim; ++r)
                if (m[std::size_t(r) * dim + k] != 0) { p = r; break; }
            if (p < 0) return Zint(0);
            for (int c = 0; c < dim; ++c)
                std::swap(m[std::size_t(k) * dim + c], m[std::size_t(p) * dim + c]);
            sign = -sign;
        }
        const Zint pivot = m[std::size_t(k) * dim + k];
        for (int r = k + 1; r < dim; ++r) {
            for (int c = k + 1; c < dim; ++c) {
                Zint v = m[std::size_t(r) * dim + c] * pivot -
                         m[std::size_t(r) * dim + k] * m[std::size_t(k) * dim + c];
                m[std::size_t(r) * dim + c] = v / prev;
            }
            m[std::size_t(r) * dim + k] = 0;
        }
        prev = pivot;
    }
    Zint det = m[std::size_t(dim - 1) * dim + (dim - 1)];
    return sign > 0 ? det : -det;
}

namespace detail {

template <typename T> inline T pos_mod(T a, const T &d) {
    a %= d;
    if (a < 0) a += d;
    return a;
}

/* Extended gcd for nonnegative a, b: returns g, writes x, y with ax + by = g. */
template <typename T> inline T ext_gcd(T a, T b, T &x, T &y) {
    T x0(1), y0(0), x1(0), y1(1);
    while (b != 0) {
        T q = a / b;
        T t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    x = x0; y = y0;
    return a;
}

/* Hermite normal form of the full-rank lattice L spanned by the columns of
 * `mat` (k x k, col-major), given d = [Z^k : L]. Because d Z^k lies inside L,
 * the generator set {columns} + {d e_i} spans L and every entry may be
 * reduced mod d at any point, keeping arithmetic bounded. Returns the unique
 * lower-triangular basis, col-major: h[i][i] > 0, h[i][c] in [0, h[i][i]) for
 * c < i, zero above the diagonal. Throws internal_error if the pivot product
 * disagrees with d. */
template <typename T>
inline std::vector<T> hnf_of_index_lattice(const std::vector<T> &mat, int k, const T &d) {
    std::vector<T> h(std::size_t(k) * k, T(0));
    if (d == 1) {
        for (int i = 0; i < k; ++i) h[std::size_t(i) * k + i] = T(1);
        return h;
    }
    // active generators, col-major: columns of mat (mod d), then d*I; the
    // d*e_i columns keep every row pivot a divisor of d and license the mod-d
    // reductions (d Z^k lies inside the lattice, so the span never changes).
    std::vector<std::vector<T>> cols(2 * k, std::vector<T>(k, T(0)));
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r)
            cols[c][r] = pos_mod<T>(mat[std::size_t(c) * k + r], d);
    for (int i = 0; i < k; ++i) cols[k + i][i] = d;

    std::size_t first_active = 0;
    T pivot_prod(1);
    for (int i = 0; i < k; ++i) {
        // gather the row-i gcd into one column via pairwise combinations
        std::size_t acc = std::size_t(-1);
        for (std::size_t c = first_active; c < cols.size(); ++c) {
            if (cols[c][i] == 0) continue;
            if (acc == std::size_t(-1)) { acc = c; continue; }
            T x, y;
            T g = ext_gcd<T>(cols[acc][i], cols[c][i], x, y);
            T ai = cols[acc][i] / g, ci = cols[c][i] / g;
            for (int r = i; r < k; ++r) {
                T va = cols[acc][r], vc = cols[c][r];
                cols[acc][r] = pos_mod<T>(x * va + y * vc, d);
                cols[c][r] = pos_mod<T>(ai * vc - ci * va, d);
            }
        }
        if (acc == std::size_t(-1))
            throw internal_error("hnf: zero pivot in full-rank lattice");
        std::swap(cols[acc], cols[first_active]);
        for (int r = 0; r < k; ++r) h[std::size_t(i) * k + r] = cols[first_active][r];
        pivot_prod *= cols[first_active][i];
        ++first_active;
    }

    // canonicalize below-pivot row entries: within a column, reduce rows top
    // to bottom so each step only disturbs rows not yet visited. Entries stay
    // reduced mod d throughout (d e_r is in the lattice), which keeps the
    // int64 instantiation inside the 2 d^2 bound; without it the updates grow
    // like d^4 and overflow.
    for (int c = 0; c < k; ++c)
        for (int i = c + 1; i < k; ++i) {
            const T piv = h[std::size_t(i) * k + i];
            const T q = h[std::size_t(c) * k + i] / piv;
            if (q != 0) {
                h[std::size_t(c) * k + i] -= q * piv;
                for (int r = i + 1; r < k; ++r)
                    h[std::size_t(c) * k + r] = pos_mod<T>(
                        h[std::size_t(c) * k + r] - q * h[std::size_t(i) * k + r], d);
            }
        }

    if (pivot_prod != d)
        throw internal_error("hnf: pivot product disagrees with lattice index");
    return h;
}

} // namespace detail

/* Canonical string key for the lattice spanned by the columns of `mat`
 * (row-major k x k integer matrix) with known index d > 0. Equal keys iff
 * equal lattices. */
inline std::string hnf_lattice_key(const std::vector<Zint> &mat_row_major, int k, const Zint &d) {
    // int64 path is safe while 2*d*d fits: combo products are bounded by d^2
    constexpr std::int64_t kSmall = std::int64_t(1) << 30;
    std::string key;
    if (d <= kSmall) {
        std::vector<std::int64_t> colmaj(std::size_t(k) * k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) {
                Zint v = mat_row_major[std::size_t(r) * k + c] % d;
                colmaj[std::size_t(c) * k + r] = v.convert_to<std::int64_t>();
            }
        auto h = detail::hnf_of_index_lattice<std::int64_t>(colmaj, k, d.convert_to<std::int64_t>());
        for (auto v : h) { key += std::to_string(v); key += ','; }
    } else {
        std::vector<Zint> colmaj(std::size_t(k) * k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                colmaj[std::size_t(c) * k + r] = mat_row_major[std::size_t(r) * k + c];
        auto h = detail::hnf_of_index_lattice<Zint>(colmaj, k, d);
        for (const auto &v : h) { key += v.str(); key += ','; }
    }
    return key;
}

} // namespace cda
