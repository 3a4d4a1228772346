#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cda/errors.hpp"
#include "cda/gaussian_int.hpp"
#include "cda/number_field.hpp"

namespace cda {

/* Element x_0 + u x_1 + ... + u^(n-1) x_(n-1) of the natural order, x_k in
 * O_E. Relations: x u = u sigma(x), u^n = gamma. */
struct AlgebraElement {
    std::vector<FieldElement> part;

    AlgebraElement() = default;
    AlgebraElement(int n_parts, int n_coords)
        : part(n_parts, FieldElement(n_coords)) {}

    bool operator==(const AlgebraElement &w) const { return part == w.part; }
    bool operator!=(const AlgebraElement &w) const { return !(*this == w); }

    bool is_zero() const {
        for (const auto &p : part)
            if (!p.is_zero()) return false;
        return true;
    }
};

/* num / den with den in Z[i]; the shape invert() returns. */
struct QAlgebraElement {
    AlgebraElement num;
    GaussianInt den;
};

struct UnitData {
    std::vector<FieldElement> fundamental;
    long roots_of_unity = 0;
};

class CyclicAlgebra {
public:
    CyclicAlgebra(NumberField field, GaussianInt gamma, UnitData units)
        : F_(std::move(field)), n_(F_.degree()), gamma_(std::move(gamma)),
          units_(std::move(units)) {
        if (gamma_.is_zero())
            throw config_error("gamma must be nonzero");
        if (units_.roots_of_unity < 1)
            throw config_error("roots-of-unity count must be positive");
        for (const auto &v : units_.fundamental)
            if (!F_.is_oe_unit(v))
                throw config_error("declared fundamental unit is not a unit of O_E");
    }

    const NumberField &field() const { return F_; }
    int degree() const { return n_; }
    const GaussianInt &gamma() const { return gamma_; }
    const UnitData &units() const { return units_; }
    int lattice_dim() const { return 2 * n_ * n_; }

    AlgebraElement zero() const { return AlgebraElement(n_, n_); }

    AlgebraElement one() const {
        AlgebraElement x(n_, n_);
        x.part[0] = F_.one();
        return x;
    }

    AlgebraElement from_field(const FieldElement &a) const {
        AlgebraElement x(n_, n_);
        x.part[0] = a;
        return x;
    }

    /* u^k * a for a in E. */
    AlgebraElement u_mul(int k, const FieldElement &a) const {
        AlgebraElement x(n_, n_);
        x.part.at(k) = a;
        return x;
    }

    AlgebraElement add(const AlgebraElement &a, const AlgebraElement &b) const {
        AlgebraElement r(n_, n_);
        for (int k = 0; k < n_; ++k) r.part[k] = F_.add(a.part[k], b.part[k]);
        return r;
    }

    AlgebraElement sub(const AlgebraElement &a, const AlgebraElement &b) const {
        AlgebraElement r(n_, n_);
        for (int k = 0; k < n_; ++k) r.part[k] = F_.sub(a.part[k], b.part[k]);
        return r;
    }

    AlgebraElement neg(const AlgebraElement &a) const {
        AlgebraElement r(n_, n_);
        for (int k = 0; k < n_; ++k) r.part[k] = F_.neg(a.part[k]);
        return r;
    }

    AlgebraElement scal_mul(const GaussianInt &s, const AlgebraElement &a) const {
        AlgebraElement r(n_, n_);
        for (int k = 0; k < n_; ++k) r.part[k] = F_.scal_mul(s, a.part[k]);
        return r;
    }

    /* (u^k x_k)(u^l y_l) = u^(k+l) sigma^l(x_k) y_l, with u^n = gamma. */
    AlgebraElement mul(const AlgebraElement &a, const AlgebraElement &b) const {
        AlgebraElement r(n_, n_);
        for (int l = 0; l < n_; ++l) {
            if (b.part[l].is_zero()) continue;
            for (int k = 0; k < n_; ++k) {
                if (a.part[k].is_zero()) continue;
                FieldElement t = F_.mul(F_.sigma(l, a.part[k]), b.part[l]);
                int m = k + l;
                if (m >= n_) {
                    m -= n_;
                    t = F_.scal_mul(gamma_, t);
                }
                r.part[m] = F_.add(r.part[m], t);
            }
        }
        return r;
    }

    /* Left-regular representation: row r, column c holds
     * gamma^[r<c] sigma^c(x_((r-c) mod n)); column 0 is the coordinate
     * vector. Row-major, n*n entries. */
    std::vector<FieldElement> psi(const AlgebraElement &a) const {
        std::vector<FieldElement> m(std::size_t(n_) * n_, FieldElement(n_));
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                int k = ((r - c) % n_ + n_) % n_;
                FieldElement e = F_.sigma(c, a.part[k]);
                if (r < c) e = F_.scal_mul(gamma_, e);
                m[std::size_t(r) * n_ + c] = e;
            }
        return m;
    }

    /* det of a matrix of field elements by Laplace expansion; n <= 4 keeps
     * this cheap and exact. */
    FieldElement det_field_matrix(const std::vector<FieldElement> &m, int dim) const {
        if (dim == 1) return m[0];
        FieldElement acc(n_);
        std::vector<FieldElement> minor((dim - 1) * (dim - 1), FieldElement(n_));
        for (int r = 0; r < dim; ++r) {
            if (m[std::size_t(r) * dim].is_zero()) continue;
            int mi = 0;
            for (int rr = 0; rr < dim; ++rr) {
                if (rr == r) continue;
                for (int cc = 1; cc < dim; ++cc)
                    minor[mi++] = m[std::size_t(rr) * dim + cc];
            }
            FieldElement term = F_.mul(m[std::size_t(r) * dim], det_field_matrix(minor, dim - 1));
            acc = (r % 2 == 0) ? F_.add(acc, term) : F_.sub(acc, term);
        }
        return acc;
    }

    /* Nrd(a) = det psi(a), an element of Z[i]. */
    GaussianInt reduced_norm(const AlgebraElement &a) const {
        FieldElement d = det_field_matrix(psi(a), n_);
        if (!d.is_scalar())
            throw internal_error("reduced_norm: determinant not in the center");
        return d.c[0];
    }

    /* |Nrd(a)|^2 as a rational integer. */
    Zint nrd_norm(const AlgebraElement &a) const { return reduced_norm(a).norm(); }

    /* Unit of the natural order iff Nrd is a Z[i] unit. */
    bool is_unit(const AlgebraElement &a) const { return nrd_norm(a) == 1; }

    /* adj(psi(a)): entry (r,c) = (-1)^(r+c) * minor of psi with row c and
     * column r removed. */
    std::vector<FieldElement> psi_adjugate(const AlgebraElement &a) const {
        std::vector<FieldElement> m = psi(a);
        std::vector<FieldElement> adj(std::size_t(n_) * n_, FieldElement(n_));
        std::vector<FieldElement> minor((n_ - 1) * (n_ - 1), FieldElement(n_));
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                int mi = 0;
                for (int rr = 0; rr < n_; ++rr) {
                    if (rr == c) continue;
                    for (int cc = 0; cc < n_; ++cc) {
                        if (cc == r) continue;
                        minor[mi++] = m[std::size_t(rr) * n_ + cc];
                    }
                }
                FieldElement d = det_field_matrix(minor, n_ - 1);
                adj[std::size_t(r) * n_ + c] = ((r + c) % 2 == 0) ? d : F_.neg(d);
            }
        return adj;
    }

    /* x^(-1) = y / Nrd(x) with y integral (first column of adj(psi(x))).
     * Verified two-sided before returning. */
    QAlgebraElement invert(const AlgebraElement &a) const {
        GaussianInt den = reduced_norm(a);
        if (den.is_zero())
            throw std::invalid_argument("invert: zero element");
        std::vector<FieldElement> adj = psi_adjugate(a);
        AlgebraElement num(n_, n_);
        for (int r = 0; r < n_; ++r) num.part[r] = adj[std::size_t(r) * n_];
        AlgebraElement lhs = mul(a, num);
        AlgebraElement rhs = mul(num, a);
        AlgebraElement want = scal_mul(den, one());
        if (lhs != want || rhs != want)
            throw internal_error("invert: cross-multiplied identity check failed");
        return {num, den};
    }

    /* Every Z[i] coordinate of q.num divisible by q.den. */
    bool is_integral(const AlgebraElement &num, const GaussianInt &den) const {
        for (const auto &p : num.part)
            for (const auto &z : p.c)
                if (!zi_divides(den, z)) return false;
        return true;
    }

    /* Lambda x = Lambda y iff x y^(-1) and y x^(-1) are both integral. */
    bool same_left_ideal(const AlgebraElement &x, const AlgebraElement &y) const {
        if (x.is_zero() || y.is_zero())
            throw std::invalid_argument("same_left_ideal: zero element");
        QAlgebraElement yi = invert(y);
        if (!is_integral(mul(x, yi.num), yi.den)) return false;
        QAlgebraElement xi = invert(x);
        return is_integral(mul(y, xi.num), xi.den);
    }

    /* x O_E^* = y O_E^* iff x^(-1) y is a unit of O_E (sitting in E). */
    bool same_unit_coset(const AlgebraElement &x, const AlgebraElement &y) const {
        if (!is_unit(x) || !is_unit(y))
            throw std::invalid_argument("same_unit_coset: non-unit argument");
        QAlgebraElement xi = invert(x);
        AlgebraElement q = scal_mul(zi_unit_inv(xi.den), mul(xi.num, y));
        for (int k = 1; k < n_; ++k)
            if (!q.part[k].is_zero()) return false;
        return F_.is_oe_unit(q.part[0]);
    }

    /* Z-coordinates in the generator order (re, im) x (u-power, basis index):
     * generator 2*(k*n + j) + b is i^b u^k theta^j. */
    std::vector<Zint> coords(const AlgebraElement &a) const {
        std::vector<Zint> v(lattice_dim());
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < n_; ++j) {
                v[2 * (k * n_ + j)] = a.part[k].c[j].re;
                v[2 * (k * n_ + j) + 1] = a.part[k].c[j].im;
            }
        return v;
    }

    AlgebraElement from_coords(const std::vector<std::int64_t> &v) const {
        AlgebraElement a(n_, n_);
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < n_; ++j)
                a.part[k].c[j] = GaussianInt(Zint(v[2 * (k * n_ + j)]),
                                             Zint(v[2 * (k * n_ + j) + 1]));
        return a;
    }

    /* Columns of the right-multiplication map g -> g*x on the Z-basis.
     * Column for generator (b,k,j) holds the coordinates of i^b u^k theta^j x.
     * Uses u^k theta^j x = u^((k+l) mod n) gamma^[k+l>=n] sigma^l(theta^j) x_l
     * summed over l, so only n^2 field products are needed per element. */
    std::vector<Zint> right_mul_matrix(const AlgebraElement &x) const {
        const int dim = lattice_dim();
        std::vector<Zint> mat(std::size_t(dim) * dim);
        // zl[j][l] = sigma^l(theta^j) * x_l
        std::vector<std::vector<FieldElement>> zl(n_, std::vector<FieldElement>(n_));
        for (int j = 0; j < n_; ++j)
            for (int l = 0; l < n_; ++l)
                zl[j][l] = F_.mul(F_.sigma(l, F_.basis_element(j)), x.part[l]);
        AlgebraElement prod(n_, n_);
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < n_; ++k)
                for (int j = 0; j < n_; ++j) {
                    for (int l = 0; l < n_; ++l) {
                        int m = k + l;
                        FieldElement t = zl[j][l];
                        if (m >= n_) {
                            m -= n_;
                            t = F_.scal_mul(gamma_, t);
                        }
                        if (b == 1) t = F_.scal_mul(GaussianInt(0, 1), t);
                        prod.part[m] = t;
                    }
                    std::vector<Zint> col = coords(prod);
                    int g = 2 * (k * n_ + j) + b;
                    for (int rowi = 0; rowi < dim; ++rowi)
                        mat[std::size_t(rowi) * dim + g] = col[rowi];
                }
        return mat;
    }

private:
    NumberField F_;
    int n_;
    GaussianInt gamma_;
    UnitData units_;
};

} // namespace cda
