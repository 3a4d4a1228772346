#pragma once

#include <vector>

#include "cda/errors.hpp"
#include "cda/gaussian_int.hpp"
#include "cda/quadreal.hpp"

namespace cda {

/* Element of O_E in the power basis {1, theta, ..., theta^(n-1)} over Z[i]. */
struct FieldElement {
    std::vector<GaussianInt> c;

    FieldElement() = default;
    explicit FieldElement(std::size_t n) : c(n) {}

    bool operator==(const FieldElement &w) const { return c == w.c; }
    bool operator!=(const FieldElement &w) const { return !(*this == w); }

    bool is_zero() const {
        for (const auto &z : c)
            if (!z.is_zero()) return false;
        return true;
    }

    /* Lies in Z[i], i.e. only the constant coordinate may be nonzero. */
    bool is_scalar() const {
        for (std::size_t k = 1; k < c.size(); ++k)
            if (!c[k].is_zero()) return false;
        return true;
    }
};

/* Exact arithmetic in E = K(theta), K = Q(i), restricted to the order
 * Z[i][theta]. The generator's monic minimal polynomial over K drives the
 * multiplication table; sigma generates Gal(E/K) and is supplied as its action
 * on the basis. Embeddings are the complex images of theta under
 * sigma^0..sigma^(n-1), held at quad precision. */
class NumberField {
public:
    NumberField(int n,
                std::vector<GaussianInt> min_poly,
                std::vector<FieldElement> sigma_basis,
                std::vector<qcomplex> embeddings)
        : n_(n),
          min_poly_(std::move(min_poly)),
          emb_(std::move(embeddings)) {
        if (n_ < 2)
            throw config_error("degree must be at least 2");
        if (min_poly_.size() != std::size_t(n_) + 1)
            throw config_error("min_poly must have degree-plus-one coefficients");
        if (!min_poly_.back().is_one())
            throw config_error("min_poly must be monic");
        if (sigma_basis.size() != std::size_t(n_))
            throw config_error("sigma action must cover the whole basis");
        for (const auto &col : sigma_basis)
            if (col.c.size() != std::size_t(n_))
                throw config_error("sigma action has a column of wrong length");
        if (emb_.size() != std::size_t(n_))
            throw config_error("need one embedding per conjugate");

        build_theta_powers();
        build_sigma_powers(sigma_basis);
        build_embedding_powers();
    }

    int degree() const { return n_; }
    const std::vector<GaussianInt> &min_poly() const { return min_poly_; }
    const std::vector<qcomplex> &embeddings() const { return emb_; }

    FieldElement zero() const { return FieldElement(n_); }

    FieldElement one() const { return from_scalar(GaussianInt(1)); }

    FieldElement from_scalar(const GaussianInt &z) const {
        FieldElement x(n_);
        x.c[0] = z;
        return x;
    }

    FieldElement basis_element(int j) const {
        FieldElement x(n_);
        x.c.at(j) = GaussianInt(1);
        return x;
    }

    FieldElement add(const FieldElement &a, const FieldElement &b) const {
        FieldElement r(n_);
        for (int k = 0; k < n_; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }

    FieldElement sub(const FieldElement &a, const FieldElement &b) const {
        FieldElement r(n_);
        for (int k = 0; k < n_; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }

    FieldElement neg(const FieldElement &a) const {
        FieldElement r(n_);
        for (int k = 0; k < n_; ++k) r.c[k] = -a.c[k];
        return r;
    }

    FieldElement scal_mul(const GaussianInt &s, const FieldElement &a) const {
        FieldElement r(n_);
        for (int k = 0; k < n_; ++k) r.c[k] = s * a.c[k];
        return r;
    }

    FieldElement mul(const FieldElement &a, const FieldElement &b) const {
        std::vector<GaussianInt> conv(2 * n_ - 1);
        for (int i = 0; i < n_; ++i) {
            if (a.c[i].is_zero()) continue;
            for (int j = 0; j < n_; ++j)
                conv[i + j] += a.c[i] * b.c[j];
        }
        FieldElement r(n_);
        for (int k = 0; k < n_; ++k) r.c[k] = conv[k];
        for (int k = n_; k <= 2 * n_ - 2; ++k) {
            if (conv[k].is_zero()) continue;
            const FieldElement &red = theta_pow_[k];
            for (int j = 0; j < n_; ++j) r.c[j] += conv[k] * red.c[j];
        }
        return r;
    }

    FieldElement pow(FieldElement base, unsigned long e) const {
        FieldElement r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /* Apply sigma^t. Coordinates live in K and are fixed by sigma. */
    FieldElement sigma(int t, const FieldElement &a) const {
        t = ((t % n_) + n_) % n_;
        const auto &cols = sigma_pow_[t];
        FieldElement r(n_);
        for (int j = 0; j < n_; ++j) {
            if (a.c[j].is_zero()) continue;
            for (int k = 0; k < n_; ++k) r.c[k] += a.c[j] * cols[j].c[k];
        }
        return r;
    }

    /* N_{E/K}(a) = prod_t sigma^t(a), exact. The product of all conjugates is
     * Galois-fixed, so any coordinate above the constant one signals corrupt
     * sigma data. */
    GaussianInt rel_norm(const FieldElement &a) const {
        FieldElement p = a;
        for (int t = 1; t < n_; ++t) p = mul(p, sigma(t, a));
        if (!p.is_scalar())
            throw internal_error("rel_norm: conjugate product not Galois-fixed");
        return p.c[0];
    }

    bool is_oe_unit(const FieldElement &a) const {
        return rel_norm(a).norm() == 1;
    }

    /* Image of a under the embedding composed with sigma^j. */
    qcomplex embed(int j, const FieldElement &a) const {
        qcomplex acc;
        for (int k = 0; k < n_; ++k) {
            qcomplex coeff(qreal(to_double_exact(a.c[k].re)), qreal(to_double_exact(a.c[k].im)));
            acc += coeff * emb_pow_[j][k];
        }
        return acc;
    }

    qcomplex embed_theta_pow(int j, int k) const { return emb_pow_[j][k]; }

    /* min_poly evaluated at a field element, exact. */
    FieldElement eval_min_poly(const FieldElement &x) const {
        FieldElement acc = from_scalar(min_poly_[n_]);
        for (int k = n_ - 1; k >= 0; --k)
            acc = add(mul(acc, x), from_scalar(min_poly_[k]));
        return acc;
    }

private:
    int n_;
    std::vector<GaussianInt> min_poly_;
    std::vector<FieldElement> theta_pow_;              // theta^k, k = 0..2n-2
    std::vector<std::vector<FieldElement>> sigma_pow_; // [t][j] = sigma^t(w_j)
    std::vector<qcomplex> emb_;
    std::vector<std::vector<qcomplex>> emb_pow_;       // [j][k] = emb_j^k

    static double to_double_exact(const Zint &z) { return z.convert_to<double>(); }

    void build_theta_powers() {
        theta_pow_.resize(2 * n_ - 1, FieldElement(n_));
        for (int k = 0; k < n_; ++k)
            theta_pow_[k].c[k] = GaussianInt(1);
        // theta^n = -(c_0 + c_1 theta + ... + c_{n-1} theta^{n-1})
        FieldElement top(n_);
        for (int k = 0; k < n_; ++k) top.c[k] = -min_poly_[k];
        for (int k = n_; k <= 2 * n_ - 2; ++k) {
            const FieldElement &prev = theta_pow_[k - 1];
            FieldElement cur(n_);
            for (int j = 1; j < n_; ++j) cur.c[j] = prev.c[j - 1];
            GaussianInt spill = prev.c[n_ - 1];
            if (!spill.is_zero())
                for (int j = 0; j < n_; ++j) cur.c[j] += spill * top.c[j];
            theta_pow_[k] = cur;
        }
    }

    void build_sigma_powers(const std::vector<FieldElement> &sigma_basis) {
        sigma_pow_.resize(n_);
        sigma_pow_[0].resize(n_, FieldElement(n_));
        for (int j = 0; j < n_; ++j)
            sigma_pow_[0][j].c[j] = GaussianInt(1);
        if (n_ > 1) sigma_pow_[1] = sigma_basis;
        for (int t = 2; t < n_; ++t) {
            sigma_pow_[t].resize(n_, FieldElement(n_));
            for (int j = 0; j < n_; ++j) {
                // sigma^t(w_j) = sigma(sigma^{t-1}(w_j))
                const FieldElement &prev = sigma_pow_[t - 1][j];
                FieldElement r(n_);
                for (int m = 0; m < n_; ++m) {
                    if (prev.c[m].is_zero()) continue;
                    for (int k = 0; k < n_; ++k)
                        r.c[k] += prev.c[m] * sigma_pow_[1][m].c[k];
                }
                sigma_pow_[t][j] = r;
            }
        }
    }

    void build_embedding_powers() {
        emb_pow_.assign(n_, std::vector<qcomplex>(n_));
        for (int j = 0; j < n_; ++j) {
            emb_pow_[j][0] = qcomplex(1);
            for (int k = 1; k < n_; ++k)
                emb_pow_[j][k] = emb_pow_[j][k - 1] * emb_[j];
        }
    }
};

} // namespace cda
