#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cda/algebra.hpp"
#include "cda/errors.hpp"
#include "cda/quadreal.hpp"

namespace cda {

struct LatticePoint {
    std::vector<std::int64_t> coords; // in the generator basis
    double norm_sq = 0;               // Frobenius norm squared, Gram-exact at quad precision
    bool boundary = false;            // norm_sq within the tolerance band around R^2
};

struct EnumerateOptions {
    double tau = 9.313225746154785e-10; // 2^-30, relative band on R^2
    std::uint64_t point_cap = 10000000;
    // restrict the outermost coordinate to [lo, hi); used to partition work
    std::optional<std::pair<std::int64_t, std::int64_t>> top_range;
};

/* psi(Lambda_nat) as a real lattice of dimension 2n^2 with the Frobenius
 * inner product. Generators are i^b u^k theta^j in the coordinate order of
 * CyclicAlgebra::coords. Gram and Cholesky are carried at quad precision;
 * double copies drive enumeration pruning. */
struct MatrixLattice {
    // shared so the lattice stays valid when built from a temporary algebra
    std::shared_ptr<const CyclicAlgebra> alg;
    int dim = 0;
    int precision_bits = 128;
    std::vector<std::vector<qcomplex>> psi_gen; // numeric psi per generator, n x n row-major
    std::vector<qreal> gram_q;                  // dim x dim
    std::vector<qreal> chol_q;                  // upper triangular, G = U^T U
    std::vector<double> gram_d;
    std::vector<double> chol_d;
    double sqrt_det_gram = 0;

    const CyclicAlgebra &algebra() const { return *alg; }

    AlgebraElement element_of(const LatticePoint &p) const {
        return alg->from_coords(p.coords);
    }

    /* Exact-coordinate quadratic form at quad precision. */
    qreal norm_sq_q(const std::vector<std::int64_t> &x) const {
        qreal acc = 0;
        for (int i = 0; i < dim; ++i) {
            if (x[i] == 0) continue;
            qreal xi = qreal(double(x[i]));
            acc += xi * xi * gram_q[std::size_t(i) * dim + i];
            for (int j = i + 1; j < dim; ++j) {
                if (x[j] == 0) continue;
                acc += 2 * xi * qreal(double(x[j])) * gram_q[std::size_t(i) * dim + j];
            }
        }
        return acc;
    }

    /* Numeric psi of an arbitrary element, double precision. */
    std::vector<std::complex<double>> psi_numeric(const AlgebraElement &a) const;
};

inline std::vector<std::complex<double>> MatrixLattice::psi_numeric(const AlgebraElement &a) const {
    const int n = alg->degree();
    const NumberField &F = alg->field();
    const GaussianInt &gamma = alg->gamma();
    std::vector<std::complex<double>> m(std::size_t(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            int k = ((r - c) % n + n) % n;
            qcomplex e = F.embed(c, a.part[k]);
            if (r < c) {
                qcomplex g(qreal(gamma.re.convert_to<double>()),
                           qreal(gamma.im.convert_to<double>()));
                e = g * e;
            }
            m[std::size_t(r) * n + c] = {to_double(e.re), to_double(e.im)};
        }
    return m;
}

inline MatrixLattice build_lattice(const CyclicAlgebra &alg, int precision_bits = 128) {
    if (precision_bits < 64 || precision_bits > 192)
        throw config_error("precision_bits must lie in [64, 192]");
    MatrixLattice lat;
    lat.alg = std::make_shared<const CyclicAlgebra>(alg);
    lat.precision_bits = precision_bits;
    const int n = alg.degree();
    const int dim = alg.lattice_dim();
    lat.dim = dim;

    const NumberField &F = alg.field();
    qcomplex gammac(qreal(alg.gamma().re.convert_to<double>()),
                    qreal(alg.gamma().im.convert_to<double>()));

    // generator (b,k,j): entries at (r,c) with (r-c) mod n == k
    lat.psi_gen.assign(dim, std::vector<qcomplex>(std::size_t(n) * n));
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                auto &m = lat.psi_gen[2 * (k * n + j) + b];
                for (int c = 0; c < n; ++c) {
                    int r = (c + k) % n;
                    qcomplex e = F.embed_theta_pow(c, j);
                    if (r < c) e = gammac * e;
                    if (b == 1) e = qcomplex(0, 1) * e;
                    m[std::size_t(r) * n + c] = e;
                }
            }

    lat.gram_q.assign(std::size_t(dim) * dim, 0);
    for (int a = 0; a < dim; ++a)
        for (int b = a; b < dim; ++b) {
            qreal acc = 0;
            for (std::size_t e = 0; e < lat.psi_gen[a].size(); ++e) {
                qcomplex p = lat.psi_gen[a][e] * lat.psi_gen[b][e].conj();
                acc += p.re;
            }
            lat.gram_q[std::size_t(a) * dim + b] = acc;
            lat.gram_q[std::size_t(b) * dim + a] = acc;
        }

    // Cholesky G = U^T U at quad precision
    lat.chol_q.assign(std::size_t(dim) * dim, 0);
    qreal det = 1;
    for (int i = 0; i < dim; ++i) {
        qreal diag = lat.gram_q[std::size_t(i) * dim + i];
        for (int t = 0; t < i; ++t) {
            qreal u = lat.chol_q[std::size_t(t) * dim + i];
            diag -= u * u;
        }
        if (diag <= 0)
            throw internal_error("build_lattice: Gram matrix not positive definite");
        qreal uii = qsqrt(diag);
        lat.chol_q[std::size_t(i) * dim + i] = uii;
        det *= diag;
        for (int j = i + 1; j < dim; ++j) {
            qreal acc = lat.gram_q[std::size_t(i) * dim + j];
            for (int t = 0; t < i; ++t)
                acc -= lat.chol_q[std::size_t(t) * dim + i] * lat.chol_q[std::size_t(t) * dim + j];
            lat.chol_q[std::size_t(i) * dim + j] = acc / uii;
        }
    }
    lat.sqrt_det_gram = to_double(qsqrt(det));

    lat.gram_d.resize(lat.gram_q.size());
    lat.chol_d.resize(lat.chol_q.size());
    for (std::size_t i = 0; i < lat.gram_q.size(); ++i) {
        lat.gram_d[i] = to_double(lat.gram_q[i]);
        lat.chol_d[i] = to_double(lat.chol_q[i]);
    }
    return lat;
}

inline double ball_volume(int dim, double radius) {
    double half = dim / 2.0;
    return std::exp(half * std::log(M_PI) + dim * std::log(radius) - std::lgamma(half + 1.0));
}

inline double predicted_point_count(const MatrixLattice &lat, double radius) {
    return ball_volume(lat.dim, radius) / lat.sqrt_det_gram;
}

using PointSink = std::function<void(const LatticePoint &)>;

/* Fincke-Pohst sphere enumeration. Emits every nonzero lattice vector with
 * quad-checked norm_sq <= R^2 (1+tau); points with norm_sq also above
 * R^2 (1-tau) carry the boundary flag. Refuses when the volume-predicted
 * count exceeds the cap. */
inline std::uint64_t enumerate_ball(const MatrixLattice &lat, double radius,
                                    const EnumerateOptions &opts, const PointSink &sink) {
    if (radius < 0 || !std::isfinite(radius))
        throw config_error("enumerate_ball: radius must be nonnegative and finite");
    if (radius == 0) return 0;
    double predicted = predicted_point_count(lat, radius);
    if (predicted > double(opts.point_cap))
        throw budget_error("enumerate_ball: predicted " + std::to_string(std::llround(predicted)) +
                           " points at radius " + std::to_string(radius) + " exceeds cap " +
                           std::to_string(opts.point_cap));

    const int dim = lat.dim;
    const double r2 = radius * radius;
    const qreal r2_q = qreal(radius) * qreal(radius);
    const double budget = r2 * (1.0 + 2.0 * opts.tau) + 1e-300;
    const std::uint64_t hard_cap = 2 * opts.point_cap + 1024;

    std::vector<std::int64_t> x(dim, 0);
    std::vector<double> partial(dim, 0);       // t_i = sum_{j>i} U[i][j] x_j
    std::vector<double> remaining(dim + 1, 0); // budget left below level i
    std::uint64_t emitted = 0;

    const auto U = [&](int r, int c) { return lat.chol_d[std::size_t(r) * dim + c]; };

    // iterative depth-first walk, outermost coordinate is dim-1
    std::vector<std::int64_t> lo(dim), hi(dim);
    int level = dim - 1;
    remaining[dim] = budget;
    bool descend = true;
    while (level < dim) {
        if (descend) {
            double t = 0;
            for (int j = level + 1; j < dim; ++j) t += U(level, j) * double(x[j]);
            partial[level] = t;
            double b = remaining[level + 1];
            double w = b > 0 ? std::sqrt(b) : 0;
            double uii = U(level, level);
            double lod = (-w - t) / uii;
            double hid = (w - t) / uii;
            lo[level] = std::int64_t(std::ceil(lod - 1e-9));
            hi[level] = std::int64_t(std::floor(hid + 1e-9));
            if (level == dim - 1 && opts.top_range) {
                lo[level] = std::max(lo[level], opts.top_range->first);
                hi[level] = std::min<std::int64_t>(hi[level], opts.top_range->second - 1);
            }
            x[level] = lo[level];
        } else {
            ++x[level];
        }
        if (x[level] > hi[level]) {
            ++level; // backtrack
            descend = false;
            continue;
        }
        double term = U(level, level) * double(x[level]) + partial[level];
        double rem = remaining[level + 1] - term * term;
        if (rem < 0) {
            // outside the ellipsoid slice; next value can only be worse on one
            // side, but with rounding slack just advance
            descend = false;
            continue;
        }
        if (level == 0) {
            bool zero = true;
            for (int i = 0; i < dim; ++i)
                if (x[i] != 0) { zero = false; break; }
            if (!zero) {
                qreal ns = lat.norm_sq_q(x);
                if (ns <= r2_q * qreal(1.0 + opts.tau)) {
                    if (++emitted > hard_cap)
                        throw budget_error("enumerate_ball: runaway enumeration past the cap");
                    LatticePoint p;
                    p.coords = x;
                    p.norm_sq = to_double(ns);
                    p.boundary = ns >= r2_q * qreal(1.0 - opts.tau);
                    sink(p);
                }
            }
            descend = false;
        } else {
            remaining[level] = rem;
            --level;
            descend = true;
        }
    }
    return emitted;
}

inline std::vector<LatticePoint> enumerate_ball(const MatrixLattice &lat, double radius,
                                                const EnumerateOptions &opts = {}) {
    std::vector<LatticePoint> pts;
    enumerate_ball(lat, radius, opts, [&](const LatticePoint &p) { pts.push_back(p); });
    return pts;
}

/* Point counts at several radii from one pass at the largest. */
inline std::vector<std::uint64_t> count_points(const MatrixLattice &lat,
                                               const std::vector<double> &radii,
                                               const EnumerateOptions &opts = {}) {
    if (radii.empty()) return {};
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0 || !std::isfinite(radii[i]))
            throw config_error("count_points: radii must be nonnegative and finite");
        if (i > 0 && radii[i] < radii[i - 1])
            throw config_error("count_points: radii must be ascending");
    }
    double rmax = radii.back();
    std::vector<std::uint64_t> counts(radii.size(), 0);
    if (rmax == 0) return counts;
    enumerate_ball(lat, rmax, opts, [&](const LatticePoint &p) {
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (p.norm_sq <= radii[i] * radii[i] * (1.0 + opts.tau)) ++counts[i];
    });
    return counts;
}

} // namespace cda
