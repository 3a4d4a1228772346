#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cda/algebra.hpp"
#include "cda/errors.hpp"
#include "cda/intmat.hpp"
#include "cda/lattice.hpp"

namespace cda {

/* ---- growth fitting ---- */

struct GrowthFit {
    double exponent = 0;
    double log_constant = 0;
    double residual = 0; // RMS in log-log space
    std::vector<double> radii_used;
};

inline GrowthFit fit_growth(const std::vector<std::pair<double, double>> &samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("fit_growth: need at least 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].second > 0))
            throw std::invalid_argument("fit_growth: values must be positive");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("fit_growth: radii must be strictly ascending");
    }
    std::size_t n = samples.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto &[r, v] : samples) {
        double x = std::log(r), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    if (!(det > 0))
        throw std::invalid_argument("fit_growth: degenerate radii");
    GrowthFit fit;
    fit.exponent = (n * sxy - sx * sy) / det;
    fit.log_constant = (sy - fit.exponent * sx) / n;
    double ss = 0;
    for (auto &[r, v] : samples) {
        double e = std::log(v) - fit.log_constant - fit.exponent * std::log(r);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    for (auto &[r, v] : samples) fit.radii_used.push_back(r);
    return fit;
}

/* ---- eigenvalue mismatch inequality ----
 * ||AB||_F^2 >= sum a_i b_i with a_i the eigenvalues of AA^H descending and
 * b_i of BB^H ascending. */
inline bool mismatch_check(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B,
                           double rel_tol = 1e-9) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("mismatch_check: need square matrices of equal size");
    const auto n = A.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A * A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(B * B.adjoint());
    Eigen::VectorXd a = ea.eigenvalues(); // ascending
    Eigen::VectorXd b = eb.eigenvalues();
    if (a(0) <= 0 || b(0) <= 0)
        throw std::invalid_argument("mismatch_check: singular input");
    double rhs = 0;
    for (Eigen::Index i = 0; i < n; ++i) rhs += a(n - 1 - i) * b(i);
    double lhs = (A * B).squaredNorm();
    return lhs >= rhs - rel_tol * std::max(1.0, rhs);
}

/* ---- per-point statistics ---- */

// |det psi(x)|^-m from the exact Gaussian-integer norm of Nrd (= |det|^2)
inline double det_term(const Zint &nrd_norm, int sum_exponent) {
    return std::pow(nrd_norm.convert_to<double>(), -sum_exponent / 2.0);
}

// sqrt(n)^{mn} / ||X||_F^{nm}
inline double epstein_term(double norm_sq, int n, int sum_exponent) {
    return std::pow(double(n), sum_exponent * n / 2.0) *
           std::pow(norm_sq, -n * sum_exponent / 2.0);
}

inline double det_sum(const MatrixLattice &lat, const std::vector<LatticePoint> &points,
                      int sum_exponent) {
    double s = 0;
    for (const auto &p : points) s += det_term(lat.algebra().nrd_norm(lat.element_of(p)), sum_exponent);
    return s;
}

inline double epstein_sum(const std::vector<LatticePoint> &points, int n, int sum_exponent) {
    double s = 0;
    for (const auto &p : points) s += epstein_term(p.norm_sq, n, sum_exponent);
    return s;
}

/* ---- ideal index and principal-ideal identity ---- */

// [Lambda : Lambda x] as the determinant of right multiplication by x
inline Zint ideal_index(const CyclicAlgebra &alg, const AlgebraElement &x) {
    if (x.is_zero())
        throw std::invalid_argument("ideal_index: zero element");
    std::vector<Zint> m = alg.right_mul_matrix(x);
    Zint d = bareiss_det(m, alg.lattice_dim());
    if (d < 0) d = -d;
    return d;
}

// canonical key of the left ideal Lambda x (column HNF of right multiplication)
inline std::string ideal_key(const CyclicAlgebra &alg, const AlgebraElement &x, const Zint &index) {
    std::vector<Zint> m = alg.right_mul_matrix(x);
    return hnf_lattice_key(m, alg.lattice_dim(), index);
}

namespace detail {
inline std::pair<std::uint64_t, std::uint64_t> hash128(const std::string &s) {
    std::uint64_t h1 = 14695981039346656037ull, h2 = 0x9e3779b97f4a7c15ull;
    for (unsigned char c : s) {
        h1 = (h1 ^ c) * 1099511628211ull;
        h2 = (h2 ^ (c + (h2 << 6) + (h2 >> 2))) * 0xbf58476d1ce4e5b9ull;
    }
    return {h1, h2};
}
struct Hash128Hasher {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t> &p) const {
        return p.first ^ (p.second * 0x94d049bb133111ebull);
    }
};
} // namespace detail

/* ---- unit census over explicit point sets ---- */

struct UnitCensus {
    std::uint64_t unit_count = 0;
    std::uint64_t coset_count = 0;
    std::vector<AlgebraElement> representatives; // smallest norm first
};

inline UnitCensus unit_census(const MatrixLattice &lat, const std::vector<LatticePoint> &points) {
    const CyclicAlgebra &alg = lat.algebra();
    UnitCensus uc;
    std::vector<std::pair<double, std::size_t>> order; // (norm, rep idx)
    for (const auto &p : points) {
        AlgebraElement x = lat.element_of(p);
        if (!alg.is_unit(x)) continue;
        ++uc.unit_count;
        bool matched = false;
        for (const auto &rep : uc.representatives)
            if (alg.same_unit_coset(rep, x)) { matched = true; break; }
        if (!matched) {
            uc.representatives.push_back(x);
            order.emplace_back(p.norm_sq, order.size());
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<AlgebraElement> sorted;
    for (auto &[nrm, idx] : order) sorted.push_back(uc.representatives[idx]);
    uc.representatives = std::move(sorted);
    uc.coset_count = uc.representatives.size();
    return uc;
}

/* ---- closed-form count of O_E^* inside B(R) ----
 * Units zeta^a eps^b share the Frobenius norm of eps^b, so the count is
 * (roots of unity) * #{b admissible}. Norm as a function of b is convex, so
 * scanning outward from 0 terminates on first failure per direction. */
inline std::uint64_t oe_unit_count(const CyclicAlgebra &alg, double radius,
                                   double tau = 9.313225746154785e-10) {
    if (radius < 0 || !std::isfinite(radius))
        throw std::invalid_argument("oe_unit_count: radius must be nonnegative");
    const NumberField &F = alg.field();
    const int n = alg.degree();
    const UnitData &units = alg.units();
    const double cutoff = radius * radius * (1.0 + tau);

    auto frob_sq = [&](const FieldElement &x) {
        double s = 0;
        for (int c = 0; c < n; ++c) {
            qcomplex e = F.embed(c, x);
            s += to_double(e.norm_sq());
        }
        return s;
    };

    if (double(n) > cutoff) return 0; // even 1 has norm_sq n
    const std::uint64_t w = std::uint64_t(units.roots_of_unity);
    if (units.fundamental.empty()) return w;
    if (units.fundamental.size() > 1)
        throw config_error("oe_unit_count: closed-form scan supports unit rank at most 1");

    const FieldElement &eps = units.fundamental[0];
    // eps^-1: eps times the product of its other conjugates is rel_norm(eps),
    // a Z[i] unit, so the inverse stays in O_E
    FieldElement conj_prod = F.one();
    for (int t = 1; t < n; ++t) conj_prod = F.mul(conj_prod, F.sigma(t, eps));
    FieldElement eps_inv = F.scal_mul(zi_unit_inv(F.rel_norm(eps)), conj_prod);

    std::uint64_t count_b = 1; // b = 0
    for (const FieldElement &step : {eps, eps_inv}) {
        FieldElement cur = F.one();
        for (;;) {
            cur = F.mul(cur, step);
            if (frob_sq(cur) > cutoff) break;
            ++count_b;
        }
    }
    return w * count_b;
}

/* ---- fused ball census ---- */

struct BallCensus {
    double radius = 0;
    std::uint64_t point_count = 0;
    double det_sum = 0;
    double epstein_sum = 0;
    std::uint64_t unit_count = 0;
    std::uint64_t oe_unit_count = 0; // diagonal units seen by enumeration
    std::uint64_t coset_count = 0;
    double partial_zeta = 0;
};

struct UnitCosetRep {
    std::vector<std::int64_t> coords;
    double norm_sq = 0;
    std::size_t bucket = 0; // first radius bucket where the class appears
};

struct CensusResult {
    std::vector<BallCensus> rows;
    std::vector<std::uint64_t> ideal_counts; // distinct ideals within each radius
    std::vector<UnitCosetRep> coset_reps;    // smallest norm first
    std::uint64_t distinct_ideals = 0;
    std::uint64_t boundary_points = 0;
    std::uint64_t nvd_violations = 0;       // nonzero points with |Nrd|^2 < 1
    std::uint64_t minkowski_violations = 0; // |det| above the Frobenius bound
};

struct CensusOptions {
    int sum_exponent = 2;
    double zeta_s = 2.0;
    int workers = 4;
    EnumerateOptions enumerate;
};

namespace detail {

struct IdealRecord {
    std::uint32_t bucket;
    double index;
};

struct CensusPartial {
    std::vector<std::uint64_t> points, units, oe_units;
    std::vector<double> det, eps;
    std::uint64_t boundary = 0, nvd = 0, minkowski = 0;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, IdealRecord, Hash128Hasher> ideals;
    struct Rep {
        AlgebraElement elem;
        std::vector<std::int64_t> coords;
        double norm_sq;
        std::uint32_t bucket;
    };
    std::vector<Rep> reps;
};

inline void census_worker(const MatrixLattice &lat, const std::vector<double> &radii_sq_tol,
                          double rmax, const CensusOptions &opts,
                          std::optional<std::pair<std::int64_t, std::int64_t>> range,
                          CensusPartial &out) {
    const CyclicAlgebra &alg = lat.algebra();
    const int n = alg.degree();
    const int k = alg.lattice_dim();
    const int m = opts.sum_exponent;
    const std::size_t nb = radii_sq_tol.size();
    out.points.assign(nb, 0);
    out.units.assign(nb, 0);
    out.oe_units.assign(nb, 0);
    out.det.assign(nb, 0);
    out.eps.assign(nb, 0);

    EnumerateOptions eo = opts.enumerate;
    eo.top_range = range;
    enumerate_ball(lat, rmax, eo, [&](const LatticePoint &p) {
        std::size_t b = 0;
        while (b < nb && p.norm_sq > radii_sq_tol[b]) ++b;
        if (b == nb) return; // numerically above every requested radius
        if (p.boundary) ++out.boundary;
        ++out.points[b];

        AlgebraElement x = lat.element_of(p);
        GaussianInt nrd = alg.reduced_norm(x);
        Zint nz = nrd.norm();
        if (nz.is_zero()) { ++out.nvd; return; }

        out.det[b] += det_term(nz, m);
        out.eps[b] += epstein_term(p.norm_sq, n, m);

        double bound = std::pow(p.norm_sq / n, n);
        if (nz.convert_to<double>() > bound * (1.0 + 1e-9) + 1e-9) ++out.minkowski;

        if (nz == 1) {
            ++out.units[b];
            bool diagonal = true;
            for (int t = 1; t < n && diagonal; ++t)
                if (!x.part[t].is_zero()) diagonal = false;
            if (diagonal) ++out.oe_units[b];
            bool matched = false;
            for (auto &rep : out.reps)
                if (alg.same_unit_coset(rep.elem, x)) {
                    rep.bucket = std::min(rep.bucket, std::uint32_t(b));
                    matched = true;
                    break;
                }
            if (!matched)
                out.reps.push_back({x, p.coords, p.norm_sq, std::uint32_t(b)});
        }

        Zint index = 1;
        for (int t = 0; t < n; ++t) index *= nz;
        std::vector<Zint> rm = alg.right_mul_matrix(x);
        auto key = hash128(hnf_lattice_key(rm, k, index));
        auto it = out.ideals.find(key);
        if (it == out.ideals.end())
            out.ideals.emplace(key, IdealRecord{std::uint32_t(b), index.convert_to<double>()});
        else
            it->second.bucket = std::min(it->second.bucket, std::uint32_t(b));
    });
}

} // namespace detail

inline CensusResult run_census(const MatrixLattice &lat, const std::vector<double> &radii,
                               const CensusOptions &opts = {}) {
    if (radii.empty())
        throw std::invalid_argument("run_census: need at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0) || !std::isfinite(radii[i]))
            throw std::invalid_argument("run_census: radii must be positive and finite");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw std::invalid_argument("run_census: radii must be strictly ascending");
    }
    if (opts.sum_exponent < 1)
        throw std::invalid_argument("run_census: sum_exponent must be positive");
    if (opts.zeta_s < 2)
        throw std::invalid_argument("run_census: zeta exponent must be at least 2");

    const double tau = opts.enumerate.tau;
    const double rmax = radii.back();
    std::vector<double> radii_sq_tol;
    for (double r : radii) radii_sq_tol.push_back(r * r * (1.0 + tau));

    int workers = std::max(1, opts.workers);
    // the outermost coordinate is bounded by R / U_kk
    const int dim = lat.dim;
    double ukk = lat.chol_d[std::size_t(dim - 1) * dim + (dim - 1)];
    std::int64_t top = std::int64_t(std::floor(rmax * (1.0 + 1e-6) / ukk)) + 1;
    std::int64_t lo = -top, hi = top + 1;
    workers = int(std::min<std::int64_t>(workers, hi - lo));

    std::vector<detail::CensusPartial> parts(workers);
    if (workers == 1) {
        detail::census_worker(lat, radii_sq_tol, rmax, opts, std::nullopt, parts[0]);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(workers);
        std::int64_t span = hi - lo;
        for (int w = 0; w < workers; ++w) {
            std::int64_t a = lo + span * w / workers;
            std::int64_t b = lo + span * (w + 1) / workers;
            pool.emplace_back([&, w, a, b] {
                try {
                    detail::census_worker(lat, radii_sq_tol, rmax, opts,
                                          std::make_pair(a, b), parts[w]);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) t.join();
        for (auto &e : errs)
            if (e) std::rethrow_exception(e);
    }

    const std::size_t nb = radii.size();
    CensusResult res;
    res.rows.assign(nb, {});
    std::vector<std::uint64_t> pts(nb, 0), uns(nb, 0), oes(nb, 0);
    std::vector<double> det(nb, 0), eps(nb, 0), zeta(nb, 0);
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, detail::IdealRecord,
                       detail::Hash128Hasher> ideals;
    std::vector<detail::CensusPartial::Rep> reps;
    const CyclicAlgebra &alg = lat.algebra();

    for (auto &part : parts) {
        for (std::size_t b = 0; b < nb; ++b) {
            pts[b] += part.points[b];
            uns[b] += part.units[b];
            oes[b] += part.oe_units[b];
            det[b] += part.det[b];
            eps[b] += part.eps[b];
        }
        res.boundary_points += part.boundary;
        res.nvd_violations += part.nvd;
        res.minkowski_violations += part.minkowski;
        for (auto &[key, rec] : part.ideals) {
            auto it = ideals.find(key);
            if (it == ideals.end())
                ideals.emplace(key, rec);
            else
                it->second.bucket = std::min(it->second.bucket, rec.bucket);
        }
        for (auto &pr : part.reps) {
            bool matched = false;
            for (auto &gr : reps)
                if (alg.same_unit_coset(gr.elem, pr.elem)) {
                    gr.bucket = std::min(gr.bucket, pr.bucket);
                    matched = true;
                    break;
                }
            if (!matched) reps.push_back(pr);
        }
    }

    // deterministic zeta accumulation independent of map layout
    std::vector<std::pair<std::pair<std::uint64_t, std::uint64_t>, detail::IdealRecord>> flat(
        ideals.begin(), ideals.end());
    std::sort(flat.begin(), flat.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<std::uint64_t> ideal_new(nb, 0);
    for (auto &[key, rec] : flat) {
        zeta[rec.bucket] += std::pow(rec.index, -opts.zeta_s);
        ++ideal_new[rec.bucket];
    }
    res.distinct_ideals = flat.size();
    res.ideal_counts.assign(nb, 0);
    std::uint64_t ci = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        ci += ideal_new[b];
        res.ideal_counts[b] = ci;
    }

    std::vector<std::uint64_t> cosets(nb, 0);
    for (auto &r : reps) ++cosets[r.bucket];

    std::uint64_t cp = 0, cu = 0, co = 0, cc = 0;
    double cd = 0, ce = 0, cz = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        cp += pts[b];
        cu += uns[b];
        co += oes[b];
        cc += cosets[b];
        cd += det[b];
        ce += eps[b];
        cz += zeta[b];
        res.rows[b] = {radii[b], cp, cd, ce, cu, co, cc, cz};
    }

    std::sort(reps.begin(), reps.end(), [](const auto &a, const auto &b) {
        if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
        return a.coords < b.coords;
    });
    for (auto &r : reps) res.coset_reps.push_back({r.coords, r.norm_sq, r.bucket});
    return res;
}

/* ---- partial zeta over an explicit point set ---- */

inline double partial_zeta(const MatrixLattice &lat, const std::vector<LatticePoint> &points,
                           double s = 2.0) {
    if (s < 2)
        throw std::invalid_argument("partial_zeta: exponent must be at least 2");
    const CyclicAlgebra &alg = lat.algebra();
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, detail::Hash128Hasher> seen;
    for (const auto &p : points) {
        AlgebraElement x = lat.element_of(p);
        Zint index = ideal_index(alg, x);
        auto key = detail::hash128(ideal_key(alg, x, index));
        seen.emplace(key, index.convert_to<double>());
    }
    std::vector<std::pair<std::pair<std::uint64_t, std::uint64_t>, double>> flat(seen.begin(),
                                                                                 seen.end());
    std::sort(flat.begin(), flat.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    double z = 0;
    for (auto &[k, idx] : flat) z += std::pow(idx, -s);
    return z;
}

} // namespace cda
