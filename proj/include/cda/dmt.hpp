#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "cda/errors.hpp"
#include "cda/lattice.hpp"

namespace cda {

/* ---- counter-based randomness ----
 * Every draw is a pure function of (seed, stream, counter), so trial i sees
 * the same numbers no matter how trials are split across threads. */

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(splitmix64(seed ^ splitmix64(stream * 0xd1342543de82ef95ull +
                                             0x632be59bd9b4e019ull))) {}

    std::uint64_t next_u64() { return splitmix64(base_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

    double next_open01() { // (0, 1], safe under log
        return double((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() -
                            std::numeric_limits<std::uint64_t>::max() % n;
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < lim) return v % n;
        }
    }

    // CN(0,1): radius^2 exponential, phase uniform; re and im come out N(0, 1/2)
    std::complex<double> next_cgauss() {
        double r = std::sqrt(-std::log(next_open01()));
        double a = 2.0 * M_PI * next_open01();
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
};

/* ---- small complex matrices ---- */

struct CMat {
    int rows = 0, cols = 0;
    std::vector<std::complex<double>> a;
    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}
    std::complex<double> &at(int r, int c) { return a[std::size_t(r) * cols + c]; }
    const std::complex<double> &at(int r, int c) const { return a[std::size_t(r) * cols + c]; }
    double frob_sq() const {
        double s = 0;
        for (auto &v : a) s += std::norm(v);
        return s;
    }
};

inline CMat cmat_mul(const CMat &x, const CMat &y) {
    CMat z(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int k = 0; k < x.cols; ++k) {
            std::complex<double> xv = x.at(r, k);
            if (xv == 0.0) continue;
            for (int c = 0; c < y.cols; ++c) z.at(r, c) += xv * y.at(k, c);
        }
    return z;
}

/* ---- simulation configuration and results ---- */

struct SimConfig {
    int n_t = 2;
    int n_r = 2;
    int T = 2;                  // block length, codewords are n_t x T
    double rate_param = 0;      // multiplexing gain target r
    std::vector<double> snr_grid_db;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    std::uint64_t codebook_cap = 4096;
};

struct SnrRecord {
    double snr_db = 0;
    std::size_t codebook_size = 0;
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double error_rate = 0;
};

struct SimResult {
    std::vector<SnrRecord> records;
    double slope = 0;           // fitted diversity estimate
    bool slope_reliable = false;
    int slope_points = 0;
    double energy_stat = 0;     // worst per-codebook average Frobenius energy
};

/* ---- spherical coding scheme ----
 * C = rho^{-rT/k} L(rho^{rT/k}) plus the zero codeword; k is the lattice
 * dimension. Codewords are the numeric psi images, scaled. */
inline std::vector<CMat> build_codebook(const MatrixLattice &lat, double rho, double r,
                                        std::uint64_t cap, const EnumerateOptions &eopts = {}) {
    if (!(rho > 1))
        throw config_error("build_codebook: rho must exceed 1");
    if (r < 0)
        throw config_error("build_codebook: rate parameter must be nonnegative");
    const int n = lat.algebra().degree();
    const double expo = r * double(n) / double(lat.dim); // rT/k with T = n
    const double radius = std::pow(rho, expo);
    const double scale = 1.0 / radius;

    std::vector<CMat> code;
    CMat zero(n, n);
    code.push_back(zero);

    EnumerateOptions eo = eopts;
    eo.point_cap = std::min<std::uint64_t>(eo.point_cap, cap > 0 ? cap : 1);
    enumerate_ball(lat, radius, eo, [&](const LatticePoint &p) {
        if (code.size() >= cap)
            throw budget_error("build_codebook: codebook exceeds cap " + std::to_string(cap));
        auto psi = lat.psi_numeric(lat.element_of(p));
        CMat m(n, n);
        for (std::size_t e = 0; e < psi.size(); ++e) m.a[e] = scale * psi[e];
        code.push_back(m);
    });
    if (r > 0 && code.size() == 1)
        throw config_error("build_codebook: empty codebook at positive rate; raise snr_grid_db");
    return code;
}

inline double average_energy(const std::vector<CMat> &code) {
    if (code.empty()) return 0;
    double s = 0;
    for (auto &c : code) s += c.frob_sq();
    return s / double(code.size());
}

/* One trial: draw H and noise, send a uniform codeword, decode by exhaustive
 * maximum likelihood (lowest index wins ties). Returns true on codeword error. */
inline bool simulate_one_trial(const std::vector<CMat> &code, int n_t, int n_r, double rho,
                               std::uint64_t seed, std::uint64_t trial) {
    CounterRng rng(seed, trial);
    const int T = code[0].cols;
    CMat H(n_r, n_t);
    for (auto &v : H.a) v = rng.next_cgauss();
    std::uint64_t sent = rng.next_below(code.size());
    const double scale = std::sqrt(rho / double(n_t));

    CMat Y = cmat_mul(H, code[sent]);
    for (int e = 0; e < n_r * T; ++e) Y.a[e] = scale * Y.a[e] + rng.next_cgauss();

    std::uint64_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 0; j < code.size(); ++j) {
        CMat HX = cmat_mul(H, code[j]);
        double metric = 0;
        for (int e = 0; e < n_r * T; ++e) metric += std::norm(Y.a[e] - scale * HX.a[e]);
        if (metric < best_metric) {
            best_metric = metric;
            best = j;
        }
    }
    return best != sent;
}

inline std::uint64_t simulate_error_count(const std::vector<CMat> &code, int n_t, int n_r,
                                          double snr_db, std::uint64_t trials,
                                          std::uint64_t seed, int workers = 4) {
    if (code.empty())
        throw std::invalid_argument("simulate_error_count: empty codebook");
    if (trials < 1)
        throw std::invalid_argument("simulate_error_count: trials must be at least 1");
    const double rho = std::pow(10.0, snr_db / 10.0);
    workers = std::max(1, workers);
    if (std::uint64_t(workers) > trials) workers = int(trials);

    std::vector<std::uint64_t> partial(workers, 0);
    auto run_range = [&](std::uint64_t a, std::uint64_t b, std::uint64_t &out) {
        std::uint64_t errs = 0;
        for (std::uint64_t t = a; t < b; ++t)
            if (simulate_one_trial(code, n_t, n_r, rho, seed, t)) ++errs;
        out = errs;
    };
    if (workers == 1) {
        run_range(0, trials, partial[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run_range, trials * w / workers, trials * (w + 1) / workers,
                              std::ref(partial[w]));
        for (auto &t : pool) t.join();
    }
    std::uint64_t errors = 0;
    for (auto e : partial) errors += e;
    return errors;
}

/* ---- diversity estimation ---- */

struct DiversityEstimate {
    double slope = std::numeric_limits<double>::quiet_NaN();
    bool reliable = false;
    int points_used = 0;
};

inline DiversityEstimate estimate_diversity(const std::vector<SnrRecord> &records,
                                            std::uint64_t min_errors = 10) {
    std::vector<std::pair<double, double>> pts; // (ln rho, -ln pe)
    for (const auto &rec : records) {
        if (rec.errors < min_errors || rec.error_rate <= 0) continue;
        double rho = std::pow(10.0, rec.snr_db / 10.0);
        pts.emplace_back(std::log(rho), -std::log(rec.error_rate));
    }
    DiversityEstimate est;
    est.points_used = int(pts.size());
    est.reliable = pts.size() >= 3;
    if (pts.size() < 2) return est;
    double n = double(pts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto &[x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    if (det <= 0) return est;
    est.slope = (n * sxy - sx * sy) / det;
    return est;
}

/* ---- references and bounds ---- */

// Zheng-Tse optimal tradeoff: piecewise linear through (r, (m-r)(n-r))
inline double dmt_reference(int m, int n, double r) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("dmt_reference: antenna counts must be positive");
    double rmax = double(std::min(m, n));
    if (r < 0 || r > rmax)
        throw std::invalid_argument("dmt_reference: r outside [0, min(m,n)]");
    double k = std::floor(r);
    if (k == r) return (m - r) * (n - r);
    double lo = (m - k) * (n - k);
    double hi = (m - k - 1) * (n - k - 1);
    return lo + (r - k) * (hi - lo);
}

// exact Rayleigh BPSK codeword error rate at average receive SNR rho
inline double rayleigh_bpsk_pe(double rho) {
    return 0.5 * (1.0 - std::sqrt(rho / (1.0 + rho)));
}

// P_e <= rho^{-n n_r (1 - r/n)} * S_L(2 rho^{r/2n}); caller supplies the sum
inline double union_bound_pe(double rho, int n, int n_r, double r, double det_sum_value) {
    return std::pow(rho, -double(n) * n_r * (1.0 - r / n)) * det_sum_value;
}

inline std::vector<CMat> bpsk_codebook() {
    CMat plus(1, 1), minus(1, 1);
    plus.at(0, 0) = 1.0;
    minus.at(0, 0) = -1.0;
    return {plus, minus};
}

/* ---- full campaigns ---- */

inline void validate_sim_config(const SimConfig &cfg) {
    if (cfg.n_t < 1 || cfg.n_r < 1 || cfg.T < 1)
        throw config_error("sim config: antenna counts and block length must be positive");
    if (cfg.rate_param < 0)
        throw config_error("sim config: rate must be nonnegative");
    if (cfg.trials < 1)
        throw config_error("sim config: trials must be at least 1");
    if (cfg.snr_grid_db.empty())
        throw config_error("sim config: snr_grid_db must be nonempty");
    for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
        if (cfg.snr_grid_db[i] <= cfg.snr_grid_db[i - 1])
            throw config_error("sim config: snr_grid_db must be ascending");
    if (cfg.codebook_cap < 1)
        throw config_error("sim config: codebook_cap must be positive");
}

inline SimResult run_sim(const std::vector<std::vector<CMat>> &codebooks, const SimConfig &cfg,
                         int workers = 4) {
    validate_sim_config(cfg);
    if (codebooks.size() != cfg.snr_grid_db.size())
        throw std::invalid_argument("run_sim: one codebook per SNR point required");
    SimResult res;
    double worst_energy = 0;
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        const auto &code = codebooks[i];
        double avg = average_energy(code);
        worst_energy = std::max(worst_energy, avg);
        if (avg > double(cfg.T) * cfg.n_t * 1.01)
            throw internal_error("run_sim: codebook violates the average energy constraint");
        SnrRecord rec;
        rec.snr_db = cfg.snr_grid_db[i];
        rec.codebook_size = code.size();
        rec.trials = cfg.trials;
        rec.errors = code.size() < 2
                         ? 0
                         : simulate_error_count(code, cfg.n_t, cfg.n_r, rec.snr_db, cfg.trials,
                                                cfg.seed, workers);
        rec.error_rate = double(rec.errors) / double(rec.trials);
        res.records.push_back(rec);
    }
    DiversityEstimate est = estimate_diversity(res.records);
    res.slope = est.slope;
    res.slope_reliable = est.reliable;
    res.slope_points = est.points_used;
    res.energy_stat = worst_energy;
    return res;
}

// lattice spherical-code campaign: one codebook per SNR point
inline SimResult run_lattice_sim(const MatrixLattice &lat, const SimConfig &cfg,
                                 int workers = 4) {
    validate_sim_config(cfg);
    std::vector<std::vector<CMat>> codebooks;
    for (double snr_db : cfg.snr_grid_db) {
        double rho = std::pow(10.0, snr_db / 10.0);
        codebooks.push_back(build_codebook(lat, rho, cfg.rate_param, cfg.codebook_cap));
    }
    return run_sim(codebooks, cfg, workers);
}

inline SimResult run_bpsk_sim(const SimConfig &cfg, int workers = 4) {
    SimConfig c = cfg;
    c.n_t = 1;
    c.T = 1;
    validate_sim_config(c);
    std::vector<std::vector<CMat>> codebooks(c.snr_grid_db.size(), bpsk_codebook());
    return run_sim(codebooks, c, workers);
}

} // namespace cda
