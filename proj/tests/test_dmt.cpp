#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "cda/dmt.hpp"
#include "gold.hpp"

using namespace cda;

namespace {

// rate parameter that makes the codebook radius exactly sqrt(2) at rho = 100:
// radius = rho^(r/4) for the golden lattice (n = 2, dim = 8)
const double kRateSqrt2 = std::log(4.0) / std::log(100.0);

SimConfig bpsk_config(std::vector<double> snrs, std::uint64_t trials, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n_r = 1;
    cfg.rate_param = 0;
    cfg.snr_grid_db = std::move(snrs);
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("splitmix64 matches the reference sequence") {
    // first outputs of the canonical generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ull);
    CHECK(splitmix64(0) != splitmix64(2));
}

TEST_CASE("counter rng is deterministic and stream-separated") {
    CounterRng a(5, 2), b(5, 2);
    for (int k = 0; k < 32; ++k) CHECK(a.next_u64() == b.next_u64());

    CounterRng s0(5, 0), s1(5, 1), t0(6, 0);
    int diff_stream = 0, diff_seed = 0;
    for (int k = 0; k < 32; ++k) {
        std::uint64_t v = s0.next_u64();
        if (v != s1.next_u64()) ++diff_stream;
        if (v != t0.next_u64()) ++diff_seed;
    }
    CHECK(diff_stream == 32);
    CHECK(diff_seed == 32);
}

TEST_CASE("counter rng draws have the right ranges and moments") {
    CounterRng rng(9, 0);
    for (int k = 0; k < 10000; ++k) {
        double v = rng.next_open01();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    std::vector<int> buckets(8, 0);
    for (int k = 0; k < 20000; ++k) ++buckets[rng.next_below(8)];
    for (int v : buckets) {
        CHECK(v > 2300);
        CHECK(v < 2700);
    }

    double sum_sq = 0;
    std::complex<double> sum = 0;
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) {
        auto z = rng.next_cgauss();
        sum += z;
        sum_sq += std::norm(z);
    }
    CHECK(sum_sq / draws == Catch::Approx(1.0).margin(0.03));
    CHECK(std::abs(sum) / draws < 0.02);
}

TEST_CASE("tradeoff reference curve") {
    CHECK(dmt_reference(2, 2, 0.0) == 4.0);
    CHECK(dmt_reference(2, 2, 1.0) == 1.0);
    CHECK(dmt_reference(2, 2, 2.0) == 0.0);
    CHECK(dmt_reference(2, 2, 0.5) == Catch::Approx(2.5).margin(1e-12));
    CHECK(dmt_reference(2, 2, 1.5) == Catch::Approx(0.5).margin(1e-12));
    CHECK(dmt_reference(1, 1, 0.0) == 1.0);
    CHECK(dmt_reference(1, 1, 1.0) == 0.0);
    CHECK(dmt_reference(4, 2, 1.0) == 3.0);
    CHECK(dmt_reference(4, 2, 2.0) == 0.0);

    CHECK_THROWS_AS(dmt_reference(0, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dmt_reference(2, 2, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(dmt_reference(2, 2, 2.1), std::invalid_argument);
    CHECK_THROWS_AS(dmt_reference(4, 2, 2.5), std::invalid_argument);
}

TEST_CASE("rayleigh bpsk closed form") {
    CHECK(rayleigh_bpsk_pe(1e-12) == Catch::Approx(0.5).margin(1e-6));
    // high-SNR tail behaves like 1/(4 rho)
    CHECK(rayleigh_bpsk_pe(1e6) == Catch::Approx(0.25e-6).epsilon(1e-3));
    double prev = 0.5;
    for (double rho : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
        double pe = rayleigh_bpsk_pe(rho);
        CHECK(pe < prev);
        prev = pe;
    }
}

TEST_CASE("union bound formula") {
    CHECK(union_bound_pe(100.0, 2, 2, 1.0, 7.0) == Catch::Approx(7e-4).epsilon(1e-12));
    CHECK(union_bound_pe(100.0, 2, 2, 0.0, 1.0) == Catch::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("diversity estimate recovers exact slopes") {
    auto record = [](double snr_db, double pe, std::uint64_t errors) {
        SnrRecord r;
        r.snr_db = snr_db;
        r.error_rate = pe;
        r.errors = errors;
        r.trials = 1000000;
        return r;
    };
    std::vector<SnrRecord> recs;
    for (double s : {10.0, 20.0, 30.0}) {
        double rho = std::pow(10.0, s / 10.0);
        recs.push_back(record(s, std::pow(rho, -3.0), 1000));
    }
    DiversityEstimate est = estimate_diversity(recs);
    CHECK(est.slope == Catch::Approx(3.0).margin(1e-9));
    CHECK(est.reliable);
    CHECK(est.points_used == 3);

    // starved points are dropped; two usable points still give a slope but no
    // reliability flag
    recs[2].errors = 5;
    est = estimate_diversity(recs);
    CHECK(est.points_used == 2);
    CHECK_FALSE(est.reliable);
    CHECK(est.slope == Catch::Approx(3.0).margin(1e-9));

    recs[1].errors = 5;
    est = estimate_diversity(recs);
    CHECK(est.points_used == 1);
    CHECK(std::isnan(est.slope));
}

TEST_CASE("codebook construction at the golden lattice") {
    MatrixLattice lat = build_lattice(gold::algebra());

    // zero rate: radius 1 ball holds no lattice point, zero codeword only
    auto c0 = build_codebook(lat, 100.0, 0.0, 4096);
    CHECK(c0.size() == 1);
    CHECK(c0[0].frob_sq() == 0.0);

    // radius sqrt(2): the eight units join the zero codeword, each scaled to
    // unit Frobenius energy
    auto c1 = build_codebook(lat, 100.0, kRateSqrt2, 4096);
    REQUIRE(c1.size() == 9);
    for (std::size_t k = 1; k < c1.size(); ++k)
        CHECK(c1[k].frob_sq() == Catch::Approx(1.0).margin(1e-9));
    CHECK(average_energy(c1) == Catch::Approx(8.0 / 9.0).margin(1e-9));

    CHECK_THROWS_AS(build_codebook(lat, 100.0, kRateSqrt2, 5), budget_error);
    CHECK_THROWS_AS(build_codebook(lat, 1.02, 0.3, 4096), config_error);
    CHECK_THROWS_AS(build_codebook(lat, 1.0, 0.3, 4096), config_error);
    CHECK_THROWS_AS(build_codebook(lat, 0.5, 0.3, 4096), config_error);
    CHECK_THROWS_AS(build_codebook(lat, 100.0, -0.1, 4096), config_error);
}

TEST_CASE("bpsk simulation matches the closed form") {
    SimConfig cfg = bpsk_config({0.0, 10.0, 20.0}, 200000, 11);
    SimResult res = run_bpsk_sim(cfg);
    REQUIRE(res.records.size() == 3);
    for (const auto &rec : res.records) {
        double rho = std::pow(10.0, rec.snr_db / 10.0);
        double pe = rayleigh_bpsk_pe(rho);
        double sigma = std::sqrt(pe * (1.0 - pe) / double(rec.trials));
        CHECK(std::abs(rec.error_rate - pe) < 3.0 * sigma);
    }
    // rates fall with SNR
    CHECK(res.records[0].error_rate > res.records[1].error_rate);
    CHECK(res.records[1].error_rate > res.records[2].error_rate);
    CHECK(res.energy_stat == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("bpsk diversity slope is near one") {
    SimConfig cfg = bpsk_config({10.0, 15.0, 20.0, 25.0, 30.0}, 100000, 7);
    SimResult res = run_bpsk_sim(cfg);
    CHECK(res.slope_reliable);
    CHECK(res.slope > 0.7);
    CHECK(res.slope < 1.3);
}

TEST_CASE("simulation is reproducible across runs and worker counts") {
    auto code = bpsk_codebook();
    std::uint64_t e1 = simulate_error_count(code, 1, 1, 10.0, 10001, 3, 1);
    std::uint64_t e3 = simulate_error_count(code, 1, 1, 10.0, 10001, 3, 3);
    std::uint64_t e8 = simulate_error_count(code, 1, 1, 10.0, 10001, 3, 8);
    CHECK(e1 == e3);
    CHECK(e1 == e8);
    CHECK(e1 == simulate_error_count(code, 1, 1, 10.0, 10001, 3, 3));
    // more workers than trials degrades gracefully
    CHECK(simulate_error_count(code, 1, 1, 10.0, 2, 3, 64) ==
          simulate_error_count(code, 1, 1, 10.0, 2, 3, 1));

    SimConfig cfg = bpsk_config({5.0, 10.0}, 20000, 17);
    SimResult a = run_bpsk_sim(cfg, 4);
    SimResult b = run_bpsk_sim(cfg, 2);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k)
        CHECK(a.records[k].errors == b.records[k].errors);
}

TEST_CASE("lattice campaign at zero rate sends only the zero codeword") {
    MatrixLattice lat = build_lattice(gold::algebra());
    SimConfig cfg;
    cfg.rate_param = 0;
    cfg.snr_grid_db = {10.0, 14.0};
    cfg.trials = 50;
    cfg.seed = 1;
    SimResult res = run_lattice_sim(lat, cfg);
    REQUIRE(res.records.size() == 2);
    for (const auto &rec : res.records) {
        CHECK(rec.codebook_size == 1);
        CHECK(rec.errors == 0);
    }
    CHECK(std::isnan(res.slope));
    CHECK_FALSE(res.slope_reliable);
}

TEST_CASE("lattice campaign records the spherical codebook") {
    MatrixLattice lat = build_lattice(gold::algebra());
    SimConfig cfg;
    cfg.rate_param = kRateSqrt2;
    cfg.snr_grid_db = {20.0};
    cfg.trials = 4000;
    cfg.seed = 2;
    SimResult res = run_lattice_sim(lat, cfg);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].codebook_size == 9);
    CHECK(res.records[0].trials == 4000);
    CHECK(res.energy_stat == Catch::Approx(8.0 / 9.0).margin(1e-9));

    SimConfig capped = cfg;
    capped.codebook_cap = 5;
    CHECK_THROWS_AS(run_lattice_sim(lat, capped), budget_error);
}

TEST_CASE("simulation input validation") {
    auto code = bpsk_codebook();
    CHECK_THROWS_AS(simulate_error_count({}, 1, 1, 10.0, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_error_count(code, 1, 1, 10.0, 0, 0), std::invalid_argument);

    SimConfig cfg = bpsk_config({10.0}, 100, 0);
    cfg.snr_grid_db.clear();
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);
    cfg.snr_grid_db = {10.0, 10.0};
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);
    cfg.snr_grid_db = {10.0, 5.0};
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);
    cfg.snr_grid_db = {10.0};
    cfg.trials = 0;
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);
    cfg.trials = 100;
    cfg.rate_param = -1.0;
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);
    cfg.rate_param = 0;
    cfg.codebook_cap = 0;
    CHECK_THROWS_AS(run_bpsk_sim(cfg), config_error);

    // codebook list must line up with the SNR grid
    SimConfig ok = bpsk_config({5.0, 10.0}, 100, 0);
    CHECK_THROWS_AS(run_sim({bpsk_codebook()}, ok), std::invalid_argument);

    // oversized codewords trip the average energy guard
    CMat hot(1, 1);
    hot.at(0, 0) = 10.0;
    SimConfig one = bpsk_config({10.0}, 1, 0);
    CHECK_THROWS_AS(run_sim({{hot}}, one), internal_error);
}
