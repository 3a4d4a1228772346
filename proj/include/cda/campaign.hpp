#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cda/analysis.hpp"
#include "cda/config.hpp"
#include "cda/dmt.hpp"
#include "cda/errors.hpp"
#include "cda/lattice.hpp"

namespace cda {

inline constexpr const char *kSchemaVersion = "1";

struct Campaign {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::vector<double> radii; // empty: standard grid filtered by the cap
    int sum_exponent = 2;
    double zeta_s = 2.0;
    int precision_bits = 128;
    std::uint64_t point_cap = 10000000;
    std::uint64_t seed = 0;
    int workers = 4;
    // simulate
    std::string scheme = "lattice"; // lattice | bpsk
    double rate = 0;
    std::vector<double> snr_grid_db;
    std::uint64_t trials = 10000;
    int rx_antennas = 2;
    std::uint64_t codebook_cap = 4096;
    // fit input: an existing census table instead of a fresh run
    std::string input_csv;
};

/* ---- deterministic formatting and naming ---- */

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string &bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string read_file_bytes(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string report_basename(const Campaign &c) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  (unsigned long long)fnv1a64(read_file_bytes(c.config_path)));
    return c.command + "_" + hex + "_" + std::to_string(c.seed);
}

inline std::string write_text(const std::string &dir, const std::string &name,
                              const std::string &content) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw config_error("cannot write file: " + p.string());
    out << content;
    return p.string();
}

/* ---- radius grid ---- */

inline std::vector<double> standard_grid() { return {2, 3, 4, 6, 8, 11, 16}; }

inline std::vector<double> grid_for(const MatrixLattice &lat, const Campaign &c,
                                    std::vector<double> *dropped = nullptr) {
    std::vector<double> grid = c.radii.empty() ? standard_grid() : c.radii;
    std::vector<double> kept;
    for (double r : grid) {
        if (predicted_point_count(lat, r) <= double(c.point_cap))
            kept.push_back(r);
        else if (dropped)
            dropped->push_back(r);
    }
    if (kept.empty())
        throw budget_error("radius grid: every radius exceeds the point cap " +
                           std::to_string(c.point_cap));
    return kept;
}

/* ---- command payloads ---- */

struct CommandOutput {
    std::vector<std::string> files;
    int exit_code = 0;
    std::string message;
};

namespace campaign_detail {

inline nlohmann::ordered_json meta_json(const Campaign &c) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = c.command;
    j["config"] = c.config_path;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  (unsigned long long)fnv1a64(read_file_bytes(c.config_path)));
    j["config_hash"] = std::string(hex);
    j["seed"] = c.seed;
    j["precision_bits"] = c.precision_bits;
    j["point_cap"] = c.point_cap;
    j["workers"] = c.workers;
    return j;
}

inline std::string census_csv(const CensusResult &res) {
    std::string csv = "R,point_count,det_sum,epstein_sum,unit_count,oe_unit_count,"
                      "coset_count,partial_zeta\n";
    for (const auto &row : res.rows) {
        csv += fmt_double(row.radius) + "," + std::to_string(row.point_count) + "," +
               fmt_double(row.det_sum) + "," + fmt_double(row.epstein_sum) + "," +
               std::to_string(row.unit_count) + "," + std::to_string(row.oe_unit_count) + "," +
               std::to_string(row.coset_count) + "," + fmt_double(row.partial_zeta) + "\n";
    }
    return csv;
}

inline CensusResult run_campaign_census(const MatrixLattice &lat, const Campaign &c,
                                        const std::vector<double> &grid) {
    CensusOptions opts;
    opts.sum_exponent = c.sum_exponent;
    opts.zeta_s = c.zeta_s;
    opts.workers = c.workers;
    opts.enumerate.point_cap = c.point_cap;
    return run_census(lat, grid, opts);
}

inline nlohmann::ordered_json fit_or_null(const std::vector<std::pair<double, double>> &samples) {
    nlohmann::ordered_json j;
    bool positive = samples.size() >= 3;
    for (auto &[r, v] : samples)
        if (!(v > 0)) positive = false;
    if (!positive) {
        j["skipped"] = "needs at least 3 samples with positive values";
        return j;
    }
    GrowthFit fit = fit_growth(samples);
    j["exponent"] = fit.exponent;
    j["log_constant"] = fit.log_constant;
    j["residual"] = fit.residual;
    return j;
}

inline nlohmann::ordered_json census_fits(const std::vector<BallCensus> &rows) {
    auto col = [&](auto getter) {
        std::vector<std::pair<double, double>> s;
        for (const auto &row : rows) s.emplace_back(row.radius, double(getter(row)));
        return s;
    };
    nlohmann::ordered_json j;
    j["point_count"] = fit_or_null(col([](const BallCensus &r) { return r.point_count; }));
    j["det_sum"] = fit_or_null(col([](const BallCensus &r) { return r.det_sum; }));
    j["epstein_sum"] = fit_or_null(col([](const BallCensus &r) { return r.epstein_sum; }));
    j["unit_count"] = fit_or_null(col([](const BallCensus &r) { return r.unit_count; }));
    j["oe_unit_count"] = fit_or_null(col([](const BallCensus &r) { return r.oe_unit_count; }));
    j["coset_count"] = fit_or_null(col([](const BallCensus &r) { return r.coset_count; }));
    return j;
}

inline int violations_exit(const CensusResult &res, std::string &msg) {
    if (res.nvd_violations > 0) {
        msg = "internal consistency failure: " + std::to_string(res.nvd_violations) +
              " points with vanishing reduced norm";
        return 3;
    }
    if (res.minkowski_violations > 0) {
        msg = "internal consistency failure: " + std::to_string(res.minkowski_violations) +
              " points violating the determinant-norm inequality";
        return 3;
    }
    return 0;
}

} // namespace campaign_detail

/* ---- commands ---- */

inline CommandOutput cmd_enumerate(const CyclicAlgebra &alg, const Campaign &c) {
    MatrixLattice lat = build_lattice(alg, c.precision_bits);
    std::vector<double> grid = grid_for(lat, c);
    double radius = grid.back();
    EnumerateOptions eo;
    eo.point_cap = c.point_cap;

    std::string csv;
    for (int i = 0; i < lat.dim; ++i) csv += "c" + std::to_string(i) + ",";
    csv += "norm_sq,nrd_re,nrd_im\n";
    enumerate_ball(lat, radius, eo, [&](const LatticePoint &p) {
        for (auto v : p.coords) csv += std::to_string(v) + ",";
        GaussianInt nrd = alg.reduced_norm(lat.element_of(p));
        csv += fmt_double(p.norm_sq) + "," + nrd.re.str() + "," + nrd.im.str() + "\n";
    });

    CommandOutput out;
    out.files.push_back(write_text(c.out_dir, report_basename(c) + ".csv", csv));
    return out;
}

inline CommandOutput cmd_census(const CyclicAlgebra &alg, const Campaign &c) {
    MatrixLattice lat = build_lattice(alg, c.precision_bits);
    std::vector<double> dropped;
    std::vector<double> grid = grid_for(lat, c, &dropped);
    CensusResult res = campaign_detail::run_campaign_census(lat, c, grid);

    auto meta = campaign_detail::meta_json(c);
    meta["sum_exponent"] = c.sum_exponent;
    meta["zeta_s"] = c.zeta_s;
    meta["radii"] = grid;
    meta["radii_dropped_by_cap"] = dropped;
    meta["boundary_points"] = res.boundary_points;
    meta["distinct_ideals"] = res.distinct_ideals;
    meta["nvd_violations"] = res.nvd_violations;
    meta["minkowski_violations"] = res.minkowski_violations;

    CommandOutput out;
    std::string base = report_basename(c);
    out.files.push_back(write_text(c.out_dir, base + ".csv", campaign_detail::census_csv(res)));
    out.files.push_back(write_text(c.out_dir, base + ".json", meta.dump(2) + "\n"));
    out.exit_code = campaign_detail::violations_exit(res, out.message);
    return out;
}

inline CommandOutput cmd_fit(const CyclicAlgebra &alg, const Campaign &c) {
    std::vector<BallCensus> rows;
    std::vector<double> dropped;
    if (!c.input_csv.empty()) {
        // consume a previously written census table
        std::ifstream in(c.input_csv);
        if (!in)
            throw config_error("fit: cannot open input table " + c.input_csv);
        std::string line;
        if (!std::getline(in, line) ||
            line.rfind("R,point_count,det_sum,epstein_sum", 0) != 0)
            throw config_error("fit: input is not a census table: " + c.input_csv);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            BallCensus row;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            if (!(ss >> row.radius >> row.point_count >> row.det_sum >> row.epstein_sum >>
                  row.unit_count >> row.oe_unit_count >> row.coset_count >> row.partial_zeta))
                throw config_error("fit: malformed census row: " + line);
            rows.push_back(row);
        }
    } else {
        MatrixLattice lat = build_lattice(alg, c.precision_bits);
        std::vector<double> grid = grid_for(lat, c, &dropped);
        rows = campaign_detail::run_campaign_census(lat, c, grid).rows;
    }
    if (rows.size() < 3)
        throw config_error("fit: need at least 3 census rows");

    auto meta = campaign_detail::meta_json(c);
    meta["input"] = c.input_csv.empty() ? "census" : c.input_csv;
    meta["radii_dropped_by_cap"] = dropped;
    meta["fits"] = campaign_detail::census_fits(rows);

    CommandOutput out;
    out.files.push_back(write_text(c.out_dir, report_basename(c) + ".json", meta.dump(2) + "\n"));
    return out;
}

inline CommandOutput cmd_zeta(const CyclicAlgebra &alg, const Campaign &c) {
    MatrixLattice lat = build_lattice(alg, c.precision_bits);
    std::vector<double> grid = grid_for(lat, c);
    CensusResult res = campaign_detail::run_campaign_census(lat, c, grid);

    std::string csv = "R,distinct_ideals,partial_zeta,increment\n";
    std::vector<double> increments;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        double inc = res.rows[i].partial_zeta - (i ? res.rows[i - 1].partial_zeta : 0.0);
        increments.push_back(inc);
        csv += fmt_double(res.rows[i].radius) + "," + std::to_string(res.ideal_counts[i]) + "," +
               fmt_double(res.rows[i].partial_zeta) + "," + fmt_double(inc) + "\n";
    }

    auto meta = campaign_detail::meta_json(c);
    meta["s"] = c.zeta_s;
    meta["increments"] = increments;
    bool monotone = true;
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        if (res.rows[i].partial_zeta < res.rows[i - 1].partial_zeta) monotone = false;
    meta["nondecreasing"] = monotone;
    if (increments.size() >= 2)
        meta["increments_shrinking"] = increments.back() < 0.5 * increments.front();

    CommandOutput out;
    std::string base = report_basename(c);
    out.files.push_back(write_text(c.out_dir, base + ".csv", csv));
    out.files.push_back(write_text(c.out_dir, base + ".json", meta.dump(2) + "\n"));
    out.exit_code = campaign_detail::violations_exit(res, out.message);
    return out;
}

inline CommandOutput cmd_units(const CyclicAlgebra &alg, const Campaign &c) {
    MatrixLattice lat = build_lattice(alg, c.precision_bits);
    std::vector<double> grid = grid_for(lat, c);
    CensusResult res = campaign_detail::run_campaign_census(lat, c, grid);

    std::string csv = "R,unit_count,oe_unit_count,oe_closed_form,coset_count\n";
    bool closed_form_agrees = true;
    for (const auto &row : res.rows) {
        std::uint64_t cf = oe_unit_count(alg, row.radius);
        if (cf != row.oe_unit_count) closed_form_agrees = false;
        csv += fmt_double(row.radius) + "," + std::to_string(row.unit_count) + "," +
               std::to_string(row.oe_unit_count) + "," + std::to_string(cf) + "," +
               std::to_string(row.coset_count) + "\n";
    }

    auto meta = campaign_detail::meta_json(c);
    meta["closed_form_agrees"] = closed_form_agrees;
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto &rep : res.coset_reps) {
        nlohmann::ordered_json r;
        r["coords"] = rep.coords;
        r["norm_sq"] = rep.norm_sq;
        r["first_radius"] = res.rows[rep.bucket].radius;
        reps.push_back(r);
    }
    meta["coset_representatives"] = reps;

    CommandOutput out;
    std::string base = report_basename(c);
    out.files.push_back(write_text(c.out_dir, base + ".csv", csv));
    out.files.push_back(write_text(c.out_dir, base + ".json", meta.dump(2) + "\n"));
    out.exit_code = campaign_detail::violations_exit(res, out.message);
    if (out.exit_code == 0 && !closed_form_agrees) {
        out.exit_code = 3;
        out.message = "internal consistency failure: closed-form unit count disagrees "
                      "with enumeration";
    }
    return out;
}

inline CommandOutput cmd_simulate(const CyclicAlgebra &alg, const Campaign &c) {
    SimConfig cfg;
    cfg.n_t = alg.degree();
    cfg.T = alg.degree();
    cfg.n_r = c.rx_antennas;
    cfg.rate_param = c.rate;
    cfg.snr_grid_db = c.snr_grid_db;
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.codebook_cap = c.codebook_cap;
    if (cfg.snr_grid_db.empty()) cfg.snr_grid_db = {10, 14, 18, 22, 26, 30};

    SimResult res;
    if (c.scheme == "bpsk") {
        res = run_bpsk_sim(cfg, c.workers);
    } else if (c.scheme == "lattice") {
        MatrixLattice lat = build_lattice(alg, c.precision_bits);
        res = run_lattice_sim(lat, cfg, c.workers);
    } else {
        throw config_error("simulate: scheme must be lattice or bpsk (got " + c.scheme + ")");
    }

    std::string csv = "snr_db,codebook_size,trials,errors,error_rate\n";
    for (const auto &rec : res.records)
        csv += fmt_double(rec.snr_db) + "," + std::to_string(rec.codebook_size) + "," +
               std::to_string(rec.trials) + "," + std::to_string(rec.errors) + "," +
               fmt_double(rec.error_rate) + "\n";

    auto meta = campaign_detail::meta_json(c);
    meta["scheme"] = c.scheme;
    meta["rate"] = cfg.rate_param;
    meta["n_t"] = c.scheme == "bpsk" ? 1 : cfg.n_t;
    meta["n_r"] = cfg.n_r;
    meta["T"] = c.scheme == "bpsk" ? 1 : cfg.T;
    meta["trials"] = cfg.trials;
    meta["slope"] = res.slope;
    meta["slope_reliable"] = res.slope_reliable;
    meta["slope_points"] = res.slope_points;
    meta["energy_stat"] = res.energy_stat;
    int m_ant = c.scheme == "bpsk" ? 1 : cfg.n_t;
    double rmax_ref = double(std::min(m_ant, cfg.n_r));
    meta["dmt_reference"] =
        dmt_reference(m_ant, cfg.n_r, std::min(cfg.rate_param, rmax_ref));
    // the piecewise-linear reference is exact only for T >= n_t + n_r - 1
    meta["reference_block_length_ok"] =
        (c.scheme == "bpsk" ? 1 : cfg.T) >= m_ant + cfg.n_r - 1;

    CommandOutput out;
    std::string base = report_basename(c);
    out.files.push_back(write_text(c.out_dir, base + ".csv", csv));
    out.files.push_back(write_text(c.out_dir, base + ".json", meta.dump(2) + "\n"));
    return out;
}

inline CommandOutput cmd_report(const CyclicAlgebra &alg, const Campaign &c) {
    MatrixLattice lat = build_lattice(alg, c.precision_bits);
    std::vector<double> dropped;
    std::vector<double> grid = grid_for(lat, c, &dropped);
    CensusResult res = campaign_detail::run_campaign_census(lat, c, grid);

    auto meta = campaign_detail::meta_json(c);
    meta["sum_exponent"] = c.sum_exponent;
    meta["zeta_s"] = c.zeta_s;
    meta["radii"] = grid;
    meta["radii_dropped_by_cap"] = dropped;

    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    bool closed_form_agrees = true;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto &row = res.rows[i];
        std::uint64_t cf = oe_unit_count(alg, row.radius);
        if (cf != row.oe_unit_count) closed_form_agrees = false;
        nlohmann::ordered_json r;
        r["R"] = row.radius;
        r["point_count"] = row.point_count;
        r["det_sum"] = row.det_sum;
        r["epstein_sum"] = row.epstein_sum;
        r["unit_count"] = row.unit_count;
        r["oe_unit_count"] = row.oe_unit_count;
        r["oe_closed_form"] = cf;
        r["coset_count"] = row.coset_count;
        r["distinct_ideals"] = res.ideal_counts[i];
        r["partial_zeta"] = row.partial_zeta;
        table.push_back(r);
    }
    meta["census"] = table;
    meta["fits"] = campaign_detail::census_fits(res.rows);
    meta["closed_form_agrees"] = closed_form_agrees;
    meta["boundary_points"] = res.boundary_points;
    meta["distinct_ideals"] = res.distinct_ideals;
    meta["nvd_violations"] = res.nvd_violations;
    meta["minkowski_violations"] = res.minkowski_violations;

    CommandOutput out;
    out.files.push_back(write_text(c.out_dir, report_basename(c) + ".json", meta.dump(2) + "\n"));
    out.exit_code = campaign_detail::violations_exit(res, out.message);
    return out;
}

inline CommandOutput run_campaign(const Campaign &c) {
    AlgebraSpec spec = parse_config(c.config_path);
    CyclicAlgebra alg = build_algebra(spec, c.precision_bits);
    if (c.command == "enumerate") return cmd_enumerate(alg, c);
    if (c.command == "census") return cmd_census(alg, c);
    if (c.command == "fit") return cmd_fit(alg, c);
    if (c.command == "zeta") return cmd_zeta(alg, c);
    if (c.command == "units") return cmd_units(alg, c);
    if (c.command == "simulate") return cmd_simulate(alg, c);
    if (c.command == "report") return cmd_report(alg, c);
    throw config_error("unknown command: " + c.command);
}

} // namespace cda
