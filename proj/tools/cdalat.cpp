#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cda/campaign.hpp"

namespace {

int dispatch(const cda::Campaign &campaign) {
    cda::CommandOutput out = cda::run_campaign(campaign);
    for (const auto &f : out.files) std::cout << "wrote " << f << "\n";
    if (!out.message.empty()) std::cerr << out.message << "\n";
    return out.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"matrix-lattice census and simulation tool for cyclic division "
                 "algebra orders"};
    app.require_subcommand(1);

    cda::Campaign c;
    std::vector<std::string> commands = {"enumerate", "census", "fit",     "zeta",
                                         "units",     "simulate", "report"};
    for (const auto &name : commands) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", c.config_path, "algebra config file")->required();
        sub->add_option("--out-dir", c.out_dir, "output directory");
        sub->add_option("--radii", c.radii, "radius grid (ascending)");
        sub->add_option("--sum-exponent", c.sum_exponent, "exponent m in the determinant sum");
        sub->add_option("--s", c.zeta_s, "partial zeta exponent (>= 2)");
        sub->add_option("--precision-bits", c.precision_bits, "working precision in [64, 192]");
        sub->add_option("--point-cap", c.point_cap, "enumeration budget");
        sub->add_option("--seed", c.seed, "campaign seed");
        sub->add_option("--workers", c.workers, "worker thread count");
        if (name == "simulate") {
            sub->add_option("--scheme", c.scheme, "lattice | bpsk");
            sub->add_option("--rate", c.rate, "multiplexing gain target r");
            sub->add_option("--snr-grid-db", c.snr_grid_db, "SNR grid in dB (ascending)");
            sub->add_option("--trials", c.trials, "Monte Carlo trials per SNR point");
            sub->add_option("--rx-antennas", c.rx_antennas, "receive antenna count");
            sub->add_option("--codebook-cap", c.codebook_cap, "codeword budget");
        }
        if (name == "fit")
            sub->add_option("--input", c.input_csv, "existing census table to fit");
        sub->callback([&c, name] { c.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // parameter errors are config errors
    }

    try {
        return dispatch(c);
    } catch (const cda::config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cda::budget_error &e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const cda::internal_error &e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
