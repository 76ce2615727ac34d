// whsim: Monte Carlo SER benchmarks for the weight-hybrid multi-channel
// receiver, plus offline blind decoding of recorded IQ files.

#include "whsim/errors.hpp"
#include "whsim/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

// "start:step:stop" (inclusive, step > 0) or a single value.
std::vector<double> parse_snr_grid(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        try {
            return {std::stod(text)};
        } catch (const std::exception&) {
            throw whsim::MalformedInput("--snr-db: cannot parse '" + text + "'");
        }
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw whsim::MalformedInput("--snr-db: expected start:step:stop, got '" + text + "'");
    }
    double start = 0, step = 0, stop = 0;
    try {
        start = std::stod(text.substr(0, c1));
        step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        stop = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw whsim::MalformedInput("--snr-db: cannot parse '" + text + "'");
    }
    if (!(step > 0.0)) throw whsim::MalformedInput("--snr-db: step must be positive");
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9 * step; v += step) grid.push_back(v);
    if (grid.empty()) throw whsim::MalformedInput("--snr-db: empty grid");
    return grid;
}

// "NsxNn", e.g. "2x2".
std::pair<std::size_t, std::size_t> parse_channels(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) {
        throw whsim::MalformedInput("--channels: expected NsxNn, got '" + text + "'");
    }
    try {
        const long n_s = std::stol(text.substr(0, x));
        const long n_n = std::stol(text.substr(x + 1));
        if (n_s < 1 || n_n < 0) throw std::out_of_range("range");
        return {static_cast<std::size_t>(n_s), static_cast<std::size_t>(n_n)};
    } catch (const std::exception&) {
        throw whsim::MalformedInput("--channels: cannot parse '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight-hybrid multi-channel receiver benchmark"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo SER sweep and write CSV");
    std::string arch_name = "whA";
    std::size_t mod_order = 16;
    std::size_t block_len = 1000;
    std::string snr_spec;
    int trials = 1;
    std::string estimator_name = "known";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string scenario_path;
    std::string rotation_name = "likelihood";
    int threads = 1;
    double eps_hs = 0.0;
    double eps_sigma = 0.0;
    int max_iters = 200;

    sweep->add_option("--arch", arch_name, "architecture")
        ->check(CLI::IsMember({"whA", "whB", "whC", "whD"}))
        ->capture_default_str();
    sweep->add_option("--mod-order", mod_order, "QAM order M (perfect square >= 4)")
        ->capture_default_str();
    sweep->add_option("--block-len", block_len, "symbols per trial block T")
        ->capture_default_str();
    sweep->add_option("--snr-db", snr_spec, "SNR grid start:step:stop (dB), or one value")
        ->required();
    sweep->add_option("--trials", trials, "independent trials per SNR point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--estimator", estimator_name, "known (gains and covariance given) or em (blind)")
        ->check(CLI::IsMember({"known", "em"}))
        ->capture_default_str();
    sweep->add_option("--seed", seed, "master seed; trial seeds are derived from it")
        ->capture_default_str();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--scenario", scenario_path,
                      "scenario file (key = value; defaults to the built-in fixture)");
    sweep->add_option("--rotation", rotation_name,
                      "quarter-turn handling for em SER: likelihood (as decoded) or genie "
                      "(best of the four rotations)")
        ->check(CLI::IsMember({"likelihood", "genie"}))
        ->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads for trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--eps-hs", eps_hs, "EM stop threshold on the h*s product (0 = auto)")
        ->capture_default_str();
    sweep->add_option("--eps-sigma", eps_sigma, "EM stop threshold on the covariance (0 = auto)")
        ->capture_default_str();
    sweep->add_option("--max-iters", max_iters, "EM iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // decode
    auto* decode = app.add_subcommand("decode", "blind-decode a recorded IQ CSV file");
    std::string in_path;
    std::string channels_spec = "2x2";
    std::size_t decode_order = 16;
    std::string decode_out;
    double d_eps_hs = 0.0;
    double d_eps_sigma = 0.0;
    int d_max_iters = 200;
    decode->add_option("--input", in_path, "IQ CSV recording")->required();
    decode->add_option("--channels", channels_spec, "channel layout NsxNn (signal rows first)")
        ->capture_default_str();
    decode->add_option("--mod-order", decode_order, "QAM order M")->capture_default_str();
    decode->add_option("--out", decode_out, "output JSON path")->required();
    decode->add_option("--eps-hs", d_eps_hs, "EM stop threshold on the h*s product (0 = auto)")
        ->capture_default_str();
    decode->add_option("--eps-sigma", d_eps_sigma, "EM stop threshold on the covariance (0 = auto)")
        ->capture_default_str();
    decode->add_option("--max-iters", d_max_iters, "EM iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e); // usage errors exit 1, --help exits 0
    }

    try {
        if (sweep->parsed()) {
            whsim::SweepConfig config;
            config.arch = whsim::architecture_from_name(arch_name);
            config.mod_order = mod_order;
            config.block_len = block_len;
            config.snr_grid_db = parse_snr_grid(snr_spec);
            config.trials = trials;
            config.estimator = estimator_name == "known" ? whsim::Estimator::known_params
                                                         : whsim::Estimator::em_blind;
            config.seed = seed;
            config.rotation_mode = rotation_name == "genie" ? whsim::RotationMode::genie
                                                            : whsim::RotationMode::likelihood;
            config.threads = threads;
            config.em.eps_hs = eps_hs;
            config.em.eps_sigma = eps_sigma;
            config.em.max_iters = max_iters;
            if (!scenario_path.empty()) config.scenario = whsim::load_scenario(scenario_path);

            const std::vector<whsim::SerRecord> records = whsim::run_ser_sweep(config);
            whsim::write_csv(records, out_path);
            for (const auto& r : records) {
                std::printf("%s %s M=%zu T=%zu snr=%g dB ser=%.6g (%llu/%llu)\n", r.arch.c_str(),
                            r.estimator.c_str(), r.mod_order, r.block_len, r.snr_db, r.ser,
                            static_cast<unsigned long long>(r.symbol_errors),
                            static_cast<unsigned long long>(r.symbols_total));
            }
        } else if (decode->parsed()) {
            const auto [n_s, n_n] = parse_channels(channels_spec);
            whsim::EmConfig config;
            config.eps_hs = d_eps_hs;
            config.eps_sigma = d_eps_sigma;
            config.max_iters = d_max_iters;
            const whsim::DecodeResult result =
                whsim::decode_iq_file(in_path, n_s, n_n, decode_order, config);
            whsim::write_decode_result(result, decode_out);
            std::printf("decoded %zu symbols (%d EM iterations, %s)\n", result.t_len,
                        result.em_iters, result.converged ? "converged" : "iteration cap hit");
        }
    } catch (const whsim::MalformedInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const whsim::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const whsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
