#pragma once

#include "whsim/combiner.hpp"
#include "whsim/em.hpp"
#include "whsim/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace whsim {

enum class Estimator { known_params, em_blind };
enum class RotationMode { likelihood, genie };

/// One SER sweep: an architecture and estimator, a modulation order, a block
/// length, an SNR grid, and a trial count per grid point. Trial seeds are
/// derived from the master seed with split_seed(seed, point*trials + trial),
/// so results are identical for any thread count.
struct SweepConfig {
    Architecture arch = Architecture::wh_a();
    std::size_t mod_order = 16;
    std::size_t block_len = 1000;
    std::vector<double> snr_grid_db;
    int trials = 1;
    Estimator estimator = Estimator::known_params;
    Scenario scenario;
    std::uint64_t seed = 0;
    RotationMode rotation_mode = RotationMode::likelihood;
    EmConfig em;
    int threads = 1;
};

/// One measured point. ser == symbol_errors / symbols_total;
/// mean_em_iters is 0 for the known-parameter estimator.
struct SerRecord {
    std::string arch;
    std::string estimator;
    std::size_t mod_order = 0;
    std::size_t block_len = 0;
    double snr_db = 0.0;
    double ser = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t symbols_total = 0;
    int trials = 0;
    double mean_em_iters = 0.0;
    std::uint64_t seed = 0;
};

std::vector<SerRecord> run_ser_sweep(const SweepConfig& config);

/// CSV schema:
///   arch,estimator,M,T,snr_db,ser,symbol_errors,symbols_total,trials,mean_em_iters,seed
/// floats with 17 significant digits, rows sorted by (arch, estimator, T,
/// snr_db). Re-running an identical config produces a byte-identical file.
void write_csv(const std::vector<SerRecord>& records, const std::string& path);

/// Offline application of the blind estimator to a recorded IQ CSV file.
struct DecodeResult {
    std::size_t mod_order = 0;
    std::size_t n_s = 0;
    std::size_t n_n = 0;
    std::size_t t_len = 0;
    std::vector<std::size_t> detected;
    std::vector<cdouble> h_cal;
    ComplexMatrix sigma_ss;
    ComplexMatrix sigma_sn;
    ComplexMatrix sigma_nn;
    cdouble rotation{1.0, 0.0};
    int em_iters = 0;
    bool converged = false;
};

DecodeResult decode_iq_file(const std::string& path, std::size_t n_s, std::size_t n_n,
                            std::size_t mod_order, const EmConfig& config = {});

/// JSON report with the detected indices, calibrated gains, and covariance
/// blocks.
void write_decode_result(const DecodeResult& result, const std::string& path);

} // namespace whsim
