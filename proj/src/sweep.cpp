#include "whsim/sweep.hpp"

#include "whsim/errors.hpp"
#include "whsim/iq_io.hpp"
#include "whsim/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>
#include <tuple>

namespace whsim {

namespace {

struct TrialOutcome {
    std::uint64_t errors = 0;
    int em_iters = 0;
};

constexpr cdouble k_rotations[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

std::uint64_t count_errors(const std::vector<std::size_t>& detected,
                           const std::vector<std::size_t>& truth) {
    std::uint64_t e = 0;
    for (std::size_t t = 0; t < truth.size(); ++t) e += detected[t] != truth[t] ? 1u : 0u;
    return e;
}

TrialOutcome run_trial(const SweepConfig& config, const ChannelModel& arch_model,
                       const std::vector<cdouble>& known_weights, const SymbolAlphabet& alphabet,
                       std::uint64_t trial_seed) {
    const SymbolSequence symbols =
        random_symbols(alphabet, config.block_len, split_seed(trial_seed, 0));
    const ObservationBlock block = synthesize(arch_model, symbols, split_seed(trial_seed, 1));

    TrialOutcome out;
    if (config.estimator == Estimator::known_params) {
        const std::vector<cdouble> s_hat = apply_weights(known_weights, block);
        for (std::size_t t = 0; t < block.t_len; ++t) {
            out.errors += nearest_symbol(s_hat[t], alphabet) != symbols.indices[t] ? 1u : 0u;
        }
        return out;
    }

    const EmState state = run_em(block, alphabet, config.em);
    const CalibrationResult cal = calibrate(state, alphabet, block);
    out.em_iters = state.iter;
    if (config.rotation_mode == RotationMode::likelihood) {
        out.errors = count_errors(cal.detected.indices, symbols.indices);
        return out;
    }
    // Genie scoring: the quarter-turn ambiguity is intrinsic to the blind
    // problem, so measure errors against the best of the four rotations.
    std::uint64_t best = block.t_len + 1;
    for (const cdouble rot : k_rotations) {
        std::uint64_t e = 0;
        for (std::size_t t = 0; t < block.t_len; ++t) {
            e += nearest_symbol(rot * cal.s_cal[t], alphabet) != symbols.indices[t] ? 1u : 0u;
        }
        best = std::min(best, e);
    }
    out.errors = best;
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<SerRecord> run_ser_sweep(const SweepConfig& config) {
    if (config.trials < 1) throw MalformedInput("run_ser_sweep: trials must be >= 1");
    if (config.snr_grid_db.empty()) throw MalformedInput("run_ser_sweep: empty SNR grid");

    const SymbolAlphabet alphabet = build_qam(config.mod_order);
    const int n_threads = std::max(config.threads, 1);

    std::vector<SerRecord> records;
    records.reserve(config.snr_grid_db.size());

    for (std::size_t point = 0; point < config.snr_grid_db.size(); ++point) {
        const double snr_db = config.snr_grid_db[point];
        const ChannelModel model4 = config.scenario.model4(snr_db, alphabet.avg_power);
        const ChannelModel arch_model = extract_architecture_model(model4, config.arch);
        std::vector<cdouble> known_weights;
        if (config.estimator == Estimator::known_params) {
            known_weights = compute_weights(arch_model.full_gains(), arch_model.sigma);
        }

        const auto n_trials = static_cast<std::size_t>(config.trials);
        std::vector<TrialOutcome> outcomes(n_trials);
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto work = [&](std::size_t begin, std::size_t end) {
            try {
                for (std::size_t trial = begin; trial < end; ++trial) {
                    const std::uint64_t stream = point * n_trials + trial;
                    outcomes[trial] = run_trial(config, arch_model, known_weights, alphabet,
                                                split_seed(config.seed, stream));
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };

        if (n_threads == 1 || n_trials == 1) {
            work(0, n_trials);
        } else {
            const std::size_t workers = std::min<std::size_t>(n_threads, n_trials);
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t begin = n_trials * w / workers;
                const std::size_t end = n_trials * (w + 1) / workers;
                pool.emplace_back(work, begin, end);
            }
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        SerRecord rec;
        rec.arch = config.arch.name();
        rec.estimator = config.estimator == Estimator::known_params ? "known" : "em";
        rec.mod_order = config.mod_order;
        rec.block_len = config.block_len;
        rec.snr_db = snr_db;
        rec.trials = config.trials;
        rec.seed = config.seed;
        rec.symbols_total = static_cast<std::uint64_t>(n_trials) * config.block_len;
        std::uint64_t iters_sum = 0;
        for (const TrialOutcome& o : outcomes) { // fixed aggregation order
            rec.symbol_errors += o.errors;
            iters_sum += static_cast<std::uint64_t>(o.em_iters);
        }
        rec.ser = static_cast<double>(rec.symbol_errors) / static_cast<double>(rec.symbols_total);
        rec.mean_em_iters = static_cast<double>(iters_sum) / static_cast<double>(n_trials);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_csv(const std::vector<SerRecord>& records, const std::string& path) {
    std::vector<SerRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const SerRecord& a, const SerRecord& b) {
        return std::tie(a.arch, a.estimator, a.block_len, a.snr_db) <
               std::tie(b.arch, b.estimator, b.block_len, b.snr_db);
    });

    std::ofstream out(path);
    if (!out) throw Error("write_csv: cannot open " + path);
    out << "arch,estimator,M,T,snr_db,ser,symbol_errors,symbols_total,trials,mean_em_iters,seed\n";
    for (const SerRecord& r : sorted) {
        out << r.arch << ',' << r.estimator << ',' << r.mod_order << ',' << r.block_len << ','
            << fmt17(r.snr_db) << ',' << fmt17(r.ser) << ',' << r.symbol_errors << ','
            << r.symbols_total << ',' << r.trials << ',' << fmt17(r.mean_em_iters) << ','
            << r.seed << "\n";
    }
    if (!out) throw Error("write_csv: write failed for " + path);
}

DecodeResult decode_iq_file(const std::string& path, std::size_t n_s, std::size_t n_n,
                            std::size_t mod_order, const EmConfig& config) {
    const SymbolAlphabet alphabet = build_qam(mod_order);
    const ComplexMatrix raw = read_iq_csv(path);
    const ObservationBlock block = partition_recording(raw, n_s, n_n);
    if (block.t_len < n_s + n_n) {
        throw DimensionMismatch("decode_iq_file: recording shorter than the channel count");
    }

    const EmState state = run_em(block, alphabet, config);
    const CalibrationResult cal = calibrate(state, alphabet, block);

    DecodeResult result;
    result.mod_order = mod_order;
    result.n_s = n_s;
    result.n_n = n_n;
    result.t_len = block.t_len;
    result.detected = cal.detected.indices;
    result.h_cal = cal.h_cal;
    result.sigma_ss = cal.sigma_ss;
    result.sigma_sn = cal.sigma_sn;
    result.sigma_nn = cal.sigma_nn;
    result.rotation = cal.rotation;
    result.em_iters = state.iter;
    result.converged = state.converged;
    return result;
}

namespace {

nlohmann::json matrix_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_decode_result(const DecodeResult& result, const std::string& path) {
    nlohmann::json j;
    j["mod_order"] = result.mod_order;
    j["n_s"] = result.n_s;
    j["n_n"] = result.n_n;
    j["t_len"] = result.t_len;
    j["em_iters"] = result.em_iters;
    j["converged"] = result.converged;
    j["rotation"] = {result.rotation.real(), result.rotation.imag()};
    j["detected"] = result.detected;
    nlohmann::json h = nlohmann::json::array();
    for (const cdouble& v : result.h_cal) h.push_back({v.real(), v.imag()});
    j["h_cal"] = std::move(h);
    j["sigma_ss"] = matrix_json(result.sigma_ss);
    j["sigma_sn"] = matrix_json(result.sigma_sn);
    j["sigma_nn"] = matrix_json(result.sigma_nn);

    std::ofstream out(path);
    if (!out) throw Error("write_decode_result: cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out) throw Error("write_decode_result: write failed for " + path);
}

} // namespace whsim
