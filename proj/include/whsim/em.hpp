#pragma once

#include "whsim/channel.hpp"
#include "whsim/constellation.hpp"
#include "whsim/linalg.hpp"

#include <cstddef>
#include <vector>

namespace whsim {

/// Stopping thresholds and iteration cap for the blind estimator.
/// eps_hs bounds the Frobenius change of the (identifiable) outer product
/// h_s * s_hat^T between iterations, eps_sigma the change of the assembled
/// covariance. Values <= 0 select the scale-free defaults
///   eps_hs    = 1e-6 * sqrt(N_s * T) * P_s
///   eps_sigma = 1e-8 * ||Sigma^[0]||_F.
struct EmConfig {
    double eps_hs = 0.0;
    double eps_sigma = 0.0;
    int max_iters = 200;
    /// Replace S_sn by (S_sn + S_sn^H)/2 after each update (square cross
    /// block only). A cross-covariance is not inherently Hermitian and the
    /// forced symmetry moves the update off the maximizer, which can make
    /// the likelihood dip between iterations, so the plain update is the
    /// default; the flag keeps the symmetrized variant available.
    bool symmetrize_cross = false;
};

/// Iterate of the blind estimator: current gains and covariance blocks plus
/// the per-slot posterior moments from the latest expectation pass.
struct EmState {
    int iter = 0;          // completed maximization passes
    bool converged = false;
    bool symmetrize_cross = false; // see EmConfig
    std::size_t n_s = 0;
    std::size_t n_n = 0;
    std::size_t t_len = 0;

    std::vector<cdouble> h_s;
    ComplexMatrix sigma_ss;
    ComplexMatrix sigma_sn;
    ComplexMatrix sigma_nn; // fixed after the initial estimate

    std::vector<cdouble> s_hat; // posterior means, length T
    std::vector<double> u;      // posterior second moments
    std::vector<double> v;      // posterior variances u - |s_hat|^2

    /// Log-likelihood of the observed data after each expectation pass.
    std::vector<double> ll_trace;

    /// Full covariance [[S_ss, S_sn], [S_sn^H, S_nn]].
    ComplexMatrix assembled_sigma() const;
};

/// Per-slot symbol posteriors: w(m,t) = P[s^(t) = a_m | y, theta] and the
/// quadratic distances d(m,t) they were derived from. Row-major M x T.
struct PosteriorTable {
    std::size_t order = 0;
    std::size_t t_len = 0;
    std::vector<double> w;
    std::vector<double> d;

    double& weight(std::size_t m, std::size_t t) { return w[m * t_len + t]; }
    double weight(std::size_t m, std::size_t t) const { return w[m * t_len + t]; }
    double& dist(std::size_t m, std::size_t t) { return d[m * t_len + t]; }
    double dist(std::size_t m, std::size_t t) const { return d[m * t_len + t]; }
};

/// Sample covariance of the noise-only rows, (1/T) sum y_n y_n^H, estimated
/// once and held fixed across iterations.
ComplexMatrix estimate_noise_covariance(const ComplexMatrix& y_n);

/// Starting point: h_s from the dominant eigenvector of the signal-row
/// sample covariance, scaled so |h_s|^2 * P_s matches the spread between its
/// largest and smallest eigenvalues (floored at a small positive fraction of
/// the largest); S_ss = that sample covariance; S_sn = 0; S_nn from
/// estimate_noise_covariance.
EmState init_state(const ObservationBlock& y, const SymbolAlphabet& alphabet);

/// Expectation pass: posteriors w(m,t) proportional to exp(-d(m,t)) with the
/// column minimum subtracted before exponentiation, then the conditional
/// moments s_hat, u, v. Also appends the observed-data log-likelihood at the
/// current parameters to state.ll_trace.
PosteriorTable e_step(const ObservationBlock& y, EmState& state, const SymbolAlphabet& alphabet);

/// Maximization pass: closed-form updates of h_s, S_ss, S_sn from the
/// current moments; S_nn stays fixed. Enforces Hermitian symmetry on S_ss
/// (and optionally S_sn) and retries once with diagonal jitter if the
/// assembled covariance loses positive definiteness.
void m_step(const ObservationBlock& y, EmState& state);

/// Full blind estimation loop (expectation / maximization until the h*s
/// product and covariance stabilize, or max_iters).
EmState run_em(const ObservationBlock& y, const SymbolAlphabet& alphabet,
               const EmConfig& config = {});

/// Observed-data log-likelihood
///   sum_t ln[(1/M) sum_m exp(-d_m^(t))] - T ln|Sigma| - N T ln(pi),
/// evaluated with a per-column shift for stability.
double log_likelihood(const ObservationBlock& y, const EmState& state,
                      const SymbolAlphabet& alphabet);

/// Output of the calibration pass: symbol estimates rescaled to the
/// constellation's average power, gains recomputed against them, the final
/// covariance blocks, posteriors at the calibrated parameters, the detected
/// sequence (nearest point), and the quarter-turn rotation that was applied.
struct CalibrationResult {
    std::vector<cdouble> s_cal;
    std::vector<cdouble> h_cal;
    ComplexMatrix sigma_ss;
    ComplexMatrix sigma_sn;
    ComplexMatrix sigma_nn;
    SymbolSequence detected;
    cdouble rotation{1.0, 0.0};
    PosteriorTable posteriors;
};

/// Rescales s_hat so its mean power equals the constellation power,
/// recomputes h against the rescaled symbols, and resolves the quarter-turn
/// ambiguity of the square constellation: the four rotations are scored by
/// observed-data likelihood and ties (which are the generic case, since the
/// rotations are exact model symmetries) go to the candidate whose first
/// gain has the largest real part, i.e. phase closest to zero.
CalibrationResult calibrate(const EmState& state, const SymbolAlphabet& alphabet,
                            const ObservationBlock& y);

enum class DetectMode { max_posterior, min_distance };

/// Hard decisions from a calibration result, by posterior argmax or nearest
/// constellation point; ties break to the lowest index.
SymbolSequence detect_symbols(const CalibrationResult& result, const SymbolAlphabet& alphabet,
                              DetectMode mode);

} // namespace whsim
