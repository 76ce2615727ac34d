#pragma once

#include "whsim/constellation.hpp"
#include "whsim/linalg.hpp"

#include <cstdint>
#include <vector>

namespace whsim {

/// Receiver model: n_s signal channels with complex gains h_s, n_n
/// noise-only channels (gain exactly zero), and the full N x N Hermitian PD
/// noise covariance over all channels, signal rows first.
struct ChannelModel {
    std::size_t n_s = 0;
    std::size_t n_n = 0;
    std::vector<cdouble> h_s;
    ComplexMatrix sigma;

    std::size_t dim() const { return n_s + n_n; }
    /// [h_s; 0], length n_s + n_n.
    std::vector<cdouble> full_gains() const;
};

/// T received columns split into signal rows y_s (n_s x T) and noise rows
/// y_n (n_n x T); column t is the stacked reception for slot t.
struct ObservationBlock {
    std::size_t t_len = 0;
    std::size_t n_s = 0;
    std::size_t n_n = 0;
    ComplexMatrix y_s;
    ComplexMatrix y_n;

    /// Stacked column [y_s(:,t); y_n(:,t)].
    std::vector<cdouble> column(std::size_t t) const;
};

/// Covariance from per-channel deviations and pairwise complex correlations:
/// entry (m,k) = r_mk * s_m * s_k above the diagonal, s_m^2 on it. Positive
/// definiteness is validated by factorization.
ComplexMatrix build_covariance(const std::vector<double>& sigmas,
                               const ComplexMatrix& correlations);

/// T i.i.d. columns ~ CN(0, sigma), generated as L * (g_re + i g_im)/sqrt(2)
/// with L the Cholesky factor. Deterministic per (sigma dims, t_len, seed).
ComplexMatrix sample_noise(const ComplexMatrix& sigma, std::size_t t_len, std::uint64_t seed);

/// y^(t) = h * s^(t) + n^(t): signal rows carry h_s * s plus noise, noise
/// rows carry noise only.
ObservationBlock synthesize(const ChannelModel& model, const SymbolSequence& symbols,
                            std::uint64_t seed);

/// T uniform draws from the alphabet, deterministic per seed.
SymbolSequence random_symbols(const SymbolAlphabet& alphabet, std::size_t t_len,
                              std::uint64_t seed);

} // namespace whsim
