#pragma once

#include "whsim/channel.hpp"
#include "whsim/linalg.hpp"

#include <string>
#include <vector>

namespace whsim {

/// The four channel subsets of the weight-hybrid receiver. Channels are
/// numbered 1=probe signal, 2=coupling signal, 3=probe noise, 4=coupling
/// noise; subsets keep that order.
enum class ArchTag { WH_A, WH_B, WH_C, WH_D };

struct Architecture {
    ArchTag tag = ArchTag::WH_A;
    std::vector<int> channel_indices; // 1-based into the 4-channel model

    static Architecture from_tag(ArchTag tag);
    static Architecture wh_a() { return from_tag(ArchTag::WH_A); }
    static Architecture wh_b() { return from_tag(ArchTag::WH_B); }
    static Architecture wh_c() { return from_tag(ArchTag::WH_C); }
    static Architecture wh_d() { return from_tag(ArchTag::WH_D); }

    std::size_t n_signal() const;
    std::size_t n_noise() const;
    std::string name() const; // "whA".."whD"
};

Architecture architecture_from_name(const std::string& name);

struct CombinerResult {
    std::vector<cdouble> weights;
    double variance = 0.0;
    double snr_gain_db = 0.0;
};

/// Optimal unbiased combining weights w = sigma^{-1} h / (h^H sigma^{-1} h),
/// so the estimate s_hat = w^H y satisfies w^H h = 1.
std::vector<cdouble> compute_weights(const std::vector<cdouble>& h, const ComplexMatrix& sigma);

/// Post-combining noise power 1/(h^H sigma^{-1} h).
double estimation_variance(const std::vector<cdouble>& h, const ComplexMatrix& sigma);

/// Restrict a 4-channel model to the architecture's channels, preserving
/// channel order.
ChannelModel extract_architecture_model(const ChannelModel& model4, const Architecture& arch);

/// Weights, variance, and SNR gain (dB, relative to the single probe
/// channel) for one architecture of a 4-channel model. When min_rule is set,
/// the single-channel architecture picks whichever signal channel has the
/// lower per-channel variance instead of always the probe.
CombinerResult architecture_result(const Architecture& arch, const ChannelModel& model4,
                                   bool min_rule = false);

/// s_hat^(t) = w^H y^(t) for every column of the block.
std::vector<cdouble> apply_weights(const std::vector<cdouble>& weights,
                                   const ObservationBlock& block);

enum class BvsC { B_better, C_better, tie };

/// Orders the two-channel architectures by estimation variance
/// (1e-12 relative tie band).
BvsC compare_b_vs_c(const ChannelModel& model4);

} // namespace whsim
