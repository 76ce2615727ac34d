#include "whsim/combiner.hpp"

#include "whsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace whsim {

namespace {

// |r| -> 1 drives the combined variance to zero and the weights to infinity;
// reject before inversion instead of returning garbage.
void check_correlation_bound(const ComplexMatrix& sigma) {
    for (std::size_t m = 0; m < sigma.rows(); ++m) {
        for (std::size_t k = m + 1; k < sigma.cols(); ++k) {
            const double denom = std::sqrt(sigma(m, m).real() * sigma(k, k).real());
            if (denom <= 0.0) continue; // factorization will reject
            if (std::abs(sigma(m, k)) / denom > 1.0 - 1e-9) {
                throw NotPositiveDefinite(
                    "correlation magnitude above 1 - 1e-9 between channels " +
                    std::to_string(m + 1) + "," + std::to_string(k + 1));
            }
        }
    }
}

double quadratic_form(const std::vector<cdouble>& h, const ComplexMatrix& sigma) {
    check_correlation_bound(sigma);
    const std::vector<cdouble> x = hpd_solve(sigma, h); // sigma^{-1} h
    cdouble q{};
    for (std::size_t i = 0; i < h.size(); ++i) q += std::conj(h[i]) * x[i];
    return q.real(); // h^H sigma^{-1} h is real positive for h != 0
}

bool all_zero(const std::vector<cdouble>& h) {
    return std::all_of(h.begin(), h.end(), [](cdouble v) { return v == cdouble{}; });
}

} // namespace

Architecture Architecture::from_tag(ArchTag tag) {
    switch (tag) {
    case ArchTag::WH_A: return {tag, {1}};
    case ArchTag::WH_B: return {tag, {1, 3}};
    case ArchTag::WH_C: return {tag, {1, 2}};
    case ArchTag::WH_D: return {tag, {1, 2, 3, 4}};
    }
    throw DimensionMismatch("unknown architecture tag");
}

std::size_t Architecture::n_signal() const {
    return static_cast<std::size_t>(
        std::count_if(channel_indices.begin(), channel_indices.end(), [](int c) { return c <= 2; }));
}

std::size_t Architecture::n_noise() const {
    return channel_indices.size() - n_signal();
}

std::string Architecture::name() const {
    switch (tag) {
    case ArchTag::WH_A: return "whA";
    case ArchTag::WH_B: return "whB";
    case ArchTag::WH_C: return "whC";
    case ArchTag::WH_D: return "whD";
    }
    return "?";
}

Architecture architecture_from_name(const std::string& name) {
    if (name == "whA") return Architecture::wh_a();
    if (name == "whB") return Architecture::wh_b();
    if (name == "whC") return Architecture::wh_c();
    if (name == "whD") return Architecture::wh_d();
    throw MalformedInput("unknown architecture name: " + name);
}

std::vector<cdouble> compute_weights(const std::vector<cdouble>& h, const ComplexMatrix& sigma) {
    if (h.size() != sigma.rows()) throw DimensionMismatch("compute_weights: dimensions differ");
    if (all_zero(h)) throw ZeroGain("compute_weights: all channel gains are zero");
    check_correlation_bound(sigma);

    std::vector<cdouble> x = hpd_solve(sigma, h);
    cdouble q{};
    for (std::size_t i = 0; i < h.size(); ++i) q += std::conj(h[i]) * x[i];
    const double denom = q.real();
    if (!(denom > 0.0)) throw NotPositiveDefinite("compute_weights: h^H sigma^{-1} h not positive");
    for (auto& w : x) w /= denom;
    return x;
}

double estimation_variance(const std::vector<cdouble>& h, const ComplexMatrix& sigma) {
    if (h.size() != sigma.rows()) throw DimensionMismatch("estimation_variance: dimensions differ");
    if (all_zero(h)) throw ZeroGain("estimation_variance: all channel gains are zero");
    const double q = quadratic_form(h, sigma);
    if (!(q > 0.0)) throw NotPositiveDefinite("estimation_variance: h^H sigma^{-1} h not positive");
    return 1.0 / q;
}

ChannelModel extract_architecture_model(const ChannelModel& model4, const Architecture& arch) {
    if (model4.n_s != 2 || model4.n_n != 2 || model4.sigma.rows() != 4) {
        throw DimensionMismatch("extract_architecture_model: expected a full 4-channel model");
    }
    ChannelModel out;
    out.n_s = arch.n_signal();
    out.n_n = arch.n_noise();
    for (int c : arch.channel_indices) {
        if (c >= 1 && c <= 2) out.h_s.push_back(model4.h_s[static_cast<std::size_t>(c - 1)]);
    }
    const std::size_t n = arch.channel_indices.size();
    out.sigma = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.sigma(i, j) = model4.sigma(static_cast<std::size_t>(arch.channel_indices[i] - 1),
                                           static_cast<std::size_t>(arch.channel_indices[j] - 1));
        }
    }
    return out;
}

CombinerResult architecture_result(const Architecture& arch, const ChannelModel& model4,
                                   bool min_rule) {
    const ChannelModel sub = extract_architecture_model(model4, arch);

    // Reference for all gains: the plain probe-channel receiver.
    const double var_probe = [&] {
        if (model4.h_s[0] == cdouble{}) throw ZeroGain("architecture_result: probe gain is zero");
        return model4.sigma(0, 0).real() / std::norm(model4.h_s[0]);
    }();

    CombinerResult res;
    if (arch.tag == ArchTag::WH_A && min_rule) {
        // min over the two signal channels of sigma_mm / |h_m|^2
        double best = var_probe;
        std::size_t best_ch = 0;
        if (model4.h_s[1] != cdouble{}) {
            const double var2 = model4.sigma(1, 1).real() / std::norm(model4.h_s[1]);
            if (var2 < best) {
                best = var2;
                best_ch = 1;
            }
        }
        res.weights = {cdouble{1.0} / std::conj(model4.h_s[best_ch])};
        res.variance = best;
    } else {
        res.weights = compute_weights(sub.full_gains(), sub.sigma);
        res.variance = estimation_variance(sub.full_gains(), sub.sigma);
    }
    res.snr_gain_db = (arch.tag == ArchTag::WH_A && !min_rule)
                          ? 0.0
                          : 10.0 * std::log10(var_probe / res.variance);
    return res;
}

std::vector<cdouble> apply_weights(const std::vector<cdouble>& weights,
                                   const ObservationBlock& block) {
    if (weights.size() != block.n_s + block.n_n) {
        throw DimensionMismatch("apply_weights: weight count differs from channel count");
    }
    std::vector<cdouble> out(block.t_len);
    for (std::size_t t = 0; t < block.t_len; ++t) {
        cdouble acc{};
        for (std::size_t i = 0; i < block.n_s; ++i) acc += std::conj(weights[i]) * block.y_s(i, t);
        for (std::size_t i = 0; i < block.n_n; ++i) {
            acc += std::conj(weights[block.n_s + i]) * block.y_n(i, t);
        }
        out[t] = acc;
    }
    return out;
}

BvsC compare_b_vs_c(const ChannelModel& model4) {
    const ChannelModel b = extract_architecture_model(model4, Architecture::wh_b());
    const ChannelModel c = extract_architecture_model(model4, Architecture::wh_c());
    const double var_b = estimation_variance(b.full_gains(), b.sigma);
    const double var_c = estimation_variance(c.full_gains(), c.sigma);
    const double band = 1e-12 * std::max(var_b, var_c);
    if (var_b < var_c - band) return BvsC::B_better;
    if (var_c < var_b - band) return BvsC::C_better;
    return BvsC::tie;
}

} // namespace whsim
