#include "whsim/channel.hpp"

#include "whsim/errors.hpp"
#include "whsim/rng.hpp"

#include <cmath>

namespace whsim {

std::vector<cdouble> ChannelModel::full_gains() const {
    std::vector<cdouble> h(dim(), cdouble{});
    for (std::size_t i = 0; i < n_s; ++i) h[i] = h_s[i];
    return h;
}

std::vector<cdouble> ObservationBlock::column(std::size_t t) const {
    std::vector<cdouble> col(n_s + n_n);
    for (std::size_t i = 0; i < n_s; ++i) col[i] = y_s(i, t);
    for (std::size_t i = 0; i < n_n; ++i) col[n_s + i] = y_n(i, t);
    return col;
}

ComplexMatrix build_covariance(const std::vector<double>& sigmas,
                               const ComplexMatrix& correlations) {
    const std::size_t n = sigmas.size();
    if (correlations.rows() != n || correlations.cols() != n) {
        throw DimensionMismatch("build_covariance: correlation matrix shape differs from sigmas");
    }
    for (double s : sigmas) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw NotPositiveDefinite("build_covariance: channel deviations must be positive");
        }
    }

    ComplexMatrix out(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        out(m, m) = sigmas[m] * sigmas[m];
        for (std::size_t k = m + 1; k < n; ++k) {
            const cdouble r = correlations(m, k);
            if (std::abs(r) > 1.0 + 1e-15) {
                throw NotPositiveDefinite("build_covariance: |r| > 1 between channels " +
                                          std::to_string(m + 1) + "," + std::to_string(k + 1));
            }
            out(m, k) = r * sigmas[m] * sigmas[k];
            out(k, m) = std::conj(out(m, k));
        }
    }
    cholesky_factor(out); // throws NotPositiveDefinite for infeasible correlation sets
    return out;
}

ComplexMatrix sample_noise(const ComplexMatrix& sigma, std::size_t t_len, std::uint64_t seed) {
    const std::size_t n = sigma.rows();
    const ComplexMatrix l = cholesky_factor(sigma);
    Rng rng(seed);

    ComplexMatrix out(n, t_len);
    std::vector<cdouble> g(n);
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n; ++i) g[i] = rng.complex_gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            cdouble acc{};
            for (std::size_t k = 0; k <= i; ++k) acc += l(i, k) * g[k];
            out(i, t) = acc;
        }
    }
    return out;
}

ObservationBlock synthesize(const ChannelModel& model, const SymbolSequence& symbols,
                            std::uint64_t seed) {
    if (model.h_s.size() != model.n_s) {
        throw DimensionMismatch("synthesize: gain vector length differs from n_s");
    }
    if (model.sigma.rows() != model.dim()) {
        throw DimensionMismatch("synthesize: covariance dimension differs from channel count");
    }
    require_finite(model.sigma, "synthesize: sigma");

    const std::size_t t_len = symbols.size();
    const ComplexMatrix noise = sample_noise(model.sigma, t_len, seed);

    ObservationBlock block;
    block.t_len = t_len;
    block.n_s = model.n_s;
    block.n_n = model.n_n;
    block.y_s = ComplexMatrix(model.n_s, t_len);
    block.y_n = ComplexMatrix(model.n_n, t_len);
    for (std::size_t t = 0; t < t_len; ++t) {
        const cdouble s = symbols.values[t];
        for (std::size_t i = 0; i < model.n_s; ++i) {
            block.y_s(i, t) = model.h_s[i] * s + noise(i, t);
        }
        for (std::size_t i = 0; i < model.n_n; ++i) {
            block.y_n(i, t) = noise(model.n_s + i, t);
        }
    }
    return block;
}

SymbolSequence random_symbols(const SymbolAlphabet& alphabet, std::size_t t_len,
                              std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> indices(t_len);
    for (auto& idx : indices) {
        idx = static_cast<std::size_t>(rng.uniform_index(alphabet.order));
    }
    return sequence_from_indices(alphabet, std::move(indices));
}

} // namespace whsim
