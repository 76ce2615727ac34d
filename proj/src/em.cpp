#include "whsim/em.hpp"

#include "whsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace whsim {

namespace {

// Quadratic-form machinery shared by the expectation pass, the likelihood,
// and the calibration scoring. For each slot t,
//   d_m^(t) = base_t + |a_m|^2 (h^H A h) - 2 Re[conj(a_m) r_t]
// with base_t = y_s^H A y_s + y_n^H C y_n + 2 Re[y_s^H B y_n] and
// r_t = h^H A y_s + h^H B y_n, which is the partitioned expansion of
// (y - h a_m)^H Sigma^{-1} (y - h a_m).
struct DistanceContext {
    BlockInverse blocks;
    std::vector<cdouble> a_h; // A h
    std::vector<cdouble> bh_n; // B^H h (empty when n_n = 0)
    double h_a_h = 0.0;
    double log_det = 0.0;
};

DistanceContext make_context(const std::vector<cdouble>& h_s, const ComplexMatrix& sigma_ss,
                             const ComplexMatrix& sigma_sn, const ComplexMatrix& sigma_nn) {
    const std::size_t n_s = sigma_ss.rows();
    const std::size_t n_n = sigma_nn.rows();

    ComplexMatrix sigma(n_s + n_n, n_s + n_n);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_s; ++j) sigma(i, j) = sigma_ss(i, j);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_n; ++j) {
            sigma(i, n_s + j) = sigma_sn(i, j);
            sigma(n_s + j, i) = std::conj(sigma_sn(i, j));
        }
    for (std::size_t i = 0; i < n_n; ++i)
        for (std::size_t j = 0; j < n_n; ++j) sigma(n_s + i, n_s + j) = sigma_nn(i, j);

    DistanceContext ctx;
    ctx.log_det = log_det_hermitian_pd(sigma);
    ctx.blocks = block_inverse(sigma, n_s, n_n);
    ctx.a_h = matvec(ctx.blocks.a, h_s);
    if (n_n > 0) ctx.bh_n = matvec(adjoint(ctx.blocks.b), h_s);
    cdouble q{};
    for (std::size_t i = 0; i < n_s; ++i) q += std::conj(h_s[i]) * ctx.a_h[i];
    ctx.h_a_h = q.real();
    return ctx;
}

void fill_distances(const ObservationBlock& y, const DistanceContext& ctx,
                    const SymbolAlphabet& alphabet, PosteriorTable& table) {
    const std::size_t n_s = y.n_s;
    const std::size_t n_n = y.n_n;
    const std::size_t t_len = y.t_len;
    const std::size_t order = alphabet.order;

    table.order = order;
    table.t_len = t_len;
    table.d.assign(order * t_len, 0.0);

    std::vector<double> pow_gain(order);
    for (std::size_t m = 0; m < order; ++m) pow_gain[m] = std::norm(alphabet.points[m]) * ctx.h_a_h;

    std::vector<cdouble> ys(n_s), yn(n_n), a_ys(n_s), b_yn(n_s), c_yn(n_n);
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n_s; ++i) ys[i] = y.y_s(i, t);
        for (std::size_t i = 0; i < n_n; ++i) yn[i] = y.y_n(i, t);

        for (std::size_t i = 0; i < n_s; ++i) {
            cdouble acc{};
            for (std::size_t j = 0; j < n_s; ++j) acc += ctx.blocks.a(i, j) * ys[j];
            a_ys[i] = acc;
        }
        double base = 0.0;
        cdouble r{};
        for (std::size_t i = 0; i < n_s; ++i) {
            base += (std::conj(ys[i]) * a_ys[i]).real();
            r += std::conj(ctx.a_h[i]) * ys[i]; // h^H A y_s (A Hermitian)
        }
        if (n_n > 0) {
            for (std::size_t i = 0; i < n_s; ++i) {
                cdouble acc{};
                for (std::size_t j = 0; j < n_n; ++j) acc += ctx.blocks.b(i, j) * yn[j];
                b_yn[i] = acc;
            }
            for (std::size_t i = 0; i < n_n; ++i) {
                cdouble acc{};
                for (std::size_t j = 0; j < n_n; ++j) acc += ctx.blocks.c(i, j) * yn[j];
                c_yn[i] = acc;
            }
            cdouble sb{};
            for (std::size_t i = 0; i < n_s; ++i) sb += std::conj(ys[i]) * b_yn[i];
            base += 2.0 * sb.real();
            for (std::size_t i = 0; i < n_n; ++i) base += (std::conj(yn[i]) * c_yn[i]).real();
            for (std::size_t j = 0; j < n_n; ++j) r += std::conj(ctx.bh_n[j]) * yn[j]; // h^H B y_n
        }
        for (std::size_t m = 0; m < order; ++m) {
            const cdouble a = alphabet.points[m];
            table.dist(m, t) = base + pow_gain[m] - 2.0 * (std::conj(a) * r).real();
        }
    }
}

// Column-wise posteriors from distances; returns sum_t ln[(1/M) sum_m exp(-d)].
double normalize_posteriors(PosteriorTable& table) {
    const std::size_t order = table.order;
    const std::size_t t_len = table.t_len;
    table.w.assign(order * t_len, 0.0);
    double ll = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        double d_min = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < order; ++m) d_min = std::min(d_min, table.dist(m, t));
        double z = 0.0;
        for (std::size_t m = 0; m < order; ++m) {
            const double e = std::exp(-(table.dist(m, t) - d_min));
            table.weight(m, t) = e;
            z += e;
        }
        for (std::size_t m = 0; m < order; ++m) table.weight(m, t) /= z;
        ll += -d_min + std::log(z);
    }
    return ll - static_cast<double>(t_len) * std::log(static_cast<double>(order));
}

double observed_ll_tail(const DistanceContext& ctx, std::size_t n, std::size_t t_len) {
    return -static_cast<double>(t_len) * ctx.log_det -
           static_cast<double>(n) * static_cast<double>(t_len) * std::log(std::numbers::pi);
}

double observed_ll(const ObservationBlock& y, const std::vector<cdouble>& h_s,
                   const ComplexMatrix& sigma_ss, const ComplexMatrix& sigma_sn,
                   const ComplexMatrix& sigma_nn, const SymbolAlphabet& alphabet) {
    const DistanceContext ctx = make_context(h_s, sigma_ss, sigma_sn, sigma_nn);
    PosteriorTable table;
    fill_distances(y, ctx, alphabet, table);
    double ll = 0.0;
    for (std::size_t t = 0; t < table.t_len; ++t) {
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < table.order; ++m) shift = std::max(shift, -table.dist(m, t));
        double z = 0.0;
        for (std::size_t m = 0; m < table.order; ++m) z += std::exp(-table.dist(m, t) - shift);
        ll += shift + std::log(z);
    }
    ll -= static_cast<double>(table.t_len) * std::log(static_cast<double>(table.order));
    return ll + observed_ll_tail(ctx, y.n_s + y.n_n, y.t_len);
}

// Largest eigenvalue and eigenvector of a Hermitian PSD matrix by power
// iteration with a deterministic start. Plenty for the initializer; the
// artifact needs no general eigensolver.
std::pair<double, std::vector<cdouble>> dominant_eigenpair(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<cdouble> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i);
    auto normalize = [&](std::vector<cdouble>& v) {
        double s = 0.0;
        for (const auto& e : v) s += std::norm(e);
        s = std::sqrt(s);
        if (s == 0.0) return false;
        for (auto& e : v) e /= s;
        return true;
    };
    normalize(x);
    for (int it = 0; it < 200; ++it) {
        std::vector<cdouble> next = matvec(m, x);
        if (!normalize(next)) break; // zero matrix: keep the start vector
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - x[i]));
        x = std::move(next);
        if (delta < 1e-14) break;
    }
    const std::vector<cdouble> mx = matvec(m, x);
    cdouble q{};
    for (std::size_t i = 0; i < n; ++i) q += std::conj(x[i]) * mx[i];
    return {q.real(), x};
}

// (Sigma_sn Sigma_nn^{-1}) r_n correction used by the gain update.
std::vector<cdouble> gain_update(const ObservationBlock& y, const std::vector<cdouble>& s_ref,
                                 double sum_u, const ComplexMatrix& sigma_sn,
                                 const ComplexMatrix& sigma_nn) {
    if (!(sum_u > 0.0)) throw ZeroPosteriorMass("gain update: posterior mass is not positive");
    const std::size_t n_s = y.n_s;
    std::vector<cdouble> r_s(n_s);
    for (std::size_t i = 0; i < n_s; ++i) {
        cdouble acc{};
        for (std::size_t t = 0; t < y.t_len; ++t) acc += y.y_s(i, t) * std::conj(s_ref[t]);
        r_s[i] = acc;
    }
    if (y.n_n > 0) {
        std::vector<cdouble> r_n(y.n_n);
        for (std::size_t i = 0; i < y.n_n; ++i) {
            cdouble acc{};
            for (std::size_t t = 0; t < y.t_len; ++t) acc += y.y_n(i, t) * std::conj(s_ref[t]);
            r_n[i] = acc;
        }
        const std::vector<cdouble> corr = matvec(sigma_sn, hpd_solve(sigma_nn, r_n));
        for (std::size_t i = 0; i < n_s; ++i) r_s[i] -= corr[i];
    }
    for (auto& e : r_s) e /= sum_u;
    return r_s;
}

// Jitter-and-retry positive definiteness maintenance on the assembled
// covariance; mutates sigma_ss only.
void ensure_assembled_pd(EmState& state) {
    auto assembled = state.assembled_sigma();
    try {
        cholesky_factor(assembled);
        return;
    } catch (const NotPositiveDefinite&) {
    }
    const std::size_t n = assembled.rows();
    const double eps = 1e-10 * std::max(trace_real(assembled), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < state.sigma_ss.rows(); ++i) state.sigma_ss(i, i) += eps;
    cholesky_factor(state.assembled_sigma()); // rethrows on persistent failure
}

constexpr cdouble k_rotations[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

} // namespace

ComplexMatrix EmState::assembled_sigma() const {
    ComplexMatrix sigma(n_s + n_n, n_s + n_n);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_s; ++j) sigma(i, j) = sigma_ss(i, j);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_n; ++j) {
            sigma(i, n_s + j) = sigma_sn(i, j);
            sigma(n_s + j, i) = std::conj(sigma_sn(i, j));
        }
    for (std::size_t i = 0; i < n_n; ++i)
        for (std::size_t j = 0; j < n_n; ++j) sigma(n_s + i, n_s + j) = sigma_nn(i, j);
    return sigma;
}

ComplexMatrix estimate_noise_covariance(const ComplexMatrix& y_n) {
    const std::size_t n_n = y_n.rows();
    const std::size_t t_len = y_n.cols();
    if (t_len < n_n) throw DimensionMismatch("estimate_noise_covariance: fewer samples than channels");
    require_finite(y_n, "estimate_noise_covariance: y_n");

    ComplexMatrix s(n_n, n_n);
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n_n; ++i) {
            for (std::size_t j = 0; j < n_n; ++j) {
                s(i, j) += y_n(i, t) * std::conj(y_n(j, t));
            }
        }
    }
    const double inv_t = 1.0 / static_cast<double>(t_len);
    for (auto& e : s.entries()) e *= inv_t;
    s = hermitian_symmetrize(s);

    try {
        cholesky_factor(s);
        return s;
    } catch (const NotPositiveDefinite&) {
    }
    const ComplexMatrix jittered = with_jitter(s);
    try {
        cholesky_factor(jittered);
        return jittered;
    } catch (const NotPositiveDefinite&) {
        throw RankDeficient("estimate_noise_covariance: sample covariance not positive definite");
    }
}

EmState init_state(const ObservationBlock& y, const SymbolAlphabet& alphabet) {
    const std::size_t n = y.n_s + y.n_n;
    if (y.t_len < n) throw DimensionMismatch("init_state: need at least N observations");
    require_finite(y.y_s, "init_state: y_s");
    require_finite(y.y_n, "init_state: y_n");

    const std::size_t n_s = y.n_s;
    const double inv_t = 1.0 / static_cast<double>(y.t_len);

    ComplexMatrix r_s(n_s, n_s);
    for (std::size_t t = 0; t < y.t_len; ++t) {
        for (std::size_t i = 0; i < n_s; ++i) {
            for (std::size_t j = 0; j < n_s; ++j) {
                r_s(i, j) += y.y_s(i, t) * std::conj(y.y_s(j, t));
            }
        }
    }
    for (auto& e : r_s.entries()) e *= inv_t;
    r_s = hermitian_symmetrize(r_s);
    require_finite(r_s, "init_state: signal sample covariance");

    auto [lam_max, vec] = dominant_eigenpair(r_s);
    double lam_min = lam_max;
    if (n_s > 1) {
        ComplexMatrix shifted(n_s, n_s);
        for (std::size_t i = 0; i < n_s; ++i) {
            for (std::size_t j = 0; j < n_s; ++j) {
                shifted(i, j) = (i == j ? cdouble{lam_max} : cdouble{}) - r_s(i, j);
            }
        }
        lam_min = lam_max - dominant_eigenpair(shifted).first;
    }

    // Spread between the extreme eigenvalues estimates the portion of the
    // signal-row power that is actually signal; floored so a pure-noise
    // block still yields a finite, small starting gain.
    const double excess = std::max({lam_max - lam_min, 0.01 * lam_max, 1e-300});
    const double mag = std::sqrt(excess / alphabet.avg_power);

    // Deterministic phase: make the largest eigenvector component real positive.
    std::size_t top = 0;
    for (std::size_t i = 1; i < n_s; ++i) {
        if (std::abs(vec[i]) > std::abs(vec[top])) top = i;
    }
    if (std::abs(vec[top]) > 0.0) {
        const cdouble phase = std::conj(vec[top]) / std::abs(vec[top]);
        for (auto& e : vec) e *= phase;
    }

    EmState state;
    state.n_s = n_s;
    state.n_n = y.n_n;
    state.t_len = y.t_len;
    state.h_s.resize(n_s);
    for (std::size_t i = 0; i < n_s; ++i) state.h_s[i] = vec[i] * mag;
    state.sigma_ss = r_s;
    state.sigma_sn = ComplexMatrix(n_s, y.n_n);
    state.sigma_nn =
        y.n_n > 0 ? estimate_noise_covariance(y.y_n) : ComplexMatrix(0, 0);
    state.s_hat.assign(y.t_len, cdouble{});
    state.u.assign(y.t_len, 0.0);
    state.v.assign(y.t_len, 0.0);
    ensure_assembled_pd(state);
    return state;
}

PosteriorTable e_step(const ObservationBlock& y, EmState& state, const SymbolAlphabet& alphabet) {
    const DistanceContext ctx = make_context(state.h_s, state.sigma_ss, state.sigma_sn,
                                             state.sigma_nn);
    PosteriorTable table;
    fill_distances(y, ctx, alphabet, table);
    const double ll_core = normalize_posteriors(table);

    state.s_hat.resize(y.t_len);
    state.u.resize(y.t_len);
    state.v.resize(y.t_len);
    for (std::size_t t = 0; t < y.t_len; ++t) {
        cdouble mean{};
        double second = 0.0;
        for (std::size_t m = 0; m < table.order; ++m) {
            const double w = table.weight(m, t);
            mean += alphabet.points[m] * w;
            second += std::norm(alphabet.points[m]) * w;
        }
        state.s_hat[t] = mean;
        state.u[t] = second;
        state.v[t] = std::max(second - std::norm(mean), 0.0);
    }
    state.ll_trace.push_back(ll_core + observed_ll_tail(ctx, y.n_s + y.n_n, y.t_len));
    return table;
}

void m_step(const ObservationBlock& y, EmState& state) {
    const std::size_t n_s = y.n_s;
    const std::size_t n_n = y.n_n;
    const std::size_t t_len = y.t_len;

    double sum_u = 0.0;
    for (double u : state.u) sum_u += u;
    const std::vector<cdouble> h_new =
        gain_update(y, state.s_hat, sum_u, state.sigma_sn, state.sigma_nn);

    double sum_v = 0.0;
    for (double v : state.v) sum_v += v;

    const double inv_t = 1.0 / static_cast<double>(t_len);
    ComplexMatrix s_ss(n_s, n_s);
    ComplexMatrix s_sn(n_s, n_n);
    std::vector<cdouble> res(n_s);
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n_s; ++i) res[i] = y.y_s(i, t) - h_new[i] * state.s_hat[t];
        for (std::size_t i = 0; i < n_s; ++i) {
            for (std::size_t j = 0; j < n_s; ++j) s_ss(i, j) += res[i] * std::conj(res[j]);
            for (std::size_t j = 0; j < n_n; ++j) s_sn(i, j) += res[i] * std::conj(y.y_n(j, t));
        }
    }
    for (std::size_t i = 0; i < n_s; ++i) {
        for (std::size_t j = 0; j < n_s; ++j) {
            s_ss(i, j) = (s_ss(i, j) + sum_v * h_new[i] * std::conj(h_new[j])) * inv_t;
        }
    }
    for (auto& e : s_sn.entries()) e *= inv_t;

    state.h_s = h_new;
    state.sigma_ss = hermitian_symmetrize(s_ss);
    state.sigma_sn = (state.n_s == state.n_n && n_n > 0 && state.symmetrize_cross)
                         ? scale(add(s_sn, adjoint(s_sn)), 0.5)
                         : s_sn;
    ensure_assembled_pd(state);
    state.iter += 1;
}

EmState run_em(const ObservationBlock& y, const SymbolAlphabet& alphabet, const EmConfig& config) {
    if (y.t_len < y.n_s + y.n_n) throw DimensionMismatch("run_em: need at least N observations");

    EmState state = init_state(y, alphabet);
    state.symmetrize_cross = config.symmetrize_cross;

    const double eps_hs =
        config.eps_hs > 0.0
            ? config.eps_hs
            : 1e-6 * std::sqrt(static_cast<double>(y.n_s) * static_cast<double>(y.t_len)) *
                  alphabet.avg_power;
    const double eps_sigma = config.eps_sigma > 0.0
                                 ? config.eps_sigma
                                 : 1e-8 * frobenius_norm(state.assembled_sigma());

    std::vector<cdouble> prev_h;
    std::vector<cdouble> prev_s;
    ComplexMatrix prev_ss;
    ComplexMatrix prev_sn;

    for (int k = 0;; ++k) {
        e_step(y, state, alphabet);

        if (k > 0) {
            // || h^[k] s^[k] - h^[k-1] s^[k-1] ||_F over the N_s x T outer product
            double hs_sq = 0.0;
            for (std::size_t t = 0; t < y.t_len; ++t) {
                for (std::size_t i = 0; i < y.n_s; ++i) {
                    hs_sq += std::norm(state.h_s[i] * state.s_hat[t] - prev_h[i] * prev_s[t]);
                }
            }
            double sig_sq = 0.0;
            {
                const ComplexMatrix d_ss = subtract(state.sigma_ss, prev_ss);
                for (const auto& e : d_ss.entries()) sig_sq += std::norm(e);
                if (y.n_n > 0) {
                    const ComplexMatrix d_sn = subtract(state.sigma_sn, prev_sn);
                    double sn = 0.0;
                    for (const auto& e : d_sn.entries()) sn += std::norm(e);
                    sig_sq += 2.0 * sn; // both off-diagonal blocks
                }
            }
            if (std::sqrt(hs_sq) < eps_hs && std::sqrt(sig_sq) < eps_sigma) {
                state.converged = true;
                break;
            }
        }
        if (k >= config.max_iters) break;

        prev_h = state.h_s;
        prev_s = state.s_hat;
        prev_ss = state.sigma_ss;
        prev_sn = state.sigma_sn;
        m_step(y, state);
    }
    return state;
}

double log_likelihood(const ObservationBlock& y, const EmState& state,
                      const SymbolAlphabet& alphabet) {
    return observed_ll(y, state.h_s, state.sigma_ss, state.sigma_sn, state.sigma_nn, alphabet);
}

CalibrationResult calibrate(const EmState& state, const SymbolAlphabet& alphabet,
                            const ObservationBlock& y) {
    double power = 0.0;
    for (const auto& s : state.s_hat) power += std::norm(s);
    if (!(power > 0.0)) throw ZeroEstimate("calibrate: all symbol estimates are zero");

    const double t_len = static_cast<double>(state.t_len);
    const double kappa = std::sqrt(t_len * alphabet.avg_power / power);

    std::vector<cdouble> s0(state.s_hat);
    for (auto& s : s0) s *= kappa;
    double sum_u = 0.0;
    for (double u : state.u) sum_u += u;
    const std::vector<cdouble> h0 =
        gain_update(y, s0, kappa * kappa * sum_u, state.sigma_sn, state.sigma_nn);

    // The quarter-turn rotations are exact symmetries of the square
    // constellation, so their likelihoods tie up to rounding; the tie-break
    // canonicalizes the first gain's phase toward zero, which keeps the
    // choice stable under benign perturbations (rescaling y, rotated
    // initialization).
    double best_ll = -std::numeric_limits<double>::infinity();
    double lls[4];
    for (int i = 0; i < 4; ++i) {
        std::vector<cdouble> h_cand(h0);
        for (auto& e : h_cand) e *= std::conj(k_rotations[i]);
        lls[i] = observed_ll(y, h_cand, state.sigma_ss, state.sigma_sn, state.sigma_nn, alphabet);
        best_ll = std::max(best_ll, lls[i]);
    }
    const double band = 1e-9 * (std::abs(best_ll) + 1.0);
    int win = -1;
    double win_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        if (lls[i] < best_ll - band) continue;
        const double re = (std::conj(k_rotations[i]) * h0[0]).real();
        if (win < 0 || re > win_re) {
            win = i;
            win_re = re;
        }
    }

    CalibrationResult result;
    result.rotation = k_rotations[win];
    result.s_cal = std::move(s0);
    for (auto& s : result.s_cal) s *= result.rotation;
    result.h_cal = h0;
    for (auto& e : result.h_cal) e *= std::conj(result.rotation);
    result.sigma_ss = state.sigma_ss;
    result.sigma_sn = state.sigma_sn;
    result.sigma_nn = state.sigma_nn;

    const DistanceContext ctx =
        make_context(result.h_cal, result.sigma_ss, result.sigma_sn, result.sigma_nn);
    fill_distances(y, ctx, alphabet, result.posteriors);
    normalize_posteriors(result.posteriors);

    std::vector<std::size_t> detected(state.t_len);
    for (std::size_t t = 0; t < state.t_len; ++t) {
        detected[t] = nearest_symbol(result.s_cal[t], alphabet);
    }
    result.detected = sequence_from_indices(alphabet, std::move(detected));
    return result;
}

SymbolSequence detect_symbols(const CalibrationResult& result, const SymbolAlphabet& alphabet,
                              DetectMode mode) {
    const std::size_t t_len = result.s_cal.size();
    std::vector<std::size_t> indices(t_len);
    if (mode == DetectMode::min_distance) {
        for (std::size_t t = 0; t < t_len; ++t) {
            indices[t] = nearest_symbol(result.s_cal[t], alphabet);
        }
    } else {
        for (std::size_t t = 0; t < t_len; ++t) {
            std::size_t best = 0;
            double best_w = -1.0;
            for (std::size_t m = 0; m < result.posteriors.order; ++m) {
                const double w = result.posteriors.weight(m, t);
                if (w > best_w) {
                    best_w = w;
                    best = m;
                }
            }
            indices[t] = best;
        }
    }
    return sequence_from_indices(alphabet, std::move(indices));
}

} // namespace whsim
