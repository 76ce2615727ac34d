#include "whsim/combiner.hpp"
#include "whsim/errors.hpp"
#include "whsim/rng.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace whsim;

namespace {

// Closed-form references evaluated directly from (h, sigma, r); these are
// the two-channel architecture formulas the generic path must reproduce.
struct Closed {
    static double var_b(cdouble h1, double s1, double s3, cdouble r13) {
        return s1 * s1 * (1.0 - std::norm(r13)) / std::norm(h1);
    }
    static double var_c(cdouble h1, cdouble h2, double s1, double s2, cdouble r12) {
        const double num = s1 * s1 * s2 * s2 * (1.0 - std::norm(r12));
        const double den = std::norm(h1) * s2 * s2 + std::norm(h2) * s1 * s1 -
                           2.0 * s1 * s2 * (r12 * std::conj(h1) * h2).real();
        return num / den;
    }
    // 1 / (h_s^H (S_ss - S_sn S_nn^{-1} S_sn^H)^{-1} h_s) with explicit
    // 2x2 inverses.
    static double var_d(const ChannelModel& m) {
        auto inv2 = [](const ComplexMatrix& x) {
            const cdouble det = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
            ComplexMatrix out(2, 2);
            out(0, 0) = x(1, 1) / det;
            out(0, 1) = -x(0, 1) / det;
            out(1, 0) = -x(1, 0) / det;
            out(1, 1) = x(0, 0) / det;
            return out;
        };
        ComplexMatrix ss(2, 2), sn(2, 2), nn(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                ss(i, j) = m.sigma(i, j);
                sn(i, j) = m.sigma(i, 2 + j);
                nn(i, j) = m.sigma(2 + i, 2 + j);
            }
        const ComplexMatrix schur = subtract(ss, matmul(sn, matmul(inv2(nn), adjoint(sn))));
        const ComplexMatrix a = inv2(schur);
        cdouble q{};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) q += std::conj(m.h_s[i]) * a(i, j) * m.h_s[j];
        return 1.0 / q.real();
    }
};

ChannelModel model_from(cdouble h1, cdouble h2, std::vector<double> sigmas,
                        cdouble r12, cdouble r13, cdouble r14, cdouble r23, cdouble r24,
                        cdouble r34) {
    ComplexMatrix r(4, 4);
    r(0, 1) = r12;
    r(0, 2) = r13;
    r(0, 3) = r14;
    r(1, 2) = r23;
    r(1, 3) = r24;
    r(2, 3) = r34;
    ChannelModel m;
    m.n_s = 2;
    m.n_n = 2;
    m.h_s = {h1, h2};
    m.sigma = build_covariance(sigmas, r);
    return m;
}

} // namespace

TEST_CASE("single-channel weights reduce to 1/h regardless of noise power") {
    for (double s2 : {0.5, 1.0, 7.0}) {
        ComplexMatrix sigma(1, 1);
        sigma(0, 0) = s2;
        const std::vector<cdouble> w = compute_weights({cdouble{1.0}}, sigma);
        CHECK(std::abs(w[0] - cdouble{1.0}) < 1e-14);
    }
}

TEST_CASE("two-channel weights with a pure noise reference") {
    ComplexMatrix sigma(2, 2);
    sigma(0, 0) = 1.0;
    sigma(0, 1) = 0.8;
    sigma(1, 0) = 0.8;
    sigma(1, 1) = 1.0;
    const std::vector<cdouble> w = compute_weights({cdouble{1.0}, cdouble{}}, sigma);
    CHECK(std::abs(w[0] - cdouble{1.0}) < 1e-12);
    CHECK(std::abs(w[1] - cdouble{-0.8}) < 1e-12);
    // closed form w_B = (1/h1*)[1; -r13* s1/s3]
    CHECK(std::abs(w[1] - (-std::conj(cdouble{0.8}) * 1.0 / 1.0)) < 1e-12);
}

TEST_CASE("equal-gain white-noise weights split evenly") {
    const std::vector<cdouble> w =
        compute_weights({cdouble{1.0}, cdouble{1.0}}, ComplexMatrix::identity(2));
    CHECK(std::abs(w[0] - cdouble{0.5}) < 1e-14);
    CHECK(std::abs(w[1] - cdouble{0.5}) < 1e-14);
}

TEST_CASE("weights are unbiased: w^H h = 1") {
    Rng rng(0x1001u);
    for (int rep = 0; rep < 30; ++rep) {
        const ChannelModel m = testutil::random_model4(rng);
        const std::vector<cdouble> w = compute_weights(m.full_gains(), m.sigma);
        cdouble dot{};
        for (std::size_t i = 0; i < 4; ++i) dot += std::conj(w[i]) * m.full_gains()[i];
        CHECK(std::abs(dot - cdouble{1.0}) < 1e-10);
    }
}

TEST_CASE("estimation variance closed forms") {
    ComplexMatrix unit(1, 1);
    unit(0, 0) = 1.0;
    CHECK(estimation_variance({cdouble{1.0}}, unit) == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix sigma(2, 2);
    sigma(0, 0) = 1.0;
    sigma(0, 1) = 0.8;
    sigma(1, 0) = 0.8;
    sigma(1, 1) = 1.0;
    CHECK(estimation_variance({cdouble{1.0}, cdouble{}}, sigma) ==
          doctest::Approx(0.36).epsilon(1e-12));
}

TEST_CASE("probe-only architecture variance is sigma1^2/|h1|^2") {
    const ChannelModel m =
        model_from(cdouble{2.0}, cdouble{0.7, 0.1}, {std::sqrt(0.5), 1.0, 2.0, 0.5},
                   {}, {}, {}, {}, {}, {});
    const CombinerResult res = architecture_result(Architecture::wh_a(), m);
    CHECK(res.variance == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(res.snr_gain_db == 0.0);
}

TEST_CASE("noise-reference architecture gain matches 10 log10(1/(1-|r|^2))") {
    const ChannelModel m = model_from(cdouble{1.0}, cdouble{0.3}, {1, 2, 1, 2},
                                      {}, cdouble{0.9}, {}, {}, {}, {});
    const CombinerResult res = architecture_result(Architecture::wh_b(), m);
    const double want = 10.0 * std::log10(1.0 / (1.0 - 0.81));
    CHECK(res.snr_gain_db == doctest::Approx(want).epsilon(1e-10));
    CHECK(res.snr_gain_db == doctest::Approx(7.2125).epsilon(1e-3));
}

TEST_CASE("full architecture with no extra information reduces to the probe channel") {
    // cross block zero, coupling gain zero, signal channels uncorrelated
    const ChannelModel m = model_from(cdouble{1.3, -0.4}, cdouble{}, {1.1, 2.0, 0.7, 1.9},
                                      {}, {}, {}, {}, {}, cdouble{0.5});
    const CombinerResult d = architecture_result(Architecture::wh_d(), m);
    const CombinerResult a = architecture_result(Architecture::wh_a(), m);
    CHECK(d.variance == doctest::Approx(a.variance).epsilon(1e-10));
    CHECK(std::abs(d.snr_gain_db) < 1e-10);
}

TEST_CASE("architecture results match the two-channel closed forms") {
    Rng rng(0x1002u);
    for (int rep = 0; rep < 50; ++rep) {
        const ChannelModel m = testutil::random_model4(rng);
        const double s1 = std::sqrt(m.sigma(0, 0).real());
        const double s2 = std::sqrt(m.sigma(1, 1).real());
        const double s3 = std::sqrt(m.sigma(2, 2).real());
        const cdouble r12 = m.sigma(0, 1) / (s1 * s2);
        const cdouble r13 = m.sigma(0, 2) / (s1 * s3);

        const double var_b = architecture_result(Architecture::wh_b(), m).variance;
        CHECK(testutil::rel_err(var_b, Closed::var_b(m.h_s[0], s1, s3, r13)) < 1e-10);

        const double var_c = architecture_result(Architecture::wh_c(), m).variance;
        CHECK(testutil::rel_err(var_c, Closed::var_c(m.h_s[0], m.h_s[1], s1, s2, r12)) < 1e-10);

        const double var_d = architecture_result(Architecture::wh_d(), m).variance;
        CHECK(testutil::rel_err(var_d, Closed::var_d(m)) < 1e-10);
    }
}

TEST_CASE("variance ordering holds across random models") {
    Rng rng(0x1003u);
    for (int rep = 0; rep < 200; ++rep) {
        const ChannelModel m = testutil::random_model4(rng);
        const double var_a = architecture_result(Architecture::wh_a(), m).variance;
        const double var_b = architecture_result(Architecture::wh_b(), m).variance;
        const double var_c = architecture_result(Architecture::wh_c(), m).variance;
        const double var_d = architecture_result(Architecture::wh_d(), m).variance;
        CHECK(var_d <= var_b + 1e-9);
        CHECK(var_d <= var_c + 1e-9);
        CHECK(var_b <= var_a + 1e-9);
        CHECK(var_c <= var_a + 1e-9);
    }
}

TEST_CASE("scaling the covariance scales variances and leaves gains unchanged") {
    Rng rng(0x1004u);
    const ChannelModel m = testutil::random_model4(rng);
    for (double lambda : {0.25, 3.0, 42.0}) {
        ChannelModel scaled = m;
        scaled.sigma = scale(m.sigma, lambda);
        for (const Architecture& arch : {Architecture::wh_a(), Architecture::wh_b(),
                                         Architecture::wh_c(), Architecture::wh_d()}) {
            const CombinerResult base = architecture_result(arch, m);
            const CombinerResult got = architecture_result(arch, scaled);
            CHECK(testutil::rel_err(got.variance, lambda * base.variance) < 1e-10);
            CHECK(std::abs(got.snr_gain_db - base.snr_gain_db) < 1e-10);
        }
    }
}

TEST_CASE("full-model variance equals the Schur-complement quadratic form") {
    Rng rng(0x1005u);
    for (int rep = 0; rep < 20; ++rep) {
        const ChannelModel m = testutil::random_model4(rng);
        const double var_full = estimation_variance(m.full_gains(), m.sigma);
        const BlockInverse blocks = block_inverse(m.sigma, 2, 2);
        cdouble q{};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) q += std::conj(m.h_s[i]) * blocks.a(i, j) * m.h_s[j];
        CHECK(testutil::rel_err(var_full, 1.0 / q.real()) < 1e-10);
    }
}

TEST_CASE("min rule picks the stronger signal channel") {
    // coupling channel has better per-channel SNR here
    const ChannelModel m = model_from(cdouble{0.5}, cdouble{2.0}, {1, 1, 1, 1},
                                      {}, {}, {}, {}, {}, {});
    const CombinerResult plain = architecture_result(Architecture::wh_a(), m);
    const CombinerResult min_rule = architecture_result(Architecture::wh_a(), m, true);
    CHECK(plain.variance == doctest::Approx(4.0));
    CHECK(min_rule.variance == doctest::Approx(0.25));
    CHECK(min_rule.snr_gain_db > 0.0);
}

TEST_CASE("apply_weights recovers symbols exactly without noise") {
    const SymbolAlphabet a = build_qam(16);
    const SymbolSequence symbols = random_symbols(a, 100, 3);
    ChannelModel model;
    model.n_s = 2;
    model.n_n = 0;
    model.h_s = {cdouble{0.9, 0.1}, cdouble{0.4, -0.2}};
    model.sigma = scale(ComplexMatrix::identity(2), 1e-20);
    const ObservationBlock block = synthesize(model, symbols, 5);
    const std::vector<cdouble> w = compute_weights(model.full_gains(), model.sigma);
    const std::vector<cdouble> s_hat = apply_weights(w, block);
    for (std::size_t t = 0; t < block.t_len; ++t) {
        CHECK(std::abs(s_hat[t] - symbols.values[t]) < 1e-7);
    }
}

TEST_CASE("selector weights return the selected row") {
    Rng rng(0x1006u);
    const ChannelModel m = testutil::random_model4(rng);
    const SymbolAlphabet a = build_qam(4);
    const SymbolSequence symbols = random_symbols(a, 50, 7);
    const ObservationBlock block = synthesize(m, symbols, 13);
    const std::vector<cdouble> w = {cdouble{1.0}, cdouble{}, cdouble{}, cdouble{}};
    const std::vector<cdouble> out = apply_weights(w, block);
    for (std::size_t t = 0; t < block.t_len; ++t) CHECK(out[t] == block.y_s(0, t));
}

TEST_CASE("empirical combiner variance matches 1/(h^H sigma^{-1} h)") {
    Rng rng(0x1007u);
    const ChannelModel m = testutil::random_model4(rng);
    const SymbolAlphabet a = build_qam(4);
    const std::size_t t_len = 1000000;
    const SymbolSequence symbols = random_symbols(a, t_len, 17);
    const ObservationBlock block = synthesize(m, symbols, 19);
    const std::vector<cdouble> w = compute_weights(m.full_gains(), m.sigma);
    const std::vector<cdouble> s_hat = apply_weights(w, block);
    double emp = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) emp += std::norm(s_hat[t] - symbols.values[t]);
    emp /= double(t_len);
    const double want = estimation_variance(m.full_gains(), m.sigma);
    CHECK(testutil::rel_err(emp, want) < 0.02);
}

TEST_CASE("two-channel comparison degenerate cases") {
    // no coupling gain, strong probe noise reference: the reference wins
    const ChannelModel br = model_from(cdouble{1.0}, cdouble{}, {1, 1, 1, 1},
                                       {}, cdouble{0.9}, {}, {}, {}, {});
    CHECK(compare_b_vs_c(br) == BvsC::B_better);

    // no reference correlation, strong coupling channel: extra signal wins
    const ChannelModel cc = model_from(cdouble{1.0}, cdouble{1.0}, {1, 1, 1, 1},
                                       {}, {}, {}, {}, {}, {});
    CHECK(compare_b_vs_c(cc) == BvsC::C_better);

    // both useless: tie
    const ChannelModel eq = model_from(cdouble{1.0}, cdouble{}, {1, 1, 1, 1},
                                       {}, {}, {}, {}, {}, {});
    CHECK(compare_b_vs_c(eq) == BvsC::tie);
}

TEST_CASE("two-channel comparison matches the closed-form variances") {
    Rng rng(0x1008u);
    for (int rep = 0; rep < 100; ++rep) {
        const ChannelModel m = testutil::random_model4(rng);
        const double s1 = std::sqrt(m.sigma(0, 0).real());
        const double s2 = std::sqrt(m.sigma(1, 1).real());
        const double s3 = std::sqrt(m.sigma(2, 2).real());
        const double var_b = Closed::var_b(m.h_s[0], s1, s3, m.sigma(0, 2) / (s1 * s3));
        const double var_c = Closed::var_c(m.h_s[0], m.h_s[1], s1, s2, m.sigma(0, 1) / (s1 * s2));
        const BvsC want = var_b < var_c ? BvsC::B_better : BvsC::C_better;
        CHECK(compare_b_vs_c(m) == want);
    }
}

TEST_CASE("zero gains and rejected correlations raise the named errors") {
    CHECK_THROWS_AS(compute_weights({cdouble{}, cdouble{}}, ComplexMatrix::identity(2)), ZeroGain);
    CHECK_THROWS_AS(estimation_variance({cdouble{}}, ComplexMatrix::identity(1)), ZeroGain);

    ComplexMatrix nearly(2, 2);
    nearly(0, 0) = 1.0;
    nearly(1, 1) = 1.0;
    nearly(0, 1) = 1.0 - 1e-12;
    nearly(1, 0) = 1.0 - 1e-12;
    CHECK_THROWS_AS(compute_weights({cdouble{1.0}, cdouble{}}, nearly), NotPositiveDefinite);
}

TEST_CASE("architecture tags carry their channel subsets") {
    CHECK(Architecture::wh_a().channel_indices == std::vector<int>{1});
    CHECK(Architecture::wh_b().channel_indices == std::vector<int>{1, 3});
    CHECK(Architecture::wh_c().channel_indices == std::vector<int>{1, 2});
    CHECK(Architecture::wh_d().channel_indices == std::vector<int>{1, 2, 3, 4});
    CHECK(Architecture::wh_b().n_signal() == 1);
    CHECK(Architecture::wh_b().n_noise() == 1);
    CHECK(architecture_from_name("whC").tag == ArchTag::WH_C);
    CHECK_THROWS_AS(architecture_from_name("whE"), MalformedInput);
}
