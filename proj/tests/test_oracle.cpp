#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "eyesim/errors.hpp"
#include "eyesim/eye.hpp"
#include "eyesim/fock_oracle.hpp"
#include "eyesim/series.hpp"
#include "eyesim/witness.hpp"

using eyesim::GainParams;
using eyesim::LossChannel;
using eyesim::ThresholdDetector;
namespace oracle = eyesim::oracle;

namespace {
constexpr double kPi = 3.14159265358979323846;

double state_mean(const oracle::FockVector& v) {
    double mean = 0.0;
    for (std::size_t n = 0; n < v.amps.size(); ++n)
        mean += static_cast<double>(n) * v.amps[n] * v.amps[n];
    return mean;
}
} // namespace

TEST_CASE("squeezed_number_state: zero gain is the bare input") {
    const auto vac = oracle::squeezed_number_state(GainParams(0.0), 0, 8);
    CHECK(vac.amps[0] == 1.0);
    for (std::size_t n = 1; n < vac.amps.size(); ++n) CHECK(vac.amps[n] == 0.0);

    const auto one = oracle::squeezed_number_state(GainParams(0.0), 1, 8);
    CHECK(one.amps[1] == 1.0);
    CHECK(one.truncation_loss < 1e-15);
}

TEST_CASE("squeezed_number_state means match the closed forms") {
    for (double g : {0.3, 1.0, 1.5}) {
        const GainParams gain(g);
        const int n_trunc = oracle::truncation_for(gain, 1e-13);
        const double s2 = gain.sinh2();
        CHECK(state_mean(oracle::squeezed_number_state(gain, 0, n_trunc)) ==
              doctest::Approx(s2).epsilon(1e-9));
        CHECK(state_mean(oracle::squeezed_number_state(gain, 1, n_trunc)) ==
              doctest::Approx(3.0 * s2 + 1.0).epsilon(1e-9));
    }
}

TEST_CASE("squeezed_number_state closed-form amplitudes at tanh g = 1/2") {
    const auto v = oracle::squeezed_number_state(GainParams(std::atanh(0.5)), 0, 64);
    CHECK(v.amps[0] * v.amps[0] == doctest::Approx(0.8660254037844386).epsilon(1e-13));
    CHECK(v.amps[2] * v.amps[2] == doctest::Approx(0.10825317547305483).epsilon(1e-13));
    CHECK(v.amps[1] == 0.0);
    CHECK(v.amps[3] == 0.0);
}

TEST_CASE("squeezed_number_state fails loudly on a hopeless truncation") {
    CHECK_THROWS_AS(oracle::squeezed_number_state(GainParams(1.5), 1, 8), eyesim::numeric_error);
    CHECK_THROWS_AS(oracle::squeezed_number_state(GainParams(0.5), 2, 8), std::invalid_argument);
}

TEST_CASE("binomial_map: Bernoulli and identity channels") {
    const std::vector<double> one_photon{0.0, 1.0};
    const auto lossy = oracle::binomial_map(one_photon, 0.08);
    CHECK(lossy[0] == doctest::Approx(0.92).epsilon(1e-15));
    CHECK(lossy[1] == doctest::Approx(0.08).epsilon(1e-15));

    const std::vector<double> any{0.1, 0.4, 0.3, 0.2};
    const auto same = oracle::binomial_map(any, 1.0);
    CHECK(same == any);
}

TEST_CASE("binomial_map preserves total probability") {
    std::vector<double> p(300, 0.0);
    double norm = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) norm += (p[n] = 1.0 / (1.0 + static_cast<double>(n * n)));
    for (double& v : p) v /= norm;
    for (double eta : {0.08, 0.5, 0.99}) {
        const auto q = oracle::binomial_map(p, eta);
        double total = 0.0;
        for (double v : q) total += v;
        CHECK(std::fabs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("binomial_loss carries metadata and composes transmissions") {
    const auto base = eyesim::photon_distribution(1, GainParams(0.5), LossChannel(0.5), 128);
    const auto after = oracle::binomial_loss(base, 0.16);
    CHECK(after.eta == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(after.seed == 1);
    CHECK(after.g == 0.5);
    CHECK(std::fabs(eyesim::kahan_sum(after.probs) + after.tail_bound - 1.0) < 1e-9);
}

TEST_CASE("superposition_detection reduces to the pure states at the poles") {
    const GainParams gain(0.75);
    const ThresholdDetector det{};
    const int n_trunc = oracle::truncation_for(gain, 1e-13);
    const auto st = eyesim::joint_stats(gain, det, 1.0, 1e-12);

    const auto pure = oracle::superposition_detection(0.0, gain, det, n_trunc);
    CHECK(std::fabs(pure.p_yn - st.p_yn) < 1e-9);
    CHECK(std::fabs(pure.p_ny - st.p_ny) < 1e-9);
    CHECK(std::fabs(pure.p_yy - st.p_yy) < 1e-9);
    CHECK(std::fabs(pure.p_nn - st.p_nn) < 1e-9);

    const auto mirror = oracle::superposition_detection(kPi / 2.0, gain, det, n_trunc);
    CHECK(std::fabs(mirror.p_yn - st.p_ny) < 1e-9);
    CHECK(std::fabs(mirror.p_ny - st.p_yn) < 1e-9);
    CHECK(std::fabs(mirror.p_yy - st.p_yy) < 1e-9);
    CHECK(std::fabs(mirror.p_nn - st.p_nn) < 1e-9);
}

TEST_CASE("superposition_detection: any mixing angle gives the classical mixture") {
    // parity disjointness kills the interference terms for number-diagonal
    // detectors; this is the testable core of the equal-visibility claim
    const GainParams gain(0.75);
    const ThresholdDetector det{};
    const int n_trunc = oracle::truncation_for(gain, 1e-13);
    const auto st = eyesim::joint_stats(gain, det, 1.0, 1e-12);

    for (double angle : {kPi / 4.0, 0.3, 1.1}) {
        const auto mixed = oracle::superposition_detection(angle, gain, det, n_trunc);
        const double w = std::cos(angle) * std::cos(angle);
        CHECK(std::fabs(mixed.p_yn - (w * st.p_yn + (1.0 - w) * st.p_ny)) < 1e-9);
        CHECK(std::fabs(mixed.p_ny - (w * st.p_ny + (1.0 - w) * st.p_yn)) < 1e-9);
        CHECK(std::fabs(mixed.p_yy - st.p_yy) < 1e-9);
        CHECK(std::fabs(mixed.p_nn - st.p_nn) < 1e-9);
    }
}

TEST_CASE("superposition_detection rejects gains beyond the two-mode domain") {
    CHECK_THROWS_AS(oracle::superposition_detection(0.0, GainParams(2.0), ThresholdDetector{}, 64),
                    std::invalid_argument);
}

TEST_CASE("phase covariance: identity evolution at g = 0") {
    CHECK(oracle::phase_covariance_check(GainParams(0.0), 0.7, 16) < 1e-12);
}

TEST_CASE("default truncation follows the mean-photon heuristic") {
    CHECK(oracle::default_truncation(GainParams(0.0)) == 64);
    CHECK(oracle::default_truncation(GainParams(0.3)) == 64);
    const double s2 = GainParams(2.0).sinh2();
    CHECK(oracle::default_truncation(GainParams(2.0)) ==
          static_cast<int>(std::ceil(12.0 * (3.0 * s2 + 1.0))));
}

TEST_CASE("phase covariance at g = 0.3 across equatorial bases") {
    const GainParams gain(0.3);
    const int n_trunc = oracle::default_truncation(gain);
    CHECK(oracle::phase_covariance_check(gain, 0.0, n_trunc) < 1e-6);
    CHECK(oracle::phase_covariance_check(gain, 1.1, n_trunc) < 1e-6);

    const auto d0 = oracle::equatorial_joint_distribution(gain, 0.0, n_trunc);
    const auto d1 = oracle::equatorial_joint_distribution(gain, 1.1, n_trunc);
    double dev = 0.0;
    for (std::size_t i = 0; i < d0.size(); ++i) dev = std::max(dev, std::fabs(d0[i] - d1[i]));
    CHECK(dev < 1e-6);
}

TEST_CASE("phase covariance path rejects large gains") {
    CHECK_THROWS_AS(oracle::phase_covariance_check(GainParams(0.5), 0.0, 32), std::invalid_argument);
}

TEST_CASE("witness_oracle: bare singlet saturates the qubit bound") {
    const auto r = oracle::witness_oracle(GainParams(0.0), LossChannel(1.0), 64);
    CHECK(r.jz_sz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.jx_sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.jy_sy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.n_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.margin == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("witness_oracle equatorial component matches eta (2 sinh^2 g + 1)") {
    const GainParams gain(1.0);
    const int n_trunc = oracle::truncation_for(gain, 1e-13);
    const auto r = oracle::witness_oracle(gain, LossChannel(0.08), n_trunc);
    const double expected = 0.08 * (2.0 * gain.sinh2() + 1.0);
    CHECK(r.jx_sx == doctest::Approx(expected).epsilon(1e-8));
    CHECK(r.jx_sx == doctest::Approx(0.30098).epsilon(1e-4));
    CHECK(std::fabs(r.jx_sx - r.jy_sy) < 1e-12); // x-y symmetry
}

TEST_CASE("witness_oracle margin at g = 1.25, eta = 1/2") {
    const GainParams gain(1.25);
    const int n_trunc = oracle::truncation_for(gain, 1e-13);
    const auto r = oracle::witness_oracle(gain, LossChannel(0.5), n_trunc);
    CHECK(std::fabs(r.margin - 1.0) < 1e-8);
}

TEST_CASE("witness_oracle agrees with the closed form") {
    for (double g : {0.5, 1.0, 1.25}) {
        const GainParams gain(g);
        const int n_trunc = oracle::truncation_for(gain, 1e-13);
        for (double eta : {0.08, 0.5, 1.0}) {
            const auto brute = oracle::witness_oracle(gain, LossChannel(eta), n_trunc);
            const auto closed = eyesim::witness_closed_form(gain, LossChannel(eta));
            CHECK(std::fabs(brute.jz_sz - closed.jz_sz) < 1e-8);
            CHECK(std::fabs(brute.jx_sx - closed.jx_sx) < 1e-8);
            CHECK(std::fabs(brute.jy_sy - closed.jy_sy) < 1e-8);
            CHECK(std::fabs(brute.n_a - closed.n_a) < 1e-8);
            CHECK(std::fabs(brute.margin - closed.margin) < 1e-8);
        }
    }
}

TEST_CASE("witness_oracle enforces its truncation precondition") {
    CHECK_THROWS_AS(oracle::witness_oracle(GainParams(1.25), LossChannel(0.5), 80),
                    eyesim::numeric_error);
    CHECK_THROWS_AS(oracle::witness_oracle(GainParams(2.0), LossChannel(0.5), 600),
                    std::invalid_argument);
}

TEST_CASE("generating-function distributions equal the oracle on the full grid") {
    for (double g : {0.25, 0.5, 1.0}) {
        const GainParams gain(g);
        const int n_trunc = oracle::truncation_for(gain, 1e-13);
        for (double eta : {0.08, 0.5, 1.0}) {
            for (int seed : {0, 1}) {
                const auto direct = eyesim::photon_distribution(seed, gain, LossChannel(eta), 100);
                const auto state = oracle::squeezed_number_state(gain, seed, n_trunc);
                std::vector<double> pn(state.amps.size());
                for (std::size_t n = 0; n < pn.size(); ++n) pn[n] = state.amps[n] * state.amps[n];
                const auto lossy = oracle::binomial_map(pn, eta);
                for (int m = 0; m <= 100; ++m) {
                    const auto i = static_cast<std::size_t>(m);
                    const double reference = i < lossy.size() ? lossy[i] : 0.0;
                    CHECK(std::fabs(direct.prob(i) - reference) < 1e-10);
                }
            }
        }
    }
}
