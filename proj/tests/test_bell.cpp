#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eyesim/bell.hpp"
#include "eyesim/fock_oracle.hpp"
#include "eyesim/sweep.hpp"

using eyesim::BellSettings;
using eyesim::chsh_value;
using eyesim::correlation;
using eyesim::DetectionStats;
using eyesim::GainParams;
using eyesim::simulate_trials;
using eyesim::ThresholdDetector;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.7071067811865476;

DetectionStats ideal_singlet_stats() {
    DetectionStats st;
    st.p_yn = 1.0;
    st.p_ny = 0.0;
    st.p_yy = 0.0;
    st.p_nn = 0.0;
    st.epsilon = 1.0;
    st.visibility = 1.0;
    st.mean_n = 1.0;
    return st;
}
} // namespace

TEST_CASE("correlation: anticorrelated at zero relative angle, blind at pi/2") {
    CHECK(correlation(0.0, 1.0) == -1.0);
    CHECK(std::fabs(correlation(kPi / 2.0, 0.83)) < 1e-12);
    CHECK(correlation(kPi, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(correlation(0.0, 1.2), std::invalid_argument);
}

TEST_CASE("chsh_value: classical bound, Tsirelson, arithmetic") {
    CHECK(chsh_value(kInvSqrt2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chsh_value(1.0) == doctest::Approx(2.8284271247461903).epsilon(1e-15));
    CHECK(chsh_value(0.75) == doctest::Approx(2.1213203435596424).epsilon(1e-15));
    CHECK_THROWS_AS(chsh_value(-1.01), std::invalid_argument);
}

TEST_CASE("violation happens exactly above visibility 1/sqrt(2)") {
    for (double v = 0.0; v <= 1.0; v += 0.01) {
        if (v > kInvSqrt2)
            CHECK(chsh_value(v) > 2.0);
        else
            CHECK(chsh_value(v) <= 2.0 + 1e-12);
    }
}

TEST_CASE("simulate_trials rejects an empty experiment") {
    CHECK_THROWS_AS(simulate_trials(0, ideal_singlet_stats(), BellSettings{}, 1), std::invalid_argument);
}

TEST_CASE("simulate_trials is bit-reproducible for a fixed seed") {
    const auto st = eyesim::joint_stats(GainParams(1.8), ThresholdDetector{}, 1.0, 1e-12);
    const auto a = simulate_trials(200000, st, BellSettings{}, 987654321);
    const auto b = simulate_trials(200000, st, BellSettings{}, 987654321);
    CHECK(a.s_value == b.s_value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n_conclusive == b.n_conclusive);
    CHECK(a.setting_correlators == b.setting_correlators);
    CHECK(a.setting_conclusive == b.setting_conclusive);

    const auto c = simulate_trials(200000, st, BellSettings{}, 987654322);
    CHECK(c.s_value != a.s_value);
}

TEST_CASE("ideal singlet converges to the Tsirelson value") {
    const auto est = simulate_trials(1'000'000, ideal_singlet_stats(), BellSettings{}, 4242);
    CHECK(est.conclusive_rate == 1.0);
    CHECK(std::fabs(est.s_value - 2.8284271247461903) < 5.0 * est.std_error);
}

TEST_CASE("estimator matches 2 sqrt(2) V and the conclusive rate matches epsilon") {
    const auto st = eyesim::joint_stats(GainParams(eyesim::gain_for_mean(288.0)),
                                        ThresholdDetector{}, 1.0, 1e-12);
    REQUIRE(st.visibility.has_value());
    const auto est = simulate_trials(1'000'000, st, BellSettings{}, 1357);

    CHECK(std::fabs(est.s_value - chsh_value(*st.visibility)) < 5.0 * est.std_error);
    // binomial noise on the conclusive rate at 1e6 trials is ~5e-4
    const double rate_sigma = std::sqrt(st.epsilon * (1.0 - st.epsilon) / 1e6);
    CHECK(std::fabs(est.conclusive_rate - st.epsilon) < 5.0 * rate_sigma);
    CHECK(est.s_value > 2.0);
}

TEST_CASE("sample_trial is inconclusive with probability 1 - epsilon") {
    const auto st = eyesim::joint_stats(GainParams(2.0), ThresholdDetector{}, 1.0, 1e-12);
    std::mt19937_64 rng(5);
    const long n = 200000;
    long inconclusive = 0;
    for (long i = 0; i < n; ++i) {
        const auto outcome = eyesim::sample_trial(i, st, 0.3, 1.2, rng);
        if (outcome.result_a == eyesim::EyeResult::inconclusive) ++inconclusive;
        CHECK((outcome.result_b == 1 || outcome.result_b == -1));
    }
    const double rate = static_cast<double>(inconclusive) / static_cast<double>(n);
    const double sigma = std::sqrt(st.epsilon * (1.0 - st.epsilon) / static_cast<double>(n));
    CHECK(std::fabs(rate - (1.0 - st.epsilon)) < 5.0 * sigma);
}

TEST_CASE("conclusive-event correlator at zero relative angle matches the oracle mixture") {
    // heralding at relative angle 0 prepares the pure orthogonal (b = +)
    // or pure seeded (b = -) state; E(0) assembled from the two-mode oracle
    // must equal -V
    const GainParams gain(0.75);
    const ThresholdDetector det{};
    const int n_trunc = eyesim::oracle::truncation_for(gain, 1e-13);
    const auto st = eyesim::joint_stats(gain, det, 1.0, 1e-12);
    REQUIRE(st.visibility.has_value());

    const auto plus = eyesim::oracle::superposition_detection(kPi / 2.0, gain, det, n_trunc);
    const auto minus = eyesim::oracle::superposition_detection(0.0, gain, det, n_trunc);
    const double numer =
        0.5 * ((plus.p_yn - plus.p_ny) - (minus.p_yn - minus.p_ny));
    const double denom = 0.5 * (plus.p_yn + plus.p_ny + minus.p_yn + minus.p_ny);
    const double oracle_e = numer / denom;
    CHECK(std::fabs(oracle_e - correlation(0.0, *st.visibility)) < 1e-6);
}
