#include "eyesim/bell.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace eyesim {

namespace {

constexpr double kSqrt8 = 2.8284271247461903;

double u01(std::mt19937_64& rng) {
    // top 53 bits -> [0, 1); avoids std::uniform_real_distribution, whose
    // output is not pinned down by the standard
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

double correlation(double delta, double visibility) {
    if (!(std::isfinite(visibility) && std::fabs(visibility) <= 1.0))
        throw std::invalid_argument("correlation: |visibility| must be <= 1");
    return -visibility * std::cos(delta);
}

double chsh_value(double visibility) {
    if (!(std::isfinite(visibility) && std::fabs(visibility) <= 1.0))
        throw std::invalid_argument("chsh_value: |visibility| must be <= 1");
    return kSqrt8 * visibility;
}

BellOutcome sample_trial(long trial_id, const DetectionStats& stats, double basis_a,
                         double basis_b, std::mt19937_64& rng) {
    BellOutcome out;
    out.trial_id = trial_id;
    out.basis_a = basis_a;
    out.basis_b = basis_b;
    out.result_b = (rng() >> 63) ? +1 : -1;

    // weight of the seeded branch in the heralded mixture
    const double cos_delta = std::cos(basis_a - basis_b);
    const double w = out.result_b > 0 ? 0.5 * (1.0 - cos_delta) : 0.5 * (1.0 + cos_delta);

    const double q_yn = w * stats.p_yn + (1.0 - w) * stats.p_ny;
    const double q_ny = w * stats.p_ny + (1.0 - w) * stats.p_yn;

    const double u = u01(rng);
    if (u < q_yn)
        out.result_a = EyeResult::plus;
    else if (u < q_yn + q_ny)
        out.result_a = EyeResult::minus;
    return out;
}

ChshEstimate simulate_trials(long n_trials, const DetectionStats& stats,
                             const BellSettings& settings, std::uint64_t rng_seed) {
    if (n_trials < 1) throw std::invalid_argument("simulate_trials: need at least one trial");

    std::mt19937_64 rng(rng_seed);

    std::array<long, 4> conclusive{};
    std::array<long, 4> agree{}; // conclusive trials with result_a == result_b

    for (long trial = 0; trial < n_trials; ++trial) {
        const auto pair = static_cast<unsigned>(rng() & 3u); // exact: 4 divides 2^64
        const auto outcome = sample_trial(trial, stats, settings.alice[pair >> 1],
                                          settings.bob[pair & 1], rng);
        if (outcome.result_a == EyeResult::inconclusive) continue;
        ++conclusive[pair];
        const int a = outcome.result_a == EyeResult::plus ? +1 : -1;
        if (a == outcome.result_b) ++agree[pair];
    }

    ChshEstimate est;
    est.n_trials = n_trials;
    est.seed = rng_seed;
    est.setting_conclusive = conclusive;

    double variance = 0.0;
    for (unsigned pair = 0; pair < 4; ++pair) {
        const long n = conclusive[pair];
        est.n_conclusive += n;
        const double e = n > 0 ? (2.0 * agree[pair] - n) / static_cast<double>(n) : 0.0;
        est.setting_correlators[pair] = e;
        if (n > 0) variance += (1.0 - e * e) / static_cast<double>(n);
    }
    est.s_value = est.setting_correlators[0] + est.setting_correlators[1] +
                  est.setting_correlators[2] - est.setting_correlators[3];
    est.std_error = std::sqrt(variance);
    est.conclusive_rate = static_cast<double>(est.n_conclusive) / static_cast<double>(n_trials);
    return est;
}

} // namespace eyesim
