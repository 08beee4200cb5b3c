#pragma once

#include <optional>
#include <vector>

#include "eyesim/eye.hpp"

namespace eyesim {

/// Parameter sweep over amplification gain, reported against the mean
/// photon number after amplification N = 4 sinh^2 g + 1 (both polarization
/// modes, before loss). The default grid is geometric in N from 2 to 2e4
/// with 200 points; an explicit gain list overrides it.
struct SweepConfig {
    std::vector<double> explicit_g; ///< when non-empty, used instead of the grid
    double n_min = 2.0;
    double n_max = 2e4;
    int n_count = 200;
    ThresholdDetector detector{};
    std::vector<double> extra_transmissions{1.0};
    double tail_tol = 1e-12;
};

struct SweepRow {
    double g = 0.0;
    double n_mean = 0.0;
    double epsilon = 0.0;
    std::optional<double> visibility;
    double p_yn = 0.0, p_ny = 0.0, p_yy = 0.0, p_nn = 0.0;
    double eta_total = 0.0;
};

/// Location of the efficiency maximum for one transmission, refined by
/// golden-section search between the grid neighbours of the best point.
struct SweepSummary {
    double eta_total = 0.0;
    double epsilon_max = 0.0;
    double n_mean_at_max = 0.0;
    double g_at_max = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows; ///< grid order, one block per transmission
    std::vector<SweepSummary> summaries;
};

/// Gain at which the amplified mean photon number equals n_mean >= 1.
double gain_for_mean(double n_mean);

SweepResult run_sweep(const SweepConfig& config);

} // namespace eyesim
