#pragma once

#include <optional>
#include <span>

#include "eyesim/amplifier.hpp"

namespace eyesim {

/// An eye as a photon detector: an ideal threshold detector that clicks iff
/// at least theta photons arrive, preceded by a loss channel of transmission
/// eta_eye. Defaults reproduce the scotopic response fit (theta = 7,
/// eta_eye = 0.08).
struct ThresholdDetector {
    int theta = 7;
    double eta_eye = 0.08;

    ThresholdDetector() = default;
    ThresholdDetector(int threshold, double transmission);
};

/// Joint two-eye outcome statistics for the amplified |1,0> input, one eye
/// per polarization mode. The orthogonal input |0,1> gives the mirror image
/// (p_yn and p_ny exchanged, p_yy and p_nn unchanged), so only this form is
/// exposed; the conclusive probability epsilon is the same for both.
struct DetectionStats {
    double p_yn = 0.0; ///< click in the seeded mode, none in the other
    double p_ny = 0.0; ///< click in the wrong mode only
    double p_yy = 0.0;
    double p_nn = 0.0;
    double epsilon = 0.0; ///< p_yn + p_ny, probability of a conclusive event

    /// (p_yn - p_ny) / epsilon. Unset when epsilon < 1e-15: 0/0 is "no
    /// data", and downstream Bell analysis must not read it as "no
    /// correlation".
    std::optional<double> visibility;

    double mean_n = 0.0; ///< <N_a> = 4 sinh^2 g + 1, both modes, before loss
};

/// Click probability of a threshold detector on a photon-number
/// distribution that already includes all losses: 1 - sum_{m<theta} P(m),
/// clamped to [0, 1]. The head sum is compensated. Throws
/// std::invalid_argument when the distribution is shorter than theta
/// entries.
double prob_yes(const PhotonNumberDistribution& dist, int theta);

/// Full two-eye statistics at gain g. Extra transmission (losses after the
/// amplifier beyond the eye itself) folds into a single effective
/// transmission eta_eye * extra_transmission in front of the threshold.
/// Truncation is chosen by choose_m_max at tail_tol.
DetectionStats joint_stats(GainParams gain, const ThresholdDetector& detector,
                           double extra_transmission, double tail_tol);

/// Product of transmissions; beamsplitters compose multiplicatively.
/// Rejects values outside (0, 1].
double compose_transmission(std::span<const double> etas);

} // namespace eyesim
