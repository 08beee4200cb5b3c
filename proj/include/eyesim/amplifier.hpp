#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace eyesim {

/// Dimensionless parametric amplification gain. The physical coupling and
/// interaction time enter only through their product, which is g.
struct GainParams {
    double g = 0.0;

    GainParams() = default;
    explicit GainParams(double gain);

    double sinh2() const;
    double cosh2() const;
};

/// Beamsplitter loss channel with transmission eta in (0, 1]. The empty
/// auxiliary mode never appears explicitly; on number distributions the
/// channel acts as the induced binomial map.
struct LossChannel {
    double eta = 1.0;

    LossChannel() = default;
    explicit LossChannel(double transmission);
};

/// Generating functions of the lossy photon statistics at gain g,
/// transmission eta.
///
/// Y(z) = cosh^2 g - sinh^2 g (1 - eta + eta z)^2 is stored as a degree-2
/// polynomial in z; Y(1) = 1 and Y(0) > 0 hold for every valid parameter
/// pair. X0, X and Z are carried as symbolic records only: Z cancels in all
/// diagonal expectation values used here and is never evaluated.
struct GeneratingBundle {
    std::array<double, 3> y_poly{1.0, 0.0, 0.0};
    double g = 0.0;
    double eta = 1.0;

    static constexpr std::string_view x0_def = "X0(z) = (1 - eta + eta z)^(-1)";
    static constexpr std::string_view x_def = "X(z) = X0 cosh^2 g - sinh^2 g / X0";
    static constexpr std::string_view z_def = "Z = (1/2) dX/dg";

    double y_at(double z) const { return y_poly[0] + z * (y_poly[1] + z * y_poly[2]); }
};

/// Photon-number probabilities P(0..m_max) with a certified bound on the
/// omitted tail mass.
///
/// `probs` holds the raw recurrence output so tests can detect genuine
/// instability; read through prob(), which clamps the sub-1e-14 negative
/// round-off that plain doubles may produce. seed records the amplifier
/// input: 0 = vacuum, 1 = single photon.
struct PhotonNumberDistribution {
    std::vector<double> probs;
    double tail_bound = 0.0;
    double mean = 0.0;
    bool tail_flagged = false; ///< tail_bound > 1e-9: mean misses real mass
    double g = 0.0;
    double eta = 1.0;
    int seed = 0;

    int max_m() const { return static_cast<int>(probs.size()) - 1; }

    double prob(std::size_t m) const {
        const double p = m < probs.size() ? probs[m] : 0.0;
        return p < 0.0 ? 0.0 : p;
    }
};

GeneratingBundle build_bundle(GainParams gain, LossChannel loss);

/// Lossy photon-number distribution of the amplified seed state.
///
/// seed 0 takes the coefficients of Y^(-1/2); seed 1 those of
/// (1 - eta + eta z) Y^(-3/2), which equals Y^(-1/2) X^(-1) because
/// X^(-1) = (1 - eta + eta z) Y^(-1). Throws std::invalid_argument for
/// m_max < 0 or seed outside {0, 1}.
PhotonNumberDistribution photon_distribution(int seed, GainParams gain, LossChannel loss, int m_max);

/// Mean photon number after loss, by closed form:
/// eta sinh^2 g (seed 0), eta (3 sinh^2 g + 1) (seed 1).
double mean_photons(int seed, GainParams gain, LossChannel loss);

/// Truncation order at which both seed distributions have certified tail
/// mass below tail_tol.
///
/// Starting from 8 (mean + 1) + 64 for the heavier seed, the order doubles
/// until the trailing 32 coefficients all fall below tail_tol / m_max and
/// the compensated sum exceeds 1 - tail_tol. The sum criterion saturates at
/// the double-precision floor ~8 eps m_max: the recurrence cannot certify
/// mass closer to 1 than its own accumulated round-off, and past that point
/// extending the series adds nothing. Throws numeric_error if the order
/// would exceed hard_cap.
int choose_m_max(GainParams gain, LossChannel loss, double tail_tol, int hard_cap = 2'000'000);

} // namespace eyesim
