#include "eyesim/amplifier.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eyesim/errors.hpp"
#include "eyesim/series.hpp"

namespace eyesim {

GainParams::GainParams(double gain) : g(gain) {
    if (!(std::isfinite(g) && g >= 0.0))
        throw std::invalid_argument("GainParams: gain must be finite and >= 0");
}

double GainParams::sinh2() const {
    const double s = std::sinh(g);
    return s * s;
}

double GainParams::cosh2() const {
    const double c = std::cosh(g);
    return c * c;
}

LossChannel::LossChannel(double transmission) : eta(transmission) {
    if (!(std::isfinite(eta) && eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("LossChannel: transmission must lie in (0, 1]");
}

GeneratingBundle build_bundle(GainParams gain, LossChannel loss) {
    const double c2 = gain.cosh2();
    const double s2 = gain.sinh2();
    const double eta = loss.eta;
    GeneratingBundle b;
    b.y_poly = {c2 - s2 * (1.0 - eta) * (1.0 - eta), -2.0 * eta * (1.0 - eta) * s2, -eta * eta * s2};
    b.g = gain.g;
    b.eta = eta;
    return b;
}

namespace {

double weighted_index_sum(std::span<const double> probs) {
    // Kahan-compensated sum of m * P(m)
    double sum = 0.0, carry = 0.0;
    for (std::size_t m = 1; m < probs.size(); ++m) {
        const double y = static_cast<double>(m) * probs[m] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

PhotonNumberDistribution photon_distribution(int seed, GainParams gain, LossChannel loss, int m_max) {
    if (seed != 0 && seed != 1) throw std::invalid_argument("photon_distribution: seed must be 0 or 1");
    if (m_max < 0) throw std::invalid_argument("photon_distribution: m_max must be >= 0");

    const auto bundle = build_bundle(gain, loss);
    const auto order = static_cast<std::size_t>(m_max);
    TruncatedPowerSeries series = (seed == 0)
        ? poly_power(bundle.y_poly, -0.5, order)
        : mul_by_linear(poly_power(bundle.y_poly, -1.5, order), 1.0 - loss.eta, loss.eta);

    PhotonNumberDistribution out;
    out.probs = std::move(series.coeffs);
    out.tail_bound = std::max(0.0, 1.0 - kahan_sum(out.probs));
    out.tail_flagged = out.tail_bound > 1e-9;
    out.mean = weighted_index_sum(out.probs);
    out.g = gain.g;
    out.eta = loss.eta;
    out.seed = seed;
    return out;
}

double mean_photons(int seed, GainParams gain, LossChannel loss) {
    if (seed != 0 && seed != 1) throw std::invalid_argument("mean_photons: seed must be 0 or 1");
    const double s2 = gain.sinh2();
    return seed == 0 ? loss.eta * s2 : loss.eta * (3.0 * s2 + 1.0);
}

int choose_m_max(GainParams gain, LossChannel loss, double tail_tol, int hard_cap) {
    if (!(std::isfinite(tail_tol) && tail_tol > 0.0 && tail_tol < 1.0))
        throw std::invalid_argument("choose_m_max: tail_tol must lie in (0, 1)");
    if (hard_cap < 1) throw std::invalid_argument("choose_m_max: hard_cap must be >= 1");

    const double mean1 = mean_photons(1, gain, loss);
    int m = static_cast<int>(8.0 * (mean1 + 1.0) + 64.0);

    for (;;) {
        if (m > hard_cap)
            throw numeric_error("choose_m_max: truncation order " + std::to_string(m) +
                                " exceeds hard cap " + std::to_string(hard_cap));

        bool ok = true;
        for (int seed : {0, 1}) {
            const auto dist = photon_distribution(seed, gain, loss, m);
            double window = 0.0;
            for (int i = std::max(0, m - 31); i <= m; ++i)
                window = std::max(window, dist.probs[static_cast<std::size_t>(i)]);
            if (!(window < tail_tol / static_cast<double>(m))) {
                ok = false;
                break;
            }
            const double tol_eff = std::max(tail_tol, 8.0 * DBL_EPSILON * static_cast<double>(m));
            if (!(kahan_sum(dist.probs) > 1.0 - tol_eff)) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
        m *= 2;
    }
}

} // namespace eyesim
