#include "eyesim/eye.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eyesim/series.hpp"

namespace eyesim {

ThresholdDetector::ThresholdDetector(int threshold, double transmission)
    : theta(threshold), eta_eye(transmission) {
    if (theta < 1) throw std::invalid_argument("ThresholdDetector: theta must be >= 1");
    if (!(std::isfinite(eta_eye) && eta_eye > 0.0 && eta_eye <= 1.0))
        throw std::invalid_argument("ThresholdDetector: eta_eye must lie in (0, 1]");
}

double prob_yes(const PhotonNumberDistribution& dist, int theta) {
    if (theta < 1) throw std::invalid_argument("prob_yes: theta must be >= 1");
    if (dist.max_m() < theta - 1)
        throw std::invalid_argument("prob_yes: distribution shorter than the threshold head sum");

    double head = 0.0, carry = 0.0;
    for (int m = 0; m < theta; ++m) {
        const double y = dist.prob(static_cast<std::size_t>(m)) - carry;
        const double t = head + y;
        carry = (t - head) - y;
        head = t;
    }
    return std::clamp(1.0 - head, 0.0, 1.0);
}

DetectionStats joint_stats(GainParams gain, const ThresholdDetector& detector,
                           double extra_transmission, double tail_tol) {
    if (!(std::isfinite(extra_transmission) && extra_transmission > 0.0 && extra_transmission <= 1.0))
        throw std::invalid_argument("joint_stats: extra_transmission must lie in (0, 1]");

    const LossChannel loss(detector.eta_eye * extra_transmission);
    const int m_max = std::max(choose_m_max(gain, loss, tail_tol), detector.theta - 1);
    const auto seeded = photon_distribution(1, gain, loss, m_max);
    const auto vacuum = photon_distribution(0, gain, loss, m_max);

    const double yes1 = prob_yes(seeded, detector.theta);
    const double yes0 = prob_yes(vacuum, detector.theta);
    const double no1 = 1.0 - yes1;
    const double no0 = 1.0 - yes0;

    DetectionStats st;
    st.p_yn = yes1 * no0;
    st.p_ny = no1 * yes0;
    st.p_yy = yes1 * yes0;
    st.p_nn = no1 * no0;
    st.epsilon = st.p_yn + st.p_ny;
    if (st.epsilon >= 1e-15) st.visibility = (st.p_yn - st.p_ny) / st.epsilon;
    st.mean_n = 4.0 * gain.sinh2() + 1.0;
    return st;
}

double compose_transmission(std::span<const double> etas) {
    if (etas.empty()) throw std::invalid_argument("compose_transmission: empty list");
    double product = 1.0;
    for (double e : etas) {
        if (!(std::isfinite(e) && e > 0.0 && e <= 1.0))
            throw std::invalid_argument("compose_transmission: transmission outside (0, 1]");
        product *= e;
    }
    return product;
}

} // namespace eyesim
