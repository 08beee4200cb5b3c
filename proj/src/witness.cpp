#include "eyesim/witness.hpp"

#include <cmath>

namespace eyesim {

WitnessReport witness_closed_form(GainParams gain, LossChannel loss) {
    const double s2 = gain.sinh2();
    const double eta = loss.eta;

    WitnessReport r;
    r.jz_sz = eta;
    r.jx_sx = eta * (2.0 * s2 + 1.0);
    r.jy_sy = r.jx_sx;
    r.n_a = eta * (4.0 * s2 + 1.0);
    r.lhs = std::fabs(r.jz_sz + r.jx_sx + r.jy_sy);
    r.rhs = r.n_a;
    r.margin = r.lhs - r.rhs;
    return r;
}

} // namespace eyesim
