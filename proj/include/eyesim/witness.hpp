#pragma once

#include "eyesim/amplifier.hpp"

namespace eyesim {

/// Micro-macro separability test: a state of one bare photon and one
/// amplified mode pair is separable only if |<J_a . sigma_b>| <= <N_a>.
/// A positive margin therefore certifies entanglement. (The general
/// two-mode criterion |<J_a . J_b>| <= <N_a N_b> specializes to this form
/// when side b carries a single photon; only the specialization is
/// computed here.)
///
/// Components are reported in the frame where the singlet correlators come
/// out positive. jx_sx and jy_sy are equal by construction: the dynamics
/// of every equatorial Stokes component is the same.
struct WitnessReport {
    double jz_sz = 0.0;
    double jx_sx = 0.0;
    double jy_sy = 0.0;
    double n_a = 0.0;   ///< <N_a> after loss
    double lhs = 0.0;   ///< |jz_sz + jx_sx + jy_sy|
    double rhs = 0.0;   ///< n_a
    double margin = 0.0; ///< lhs - rhs; equals 2 eta for every gain
};

/// Closed-form witness evaluation for the amplified singlet with loss eta
/// on the macro side: jz_sz = eta, jx_sx = jy_sy = eta (2 sinh^2 g + 1),
/// n_a = eta (4 sinh^2 g + 1). The margin 2 eta is independent of gain.
WitnessReport witness_closed_form(GainParams gain, LossChannel loss);

} // namespace eyesim
