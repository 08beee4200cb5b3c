#pragma once

#include <span>
#include <vector>

#include "eyesim/amplifier.hpp"
#include "eyesim/eye.hpp"
#include "eyesim/witness.hpp"

namespace eyesim::oracle {

/// Brute-force truncated Fock-space reference path. Everything in this
/// namespace is slow, explicit and trusted; it backs the `verify` command
/// and the test suites, never the production statistics.

/// Truncated single-mode Fock expansion. The squeezed number states built
/// here have real amplitudes, so amps is real; amps[n] multiplies |n>.
struct FockVector {
    std::vector<double> amps;
    double truncation_loss = 0.0; ///< 1 - norm^2 at the declared truncation

    int n_trunc() const { return static_cast<int>(amps.size()) - 1; }
    double norm2() const;
};

/// Default Fock truncation for gain g: max(64, ceil(12 (3 sinh^2 g + 1))).
int default_truncation(GainParams gain);

/// Smallest truncation (at least the default floor of 64) at which both
/// seed states carry all but mass_tol of their mass. Use this instead of
/// default_truncation when an operation needs a specific certified mass.
int truncation_for(GainParams gain, double mass_tol);

/// Amplifier output for seed |n0> with n0 in {0, 1}, from the closed-form
/// amplitudes of the normal-ordered squeeze operator:
///   n0 = 0: c_{2n}   = tanh^n g sqrt((2n)!)  / (2^n n!) / cosh^(1/2) g
///   n0 = 1: c_{2n+1} = tanh^n g sqrt((2n+1)!)/ (2^n n!) / cosh^(3/2) g
/// Throws numeric_error if the truncation loss exceeds 1e-9.
FockVector squeezed_number_state(GainParams gain, int n0, int n_trunc);

/// Binomial loss kernel on a number distribution:
///   P_out(m) = sum_{n>=m} P_in(n) C(n,m) eta^m (1-eta)^(n-m),
/// binomials evaluated in log space. eta == 1 is the identity.
std::vector<double> binomial_map(std::span<const double> p_in, double eta);

/// Same kernel, carrying distribution metadata through (the recorded
/// transmission composes multiplicatively).
PhotonNumberDistribution binomial_loss(const PhotonNumberDistribution& dist, double eta);

struct JointClickStats {
    double p_yn = 0.0, p_ny = 0.0, p_yy = 0.0, p_nn = 0.0;
};

/// Threshold statistics of the amplified superposition
/// cos(mix_angle) |A1>|A0> + sin(mix_angle) |A0>|A1>, built explicitly as a
/// two-mode state with the detector's loss applied per mode. Because the
/// two branches have disjoint photon-number parity, the result must equal
/// the cos^2/sin^2 classical mixture of the two pure-state statistics; this
/// operation exists to check exactly that. Gain is limited to g <= 1.5.
JointClickStats superposition_detection(double mix_angle, GainParams gain,
                                        const ThresholdDetector& detector, int n_trunc);

/// Photon-number distribution over (n, n_perp) in the equatorial basis at
/// angle phi, for a single photon seeded at that angle and evolved with the
/// explicit two-mode down-conversion Hamiltonian in the H/V Fock basis
/// (scaled Taylor applications of the matrix exponential). Row-major
/// (n_trunc+1) x (n_trunc+1). Requires g <= 0.4.
std::vector<double> equatorial_joint_distribution(GainParams gain, double phi, int n_trunc);

/// Max absolute deviation of equatorial_joint_distribution from the product
/// prediction P_{A1}(n) P_{A0}(n_perp); phase covariance says this is zero
/// for every phi.
double phase_covariance_check(GainParams gain, double phi, int n_trunc);

/// Witness correlators from the explicit (two macro modes) x (one qubit)
/// singlet state, with loss folded in afterwards (the lossy channel scales
/// every mode-number expectation by exactly eta). Requires truncation mass
/// below 1e-12 at the given n_trunc and g <= 1.5.
WitnessReport witness_oracle(GainParams gain, LossChannel loss, int n_trunc);

} // namespace eyesim::oracle
