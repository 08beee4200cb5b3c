#include "eyesim/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "eyesim/errors.hpp"
#include "eyesim/series.hpp"

namespace eyesim::oracle {

namespace {

using cvec = std::vector<std::complex<double>>;

double kahan_push(double& sum, double& carry, double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    return sum;
}

/// P(click) of a threshold detector per Fock input: 1 - Binom cdf(theta-1; n, eta).
std::vector<double> click_given_n(int n_trunc, int theta, double eta) {
    std::vector<double> u(static_cast<std::size_t>(n_trunc) + 1, 0.0);
    if (eta == 1.0) {
        for (int n = 0; n <= n_trunc; ++n) u[static_cast<std::size_t>(n)] = n >= theta ? 1.0 : 0.0;
        return u;
    }
    const double log_eta = std::log(eta);
    const double log_keep = std::log1p(-eta);
    for (int n = 0; n <= n_trunc; ++n) {
        double head = 0.0, carry = 0.0;
        const double lg_n = std::lgamma(n + 1.0);
        for (int m = 0; m < theta && m <= n; ++m) {
            const double lw = lg_n - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0) +
                              m * log_eta + (n - m) * log_keep;
            kahan_push(head, carry, std::exp(lw));
        }
        u[static_cast<std::size_t>(n)] = std::clamp(1.0 - head, 0.0, 1.0);
    }
    return u;
}

} // namespace

double FockVector::norm2() const {
    double sum = 0.0, carry = 0.0;
    for (double a : amps) kahan_push(sum, carry, a * a);
    return sum;
}

int default_truncation(GainParams gain) {
    return std::max(64, static_cast<int>(std::ceil(12.0 * (3.0 * gain.sinh2() + 1.0))));
}

int truncation_for(GainParams gain, double mass_tol) {
    if (!(std::isfinite(mass_tol) && mass_tol > 0.0 && mass_tol < 1.0))
        throw std::invalid_argument("truncation_for: mass_tol must lie in (0, 1)");
    const double t = std::tanh(gain.g);
    const double t2 = t * t;
    const double c = std::cosh(gain.g);

    double p0 = 1.0 / c;               // P(|A0> has 0 photons)
    double p1 = 1.0 / (c * c * c);     // P(|A1> has 1 photon)
    double sum0 = 0.0, carry0 = 0.0, sum1 = 0.0, carry1 = 0.0;
    for (int k = 0; k < 2'000'000; ++k) {
        kahan_push(sum0, carry0, p0);
        kahan_push(sum1, carry1, p1);
        if (1.0 - sum0 < mass_tol && 1.0 - sum1 < mass_tol)
            return std::max(64, 2 * k + 1);
        const double n = 2.0 * k;
        p0 *= t2 * (n + 1.0) / (n + 2.0);
        p1 *= t2 * (n + 3.0) / (n + 2.0);
    }
    throw numeric_error("truncation_for: requested mass tolerance unreachable");
}

FockVector squeezed_number_state(GainParams gain, int n0, int n_trunc) {
    if (n0 != 0 && n0 != 1) throw std::invalid_argument("squeezed_number_state: seed must be 0 or 1");
    if (n_trunc < n0) throw std::invalid_argument("squeezed_number_state: n_trunc below the seed occupation");

    const double t = std::tanh(gain.g);
    const double c = std::cosh(gain.g);

    FockVector v;
    v.amps.assign(static_cast<std::size_t>(n_trunc) + 1, 0.0);
    if (n0 == 0) {
        double a = 1.0 / std::sqrt(c);
        for (int n = 0; n <= n_trunc; n += 2) {
            v.amps[static_cast<std::size_t>(n)] = a;
            a *= t * std::sqrt((n + 1.0) / (n + 2.0));
        }
    } else {
        double a = 1.0 / (c * std::sqrt(c));
        for (int n = 1; n <= n_trunc; n += 2) {
            v.amps[static_cast<std::size_t>(n)] = a;
            a *= t * std::sqrt((n + 2.0) / (n + 1.0));
        }
    }
    v.truncation_loss = std::max(0.0, 1.0 - v.norm2());
    if (v.truncation_loss > 1e-9)
        throw numeric_error("squeezed_number_state: truncation loss " +
                            std::to_string(v.truncation_loss) + " exceeds 1e-9 at n_trunc " +
                            std::to_string(n_trunc));
    return v;
}

std::vector<double> binomial_map(std::span<const double> p_in, double eta) {
    if (!(std::isfinite(eta) && eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("binomial_map: eta must lie in (0, 1]");
    if (p_in.empty()) throw std::invalid_argument("binomial_map: empty distribution");
    if (eta == 1.0) return std::vector<double>(p_in.begin(), p_in.end());

    const int n_max = static_cast<int>(p_in.size()) - 1;
    std::vector<double> lg(p_in.size() + 1);
    for (std::size_t i = 0; i < lg.size(); ++i) lg[i] = std::lgamma(static_cast<double>(i) + 1.0);
    const double log_eta = std::log(eta);
    const double log_keep = std::log1p(-eta);

    std::vector<double> out(p_in.size(), 0.0);
    for (int m = 0; m <= n_max; ++m) {
        double sum = 0.0, carry = 0.0;
        for (int n = m; n <= n_max; ++n) {
            const double lw = lg[static_cast<std::size_t>(n)] - lg[static_cast<std::size_t>(m)] -
                              lg[static_cast<std::size_t>(n - m)] + m * log_eta + (n - m) * log_keep;
            kahan_push(sum, carry, p_in[static_cast<std::size_t>(n)] * std::exp(lw));
        }
        out[static_cast<std::size_t>(m)] = sum;
    }
    return out;
}

PhotonNumberDistribution binomial_loss(const PhotonNumberDistribution& dist, double eta) {
    std::vector<double> clamped(dist.probs.size());
    for (std::size_t m = 0; m < clamped.size(); ++m) clamped[m] = dist.prob(m);

    PhotonNumberDistribution out;
    out.probs = binomial_map(clamped, eta);
    out.tail_bound = std::max(0.0, 1.0 - kahan_sum(out.probs));
    out.tail_flagged = out.tail_bound > 1e-9;
    double mean = 0.0, carry = 0.0;
    for (std::size_t m = 1; m < out.probs.size(); ++m)
        kahan_push(mean, carry, static_cast<double>(m) * out.probs[m]);
    out.mean = mean;
    out.g = dist.g;
    out.eta = dist.eta * eta;
    out.seed = dist.seed;
    return out;
}

JointClickStats superposition_detection(double mix_angle, GainParams gain,
                                        const ThresholdDetector& detector, int n_trunc) {
    if (gain.g > 1.5)
        throw std::invalid_argument("superposition_detection: two-mode oracle limited to g <= 1.5");
    const auto seeded = squeezed_number_state(gain, 1, n_trunc);
    const auto vacuum = squeezed_number_state(gain, 0, n_trunc);
    const auto u = click_given_n(n_trunc, detector.theta, detector.eta_eye);

    const double cs = std::cos(mix_angle);
    const double sn = std::sin(mix_angle);

    double yy = 0, cyy = 0, yn = 0, cyn = 0, ny = 0, cny = 0, nn = 0, cnn = 0;
    for (int n = 0; n <= n_trunc; ++n) {
        for (int np = 0; np <= n_trunc; ++np) {
            const auto i = static_cast<std::size_t>(n);
            const auto j = static_cast<std::size_t>(np);
            const double amp = cs * seeded.amps[i] * vacuum.amps[j] + sn * vacuum.amps[i] * seeded.amps[j];
            if (amp == 0.0) continue;
            const double p = amp * amp;
            const double ui = u[i], uj = u[j];
            kahan_push(yy, cyy, p * ui * uj);
            kahan_push(yn, cyn, p * ui * (1.0 - uj));
            kahan_push(ny, cny, p * (1.0 - ui) * uj);
            kahan_push(nn, cnn, p * (1.0 - ui) * (1.0 - uj));
        }
    }
    return JointClickStats{yn, ny, yy, nn};
}

// ---------------------------------------------------------------------------
// Two-mode H/V Fock machinery for the phase-covariance check

namespace {

// K = aH^dag aV^dag - aH aV; exp(g K) is the down-conversion propagator.
void apply_pdc_generator(int rows, const cvec& in, cvec& out) {
    const auto idx = [rows](int nh, int nv) { return static_cast<std::size_t>(nh) * rows + nv; };
    for (int nh = 0; nh < rows; ++nh) {
        for (int nv = 0; nv < rows; ++nv) {
            std::complex<double> acc = 0.0;
            if (nh >= 1 && nv >= 1)
                acc += std::sqrt(static_cast<double>(nh) * nv) * in[idx(nh - 1, nv - 1)];
            if (nh + 1 < rows && nv + 1 < rows)
                acc -= std::sqrt((nh + 1.0) * (nv + 1.0)) * in[idx(nh + 1, nv + 1)];
            out[idx(nh, nv)] = acc;
        }
    }
}

// Scaled Taylor evaluation of exp(g K) |psi>; each substep has ||h K|| <= 1
// so the series converges without intermediate growth.
void evolve_pdc(double g, int rows, cvec& psi) {
    if (g == 0.0) return;
    const double bound = 2.0 * rows;
    int substeps = 1;
    while (g * bound / substeps > 1.0) substeps *= 2;
    const double h = g / substeps;

    cvec term(psi.size()), scratch(psi.size());
    for (int s = 0; s < substeps; ++s) {
        term = psi;
        bool converged = false;
        for (int k = 1; k <= 96; ++k) {
            apply_pdc_generator(rows, term, scratch);
            const double scale = h / k;
            double tnorm = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                term[i] = scratch[i] * scale;
                psi[i] += term[i];
                tnorm += std::norm(term[i]);
            }
            if (tnorm < 1e-36) {
                converged = true;
                break;
            }
        }
        if (!converged) throw numeric_error("evolve_pdc: Taylor series failed to converge");
    }
}

// out = (ch aH + cv aV) |in>, the annihilator of one equatorial mode.
void apply_mixed_annihilator(int rows, std::complex<double> ch, std::complex<double> cv,
                             const cvec& in, cvec& out) {
    const auto idx = [rows](int nh, int nv) { return static_cast<std::size_t>(nh) * rows + nv; };
    for (int nh = 0; nh < rows; ++nh) {
        for (int nv = 0; nv < rows; ++nv) {
            std::complex<double> acc = 0.0;
            if (nh + 1 < rows) acc += ch * std::sqrt(nh + 1.0) * in[idx(nh + 1, nv)];
            if (nv + 1 < rows) acc += cv * std::sqrt(nv + 1.0) * in[idx(nh, nv + 1)];
            out[idx(nh, nv)] = acc;
        }
    }
}

} // namespace

std::vector<double> equatorial_joint_distribution(GainParams gain, double phi, int n_trunc) {
    if (gain.g > 0.4)
        throw std::invalid_argument("equatorial_joint_distribution: matrix exponential path limited to g <= 0.4");
    if (n_trunc < 1) throw std::invalid_argument("equatorial_joint_distribution: n_trunc must be >= 1");

    const int rows = n_trunc + 1;
    const auto idx = [rows](int nh, int nv) { return static_cast<std::size_t>(nh) * rows + nv; };
    const std::complex<double> i_unit(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // single photon in the equatorial mode at angle phi:
    // a_phi^dag |vac> = (e^{i phi} |1,0> + e^{-i phi} |0,1>)/sqrt(2)
    cvec psi(static_cast<std::size_t>(rows) * rows, 0.0);
    psi[idx(1, 0)] = std::exp(i_unit * phi) * inv_sqrt2;
    psi[idx(0, 1)] = std::exp(-i_unit * phi) * inv_sqrt2;

    evolve_pdc(gain.g, rows, psi);

    // truncation audit: the propagator is unitary on the truncated space, so
    // population of the last Fock level is the leak indicator
    double norm2 = 0.0, boundary = 0.0;
    for (int nh = 0; nh < rows; ++nh)
        for (int nv = 0; nv < rows; ++nv) {
            const double p = std::norm(psi[idx(nh, nv)]);
            norm2 += p;
            if (nh == rows - 1 || nv == rows - 1) boundary += p;
        }
    if (std::sqrt(boundary + std::fabs(1.0 - norm2)) > 1e-6)
        throw numeric_error("equatorial_joint_distribution: neglected amplitude exceeds 1e-6");

    // read out photon numbers in the phi basis by repeated normalized
    // annihilation; the vacuum component after n steps is the |n> amplitude
    const std::complex<double> ch_a = std::exp(-i_unit * phi) * inv_sqrt2;
    const std::complex<double> cv_a = std::exp(i_unit * phi) * inv_sqrt2;
    const std::complex<double> ch_p = -i_unit * std::exp(-i_unit * phi) * inv_sqrt2;
    const std::complex<double> cv_p = i_unit * std::exp(i_unit * phi) * inv_sqrt2;

    std::vector<double> dist(static_cast<std::size_t>(rows) * rows, 0.0);
    cvec perp = psi, work(psi.size()), scratch(psi.size());
    for (int np = 0; np < rows; ++np) {
        work = perp;
        for (int n = 0; n < rows; ++n) {
            dist[static_cast<std::size_t>(n) * rows + np] = std::norm(work[0]);
            apply_mixed_annihilator(rows, ch_a, cv_a, work, scratch);
            const double inv = 1.0 / std::sqrt(n + 1.0);
            for (std::size_t i = 0; i < work.size(); ++i) work[i] = scratch[i] * inv;
        }
        apply_mixed_annihilator(rows, ch_p, cv_p, perp, scratch);
        const double inv = 1.0 / std::sqrt(np + 1.0);
        for (std::size_t i = 0; i < perp.size(); ++i) perp[i] = scratch[i] * inv;
    }
    return dist;
}

double phase_covariance_check(GainParams gain, double phi, int n_trunc) {
    const auto dist = equatorial_joint_distribution(gain, phi, n_trunc);
    const auto seeded = squeezed_number_state(gain, 1, n_trunc);
    const auto vacuum = squeezed_number_state(gain, 0, n_trunc);

    const int rows = n_trunc + 1;
    double dev = 0.0;
    for (int n = 0; n < rows; ++n) {
        for (int np = 0; np < rows; ++np) {
            const double a1 = seeded.amps[static_cast<std::size_t>(n)];
            const double a0 = vacuum.amps[static_cast<std::size_t>(np)];
            const double predicted = a1 * a1 * a0 * a0;
            dev = std::max(dev, std::fabs(dist[static_cast<std::size_t>(n) * rows + np] - predicted));
        }
    }
    return dev;
}

// ---------------------------------------------------------------------------
// Witness correlators from the explicit singlet

namespace {

// A = a^dag a_perp on the two macro modes: (A psi)(n, np) = sqrt(n (np+1)) psi(n-1, np+1)
void apply_raise_lower(int rows, const std::vector<double>& in, std::vector<double>& out) {
    const auto idx = [rows](int n, int np) { return static_cast<std::size_t>(n) * rows + np; };
    for (int n = 0; n < rows; ++n)
        for (int np = 0; np < rows; ++np)
            out[idx(n, np)] = (n >= 1 && np + 1 < rows)
                                  ? std::sqrt(n * (np + 1.0)) * in[idx(n - 1, np + 1)]
                                  : 0.0;
}

// B = a_perp^dag a: (B psi)(n, np) = sqrt((n+1) np) psi(n+1, np-1)
void apply_lower_raise(int rows, const std::vector<double>& in, std::vector<double>& out) {
    const auto idx = [rows](int n, int np) { return static_cast<std::size_t>(n) * rows + np; };
    for (int n = 0; n < rows; ++n)
        for (int np = 0; np < rows; ++np)
            out[idx(n, np)] = (n + 1 < rows && np >= 1)
                                  ? std::sqrt((n + 1.0) * np) * in[idx(n + 1, np - 1)]
                                  : 0.0;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) kahan_push(sum, carry, x[i] * y[i]);
    return sum;
}

} // namespace

WitnessReport witness_oracle(GainParams gain, LossChannel loss, int n_trunc) {
    if (gain.g > 1.5)
        throw std::invalid_argument("witness_oracle: two-mode oracle limited to g <= 1.5");
    const auto seeded = squeezed_number_state(gain, 1, n_trunc);
    const auto vacuum = squeezed_number_state(gain, 0, n_trunc);
    if (seeded.truncation_loss > 1e-12 || vacuum.truncation_loss > 1e-12)
        throw numeric_error("witness_oracle: truncation mass above 1e-12, raise n_trunc");

    const int rows = n_trunc + 1;
    const auto idx = [rows](int n, int np) { return static_cast<std::size_t>(n) * rows + np; };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // |Psi-> = (|A1,A0>|beta1> - |A0,A1>|beta0>)/sqrt(2); psi0/psi1 are the
    // macro-mode amplitudes paired with the b photon in mode b / b_perp.
    std::vector<double> psi0(static_cast<std::size_t>(rows) * rows);
    std::vector<double> psi1(psi0.size());
    for (int n = 0; n < rows; ++n)
        for (int np = 0; np < rows; ++np) {
            const auto i = static_cast<std::size_t>(n);
            const auto j = static_cast<std::size_t>(np);
            psi1[idx(n, np)] = inv_sqrt2 * seeded.amps[i] * vacuum.amps[j];
            psi0[idx(n, np)] = -inv_sqrt2 * vacuum.amps[i] * seeded.amps[j];
        }

    // diagonal pieces: Jx = n - n_perp, N_a = n + n_perp
    double jx = 0, cjx = 0, na = 0, cna = 0;
    for (int n = 0; n < rows; ++n)
        for (int np = 0; np < rows; ++np) {
            const double w1 = psi1[idx(n, np)] * psi1[idx(n, np)];
            const double w0 = psi0[idx(n, np)] * psi0[idx(n, np)];
            kahan_push(jx, cjx, (n - np) * (w1 - w0));
            kahan_push(na, cna, (n + np) * (w1 + w0));
        }

    // off-diagonal pieces through A = a^dag a_perp and B = a_perp^dag a:
    //   Jz (x) sigma_z contributes 2 <psi0|(A - B)|psi1>
    //   Jy (x) sigma_y contributes -2 <psi0|(A + B)|psi1>
    // in the positive-correlator frame used by WitnessReport.
    std::vector<double> a_psi1(psi1.size()), b_psi1(psi1.size());
    apply_raise_lower(rows, psi1, a_psi1);
    apply_lower_raise(rows, psi1, b_psi1);
    const double pa = dot(psi0, a_psi1);
    const double pb = dot(psi0, b_psi1);

    const double eta = loss.eta;
    WitnessReport r;
    r.jz_sz = eta * 2.0 * (pa - pb);
    r.jx_sx = eta * jx;
    r.jy_sy = eta * -2.0 * (pa + pb);
    r.n_a = eta * na;
    r.lhs = std::fabs(r.jz_sz + r.jx_sx + r.jy_sy);
    r.rhs = r.n_a;
    r.margin = r.lhs - r.rhs;
    return r;
}

} // namespace eyesim::oracle
