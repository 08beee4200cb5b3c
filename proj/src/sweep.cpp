#include "eyesim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eyesim {

double gain_for_mean(double n_mean) {
    if (!(std::isfinite(n_mean) && n_mean >= 1.0))
        throw std::invalid_argument("gain_for_mean: mean photon number must be >= 1");
    return std::asinh(std::sqrt((n_mean - 1.0) / 4.0));
}

namespace {

std::vector<double> build_gain_grid(const SweepConfig& cfg) {
    if (!cfg.explicit_g.empty()) {
        for (double g : cfg.explicit_g)
            if (!(std::isfinite(g) && g >= 0.0))
                throw std::invalid_argument("run_sweep: explicit gain must be finite and >= 0");
        return cfg.explicit_g;
    }
    if (cfg.n_count < 1) throw std::invalid_argument("run_sweep: grid needs at least one point");
    if (!(cfg.n_min >= 1.0 && cfg.n_max >= cfg.n_min))
        throw std::invalid_argument("run_sweep: need 1 <= n_min <= n_max");

    std::vector<double> gs;
    gs.reserve(static_cast<std::size_t>(cfg.n_count));
    if (cfg.n_count == 1) {
        gs.push_back(gain_for_mean(cfg.n_min));
        return gs;
    }
    const double log_ratio = std::log(cfg.n_max / cfg.n_min);
    for (int i = 0; i < cfg.n_count; ++i) {
        const double n = cfg.n_min * std::exp(log_ratio * i / (cfg.n_count - 1));
        gs.push_back(gain_for_mean(n));
    }
    return gs;
}

SweepRow evaluate(double g, const SweepConfig& cfg, double extra) {
    const auto st = joint_stats(GainParams(g), cfg.detector, extra, cfg.tail_tol);
    SweepRow row;
    row.g = g;
    row.n_mean = st.mean_n;
    row.epsilon = st.epsilon;
    row.visibility = st.visibility;
    row.p_yn = st.p_yn;
    row.p_ny = st.p_ny;
    row.p_yy = st.p_yy;
    row.p_nn = st.p_nn;
    row.eta_total = cfg.detector.eta_eye * extra;
    return row;
}

// golden-section maximization of epsilon(g) on [lo, hi]
SweepSummary refine_peak(double lo, double hi, const SweepConfig& cfg, double extra) {
    constexpr double kInvPhi = 0.6180339887498949;
    const auto eps_at = [&](double g) { return evaluate(g, cfg, extra).epsilon; };

    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = eps_at(c), fd = eps_at(d);
    for (int it = 0; it < 80 && hi - lo > 1e-10 * (1.0 + hi); ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = eps_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = eps_at(d);
        }
    }
    const double g_best = 0.5 * (lo + hi);
    const auto row = evaluate(g_best, cfg, extra);
    return SweepSummary{row.eta_total, row.epsilon, row.n_mean, g_best};
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.extra_transmissions.empty())
        throw std::invalid_argument("run_sweep: need at least one transmission");
    for (double e : config.extra_transmissions)
        if (!(std::isfinite(e) && e > 0.0 && e <= 1.0))
            throw std::invalid_argument("run_sweep: extra transmission outside (0, 1]");

    const auto gains = build_gain_grid(config);

    SweepResult result;
    result.rows.reserve(gains.size() * config.extra_transmissions.size());
    for (double extra : config.extra_transmissions) {
        std::size_t best = 0;
        const std::size_t offset = result.rows.size();
        for (std::size_t i = 0; i < gains.size(); ++i) {
            result.rows.push_back(evaluate(gains[i], config, extra));
            if (result.rows.back().epsilon > result.rows[offset + best].epsilon) best = i;
        }

        const auto& best_row = result.rows[offset + best];
        if (best_row.epsilon <= 0.0 || gains.size() == 1) {
            result.summaries.push_back(
                SweepSummary{best_row.eta_total, best_row.epsilon, best_row.n_mean, best_row.g});
            continue;
        }
        // bracket between the sorted neighbours of the best grid point
        // (explicit gain lists may arrive in any order)
        double lo = best_row.g, hi = best_row.g;
        for (double g : gains) {
            if (g < best_row.g) lo = lo == best_row.g ? g : std::max(lo, g);
            if (g > best_row.g) hi = hi == best_row.g ? g : std::min(hi, g);
        }
        if (lo == hi) {
            result.summaries.push_back(
                SweepSummary{best_row.eta_total, best_row.epsilon, best_row.n_mean, best_row.g});
        } else {
            result.summaries.push_back(refine_peak(lo, hi, config, extra));
        }
    }
    return result;
}

} // namespace eyesim
