#include "eyesim/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eyesim {

namespace {

bool is_integer(double x) { return x == std::floor(x); }

void require_finite(std::span<const double> xs, const char* what) {
    for (double v : xs)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
}

} // namespace

TruncatedPowerSeries::TruncatedPowerSeries(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("TruncatedPowerSeries: needs at least the z^0 coefficient");
    require_finite(coeffs, "TruncatedPowerSeries");
}

TruncatedPowerSeries TruncatedPowerSeries::zeros(std::size_t order) {
    return TruncatedPowerSeries(std::vector<double>(order + 1, 0.0));
}

double kahan_sum(std::span<const double> xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

TruncatedPowerSeries poly_power(std::span<const double> p, double alpha, std::size_t order) {
    if (p.empty()) throw std::invalid_argument("poly_power: empty polynomial");
    require_finite(p, "poly_power");
    if (!std::isfinite(alpha)) throw std::invalid_argument("poly_power: non-finite exponent");
    if (p[0] == 0.0) throw std::invalid_argument("poly_power: p(0) = 0, no series expansion at the origin");
    if (p[0] < 0.0 && !is_integer(alpha))
        throw std::invalid_argument("poly_power: negative constant term with non-integer exponent");

    auto f = TruncatedPowerSeries::zeros(order);
    if (alpha == 0.0) {
        f.coeffs[0] = 1.0;
        return f;
    }
    if (alpha == 1.0) {
        // p itself, padded; bypassing the recurrence keeps this bit-exact
        const std::size_t n = std::min(order + 1, p.size());
        std::copy_n(p.begin(), n, f.coeffs.begin());
        return f;
    }

    const std::size_t d = p.size() - 1;
    f.coeffs[0] = std::pow(p[0], alpha);
    for (std::size_t n = 1; n <= order; ++n) {
        double acc = 0.0;
        const std::size_t kmax = std::min(n, d);
        for (std::size_t k = 1; k <= kmax; ++k)
            acc += ((alpha + 1.0) * static_cast<double>(k) - static_cast<double>(n)) * p[k] * f.coeffs[n - k];
        f.coeffs[n] = acc / (static_cast<double>(n) * p[0]);
        if (!std::isfinite(f.coeffs[n]))
            throw std::invalid_argument("poly_power: coefficient overflow");
    }
    return f;
}

TruncatedPowerSeries mul_by_linear(const TruncatedPowerSeries& s, double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("mul_by_linear: non-finite factor");
    auto out = TruncatedPowerSeries::zeros(s.order());
    out.coeffs[0] = a * s.coeffs[0];
    for (std::size_t m = 1; m <= s.order(); ++m)
        out.coeffs[m] = a * s.coeffs[m] + b * s.coeffs[m - 1];
    return out;
}

TruncatedPowerSeries mul_truncated(const TruncatedPowerSeries& s, const TruncatedPowerSeries& t) {
    const std::size_t order = std::min(s.order(), t.order());
    auto out = TruncatedPowerSeries::zeros(order);
    for (std::size_t m = 0; m <= order; ++m) {
        double acc = 0.0, carry = 0.0;
        for (std::size_t k = 0; k <= m; ++k) {
            const double y = s.coeffs[k] * t.coeffs[m - k] - carry;
            const double u = acc + y;
            carry = (u - acc) - y;
            acc = u;
        }
        out.coeffs[m] = acc;
    }
    return out;
}

} // namespace eyesim
