#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eyesim {

/// Formal power series in z truncated at a fixed order.
///
/// coeffs[m] is the coefficient of z^m; all entries are finite and
/// order() == coeffs.size() - 1. Photon-number probabilities are read off
/// these coefficients, so the arithmetic below is kept plain and
/// deterministic.
struct TruncatedPowerSeries {
    std::vector<double> coeffs;

    explicit TruncatedPowerSeries(std::vector<double> c);
    static TruncatedPowerSeries zeros(std::size_t order);

    std::size_t order() const { return coeffs.size() - 1; }
    double operator[](std::size_t m) const { return coeffs[m]; }
};

/// Compensated (Kahan) sum. The error stays O(eps) independent of length,
/// which matters for distribution sums with tens of thousands of terms.
double kahan_sum(std::span<const double> xs);

/// First `order`+1 Taylor coefficients of p(z)^alpha about z = 0.
///
/// Uses the linear recurrence obtained from f' p = alpha p' f for f = p^alpha:
///
///   n p[0] f[n] = sum_{k=1..min(n,d)} ((alpha+1) k - n) p[k] f[n-k],
///   f[0] = p[0]^alpha.
///
/// Cost is O(order * deg p). For the degree-2 polynomials used by the
/// photon statistics with p[1], p[2] <= 0 and alpha < 0, every term in the
/// sum is nonnegative, so the recurrence runs without cancellation.
///
/// Throws std::invalid_argument if p is empty, p[0] == 0 (the power has no
/// Taylor expansion at the origin), or p[0] < 0 with non-integer alpha
/// (complex branch).
TruncatedPowerSeries poly_power(std::span<const double> p, double alpha, std::size_t order);

/// Series of (a + b z) * s(z), truncated at the order of s:
/// coefficient m is a*s[m] + b*s[m-1].
TruncatedPowerSeries mul_by_linear(const TruncatedPowerSeries& s, double a, double b);

/// Truncated Cauchy product; the result order is the smaller input order.
TruncatedPowerSeries mul_truncated(const TruncatedPowerSeries& s, const TruncatedPowerSeries& t);

} // namespace eyesim
