#pragma once

#include <span>
#include <vector>

namespace lnrg
{

/// Truncated power series a_0 + a_1 x + ... + a_K x^K in one variable.
///
/// Binary operations on series of different orders truncate to the smaller
/// order. Transcendental operations (ln, pow, exp) are evaluated through the
/// differentiate-and-convolve recurrences, so no series inversion is needed.
class TruncatedSeries
{
public:
    /// The zero series of order 0.
    TruncatedSeries();

    /// Series with the given coefficients; order = coeffs.size() - 1.
    explicit TruncatedSeries(std::vector<double> coeffs);

    static TruncatedSeries constant(double c, int order);
    /// The series x, i.e. coefficients (0, 1, 0, ...).
    static TruncatedSeries variable(int order);

    int order() const noexcept { return static_cast<int>(m_coeffs.size()) - 1; }

    double operator[](int k) const { return m_coeffs[static_cast<std::size_t>(k)]; }
    double &operator[](int k) { return m_coeffs[static_cast<std::size_t>(k)]; }

    std::span<const double> coeffs() const noexcept { return m_coeffs; }

    TruncatedSeries truncated(int order) const;

    /// Horner evaluation of the truncated polynomial.
    double evaluate(double x) const;

    /// Formal derivative; the result has order K - 1 (order 0 for K = 0).
    TruncatedSeries derivative() const;

    /// Formal antiderivative with zero constant term, kept at order K.
    TruncatedSeries integral() const;

    TruncatedSeries &operator+=(const TruncatedSeries &b);
    TruncatedSeries &operator-=(const TruncatedSeries &b);
    TruncatedSeries &operator*=(double s);

private:
    std::vector<double> m_coeffs;
};

TruncatedSeries series_add(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries series_add(const TruncatedSeries &a, double b);
TruncatedSeries series_mul(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries series_scale(const TruncatedSeries &a, double s);

/// ln(a); requires a_0 > 0.
TruncatedSeries series_ln(const TruncatedSeries &a);

/// a^alpha; requires a_0 > 0.
TruncatedSeries series_pow(const TruncatedSeries &a, double alpha);

/// exp(a), the inverse of series_ln.
TruncatedSeries series_exp(const TruncatedSeries &a);

TruncatedSeries operator+(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries operator-(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b);
TruncatedSeries operator*(double s, const TruncatedSeries &a);
TruncatedSeries operator*(const TruncatedSeries &a, double s);

} // namespace lnrg
