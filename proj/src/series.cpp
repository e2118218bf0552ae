#include "lnrg/series.hpp"

#include "lnrg/error.hpp"

#include <algorithm>
#include <cmath>

namespace lnrg
{

TruncatedSeries::TruncatedSeries() : m_coeffs(1, 0.0) {}

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs) : m_coeffs(std::move(coeffs))
{
    if (m_coeffs.empty())
        m_coeffs.push_back(0.0);
}

TruncatedSeries TruncatedSeries::constant(double c, int order)
{
    std::vector<double> v(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
    v[0] = c;
    return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::variable(int order)
{
    std::vector<double> v(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
    if (order >= 1)
        v[1] = 1.0;
    return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::truncated(int order) const
{
    std::vector<double> v(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
    for (std::size_t k = 0; k < v.size() && k < m_coeffs.size(); ++k)
        v[k] = m_coeffs[k];
    return TruncatedSeries(std::move(v));
}

double TruncatedSeries::evaluate(double x) const
{
    double acc = 0.0;
    for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

TruncatedSeries TruncatedSeries::derivative() const
{
    if (m_coeffs.size() <= 1)
        return TruncatedSeries();
    std::vector<double> v(m_coeffs.size() - 1);
    for (std::size_t k = 1; k < m_coeffs.size(); ++k)
        v[k - 1] = static_cast<double>(k) * m_coeffs[k];
    return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::integral() const
{
    std::vector<double> v(m_coeffs.size(), 0.0);
    for (std::size_t k = 1; k < v.size(); ++k)
        v[k] = m_coeffs[k - 1] / static_cast<double>(k);
    return TruncatedSeries(std::move(v));
}

TruncatedSeries &TruncatedSeries::operator+=(const TruncatedSeries &b)
{
    *this = series_add(*this, b);
    return *this;
}

TruncatedSeries &TruncatedSeries::operator-=(const TruncatedSeries &b)
{
    *this = series_add(*this, series_scale(b, -1.0));
    return *this;
}

TruncatedSeries &TruncatedSeries::operator*=(double s)
{
    for (auto &c : m_coeffs)
        c *= s;
    return *this;
}

TruncatedSeries series_add(const TruncatedSeries &a, const TruncatedSeries &b)
{
    const int K = std::min(a.order(), b.order());
    std::vector<double> v(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        v[static_cast<std::size_t>(k)] = a[k] + b[k];
    return TruncatedSeries(std::move(v));
}

TruncatedSeries series_add(const TruncatedSeries &a, double b)
{
    TruncatedSeries r = a;
    r[0] += b;
    return r;
}

TruncatedSeries series_mul(const TruncatedSeries &a, const TruncatedSeries &b)
{
    const int K = std::min(a.order(), b.order());
    std::vector<double> v(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j)
            s += a[j] * b[k - j];
        v[static_cast<std::size_t>(k)] = s;
    }
    return TruncatedSeries(std::move(v));
}

TruncatedSeries series_scale(const TruncatedSeries &a, double s)
{
    TruncatedSeries r = a;
    r *= s;
    return r;
}

// (ln a)' a = a'  =>  k b_k a_0 = k a_k - sum_{j=1}^{k-1} j b_j a_{k-j}
TruncatedSeries series_ln(const TruncatedSeries &a)
{
    if (!(a[0] > 0.0))
        throw DomainError("series_ln: constant term must be positive");
    const int K = a.order();
    std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
    b[0] = std::log(a[0]);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j < k; ++j)
            s += j * b[static_cast<std::size_t>(j)] * a[k - j];
        b[static_cast<std::size_t>(k)] = (a[k] - s / k) / a[0];
    }
    return TruncatedSeries(std::move(b));
}

// (a^alpha)' a = alpha a' a^alpha  =>
// k a_0 b_k = sum_{j=1}^{k} (alpha j - (k - j)) a_j b_{k-j}
TruncatedSeries series_pow(const TruncatedSeries &a, double alpha)
{
    if (!(a[0] > 0.0))
        throw DomainError("series_pow: constant term must be positive");
    const int K = a.order();
    std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
    b[0] = std::pow(a[0], alpha);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j)
            s += (alpha * j - (k - j)) * a[j] * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = s / (k * a[0]);
    }
    return TruncatedSeries(std::move(b));
}

// b' = a' b  =>  k b_k = sum_{j=1}^{k} j a_j b_{k-j}
TruncatedSeries series_exp(const TruncatedSeries &a)
{
    const int K = a.order();
    std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
    b[0] = std::exp(a[0]);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j)
            s += j * a[j] * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = s / k;
    }
    return TruncatedSeries(std::move(b));
}

TruncatedSeries operator+(const TruncatedSeries &a, const TruncatedSeries &b) { return series_add(a, b); }
TruncatedSeries operator-(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return series_add(a, series_scale(b, -1.0));
}
TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b) { return series_mul(a, b); }
TruncatedSeries operator*(double s, const TruncatedSeries &a) { return series_scale(a, s); }
TruncatedSeries operator*(const TruncatedSeries &a, double s) { return series_scale(a, s); }

} // namespace lnrg
