#include "lnrg/grid.hpp"

#include "lnrg/error.hpp"

#include <algorithm>
#include <cmath>

namespace lnrg
{

UniformGrid::UniformGrid(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_)
{
    if (n < 2 || !(hi > lo))
        throw DomainError("grid needs n >= 2 and hi > lo");
}

std::vector<double> UniformGrid::points() const
{
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = at(i);
    x.back() = hi;
    return x;
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values)
    : m_grid(grid), m_values(std::move(values))
{
    if (static_cast<int>(m_values.size()) != m_grid.n)
        throw DomainError("grid function size mismatch");
}

namespace
{

// first index of a window of w samples centred on x
int window_start(const UniformGrid &g, double x, int w)
{
    w = std::min(w, g.n);
    const double t = (x - g.lo) / g.step();
    int s = static_cast<int>(std::floor(t)) - (w / 2 - 1);
    return std::clamp(s, 0, g.n - w);
}

} // namespace

double GridFunction::interpolate(double x) const
{
    if (x < m_grid.lo - 1e-12 * (1 + std::abs(m_grid.lo)) || x > m_grid.hi + 1e-12 * (1 + std::abs(m_grid.hi)))
        throw DomainError("interpolation point outside grid");
    const int w = std::min(6, m_grid.n);
    const int s = window_start(m_grid, x, w);
    const double h = m_grid.step();
    const double t = (x - m_grid.lo) / h;
    double sum = 0.0;
    for (int i = 0; i < w; ++i) {
        double L = 1.0;
        for (int j = 0; j < w; ++j)
            if (j != i)
                L *= (t - (s + j)) / static_cast<double>(i - j);
        sum += L * m_values[static_cast<std::size_t>(s + i)];
    }
    return sum;
}

std::vector<double> GridFunction::local_taylor(double x, int K) const
{
    const int w = std::min(6, m_grid.n);
    K = std::min(K, w - 1);
    const int s = window_start(m_grid, x, w);
    const double h = m_grid.step();
    // nodes in units of h relative to x
    std::vector<double> t(static_cast<std::size_t>(w)), dd(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        t[static_cast<std::size_t>(i)] = (m_grid.at(s + i) - x) / h;
        dd[static_cast<std::size_t>(i)] = m_values[static_cast<std::size_t>(s + i)];
    }
    // Newton divided differences
    for (int k = 1; k < w; ++k)
        for (int i = w - 1; i >= k; --i)
            dd[static_cast<std::size_t>(i)] = (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) /
                                              (t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - k)]);
    // expand Newton form into monomials in t
    std::vector<double> poly(static_cast<std::size_t>(w), 0.0);
    for (int k = w - 1; k >= 0; --k) {
        // poly = poly * (t - t_k) + dd_k
        std::vector<double> next(static_cast<std::size_t>(w), 0.0);
        for (int j = 0; j < w; ++j) {
            if (j + 1 < w)
                next[static_cast<std::size_t>(j + 1)] += poly[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(j)] -= t[static_cast<std::size_t>(k)] * poly[static_cast<std::size_t>(j)];
        }
        next[0] += dd[static_cast<std::size_t>(k)];
        poly = std::move(next);
    }
    std::vector<double> c(static_cast<std::size_t>(K) + 1);
    double hp = 1.0;
    for (int k = 0; k <= K; ++k) {
        c[static_cast<std::size_t>(k)] = poly[static_cast<std::size_t>(k)] / hp;
        hp *= h;
    }
    return c;
}

std::vector<double> derivative4(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 5)
        throw DomainError("derivative4 needs at least 5 samples");
    std::vector<double> d(n);
    const double s = 1.0 / (12.0 * h);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * s;
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * s;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) * s;
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) * s;
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) * s;
    return d;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 4)
        throw DomainError("cumulative_integral needs at least 4 samples");
    std::vector<double> F(n, 0.0);
    const double s = h / 24.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double piece;
        if (i == 0)
            piece = 9 * f[0] + 19 * f[1] - 5 * f[2] + f[3];
        else if (i + 2 == n)
            piece = 9 * f[n - 1] + 19 * f[n - 2] - 5 * f[n - 3] + f[n - 4];
        else
            piece = -f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2];
        F[i + 1] = F[i] + piece * s;
    }
    return F;
}

} // namespace lnrg
