#pragma once

#include <span>
#include <vector>

namespace lnrg
{

/// n equally spaced points lo = x_0 < ... < x_{n-1} = hi.
struct UniformGrid
{
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    UniformGrid() = default;
    UniformGrid(double lo_, double hi_, int n_);

    double step() const noexcept { return (hi - lo) / (n - 1); }
    double at(int i) const noexcept { return lo + i * step(); }
    std::vector<double> points() const;
};

/// Samples of a function on a UniformGrid.
class GridFunction
{
public:
    GridFunction() = default;
    GridFunction(UniformGrid grid, std::vector<double> values);

    const UniformGrid &grid() const noexcept { return m_grid; }
    const std::vector<double> &values() const noexcept { return m_values; }
    std::vector<double> &values() noexcept { return m_values; }
    int size() const noexcept { return m_grid.n; }
    double operator[](int i) const { return m_values[static_cast<std::size_t>(i)]; }

    /// Local 6-point Lagrange interpolation; x must lie in [lo, hi].
    double interpolate(double x) const;

    /// Taylor coefficients c_0..c_K (K <= 5) at x of the local degree-5
    /// interpolant through the 6 nearest samples.
    std::vector<double> local_taylor(double x, int K) const;

private:
    UniformGrid m_grid;
    std::vector<double> m_values;
};

/// First derivative with 5-point 4th-order stencils (one-sided near both
/// ends). Needs at least 5 samples.
std::vector<double> derivative4(std::span<const double> f, double h);

/// Running integral F_i = int_{x_0}^{x_i} f using a 4-point cubic rule on
/// each interval. Needs at least 4 samples.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

} // namespace lnrg
