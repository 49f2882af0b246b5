#include "degenelab/tridiagonal.hpp"

#include <cmath>

#include "degenelab/error.hpp"

namespace degenelab
{

bool TridiagonalSystem::is_m_matrix() const
{
    std::size_t const n = size();
    for (std::size_t i = 0; i < n; ++i)
    {
        double const lo = i > 0 ? lower[i] : 0.0;
        double const up = i + 1 < n ? upper[i] : 0.0;
        if (lo > 0 || up > 0 || !(diag[i] > std::abs(lo) + std::abs(up)))
        {
            return false;
        }
    }
    return true;
}

std::vector<double> TridiagonalSystem::apply(std::span<double const> x) const
{
    std::size_t const n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = diag[i] * x[i];
        if (i > 0)
        {
            s += lower[i] * x[i - 1];
        }
        if (i + 1 < n)
        {
            s += upper[i] * x[i + 1];
        }
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_tridiagonal(TridiagonalSystem const& sys)
{
    return solve_tridiagonal(sys, sys.rhs);
}

std::vector<double> solve_tridiagonal(TridiagonalSystem const& sys, std::span<double const> rhs)
{
    std::size_t const n = sys.size();
    if (rhs.size() != n || n == 0)
    {
        throw Error(ErrorKind::invalid_argument, "tridiagonal size mismatch");
    }
    std::vector<double> cp(n, 0.0);
    std::vector<double> x(n, 0.0);

    // Forward sweep
    double den = sys.diag[0];
    if (den == 0 || !std::isfinite(den))
    {
        throw Error(ErrorKind::invalid_argument, "zero pivot in tridiagonal solve");
    }
    cp[0] = n > 1 ? sys.upper[0] / den : 0.0;
    x[0] = rhs[0] / den;
    for (std::size_t i = 1; i < n; ++i)
    {
        den = sys.diag[i] - sys.lower[i] * cp[i - 1];
        if (den == 0 || !std::isfinite(den))
        {
            throw Error(ErrorKind::invalid_argument, "zero pivot in tridiagonal solve");
        }
        cp[i] = i + 1 < n ? sys.upper[i] / den : 0.0;
        x[i] = (rhs[i] - sys.lower[i] * x[i - 1]) / den;
    }

    // Back substitution
    for (std::size_t i = n - 1; i > 0; --i)
    {
        x[i - 1] -= cp[i - 1] * x[i];
    }
    return x;
}

} // namespace degenelab
