#pragma once

#include <span>
#include <vector>

namespace degenelab
{

/*!
 * Tridiagonal system A x = b, row i reading
 *   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
 * lower[0] and upper[n-1] are ignored.
 */
struct TridiagonalSystem
{
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}

    std::size_t size() const { return diag.size(); }

    //! Nonpositive off-diagonals and strict row diagonal dominance.
    bool is_m_matrix() const;

    //! A x.
    std::vector<double> apply(std::span<double const> x) const;
};

/*!
 * Thomas elimination without pivoting.
 *
 * For an M-matrix every intermediate quantity is a monotone function of the
 * right-hand side, and IEEE rounding is monotone, so b1 <= b2 componentwise
 * gives x1 <= x2 componentwise in floating point as well.
 */
std::vector<double> solve_tridiagonal(TridiagonalSystem const& sys);
std::vector<double> solve_tridiagonal(TridiagonalSystem const& sys, std::span<double const> rhs);

} // namespace degenelab
