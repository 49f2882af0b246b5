#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "degenelab/error.hpp"
#include "degenelab/tridiagonal.hpp"

using namespace degenelab;

namespace
{
//! Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(TridiagonalSystem const& s)
{
    std::size_t const n = s.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
    {
        a[i][i] = s.diag[i];
        if (i > 0)
        {
            a[i][i - 1] = s.lower[i];
        }
        if (i + 1 < n)
        {
            a[i][i + 1] = s.upper[i];
        }
        a[i][n] = s.rhs[i];
    }
    for (std::size_t c = 0; c < n; ++c)
    {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
        {
            if (std::abs(a[r][c]) > std::abs(a[p][c]))
            {
                p = r;
            }
        }
        std::swap(a[c], a[p]);
        for (std::size_t r = c + 1; r < n; ++r)
        {
            double const f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k)
            {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;)
    {
        double s2 = a[i][n];
        for (std::size_t k = i + 1; k < n; ++k)
        {
            s2 -= a[i][k] * x[k];
        }
        x[i] = s2 / a[i][i];
    }
    return x;
}

TridiagonalSystem random_m_matrix(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> off(0.0, 3.0);
    std::uniform_real_distribution<double> extra(1e-3, 1.0);
    std::uniform_real_distribution<double> rhs(-10, 10);
    TridiagonalSystem s(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        s.lower[i] = i > 0 ? -off(rng) : 0.0;
        s.upper[i] = i + 1 < n ? -off(rng) : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        s.diag[i] = std::abs(s.lower[i]) + std::abs(s.upper[i]) + extra(rng);
        s.rhs[i] = rhs(rng);
    }
    return s;
}
} // namespace

TEST_CASE("Thomas elimination agrees with dense elimination")
{
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 3u, 10u, 57u})
    {
        auto const s = random_m_matrix(rng, n);
        CHECK(s.is_m_matrix());
        auto const x = solve_tridiagonal(s);
        auto const y = dense_solve(s);
        for (std::size_t i = 0; i < n; ++i)
        {
            CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-11));
        }
        auto const ax = s.apply(x);
        for (std::size_t i = 0; i < n; ++i)
        {
            CHECK(ax[i] == doctest::Approx(s.rhs[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("monotone right-hand sides give ordered solutions exactly")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> bump(0.0, 1e-3);
    for (int trial = 0; trial < 200; ++trial)
    {
        auto const s = random_m_matrix(rng, 40);
        std::vector<double> b2 = s.rhs;
        for (double& v : b2)
        {
            v += trial % 2 ? bump(rng) : 0.0;
        }
        auto const x1 = solve_tridiagonal(s, s.rhs);
        auto const x2 = solve_tridiagonal(s, b2);
        for (std::size_t i = 0; i < x1.size(); ++i)
        {
            CHECK(x1[i] <= x2[i]);
        }
    }
}

TEST_CASE("sign pattern detection")
{
    TridiagonalSystem s(3);
    s.diag = {2, 2, 2};
    s.lower = {0, -1, -1};
    s.upper = {-1, -1, 0};
    CHECK_FALSE(s.is_m_matrix());
    s.diag = {2, 2.5, 2};
    CHECK(s.is_m_matrix());
    s.upper[0] = 0.1;
    CHECK_FALSE(s.is_m_matrix());
}

TEST_CASE("zero pivot and size errors")
{
    TridiagonalSystem s(2);
    CHECK_THROWS_AS(solve_tridiagonal(s), Error);
    s.diag = {1, 1};
    std::vector<double> const wrong(3, 0.0);
    CHECK_THROWS_AS(solve_tridiagonal(s, wrong), Error);
}
