#pragma once

// Weighted P1 / lumped-mass discretization of
//
//   int a(x,u') phi' / (1 + |T_M(u)|)^gamma dx + int u phi dx = int g phi dx,
//
// and the nonlinear solvers built on it.

#include <functional>
#include <optional>
#include <vector>

#include "degenelab/mesh.hpp"
#include "degenelab/problem.hpp"
#include "degenelab/tridiagonal.hpp"

namespace degenelab
{

struct SolverConfig
{
    double picard_tol = 1e-10;
    int max_iterations = 200;
    double damping = 1.0;
    double damping_floor = 1.0 / 16;
    //! Switch to Newton when the frozen-coefficient iteration stalls.
    bool newton_fallback = true;
    //! Iterations without a new best residual that count as a stall.
    int stall_window = 10;
    //! Mean per-iteration residual ratio over the window above which the iteration counts as slow.
    double slow_rate = 0.8;

    void validate() const;
};

struct SolveReport
{
    GridFunction solution;
    int iterations = 0;
    int newton_steps = 0;
    std::vector<double> residual_trace;
    //! ||u||_inf - ||g||_inf, expected <= 0.
    double max_principle_margin = 0;
    //! M = ||g||_inf + 1.
    double truncation_level = 0;
    //! ||g||_inf over the quadrature points.
    double datum_sup = 0;

    double final_residual() const { return residual_trace.empty() ? 0.0 : residual_trace.back(); }
};

struct SequenceRecord
{
    int n = 0;
    GridFunction solution;
    int iterations = 0;
    double residual = 0;
    double linf = 0;
    //! L^((gamma+2)/2) norm.
    double l_natural = 0;
    double w11 = 0;
    //! Differences to the previous record, absent for the first one.
    std::optional<double> diff_l_natural;
    std::optional<double> diff_w11;
};

struct SequenceReport
{
    double gamma = 0;
    std::vector<SequenceRecord> records;
    bool cauchy_certified = false;

    GridFunction const& limit() const { return records.back().solution; }
};

//! Maps (f, n) to the n-th approximating datum.
using DatumApproximation = std::function<Datum(Datum const&, int)>;

/*!
 * Frozen-coefficient system at the state `frozen`:
 *   stiffness  (1/h^2) sum_q dx_q kappa(r_q, frozen') / (1 + |T_M(frozen_q)|)^gamma,
 *   lumped mass on the diagonal, load int rhs phi_i dx, identity row at r = 1.
 * kappa is the secant a(r,s)/s of the radial law.
 */
TridiagonalSystem assemble_system(RadialMesh const& mesh,
                                  GridFunction const& frozen,
                                  ProblemSpec const& spec,
                                  double truncation_level,
                                  Datum const& rhs);

/*!
 * Solve the bounded-datum problem with M = ||g||_inf + 1 from the zero state
 * (or `initial`).  Throws no_convergence and max_principle_violation.
 */
SolveReport solve_bounded(ProblemSpec const& spec,
                          std::shared_ptr<RadialMesh const> const& mesh,
                          SolverConfig const& config,
                          std::optional<GridFunction> const& initial = std::nullopt);

/*!
 * Solve the approximating problems with data f_n = approximation(f, n) for
 * each n and record consecutive differences.  Solves for distinct n run
 * concurrently when `parallel` is set.
 */
SequenceReport approximate_sequence(ProblemSpec const& spec,
                                    std::shared_ptr<RadialMesh const> const& mesh,
                                    std::vector<int> const& n_list,
                                    SolverConfig const& config,
                                    DatumApproximation const& approximation = truncate_datum,
                                    bool parallel = true);

//! Nodal weak residual with the untruncated degeneracy and spec.datum,
//! maximized over all nodes but the Dirichlet node.
double residual(GridFunction const& u, ProblemSpec const& spec, RadialMesh const& mesh);

//! Nodal residual vector of the truncated discrete problem with level M and load datum.
std::vector<double> residual_vector(GridFunction const& u,
                                    ProblemSpec const& spec,
                                    double truncation_level,
                                    Datum const& rhs);

} // namespace degenelab
