#include "degenelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "degenelab/error.hpp"
#include "degenelab/log.hpp"

namespace degenelab
{

namespace
{
constexpr int Q = RadialMesh::kQuadPoints;
constexpr double kInf = std::numeric_limits<double>::infinity();

double weight_at(double v, double gamma, double level)
{
    double const t = std::isfinite(level) ? std::min(std::abs(v), level) : std::abs(v);
    return std::pow(1 + t, -gamma);
}

//! d/dv of (1 + |T_M(v)|)^-gamma, with sgn(0) = 0.
double weight_derivative(double v, double gamma, double level)
{
    if (std::abs(v) >= level)
    {
        return 0.0;
    }
    return -gamma * sign(v) * std::pow(1 + std::abs(v), -gamma - 1);
}

std::vector<double> load_vector(RadialMesh const& mesh, Datum const& rhs)
{
    std::vector<double> b(mesh.num_nodes(), 0.0);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < Q; ++q)
        {
            double const fdx = rhs(mesh.point(e, q)) * mesh.measure(e, q);
            b[e] += fdx * RadialMesh::shape_left(q);
            b[e + 1] += fdx * RadialMesh::shape_right(q);
        }
    }
    b.back() = 0.0;
    return b;
}

double max_abs(std::span<double const> v)
{
    double m = 0;
    for (double x : v)
    {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double sum_squares(std::span<double const> v)
{
    double s = 0;
    for (double x : v)
    {
        s += x * x;
    }
    return s;
}

/*!
 * Discrete nonlinear problem with a fixed load and truncation level.
 */
class DiscreteProblem
{
  public:
    DiscreteProblem(ProblemSpec const& spec, RadialMesh const& mesh, double level, std::vector<double> load)
        : spec_(spec), mesh_(mesh), level_(level), load_(std::move(load))
    {
    }

    //! Frozen-coefficient matrix at `state` with the cached load.
    TridiagonalSystem frozen(GridFunction const& state) const
    {
        std::size_t const n = mesh_.num_nodes();
        TridiagonalSystem sys(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            sys.diag[i] = mesh_.lumped_mass(i);
        }
        for (std::size_t e = 0; e < mesh_.num_elements(); ++e)
        {
            if (!(mesh_.element_measure(e) > 0))
            {
                throw Error(ErrorKind::degenerate_element,
                            "element " + std::to_string(e) + " has zero weighted measure");
            }
            double const h = mesh_.length(e);
            double const s = state.slope(e);
            double c = 0;
            for (int q = 0; q < Q; ++q)
            {
                double const r = mesh_.point(e, q);
                c += mesh_.measure(e, q) * spec_.coefficient.radial_secant(r, s)
                     * weight_at(state.at(e, q), spec_.gamma, level_);
            }
            c /= h * h;
            if (!std::isfinite(c))
            {
                throw Error(ErrorKind::degenerate_element, "non-finite stiffness on element " + std::to_string(e));
            }
            sys.diag[e] += c;
            sys.diag[e + 1] += c;
            sys.upper[e] -= c;
            sys.lower[e + 1] -= c;
        }
        sys.rhs = load_;
        // Dirichlet node r = 1
        std::size_t const last = n - 1;
        sys.diag[last] = 1.0;
        sys.lower[last] = 0.0;
        sys.rhs[last] = 0.0;
        return sys;
    }

    //! Nonlinear residual R(u) = A(u) u - b, zero at the Dirichlet node.
    std::vector<double> residual(GridFunction const& u) const
    {
        std::size_t const n = mesh_.num_nodes();
        std::vector<double> res(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            res[i] = mesh_.lumped_mass(i) * u[i] - load_[i];
        }
        for (std::size_t e = 0; e < mesh_.num_elements(); ++e)
        {
            double const flux = element_flux(u, e);
            res[e] -= flux;
            res[e + 1] += flux;
        }
        res.back() = 0.0;
        return res;
    }

    //! Newton system J d = -R(u).
    TridiagonalSystem jacobian(GridFunction const& u, std::vector<double> const& res) const
    {
        std::size_t const n = mesh_.num_nodes();
        TridiagonalSystem sys(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            sys.diag[i] = mesh_.lumped_mass(i);
            sys.rhs[i] = -res[i];
        }
        for (std::size_t e = 0; e < mesh_.num_elements(); ++e)
        {
            double const h = mesh_.length(e);
            double const s = u.slope(e);
            double d_left = 0;
            double d_right = 0;
            for (int q = 0; q < Q; ++q)
            {
                double const r = mesh_.point(e, q);
                double const uq = u.at(e, q);
                double const dx = mesh_.measure(e, q);
                double const w = weight_at(uq, spec_.gamma, level_);
                double const dw = weight_derivative(uq, spec_.gamma, level_);
                double const a = spec_.coefficient.radial_flux(r, s);
                double const da = spec_.coefficient.radial_slope(r, s);
                d_left += dx * (-da / h * w + a * dw * RadialMesh::shape_left(q));
                d_right += dx * (da / h * w + a * dw * RadialMesh::shape_right(q));
            }
            d_left /= h;
            d_right /= h;
            sys.diag[e] -= d_left;
            sys.upper[e] -= d_right;
            sys.lower[e + 1] += d_left;
            sys.diag[e + 1] += d_right;
        }
        std::size_t const last = n - 1;
        sys.diag[last] = 1.0;
        sys.lower[last] = 0.0;
        sys.rhs[last] = -u[last];
        return sys;
    }

  private:
    ProblemSpec const& spec_;
    RadialMesh const& mesh_;
    double level_;
    std::vector<double> load_;

    double element_flux(GridFunction const& u, std::size_t e) const
    {
        double const h = mesh_.length(e);
        double const s = u.slope(e);
        double flux = 0;
        for (int q = 0; q < Q; ++q)
        {
            double const r = mesh_.point(e, q);
            // secant times slope reproduces the frozen matrix exactly
            flux += mesh_.measure(e, q) * spec_.coefficient.radial_secant(r, s) * s
                    * weight_at(u.at(e, q), spec_.gamma, level_);
        }
        return flux / h;
    }
};

GridFunction make_state(std::shared_ptr<RadialMesh const> const& mesh, std::vector<double> v)
{
    return GridFunction(mesh, std::move(v), true);
}

} // namespace

void SolverConfig::validate() const
{
    if (!(picard_tol > 0))
    {
        throw Error(ErrorKind::invalid_argument, "picard-tol must be > 0");
    }
    if (!(damping > 0 && damping <= 1))
    {
        throw Error(ErrorKind::invalid_argument, "damping must lie in (0, 1]");
    }
    if (!(damping_floor > 0 && damping_floor <= damping))
    {
        throw Error(ErrorKind::invalid_argument, "damping floor must lie in (0, damping]");
    }
    if (max_iterations < 1)
    {
        throw Error(ErrorKind::invalid_argument, "max-iterations must be >= 1");
    }
}

TridiagonalSystem assemble_system(RadialMesh const& mesh,
                                  GridFunction const& frozen,
                                  ProblemSpec const& spec,
                                  double truncation_level,
                                  Datum const& rhs)
{
    require_same_mesh(mesh, frozen.mesh());
    if (!(truncation_level > 0))
    {
        throw Error(ErrorKind::invalid_argument, "truncation level M must be > 0");
    }
    DiscreteProblem problem(spec, mesh, truncation_level, load_vector(mesh, rhs));
    return problem.frozen(frozen);
}

namespace
{
struct Attempt
{
    GridFunction u;
    int iterations = 0;
    int newton_steps = 0;
    bool converged = false;
    bool last_was_plain_solve = false;
};

/*!
 * Damped frozen-coefficient iteration with a Newton fallback, from `start`,
 * for at most `budget` iterations.  Gives up early once Newton stalls too.
 */
Attempt iterate(DiscreteProblem const& problem, std::shared_ptr<RadialMesh const> const& mesh,
                SolverConfig const& config, GridFunction start, int budget, std::vector<double>& trace)
{
    Attempt a{std::move(start)};
    GridFunction& u = a.u;
    double prev = max_abs(problem.residual(u));
    double best = prev;
    int since_best = 0;
    double lambda = config.damping;
    bool newton = false;
    std::vector<double> local;
    std::size_t const window = static_cast<std::size_t>(config.stall_window);

    while (a.iterations < budget)
    {
        ++a.iterations;
        double res = 0;
        if (!newton)
        {
            auto const target = solve_tridiagonal(problem.frozen(u));
            std::vector<double> next(u.size());
            for (std::size_t i = 0; i < next.size(); ++i)
            {
                next[i] = u[i] + lambda * (target[i] - u[i]);
            }
            a.last_was_plain_solve = lambda == 1.0;
            u = make_state(mesh, std::move(next));
            res = max_abs(problem.residual(u));
            if (res > prev)
            {
                bool const at_floor = lambda <= config.damping_floor;
                lambda = std::max(lambda / 2, config.damping_floor);
                newton = newton || (at_floor && config.newton_fallback);
            }
            // linear rate near one: the frozen weights lag too far behind
            if (config.newton_fallback && local.size() >= window && res > 0
                && std::pow(res / local[local.size() - window], 1.0 / static_cast<double>(window))
                       > config.slow_rate)
            {
                newton = true;
            }
        }
        else
        {
            auto const r0 = problem.residual(u);
            // the Newton direction descends on |R|^2, not on max|R|
            double const m0 = sum_squares(r0);
            std::vector<double> dir;
            try
            {
                dir = solve_tridiagonal(problem.jacobian(u, r0));
            }
            catch (Error const&)
            {
                // singular Jacobian: fall back to a frozen solve
                dir = solve_tridiagonal(problem.frozen(u));
                for (std::size_t i = 0; i < dir.size(); ++i)
                {
                    dir[i] -= u[i];
                }
            }
            double step = 1.0;
            std::vector<double> best_state;
            double best_merit = m0;
            double best_res = 0;
            for (int ls = 0; ls < 30; ++ls, step *= 0.5)
            {
                std::vector<double> trial(u.size());
                for (std::size_t i = 0; i < trial.size(); ++i)
                {
                    trial[i] = u[i] + step * dir[i];
                }
                auto const tr = problem.residual(make_state(mesh, trial));
                double const merit = sum_squares(tr);
                if (merit < best_merit)
                {
                    best_merit = merit;
                    best_res = max_abs(tr);
                    best_state = std::move(trial);
                }
                if (merit <= (1 - 2e-4 * step) * m0)
                {
                    break;
                }
            }
            if (best_state.empty())
            {
                // no descent at all: Newton is stuck here
                spdlog::debug("solve_bounded: Newton found no descent at {:.3e}", prev);
                return a;
            }
            u = make_state(mesh, std::move(best_state));
            res = best_res;
            a.last_was_plain_solve = false;
            ++a.newton_steps;
        }
        spdlog::debug("solve_bounded: iteration {} {} residual {:.3e}", trace.size() + 1,
                      newton ? "newton" : "frozen", res);
        trace.push_back(res);
        local.push_back(res);
        prev = res;
        if (res <= config.picard_tol)
        {
            a.converged = true;
            return a;
        }
        if (res < best)
        {
            best = res;
            since_best = 0;
        }
        else if (++since_best >= config.stall_window)
        {
            if (newton || !config.newton_fallback)
            {
                spdlog::debug("solve_bounded: stalled at {:.3e}", res);
                return a;
            }
            newton = true;
            since_best = 0;
        }
    }
    return a;
}
} // namespace

SolveReport solve_bounded(ProblemSpec const& spec,
                          std::shared_ptr<RadialMesh const> const& mesh,
                          SolverConfig const& config,
                          std::optional<GridFunction> const& initial)
{
    spec.validate();
    config.validate();
    double const sup = quadrature_sup(*mesh, spec.datum);
    if (!std::isfinite(sup))
    {
        throw Error(ErrorKind::invalid_argument, "solve_bounded needs a bounded datum");
    }
    double const level = sup + 1;
    std::vector<double> const load = load_vector(*mesh, spec.datum);
    DiscreteProblem const problem(spec, *mesh, level, load);

    GridFunction u = initial ? *initial : GridFunction::zeros(mesh);
    require_same_mesh(*mesh, u.mesh());

    // Continuation in the load scale t when the direct attempt stalls; every
    // intermediate problem keeps the full truncation level since |u| <= t sup < M.
    std::vector<double> trace;
    int it = 0;
    int newton_steps = 0;
    bool converged = false;
    bool last_was_plain_solve = false;
    double t_done = 0;
    double dt = 1;
    while (it < config.max_iterations)
    {
        double const t = std::min(1.0, t_done + dt);
        std::vector<double> scaled = load;
        for (double& b : scaled)
        {
            b *= t;
        }
        DiscreteProblem const stage(spec, *mesh, level, std::move(scaled));
        Attempt a = iterate(t == 1.0 ? problem : stage, mesh, config, u, config.max_iterations - it, trace);
        it += a.iterations;
        newton_steps += a.newton_steps;
        if (a.converged)
        {
            u = std::move(a.u);
            t_done = t;
            if (t == 1.0)
            {
                converged = true;
                last_was_plain_solve = a.last_was_plain_solve;
                break;
            }
            dt = std::min(2 * dt, 1 - t_done);
        }
        else
        {
            dt /= 2;
            if (dt < 1.0 / 64)
            {
                break;
            }
            spdlog::debug("solve_bounded: continuing from load scale {} with step {}", t_done, dt);
        }
    }

    if (converged && !last_was_plain_solve)
    {
        // finish on an exact frozen solve so the iterate obeys the M-matrix bound
        GridFunction polished = make_state(mesh, solve_tridiagonal(problem.frozen(u)));
        double const res = max_abs(problem.residual(polished));
        if (res <= config.picard_tol)
        {
            u = std::move(polished);
            trace.push_back(res);
            ++it;
        }
    }

    if (!converged)
    {
        std::ostringstream os;
        os << "residual " << (trace.empty() ? kInf : trace.back()) << " after " << it << " iterations (tol "
           << config.picard_tol << ")";
        throw Error(ErrorKind::no_convergence, os.str());
    }

    double const margin = u.max_abs() - sup;
    if (margin > 1e-10 * std::max(1.0, sup))
    {
        std::ostringstream os;
        os << "||u||_inf exceeds ||g||_inf by " << margin;
        throw Error(ErrorKind::max_principle_violation, os.str());
    }
    spdlog::debug("solve_bounded: {} iterations ({} Newton), residual {:.3e}, margin {:.3e}",
                  it, newton_steps, trace.back(), margin);

    return SolveReport{std::move(u), it, newton_steps, std::move(trace), margin, level, sup};
}

SequenceReport approximate_sequence(ProblemSpec const& spec,
                                    std::shared_ptr<RadialMesh const> const& mesh,
                                    std::vector<int> const& n_list,
                                    SolverConfig const& config,
                                    DatumApproximation const& approximation,
                                    bool parallel)
{
    if (n_list.empty())
    {
        throw Error(ErrorKind::empty_n_list, "approximate_sequence needs at least one n");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i)
    {
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1]))
        {
            throw Error(ErrorKind::invalid_argument, "n-list must be positive and strictly increasing");
        }
    }
    spec.validate();

    auto solve_one = [&](int n) {
        ProblemSpec sn = spec;
        sn.datum = approximation(spec.datum, n);
        return solve_bounded(sn, mesh, config);
    };

    std::vector<SolveReport> solves;
    solves.reserve(n_list.size());
    if (parallel && n_list.size() > 1)
    {
        std::vector<std::future<SolveReport>> jobs;
        for (int n : n_list)
        {
            jobs.push_back(std::async(std::launch::async, solve_one, n));
        }
        for (auto& j : jobs)
        {
            solves.push_back(j.get());
        }
    }
    else
    {
        for (int n : n_list)
        {
            solves.push_back(solve_one(n));
        }
    }

    double const p = spec.natural_exponent();
    SequenceReport report;
    report.gamma = spec.gamma;
    for (std::size_t i = 0; i < solves.size(); ++i)
    {
        GridFunction const& u = solves[i].solution;
        SequenceRecord rec{n_list[i],
                           u,
                           solves[i].iterations,
                           solves[i].final_residual(),
                           u.max_abs(),
                           lp_norm(u, p),
                           w11_seminorm(u),
                           std::nullopt,
                           std::nullopt};
        if (i > 0)
        {
            GridFunction const diff = u - report.records.back().solution;
            rec.diff_l_natural = lp_norm(diff, p);
            rec.diff_w11 = w11_seminorm(diff);
        }
        report.records.push_back(std::move(rec));
    }
    auto const& last = report.records.back();
    report.cauchy_certified = last.diff_l_natural && *last.diff_l_natural <= 0.01 * last.l_natural
                              && *last.diff_w11 <= 0.01 * last.w11;
    return report;
}

std::vector<double> residual_vector(GridFunction const& u,
                                    ProblemSpec const& spec,
                                    double truncation_level,
                                    Datum const& rhs)
{
    RadialMesh const& mesh = u.mesh();
    DiscreteProblem problem(spec, mesh, truncation_level, load_vector(mesh, rhs));
    return problem.residual(u);
}

double residual(GridFunction const& u, ProblemSpec const& spec, RadialMesh const& mesh)
{
    require_same_mesh(mesh, u.mesh());
    return max_abs(residual_vector(u, spec, kInf, spec.datum));
}

} // namespace degenelab
