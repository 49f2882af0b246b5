#include <cmath>
#include <memory>
#include <random>

#include <doctest.h>

#include "degenelab/error.hpp"
#include "degenelab/solver.hpp"

using namespace degenelab;

namespace
{
std::shared_ptr<RadialMesh const> share(RadialMesh m)
{
    return std::make_shared<RadialMesh const>(std::move(m));
}

std::shared_ptr<RadialMesh const> graded_ball(int dim, int elements)
{
    return share(RadialMesh::ball(dim, elements, grading_for_ratio(elements, kDefaultSizeRatio)));
}

ProblemSpec mms_spec(int n)
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    ProblemSpec spec = ms.problem();
    spec.datum = truncate_datum(ms.datum(), n);
    return spec;
}

ErrorKind kind_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (Error const& e)
    {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::invalid_argument;
}
} // namespace

TEST_CASE("hand assembly on the unit interval")
{
    auto const mesh = share(RadialMesh::interval(2));
    ProblemSpec spec;
    spec.domain = DomainKind::interval;
    for (double gamma : {0.5, 2.0, 7.0})
    {
        spec.gamma = gamma;
        auto const sys = assemble_system(*mesh, GridFunction::zeros(mesh), spec, 1.0, Datum::constant(1));
        // stiffness 1/h = 2 per element, lumped mass h = 0.5 at the interior node
        CHECK(sys.diag[1] == doctest::Approx(4.5));
        CHECK(sys.lower[1] == doctest::Approx(-2));
        CHECK(sys.upper[0] == doctest::Approx(-2));
        CHECK(sys.diag[0] == doctest::Approx(2.25));
        CHECK(sys.diag[2] == 1);
        CHECK(sys.lower[2] == 0);
        CHECK(sys.rhs[1] == doctest::Approx(0.5));
        CHECK(sys.rhs[2] == 0);
    }
}

TEST_CASE("frozen systems are M-matrices")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-30, 30);
    auto const mesh = graded_ball(3, 64);
    for (auto const& a : {CoefficientField::identity(), CoefficientField::nonlinear_demo(),
                          CoefficientField::diagonal([](double r) { return 1 + r; }, 1, 2)})
    {
        ProblemSpec spec;
        spec.gamma = 2;
        spec.coefficient = a;
        std::vector<double> v(mesh->num_nodes());
        for (double& x : v)
        {
            x = val(rng);
        }
        GridFunction const frozen(mesh, v);
        auto const sys = assemble_system(*mesh, frozen, spec, 10, Datum::constant(1));
        CHECK(sys.is_m_matrix());
    }
}

TEST_CASE("assembly rejects a nonpositive truncation level")
{
    auto const mesh = share(RadialMesh::interval(2));
    ProblemSpec spec;
    spec.domain = DomainKind::interval;
    CHECK_THROWS_AS(assemble_system(*mesh, GridFunction::zeros(mesh), spec, 0, Datum::zero()), Error);
}

TEST_CASE("monotone loads give ordered frozen solutions")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> val(-5, 5);
    std::uniform_real_distribution<double> bump(0, 1);
    auto const mesh = graded_ball(3, 80);
    ProblemSpec spec;
    spec.gamma = 1.5;
    std::vector<double> v(mesh->num_nodes());
    for (double& x : v)
    {
        x = val(rng);
    }
    auto sys = assemble_system(*mesh, GridFunction(mesh, v), spec, 6, Datum::zero());
    for (int t = 0; t < 50; ++t)
    {
        std::vector<double> b1(sys.size());
        std::vector<double> b2(sys.size());
        for (std::size_t i = 0; i + 1 < b1.size(); ++i)
        {
            b1[i] = val(rng);
            b2[i] = b1[i] + bump(rng);
        }
        auto const x1 = solve_tridiagonal(sys, b1);
        auto const x2 = solve_tridiagonal(sys, b2);
        for (std::size_t i = 0; i < x1.size(); ++i)
        {
            CHECK(x1[i] <= x2[i]);
        }
    }
}

TEST_CASE("zero datum gives zero in one iteration")
{
    auto const mesh = graded_ball(3, 32);
    ProblemSpec spec;
    auto const report = solve_bounded(spec, mesh, SolverConfig{});
    CHECK(report.iterations == 1);
    CHECK(report.solution.max_abs() == 0);
    CHECK(report.truncation_level == 1);
}

TEST_CASE("bounded manufactured datum obeys the maximum principle")
{
    auto const mesh = graded_ball(5, 256);
    auto const spec = mms_spec(20);
    auto const report = solve_bounded(spec, mesh, SolverConfig{});
    CHECK(report.datum_sup == doctest::Approx(20));
    CHECK(report.truncation_level == doctest::Approx(21));
    CHECK(report.solution.max_abs() <= 20 + 1e-10);
    CHECK(report.max_principle_margin <= 1e-10);
    CHECK(report.final_residual() <= 1e-10);
    CHECK(report.iterations <= 200);
    CHECK(residual(report.solution, spec, *mesh) <= 1e-10);
}

TEST_CASE("nonnegative data give nonnegative solutions")
{
    auto const mesh = graded_ball(3, 64);
    for (auto const& a : {CoefficientField::identity(), CoefficientField::nonlinear_demo()})
    {
        ProblemSpec spec;
        spec.gamma = 2;
        spec.coefficient = a;
        spec.datum = Datum::constant(3);
        auto const report = solve_bounded(spec, mesh, SolverConfig{});
        for (double v : report.solution.values())
        {
            CHECK(v >= -1e-12);
        }
        CHECK(report.solution.max_abs() <= 3 + 1e-10);
    }
}

TEST_CASE("restart from a converged solution is immediate")
{
    auto const mesh = graded_ball(5, 128);
    auto const spec = mms_spec(40);
    auto const first = solve_bounded(spec, mesh, SolverConfig{});
    auto const again = solve_bounded(spec, mesh, SolverConfig{}, first.solution);
    CHECK(again.iterations <= 2);
}

TEST_CASE("all built-in coefficients and domains converge")
{
    SolverConfig const config;
    for (auto const& a : {CoefficientField::identity(), CoefficientField::nonlinear_demo(),
                          CoefficientField::diagonal([](double r) { return 2 - r * r; }, 1, 2)})
    {
        for (double gamma : {0.5, 1.0, 2.0, 4.0})
        {
            ProblemSpec spec;
            spec.gamma = gamma;
            spec.coefficient = a;
            spec.datum = Datum::closed_form([](double r) { return 30 * std::cos(9 * r); }, 1e300, "cos");
            auto const ball = solve_bounded(spec, graded_ball(3, 96), config);
            CHECK(ball.final_residual() <= 1e-10);
            CHECK(ball.solution.max_abs() <= 30 + 1e-10);

            spec.domain = DomainKind::interval;
            auto const line = solve_bounded(spec, share(RadialMesh::interval(96)), config);
            CHECK(line.final_residual() <= 1e-10);
            CHECK(line.solution.max_abs() <= 30 + 1e-10);
        }
    }
}

TEST_CASE("exhausted iteration budget reports no convergence")
{
    SolverConfig config;
    config.max_iterations = 1;
    CHECK(kind_of([&] { solve_bounded(mms_spec(80), graded_ball(5, 64), config); }) == ErrorKind::no_convergence);
}

TEST_CASE("solver configuration validation")
{
    SolverConfig c;
    c.damping = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SolverConfig{};
    c.picard_tol = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SolverConfig{};
    c.max_iterations = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("unbounded data are rejected by the bounded solver")
{
    ProblemSpec spec;
    spec.datum = Datum::closed_form([](double) { return std::numeric_limits<double>::infinity(); }, 1, "inf");
    CHECK_THROWS_AS(solve_bounded(spec, graded_ball(3, 8), SolverConfig{}), Error);
}

TEST_CASE("approximate sequence: trivial cases")
{
    auto const mesh = graded_ball(3, 64);
    ProblemSpec spec;
    spec.gamma = 2;
    auto const zero = approximate_sequence(spec, mesh, {1, 2, 4}, SolverConfig{});
    CHECK(zero.cauchy_certified);
    for (auto const& r : zero.records)
    {
        CHECK(r.solution.max_abs() == 0);
    }

    spec.datum = Datum::closed_form([](double r) { return 2 * r - 0.5; }, 1e300, "affine");
    auto const bounded = approximate_sequence(spec, mesh, {3, 5, 9}, SolverConfig{});
    CHECK(bounded.records.front().diff_l_natural == std::nullopt);
    for (std::size_t i = 1; i < bounded.records.size(); ++i)
    {
        CHECK(*bounded.records[i].diff_l_natural == 0);
        CHECK(*bounded.records[i].diff_w11 == 0);
    }

    CHECK(kind_of([&] { approximate_sequence(spec, mesh, {}, SolverConfig{}); }) == ErrorKind::empty_n_list);
    CHECK_THROWS_AS(approximate_sequence(spec, mesh, {4, 4}, SolverConfig{}), Error);
}

TEST_CASE("approximate sequence on the manufactured datum")
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    auto const mesh = graded_ball(5, 256);
    auto const seq = approximate_sequence(ms.problem(), mesh, {5, 10, 20, 40, 80}, SolverConfig{});
    double const f_norm = lp_norm(*mesh, ms.datum(), 2);
    for (auto const& r : seq.records)
    {
        CHECK(r.l_natural <= f_norm);
        CHECK(r.linf <= r.n + 1e-10);
    }
    for (std::size_t i = 2; i < seq.records.size(); ++i)
    {
        CHECK(*seq.records[i].diff_w11 < *seq.records[i - 1].diff_w11);
    }
    CHECK(seq.limit().values() == seq.records.back().solution.values());
}

TEST_CASE("parallel and serial sequences agree bit for bit")
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    auto const mesh = graded_ball(5, 64);
    auto const a = approximate_sequence(ms.problem(), mesh, {5, 10, 20}, SolverConfig{}, truncate_datum, true);
    auto const b = approximate_sequence(ms.problem(), mesh, {5, 10, 20}, SolverConfig{}, truncate_datum, false);
    for (std::size_t i = 0; i < a.records.size(); ++i)
    {
        CHECK(a.records[i].solution.values() == b.records[i].solution.values());
    }
}

TEST_CASE("weak residual of zero and of the exact solution")
{
    auto const mesh = graded_ball(3, 16);
    ProblemSpec spec;
    CHECK(residual(GridFunction::zeros(mesh), spec, *mesh) == 0);

    auto const ms = manufactured_solution(1.5, 5, 2);
    std::vector<double> values;
    for (int m : {64, 128, 256, 512})
    {
        auto const g = graded_ball(5, m);
        double const r1 = g->nodes()[1];
        // the singular origin value is replaced by the value at the first node
        auto const u = GridFunction::interpolate(g, [&](double r) { return ms.u(r > 0 ? r : r1); });
        values.push_back(residual(u, ms.problem(), *g));
    }
    for (std::size_t i = 1; i < values.size(); ++i)
    {
        double const order = std::log2(values[i - 1] / values[i]);
        CHECK(order >= 1);
    }
}
