#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "degenelab/error.hpp"
#include "degenelab/mesh.hpp"

using namespace degenelab;

namespace
{
std::shared_ptr<RadialMesh const> share(RadialMesh m)
{
    return std::make_shared<RadialMesh const>(std::move(m));
}
} // namespace

TEST_CASE("sphere areas")
{
    CHECK(surface_area(3) == doctest::Approx(4 * std::numbers::pi));
    CHECK(surface_area(2) == doctest::Approx(2 * std::numbers::pi));
    // 8 pi^2 / 3
    CHECK(surface_area(5) == doctest::Approx(8 * std::numbers::pi * std::numbers::pi / 3));
}

TEST_CASE("graded ball mesh geometry")
{
    auto const m = RadialMesh::ball(3, 2, 0.5);
    REQUIRE(m.num_nodes() == 3);
    CHECK(m.nodes()[0] == 0);
    CHECK(m.nodes()[1] == doctest::Approx(1.0 / 3));
    CHECK(m.nodes()[2] == 1);

    auto const g = RadialMesh::ball(5, 64, grading_for_ratio(64, kDefaultSizeRatio));
    CHECK(g.length(0) / g.length(63) == doctest::Approx(std::pow(0.85, 63)));
    for (std::size_t e = 1; e < g.num_elements(); ++e)
    {
        CHECK(g.length(e) > g.length(e - 1));
    }
    CHECK(grading_for_ratio(64, kDefaultSizeRatio) == doctest::Approx(0.85));
}

TEST_CASE("mesh volume equals the ball volume")
{
    // Gauss rule is exact on r^(N-1) per element
    CHECK(RadialMesh::ball(3, 17, 0.9).volume() == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-13));
    CHECK(RadialMesh::ball(5, 9, 0.7).volume() == doctest::Approx(8 * std::numbers::pi * std::numbers::pi / 15));
    CHECK(RadialMesh::interval(7).volume() == doctest::Approx(1.0));
}

TEST_CASE("lumped masses sum to the volume")
{
    auto const m = RadialMesh::ball(4, 20, 0.8);
    double s = 0;
    for (double v : m.lumped_mass())
    {
        s += v;
        CHECK(v >= 0);
    }
    CHECK(s == doctest::Approx(m.volume()));
    auto const i = RadialMesh::interval(2);
    CHECK(i.lumped_mass(0) == doctest::Approx(0.25));
    CHECK(i.lumped_mass(1) == doctest::Approx(0.5));
}

TEST_CASE("mesh construction errors")
{
    CHECK_THROWS_AS(RadialMesh::ball(2, 8, 0.9), Error);
    CHECK_THROWS_AS(RadialMesh::ball(3, 8, 0.0), Error);
    CHECK_THROWS_AS(RadialMesh::ball(3, 8, 1.5), Error);
    CHECK_THROWS_AS(RadialMesh::from_nodes(DomainKind::radial_ball, 3, {0.0, 0.5, 0.5, 1.0}), Error);
    CHECK_THROWS_AS(RadialMesh::from_nodes(DomainKind::radial_ball, 3, {0.1, 1.0}), Error);
    try
    {
        RadialMesh::ball(3, 8, -1);
        FAIL("expected invalid grading");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::invalid_grading);
    }
}

TEST_CASE("grid function interpolation and evaluation")
{
    auto const mesh = share(RadialMesh::interval(4));
    auto const u = GridFunction::interpolate(mesh, [](double r) { return 1 - r; });
    CHECK(u[0] == 1);
    CHECK(u[4] == 0);
    CHECK(u.evaluate(0.375) == doctest::Approx(0.625));
    CHECK(u.slope(2) == doctest::Approx(-1));
    CHECK(u.max_abs() == 1);
    auto const pinned = GridFunction::interpolate(mesh, [](double) { return 3.0; });
    CHECK(pinned[4] == 0);
    auto const free = GridFunction::interpolate(mesh, [](double) { return 3.0; }, false);
    CHECK(free[4] == 3);
}

TEST_CASE("lp norms and energies")
{
    auto const ball = share(RadialMesh::ball(3, 40, 0.95));
    auto const two = GridFunction::interpolate(ball, [](double) { return 2.0; }, false);
    // 2 * sqrt(4 pi / 3)
    CHECK(lp_norm(two, 2) == doctest::Approx(2 * std::sqrt(4 * std::numbers::pi / 3)));
    CHECK(lp_norm(two, 1) == doctest::Approx(8 * std::numbers::pi / 3));

    auto const line = share(RadialMesh::interval(400));
    auto const v = GridFunction::interpolate(line, [](double r) { return 1 - r; });
    CHECK(w11_seminorm(v) == doctest::Approx(1.0));
    CHECK(dirichlet_energy(v) == doctest::Approx(1.0));
    // int_0^1 dr / (2 - r)^2 = 1/2
    CHECK(weighted_gradient_energy(v, 2) == doctest::Approx(0.5).epsilon(1e-6));
    // only r <= 1/2 has |v| >= 1/2
    CHECK(restricted_w11(v, 0.5) == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(restricted_integral(v, v, 2.0, 1) == 0);
    CHECK(restricted_integral(v, Datum::constant(2), 0, 2) == doctest::Approx(4));
}

TEST_CASE("datum norms")
{
    auto const mesh = RadialMesh::ball(3, 64, 0.9);
    CHECK(lp_norm(mesh, Datum::constant(1), 1) == doctest::Approx(4 * std::numbers::pi / 3));
    CHECK(quadrature_sup(mesh, Datum::constant(-3)) == 3);
}

TEST_CASE("difference requires a shared mesh")
{
    auto const a = share(RadialMesh::interval(4));
    auto const b = share(RadialMesh::interval(5));
    auto const u = GridFunction::zeros(a);
    auto const z = GridFunction::zeros(b);
    try
    {
        (void)(u - z);
        FAIL("expected mesh mismatch");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::mesh_mismatch);
    }
    auto const same = share(RadialMesh::interval(4));
    CHECK_NOTHROW((void)(u - GridFunction::zeros(same)));
}

TEST_CASE("csv round trip")
{
    auto const mesh = share(RadialMesh::ball(3, 8, 0.8));
    auto const u = GridFunction::interpolate(mesh, [](double r) { return std::cos(3 * r) - std::cos(3.0); });
    std::stringstream ss;
    write_csv(ss, u);
    CHECK(ss.str().rfind("r,value", 0) == 0);
    auto const [nodes, values] = read_grid_csv(ss);
    REQUIRE(nodes.size() == u.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        CHECK(nodes[i] == mesh->nodes()[i]);
        CHECK(values[i] == u[i]);
    }
}
