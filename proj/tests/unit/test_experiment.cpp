#include <cmath>
#include <memory>
#include <numbers>

#include <doctest.h>

#include "degenelab/error.hpp"
#include "degenelab/experiment.hpp"

using namespace degenelab;

TEST_CASE("mollified Dirac data carry unit mass")
{
    for (int dim : {3, 4, 5})
    {
        for (int n : {1, 4, 30})
        {
            // closed form of the plateau: N n^N / omega_{N-1}
            double const c = dim * std::pow(n, dim) / surface_area(dim);
            auto const f = mollified_dirac(n, dim);
            CHECK(f(0.5 / n) == doctest::Approx(c));
            CHECK(f(1.01 / n) == 0);
        }
    }
    std::vector<int> const n_list{8, 16, 32, 64};
    auto const mesh = build_dirac_mesh(3, n_list);
    for (int n : n_list)
    {
        CHECK(lp_norm(mesh, mollified_dirac(n, 3), 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("probes")
{
    CHECK(probe(1, 0) == 1);
    CHECK(probe(2, 0) == 1);
    CHECK(probe(2, 1) == 0);
    CHECK(probe(2, 0.5) == doctest::Approx(0.5625));
    for (int j : {1, 2})
    {
        for (double r : {0.1, 0.4, 0.8})
        {
            double const h = 1e-6;
            double const fd = (probe(j, r + h) - probe(j, r - h)) / (2 * h);
            CHECK(probe_derivative(j, r) == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("Dirac mesh resolves every support radius")
{
    std::vector<int> const n_list{8, 16, 32, 64};
    auto const mesh = build_dirac_mesh(3, n_list);
    for (int n : n_list)
    {
        bool found = false;
        for (double r : mesh.nodes())
        {
            found = found || std::abs(r - 1.0 / n) < 1e-15;
        }
        CHECK(found);
    }
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        CHECK(mesh.length(e) <= 1.0 / 128 + 1e-15);
    }
}

TEST_CASE("supercritical Dirac experiment")
{
    DiracConfig config;
    auto const report = run_dirac_experiment(config);
    REQUIRE(report.records.size() == 4);
    CHECK(report.collapse);
    CHECK(report.absorption);
    CHECK(report.energy_bound);
    for (auto const& r : report.records)
    {
        CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.sup_tail >= 0);
        // pairings stay between 0 and the mass since 0 <= phi <= 1
        CHECK(r.pairing_phi1 <= 1 + 1e-12);
        CHECK(r.pairing_phi2 >= 0);
    }
    CHECK(report.records.back().sup_tail < 0.05 * report.records.front().sup_tail);
    auto const certs = dirac_certificates(report);
    REQUIRE(certs.size() == 4);
    for (auto const& c : certs)
    {
        CHECK_MESSAGE(c.passed, c.name);
    }
}

TEST_CASE("Dirac experiment requires gamma above one")
{
    DiracConfig config;
    config.gamma = 1;
    try
    {
        run_dirac_experiment(config);
        FAIL("expected gamma_not_supercritical");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::gamma_not_supercritical);
    }
}

TEST_CASE("zero data control")
{
    DiracConfig config;
    auto const report = run_dirac_diagnostic(config, [](int) { return Datum::zero(); });
    for (auto const& r : report.records)
    {
        CHECK(r.sup_tail == 0);
        CHECK(r.pairing_phi1 == 0);
        CHECK(r.energy == 0);
        CHECK(r.mass == 0);
    }
    CHECK_FALSE(report.absorption);
}

TEST_CASE("subcritical contrast keeps the tail")
{
    DiracConfig config;
    config.gamma = 0.5;
    auto const sub = run_dirac_diagnostic(config, [](int n) { return mollified_dirac(n, 3); });
    CHECK_FALSE(sub.collapse);
    config.gamma = 2;
    auto const super = run_dirac_experiment(config);
    CHECK(super.records.back().sup_tail < sub.records.back().sup_tail);
}

TEST_CASE("manufactured convergence with growing truncation level")
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    std::vector<int> const elements{64, 128, 256};
    std::vector<int> n_list;
    for (int m : elements)
    {
        n_list.push_back(160 * (m / 64) * (m / 64) * (m / 64));
    }
    auto const study = run_mms_study(ms, elements, n_list, SolverConfig{});
    REQUIRE(study.rows.size() == 3);
    REQUIRE(study.l2_orders.size() == 2);
    for (double order : study.l2_orders)
    {
        CHECK(order >= 1.5);
    }
    for (double order : study.w11_orders)
    {
        CHECK(order >= 0.7);
    }
    for (auto const& c : mms_certificates(study))
    {
        CHECK_MESSAGE(c.passed, c.name);
    }
}

TEST_CASE("mms study rejects mismatched lists")
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    CHECK_THROWS_AS(run_mms_study(ms, {64, 128}, {10}, SolverConfig{}), Error);
}

TEST_CASE("error norms of the exact interpolant shrink")
{
    auto const ms = manufactured_solution(1.5, 5, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (int m : {64, 128, 256})
    {
        auto const mesh = std::make_shared<RadialMesh const>(
            RadialMesh::ball(5, m, grading_for_ratio(m, kDefaultSizeRatio)));
        double const r1 = mesh->nodes()[1];
        auto const u = GridFunction::interpolate(mesh, [&](double r) { return ms.u(r > 0 ? r : r1); });
        double const e = manufactured_l2_error(u, ms);
        CHECK(e < prev);
        CHECK(manufactured_w11_error(u, ms) >= 0);
        prev = e;
    }
}
