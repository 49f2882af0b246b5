#include "degenelab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degenelab/error.hpp"

namespace degenelab
{

namespace
{
constexpr int Q = RadialMesh::kQuadPoints;

//! int_{|u|>=k} fn(e, q) dx with the indicator at quadrature points.
template<class F>
double integrate_where(GridFunction const& u, double k, F const& fn)
{
    RadialMesh const& mesh = u.mesh();
    double sum = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < Q; ++q)
        {
            if (std::abs(u.at(e, q)) >= k)
            {
                sum += fn(e, q) * mesh.measure(e, q);
            }
        }
    }
    return sum;
}

Datum difference(Datum const& f, Datum const& g)
{
    return Datum::closed_form([f, g](double r) { return f(r) - g(r); }, std::min(f.summability(), g.summability()),
                              f.name() + " - " + g.name());
}

void require_k(double k)
{
    if (!(k >= 0))
    {
        throw Error(ErrorKind::invalid_argument, "threshold k must be >= 0");
    }
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}
} // namespace

CertificateReport make_certificate(std::string name, double k, double lhs, double rhs, double slack,
                                   std::string notes)
{
    CertificateReport r;
    r.name = std::move(name);
    r.k = k;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = slack;
    r.passed = lhs <= rhs * (1 + slack) + kCertificateAbsTol;
    r.notes = std::move(notes);
    return r;
}

//---------------------------------------------------------------------------//
// A priori estimates
//---------------------------------------------------------------------------//

CertificateReport check_estimate_aa(GridFunction const& u, Datum const& f, double gamma, double k, double slack)
{
    require_k(k);
    double const p = (gamma + 2) / 2;
    double const lhs = restricted_integral(u, u, k, p);
    double const rhs = restricted_integral(u, f, k, p);
    return make_certificate("estimate_aa", k, lhs, rhs, slack);
}

CertificateReport check_estimate_bb(GridFunction const& u, Datum const& f, double gamma, double k, double alpha,
                                    double slack)
{
    require_k(k);
    double const p = (gamma + 2) / 2;
    double const lhs = alpha * (gamma / 2) * weighted_gradient_energy(u, p, k);
    RadialMesh const& mesh = u.mesh();
    double const rhs = integrate_where(u, k, [&](std::size_t e, int q) {
        return std::abs(f(mesh.point(e, q))) * std::pow(1 + std::abs(u.at(e, q)), gamma / 2);
    });
    return make_certificate("estimate_bb", k, lhs, rhs, slack);
}

CertificateReport check_estimate_cc(GridFunction const& u, Datum const& f, double gamma, double k, double slack)
{
    require_k(k);
    double const p = (gamma + 2) / 2;
    double const lhs = restricted_w11(u, k);
    double const energy = weighted_gradient_energy(u, p, k);
    double const mass
        = integrate_where(u, k, [&](std::size_t e, int q) { return std::pow(1 + std::abs(u.at(e, q)), p); });
    double const rhs = std::sqrt(energy) * std::sqrt(mass);
    double const data = restricted_integral(u, f, k, p);
    std::string notes = "fitted C = ";
    notes += data > 0 ? format_double(lhs / std::pow(data, 1 / (gamma + 2))) : std::string("n/a");
    return make_certificate("estimate_cc", k, lhs, rhs, slack, std::move(notes));
}

CertificateReport check_estimate_dd(GridFunction const& u, Datum const& f, double gamma, double k, double alpha,
                                    double slack)
{
    require_k(k);
    RadialMesh const& mesh = u.mesh();
    double energy = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        double const s = u.slope(e);
        for (int q = 0; q < Q; ++q)
        {
            if (std::abs(u.at(e, q)) < k)
            {
                energy += s * s * mesh.measure(e, q);
            }
        }
    }
    double const lhs = alpha * energy;
    double const rhs = k * std::pow(1 + k, gamma) * lp_norm(mesh, f, 1);
    return make_certificate("estimate_dd", k, lhs, rhs, slack);
}

//---------------------------------------------------------------------------//
// Contraction and ordering
//---------------------------------------------------------------------------//

CertificateReport check_l1_contraction(GridFunction const& u, GridFunction const& z, Datum const& f,
                                       Datum const& g, double slack)
{
    GridFunction const diff = u - z;
    double const lhs = lp_norm(diff, 1);
    double const rhs = lp_norm(u.mesh(), difference(f, g), 1);
    return make_certificate("l1_contraction", 0, lhs, rhs, slack);
}

CertificateReport check_comparison(GridFunction const& u, GridFunction const& z, Datum const& f, Datum const& g)
{
    require_same_mesh(u.mesh(), z.mesh());
    auto const fv = sample_nodes(u.mesh(), f);
    auto const gv = sample_nodes(u.mesh(), g);
    for (std::size_t i = 0; i < fv.size(); ++i)
    {
        if (fv[i] > gv[i])
        {
            std::ostringstream os;
            os << "f > g at node " << i << " (r = " << u.mesh().nodes()[i] << ")";
            throw Error(ErrorKind::hypothesis_violation, os.str());
        }
    }
    double lhs = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        lhs = std::max(lhs, u[i] - z[i]);
    }
    return make_certificate("comparison", 0, lhs, 0.0, 0.0);
}

std::pair<CertificateReport, CertificateReport> check_nonexpansive_map(Datum const& f, Datum const& g,
                                                                       SequenceReport const& sf,
                                                                       SequenceReport const& sg,
                                                                       double slack)
{
    GridFunction const& su = sf.limit();
    GridFunction const& sz = sg.limit();
    RadialMesh const& mesh = su.mesh();
    auto first = check_l1_contraction(su, sz, f, g, slack);
    first.name = "nonexpansive_l1";

    double const p = (sf.gamma + 2) / 2;
    double const fl = lp_norm(su, p);
    double const fr = lp_norm(mesh, f, p);
    double const gl = lp_norm(sz, p);
    double const gr = lp_norm(mesh, g, p);
    // keep the pair with the smaller margin
    bool const use_f = fl - fr * (1 + slack) >= gl - gr * (1 + slack);
    auto second = make_certificate("nonexpansive_norm", 0, use_f ? fl : gl, use_f ? fr : gr, slack,
                                   use_f ? "datum f" : "datum g");
    return {std::move(first), std::move(second)};
}

Datum deformed_truncation(Datum const& f, int n)
{
    return truncate_datum(f, n).scaled(1 - 1.0 / (2.0 * n));
}

IndependenceRun check_approximation_independence(ProblemSpec const& spec,
                                                 std::shared_ptr<RadialMesh const> const& mesh,
                                                 std::vector<int> const& n_list,
                                                 SolverConfig const& config)
{
    auto a = approximate_sequence(spec, mesh, n_list, config, truncate_datum);
    auto b = approximate_sequence(spec, mesh, n_list, config, deformed_truncation);
    double const lhs = lp_norm(a.limit() - b.limit(), 1);
    double const rhs = std::max(1e-6, 0.01 * lp_norm(a.limit(), 1));
    auto report = make_certificate("approximation_independence", 0, lhs, rhs, 0.0,
                                   "n = " + std::to_string(n_list.back()));
    return IndependenceRun{std::move(a), std::move(b), std::move(report)};
}

//---------------------------------------------------------------------------//
// Substitutions
//---------------------------------------------------------------------------//

double substitution_v(double u, double gamma)
{
    if (!(gamma > 0))
    {
        throw Error(ErrorKind::invalid_argument, "gamma must be > 0");
    }
    double const a = std::abs(u);
    double const mag = gamma == 2 ? std::log1p(a)
                                  : (4 / (2 - gamma)) * std::expm1((2 - gamma) / 4 * std::log1p(a));
    return sign(u) * mag;
}

double substitution_v_inverse(double v, double gamma)
{
    if (!(gamma > 0))
    {
        throw Error(ErrorKind::invalid_argument, "gamma must be > 0");
    }
    double const a = std::abs(v);
    double mag;
    if (gamma == 2)
    {
        mag = std::expm1(a);
    }
    else
    {
        double const base = (2 - gamma) / 4 * a;
        if (gamma > 2 && !(base > -1))
        {
            throw Error(ErrorKind::invalid_range, "|v| must stay below 4/(gamma-2)");
        }
        mag = std::expm1(4 / (2 - gamma) * std::log1p(base));
    }
    return sign(v) * mag;
}

GridFunction substitution_v(GridFunction const& u, double gamma)
{
    return u.map([gamma](double s) { return substitution_v(s, gamma); });
}

GridFunction substitution_v_inverse(GridFunction const& v, double gamma)
{
    return v.map([gamma](double s) { return substitution_v_inverse(s, gamma); });
}

double substitution_z(double u, double gamma)
{
    if (!(gamma > 1))
    {
        throw Error(ErrorKind::invalid_argument, "substitution z needs gamma > 1");
    }
    if (!(u > -1))
    {
        throw Error(ErrorKind::invalid_range, "substitution z needs u > -1");
    }
    return -std::expm1((1 - gamma) * std::log1p(u)) / (gamma - 1);
}

double lower_order_term(double z, double gamma)
{
    if (!(gamma > 1))
    {
        throw Error(ErrorKind::invalid_argument, "lower-order term needs gamma > 1");
    }
    double const t = (gamma - 1) * z;
    if (!(t < 1))
    {
        throw Error(ErrorKind::invalid_range, "(gamma-1) z >= 1");
    }
    return std::expm1(-std::log1p(-t) / (gamma - 1));
}

GridFunction substitution_z(GridFunction const& u, double gamma)
{
    return u.map([gamma](double s) { return substitution_z(s, gamma); });
}

GridFunction lower_order_term(GridFunction const& z, double gamma)
{
    return z.map([gamma](double s) { return lower_order_term(s, gamma); });
}

double substitution_z_residual(GridFunction const& u, ProblemSpec const& spec, RadialMesh const& mesh)
{
    require_same_mesh(mesh, u.mesh());
    if (!spec.coefficient.is_linear())
    {
        throw Error(ErrorKind::hypothesis_violation, "substitution z needs a linear coefficient");
    }
    GridFunction const z = substitution_z(u, spec.gamma);
    GridFunction const lower = lower_order_term(z, spec.gamma);

    std::vector<double> res(mesh.num_nodes(), 0.0);
    for (std::size_t i = 0; i < res.size(); ++i)
    {
        res[i] = mesh.lumped_mass(i) * lower[i];
    }
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        double const s = z.slope(e);
        double flux = 0;
        for (int q = 0; q < Q; ++q)
        {
            double const r = mesh.point(e, q);
            double const fdx = spec.datum(r) * mesh.measure(e, q);
            res[e] -= fdx * RadialMesh::shape_left(q);
            res[e + 1] -= fdx * RadialMesh::shape_right(q);
            flux += mesh.measure(e, q) * spec.coefficient.radial_flux(r, s);
        }
        flux /= mesh.length(e);
        res[e] -= flux;
        res[e + 1] += flux;
    }
    double m = 0;
    for (std::size_t i = 0; i + 1 < res.size(); ++i)
    {
        m = std::max(m, std::abs(res[i]));
    }
    return m;
}

//---------------------------------------------------------------------------//
// Interpolation inequality
//---------------------------------------------------------------------------//

CertificateReport check_interpolation(GridFunction const& v, double A, double slack)
{
    if (!(A > 0))
    {
        throw Error(ErrorKind::invalid_argument, "interpolation constant A must be > 0");
    }
    if (std::abs(v.values().back()) > 1e-12)
    {
        throw Error(ErrorKind::hypothesis_violation, "v must vanish at r = 1");
    }
    RadialMesh const& mesh = v.mesh();
    double log_energy = 0;
    double mass = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        double const s = v.slope(e);
        for (int q = 0; q < Q; ++q)
        {
            double const w = A + std::abs(v.at(e, q));
            log_energy += s * s / (w * w) * mesh.measure(e, q);
            mass += w * w * mesh.measure(e, q);
        }
    }
    double const lhs = w11_seminorm(v);
    double const rhs = std::sqrt(log_energy) * std::sqrt(mass);
    return make_certificate("interpolation", A, lhs, rhs, slack);
}

//---------------------------------------------------------------------------//
// Seeded random data
//---------------------------------------------------------------------------//

double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Datum random_piecewise_linear(std::mt19937_64& rng, double lo, double hi)
{
    int const interior = 3 + static_cast<int>(rng() % 10);
    std::vector<double> nodes{0.0, 1.0};
    for (int i = 0; i < interior; ++i)
    {
        nodes.push_back(uniform01(rng));
    }
    std::sort(nodes.begin(), nodes.end());
    std::vector<double> values(nodes.size());
    for (double& v : values)
    {
        v = lo + (hi - lo) * uniform01(rng);
    }
    return Datum::nodal(std::move(nodes), std::move(values), "random-pl");
}

std::vector<DatumPair> random_datum_pairs(std::uint64_t seed, int count, bool ordered)
{
    if (count < 0)
    {
        throw Error(ErrorKind::invalid_argument, "pair count must be >= 0");
    }
    std::mt19937_64 rng(seed);
    std::vector<DatumPair> pairs;
    pairs.reserve(count);
    for (int i = 0; i < count; ++i)
    {
        Datum f = random_piecewise_linear(rng);
        if (ordered)
        {
            Datum const bump = random_piecewise_linear(rng, 0.0, 2.0);
            Datum g = Datum::closed_form([f, bump](double r) { return f(r) + bump(r); }, f.summability(),
                                         "random-pl + bump");
            pairs.push_back({std::move(f), std::move(g)});
        }
        else
        {
            Datum g = random_piecewise_linear(rng);
            pairs.push_back({std::move(f), std::move(g)});
        }
    }
    return pairs;
}

GridFunction random_nodal_function(std::shared_ptr<RadialMesh const> const& mesh, std::mt19937_64& rng)
{
    std::vector<double> values(mesh->num_nodes());
    for (double& v : values)
    {
        v = -5 + 10 * uniform01(rng);
    }
    return GridFunction(mesh, std::move(values), true);
}

} // namespace degenelab
