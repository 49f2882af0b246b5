#include "degenelab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "degenelab/error.hpp"
#include "degenelab/mesh.hpp"

namespace degenelab
{

std::string_view to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::invalid_truncation_level: return "invalid-truncation-level";
    case ErrorKind::structural_assumption_violation: return "structural-assumption-violation";
    case ErrorKind::sigma_out_of_window: return "sigma-out-of-window";
    case ErrorKind::invalid_grading: return "invalid-grading";
    case ErrorKind::invalid_mesh: return "invalid-mesh";
    case ErrorKind::degenerate_element: return "degenerate-element";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::max_principle_violation: return "max-principle-violation";
    case ErrorKind::empty_n_list: return "empty-n-list";
    case ErrorKind::mesh_mismatch: return "mesh-mismatch";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::invalid_range: return "invalid-range";
    case ErrorKind::gamma_not_supercritical: return "gamma-not-supercritical";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

double truncate(double s, double k)
{
    if (!(k >= 0))
    {
        throw Error(ErrorKind::invalid_truncation_level, "truncation level must be >= 0");
    }
    return std::max(-k, std::min(s, k));
}

double degeneracy_weight(double u, double gamma)
{
    return std::pow(1 + std::abs(u), -gamma);
}

//---------------------------------------------------------------------------//
// CoefficientField
//---------------------------------------------------------------------------//

namespace
{
double norm2(std::span<double const> v)
{
    double s = 0;
    for (double x : v)
    {
        s += x * x;
    }
    return std::sqrt(s);
}

double demo_factor(double t) { return 1 + 0.5 * t / (1 + t); }
} // namespace

CoefficientField CoefficientField::identity()
{
    return CoefficientField{};
}

CoefficientField CoefficientField::diagonal(ScalarFn d, double alpha, double beta)
{
    if (!(alpha > 0) || !(beta >= alpha))
    {
        throw Error(ErrorKind::invalid_argument, "diagonal field needs 0 < alpha <= beta");
    }
    CoefficientField a;
    a.kind_ = CoefficientKind::diagonal;
    a.alpha_ = alpha;
    a.beta_ = beta;
    a.name_ = "diagonal";
    a.diag_ = std::move(d);
    return a;
}

CoefficientField CoefficientField::nonlinear_demo()
{
    CoefficientField a;
    a.kind_ = CoefficientKind::nonlinear_demo;
    a.alpha_ = 1;
    a.beta_ = 1.5;
    a.name_ = "nonlinear-demo";
    return a;
}

CoefficientField CoefficientField::custom(VectorFn fn, double alpha, double beta, std::string name)
{
    if (!(alpha > 0) || !(beta >= alpha))
    {
        throw Error(ErrorKind::invalid_argument, "custom field needs 0 < alpha <= beta");
    }
    CoefficientField a;
    a.kind_ = CoefficientKind::custom;
    a.alpha_ = alpha;
    a.beta_ = beta;
    a.name_ = std::move(name);
    a.custom_ = std::move(fn);
    return a;
}

void CoefficientField::check_structure(Point xi, std::span<double const> value) const
{
    if (value.size() != xi.size())
    {
        throw Error(ErrorKind::structural_assumption_violation,
                    name_ + ": a(x,xi) has the wrong number of components");
    }
    double dot = 0;
    for (std::size_t i = 0; i < xi.size(); ++i)
    {
        dot += value[i] * xi[i];
    }
    double const xi2 = norm2(xi);
    double const tol = 1e-12 * (1 + xi2 * xi2);
    if (dot < alpha_ * xi2 * xi2 - tol)
    {
        std::ostringstream os;
        os << name_ << ": ellipticity a.xi >= alpha|xi|^2 fails (a.xi = " << dot
           << ", alpha|xi|^2 = " << alpha_ * xi2 * xi2 << ")";
        throw Error(ErrorKind::structural_assumption_violation, os.str());
    }
    double const an = norm2(value);
    if (an > beta_ * xi2 + 1e-12 * (1 + xi2))
    {
        std::ostringstream os;
        os << name_ << ": growth |a| <= beta|xi| fails (|a| = " << an
           << ", beta|xi| = " << beta_ * xi2 << ")";
        throw Error(ErrorKind::structural_assumption_violation, os.str());
    }
}

std::vector<double> CoefficientField::operator()(Point x, Point xi) const
{
    std::vector<double> out(xi.begin(), xi.end());
    switch (kind_)
    {
    case CoefficientKind::identity:
        break;
    case CoefficientKind::diagonal: {
        double const d = diag_(norm2(x));
        if (!(d >= alpha_ * (1 - 1e-12) && d <= beta_ * (1 + 1e-12)))
        {
            throw Error(ErrorKind::structural_assumption_violation,
                        "diagonal entry outside [alpha, beta]");
        }
        for (double& v : out)
        {
            v *= d;
        }
        break;
    }
    case CoefficientKind::nonlinear_demo: {
        double const f = demo_factor(norm2(xi));
        for (double& v : out)
        {
            v *= f;
        }
        break;
    }
    case CoefficientKind::custom:
        out = custom_(x, xi);
        check_structure(xi, out);
        break;
    }
    return out;
}

double CoefficientField::radial_flux(double r, double s) const
{
    switch (kind_)
    {
    case CoefficientKind::identity: return s;
    case CoefficientKind::diagonal: {
        double const x[1] = {r};
        double const xi[1] = {s};
        return (*this)(x, xi)[0];
    }
    case CoefficientKind::nonlinear_demo: return s * demo_factor(std::abs(s));
    case CoefficientKind::custom: {
        double const x[1] = {r};
        double const xi[1] = {s};
        return (*this)(x, xi)[0];
    }
    }
    return s;
}

double CoefficientField::radial_slope(double r, double s) const
{
    switch (kind_)
    {
    case CoefficientKind::identity: return 1;
    case CoefficientKind::diagonal: return diag_(std::abs(r));
    case CoefficientKind::nonlinear_demo: {
        double const t = std::abs(s);
        return 1 + 0.5 * (t * t + 2 * t) / ((1 + t) * (1 + t));
    }
    case CoefficientKind::custom: {
        double const h = 1e-6 * std::max(1.0, std::abs(s));
        return (radial_flux(r, s + h) - radial_flux(r, s - h)) / (2 * h);
    }
    }
    return 1;
}

double CoefficientField::radial_secant(double r, double s) const
{
    if (std::abs(s) < 1e-14)
    {
        return radial_slope(r, 0);
    }
    return radial_flux(r, s) / s;
}

std::vector<double> eval_coefficient(CoefficientField const& a,
                                     std::span<double const> x,
                                     std::span<double const> xi)
{
    for (double v : xi)
    {
        if (!std::isfinite(v))
        {
            throw Error(ErrorKind::invalid_argument, "xi must be finite");
        }
    }
    return a(x, xi);
}

//---------------------------------------------------------------------------//
// Datum
//---------------------------------------------------------------------------//

Datum Datum::zero()
{
    Datum d = closed_form([](double) { return 0.0; }, std::numeric_limits<double>::infinity(), "zero");
    return d;
}

Datum Datum::constant(double c)
{
    std::ostringstream os;
    os << "constant(" << c << ")";
    return closed_form([c](double) { return c; }, std::numeric_limits<double>::infinity(), os.str());
}

Datum Datum::closed_form(Fn f, double summability, std::string name)
{
    Datum d;
    d.kind_ = DatumKind::closed_form;
    d.base_ = std::move(f);
    d.summability_ = summability;
    d.name_ = std::move(name);
    return d;
}

Datum Datum::nodal(std::vector<double> nodes, std::vector<double> values, std::string name)
{
    if (nodes.size() != values.size() || nodes.size() < 2)
    {
        throw Error(ErrorKind::invalid_argument, "nodal datum needs matching node/value arrays of size >= 2");
    }
    if (!std::is_sorted(nodes.begin(), nodes.end()))
    {
        throw Error(ErrorKind::invalid_argument, "nodal datum nodes must be increasing");
    }
    auto shared = std::make_shared<std::pair<std::vector<double>, std::vector<double>> const>(
        std::move(nodes), std::move(values));
    Datum d;
    d.kind_ = DatumKind::nodal;
    d.base_ = [shared](double r) {
        auto const& [x, y] = *shared;
        if (r <= x.front())
        {
            return y.front();
        }
        if (r >= x.back())
        {
            return y.back();
        }
        auto it = std::upper_bound(x.begin(), x.end(), r);
        auto const i = static_cast<std::size_t>(it - x.begin()) - 1;
        double const t = (r - x[i]) / (x[i + 1] - x[i]);
        return (1 - t) * y[i] + t * y[i + 1];
    };
    d.summability_ = std::numeric_limits<double>::infinity();
    d.name_ = std::move(name);
    return d;
}

Datum Datum::nodal(GridFunction const& g, std::string name)
{
    return nodal(g.mesh().nodes(), g.values(), std::move(name));
}

Datum Datum::mollified_dirac(int n, int dimension)
{
    if (n < 1 || dimension < 3)
    {
        throw Error(ErrorKind::invalid_argument, "mollified Dirac needs n >= 1 and N > 2");
    }
    double const radius = 1.0 / n;
    double const c = dimension * std::pow(static_cast<double>(n), dimension) / surface_area(dimension);
    Datum d;
    d.kind_ = DatumKind::mollified_dirac;
    d.base_ = [radius, c](double r) { return r <= radius ? c : 0.0; };
    d.summability_ = std::numeric_limits<double>::infinity();
    d.dirac_n_ = n;
    d.name_ = "mollified-dirac(" + std::to_string(n) + ")";
    return d;
}

double Datum::operator()(double r) const
{
    double v = base_ ? base_(r) : 0.0;
    if (std::isfinite(level_))
    {
        v = std::max(-level_, std::min(v, level_));
    }
    return scale_ * v;
}

Datum Datum::truncated(double k) const
{
    if (!(k >= 0))
    {
        throw Error(ErrorKind::invalid_truncation_level, "truncation level must be >= 0");
    }
    Datum d = *this;
    if (scale_ != 1)
    {
        // T_k(c g) with the scale folded into a new base
        Datum inner = *this;
        d.base_ = [inner](double r) { return inner(r); };
        d.scale_ = 1;
        d.level_ = k;
    }
    else
    {
        d.level_ = std::min(level_, k);
    }
    d.name_ = "T_" + std::to_string(k) + "(" + name_ + ")";
    return d;
}

Datum Datum::scaled(double c) const
{
    Datum d = *this;
    d.scale_ *= c;
    return d;
}

Datum truncate_datum(Datum const& f, int n)
{
    if (n < 1)
    {
        throw Error(ErrorKind::invalid_argument, "truncate_datum needs n >= 1");
    }
    Datum d = f.truncated(n);
    return d;
}

//---------------------------------------------------------------------------//
// ProblemSpec / ManufacturedSolution
//---------------------------------------------------------------------------//

std::string to_string(DomainKind d)
{
    return d == DomainKind::radial_ball ? "radial-ball" : "interval";
}

void ProblemSpec::validate() const
{
    if (!(gamma > 0))
    {
        throw Error(ErrorKind::invalid_argument, "gamma must be > 0");
    }
    if (domain == DomainKind::radial_ball && dimension <= 2)
    {
        throw Error(ErrorKind::invalid_argument, "radial-ball domains need N > 2");
    }
}

ManufacturedSolution::ManufacturedSolution(double sigma, int dimension, double gamma)
    : sigma_(sigma), dimension_(dimension), gamma_(gamma)
{
    if (!(gamma > 0) || dimension <= 2)
    {
        throw Error(ErrorKind::invalid_argument, "manufactured solution needs gamma > 0 and N > 2");
    }
    if (!(sigma > 2 / gamma && sigma < dimension - 2))
    {
        std::ostringstream os;
        os << "need 2/gamma < sigma < N-2, got " << 2 / gamma << " < " << sigma << " < " << dimension - 2;
        throw Error(ErrorKind::sigma_out_of_window, os.str());
    }
}

double ManufacturedSolution::u(double r) const { return std::pow(r, -sigma_) - 1; }

double ManufacturedSolution::du(double r) const { return -sigma_ * std::pow(r, -sigma_ - 1); }

double ManufacturedSolution::f(double r) const
{
    double const c = sigma_ * (dimension_ - 2 + sigma_ * (gamma_ - 1));
    return c * std::pow(r, sigma_ * (gamma_ - 1) - 2) + std::pow(r, -sigma_) - 1;
}

double ManufacturedSolution::pde_residual(double r) const
{
    // (r^(N-1) u' W(u))' expanded by the product rule, W(u) = (1+u)^-gamma
    double const n1 = dimension_ - 1;
    double const uu = u(r);
    double const u1 = du(r);
    double const u2 = sigma_ * (sigma_ + 1) * std::pow(r, -sigma_ - 2);
    double const w = std::pow(1 + uu, -gamma_);
    double const dw = -gamma_ * std::pow(1 + uu, -gamma_ - 1);
    double const flux_prime = n1 * std::pow(r, n1 - 1) * u1 * w + std::pow(r, n1) * (u2 * w + u1 * u1 * dw);
    return -std::pow(r, -n1) * flux_prime + uu - f(r);
}

Datum ManufacturedSolution::datum() const
{
    ManufacturedSolution const copy = *this;
    // f ~ r^(sigma(gamma-1)-2) + r^-sigma near 0; f in L^m iff m * max(...) < N
    double const worst = std::max(2 - sigma_ * (gamma_ - 1), sigma_);
    double const m = worst > 0 ? dimension_ / worst : std::numeric_limits<double>::infinity();
    std::ostringstream os;
    os << "manufactured(sigma=" << sigma_ << ",N=" << dimension_ << ",gamma=" << gamma_ << ")";
    return Datum::closed_form([copy](double r) { return copy.f(r); }, m, os.str());
}

ProblemSpec ManufacturedSolution::problem() const
{
    ProblemSpec p;
    p.gamma = gamma_;
    p.dimension = dimension_;
    p.domain = DomainKind::radial_ball;
    p.coefficient = CoefficientField::identity();
    p.datum = datum();
    return p;
}

ManufacturedSolution manufactured_solution(double sigma, int dimension, double gamma)
{
    return ManufacturedSolution(sigma, dimension, gamma);
}

} // namespace degenelab
