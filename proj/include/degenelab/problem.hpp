#pragma once

// Continuous problem data for
//
//   -div( a(x, grad u) / (1 + |u|)^gamma ) + u = f   in Omega,   u = 0 on dOmega,
//
// with Omega the unit ball in R^N (radial) or the unit interval.

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace degenelab
{

class GridFunction;

/// Clamp s to [-k, k].  Throws invalid_truncation_level for k < 0.
double truncate(double s, double k);

/// 1 / (1 + |u|)^gamma.
double degeneracy_weight(double u, double gamma);

/// sgn with sgn(0) = 0.
inline double sign(double s) { return (s > 0) - (s < 0); }

//---------------------------------------------------------------------------//
// Coefficient fields
//---------------------------------------------------------------------------//

enum class CoefficientKind
{
    identity,
    diagonal,
    nonlinear_demo,
    custom,
};

/*!
 * Vector field a(x, xi) satisfying
 *   a(x,xi).xi >= alpha |xi|^2,   |a(x,xi)| <= beta |xi|,   strict monotonicity.
 *
 * Built-in kinds are trusted; custom fields are checked against the
 * ellipticity and growth bounds every time they are evaluated.
 *
 * For radially symmetric problems only the radial law
 *   s -> a(r e_1, s e_1) . e_1
 * enters the discretization; see radial_flux().
 */
class CoefficientField
{
  public:
    using Point = std::span<double const>;
    using VectorFn = std::function<std::vector<double>(Point x, Point xi)>;
    using ScalarFn = std::function<double(double r)>;

    static CoefficientField identity();
    //! Isotropic diagonal matrix d(|x|) I with alpha <= d <= beta.
    static CoefficientField diagonal(ScalarFn d, double alpha, double beta);
    //! a(xi) = xi + xi |xi| / (2 (1 + |xi|)); alpha = 1, beta = 3/2.
    static CoefficientField nonlinear_demo();
    static CoefficientField custom(VectorFn a, double alpha, double beta, std::string name = "custom");

    CoefficientKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::string const& name() const { return name_; }
    //! True for fields of the form A(x) xi.
    bool is_linear() const
    {
        return kind_ == CoefficientKind::identity || kind_ == CoefficientKind::diagonal;
    }

    //! Full vector evaluation a(x, xi).
    std::vector<double> operator()(Point x, Point xi) const;

    //! Radial law a(r e_1, s e_1) . e_1.
    double radial_flux(double r, double s) const;
    //! d/ds of the radial law.
    double radial_slope(double r, double s) const;
    //! Secant a(r,s)/s, with the slope at s = 0 for |s| < 1e-14.
    double radial_secant(double r, double s) const;

  private:
    CoefficientKind kind_ = CoefficientKind::identity;
    double alpha_ = 1;
    double beta_ = 1;
    std::string name_ = "identity";
    ScalarFn diag_;
    VectorFn custom_;

    void check_structure(Point xi, std::span<double const> value) const;
};

//! Evaluate a(x, xi); custom fields are validated at the sampled pair.
std::vector<double> eval_coefficient(CoefficientField const& a,
                                     std::span<double const> x,
                                     std::span<double const> xi);

//---------------------------------------------------------------------------//
// Data
//---------------------------------------------------------------------------//

enum class DatumKind
{
    closed_form,
    nodal,
    mollified_dirac,
};

/*!
 * Right-hand side f.
 *
 * A datum is a pointwise function of the radius, optionally composed with a
 * truncation T_level and a multiplicative factor:  scale * T_level(base(r)).
 * Composition is applied at every evaluation point, so |T_n f| <= |f| holds
 * wherever the datum is sampled.
 */
class Datum
{
  public:
    using Fn = std::function<double(double r)>;

    Datum() = default;

    static Datum zero();
    static Datum constant(double c);
    static Datum closed_form(Fn f, double summability, std::string name);
    //! Piecewise-linear interpolant of nodal values.
    static Datum nodal(std::vector<double> nodes, std::vector<double> values, std::string name = "nodal");
    static Datum nodal(GridFunction const& g, std::string name = "nodal");
    //! N n^N / omega_{N-1} on [0, 1/n], zero beyond: unit mass on the N-ball.
    static Datum mollified_dirac(int n, int dimension);

    DatumKind kind() const { return kind_; }
    std::string const& name() const { return name_; }
    //! Declared Lebesgue exponent m (f in L^m).
    double summability() const { return summability_; }
    //! Truncation level applied after the base function (infinity if none).
    double truncation_level() const { return level_; }
    double scale() const { return scale_; }
    //! Index n of a mollified Dirac datum, 0 otherwise.
    int dirac_index() const { return dirac_n_; }

    double operator()(double r) const;

    //! The datum T_k(.) composed on top of this one.
    Datum truncated(double k) const;
    //! The datum c * (.).
    Datum scaled(double c) const;

  private:
    DatumKind kind_ = DatumKind::closed_form;
    Fn base_;
    double level_ = std::numeric_limits<double>::infinity();
    double scale_ = 1;
    double summability_ = std::numeric_limits<double>::infinity();
    int dirac_n_ = 0;
    std::string name_;
};

//! f_n = T_n o f.  Requires n >= 1.
Datum truncate_datum(Datum const& f, int n);

//---------------------------------------------------------------------------//
// Problem
//---------------------------------------------------------------------------//

enum class DomainKind
{
    radial_ball,
    interval,
};

std::string to_string(DomainKind d);

struct ProblemSpec
{
    double gamma = 1;
    int dimension = 3;
    DomainKind domain = DomainKind::radial_ball;
    CoefficientField coefficient = CoefficientField::identity();
    Datum datum = Datum::zero();

    //! Throws invalid_argument unless gamma > 0 and (ball) N > 2.
    void validate() const;
    //! (gamma + 2) / 2, the Lebesgue exponent of the existence theory.
    double natural_exponent() const { return (gamma + 2) / 2; }
};

/*!
 * Exact radial solution on the unit ball with identity coefficient:
 *
 *   u(r) = r^-sigma - 1,
 *   f(r) = sigma (N - 2 + sigma (gamma - 1)) r^(sigma (gamma - 1) - 2) + r^-sigma - 1,
 *
 * valid for 2/gamma < sigma < N - 2.
 */
class ManufacturedSolution
{
  public:
    ManufacturedSolution(double sigma, int dimension, double gamma);

    double sigma() const { return sigma_; }
    int dimension() const { return dimension_; }
    double gamma() const { return gamma_; }

    double u(double r) const;
    double du(double r) const;
    double f(double r) const;

    //! Pointwise residual of the radial equation
    //!   -r^(1-N) (r^(N-1) u' / (1+u)^gamma)' + u - f.
    double pde_residual(double r) const;

    Datum datum() const;
    ProblemSpec problem() const;

  private:
    double sigma_;
    int dimension_;
    double gamma_;
};

ManufacturedSolution manufactured_solution(double sigma, int dimension, double gamma);

} // namespace degenelab
