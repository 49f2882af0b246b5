#pragma once

// Numerical certificates: each compares a computed left-hand side against a
// right-hand side built from the data, with a relative slack on the latter.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "degenelab/mesh.hpp"
#include "degenelab/problem.hpp"
#include "degenelab/solver.hpp"

namespace degenelab
{

inline constexpr double kDefaultSlack = 0.05;
//! Absolute tolerance added to every right-hand side.
inline constexpr double kCertificateAbsTol = 1e-8;

struct CertificateReport
{
    std::string name;
    double k = 0;
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    bool passed = false;
    std::string notes;
};

//! Report with passed = lhs <= rhs (1 + slack) + 1e-8.
CertificateReport make_certificate(std::string name, double k, double lhs, double rhs, double slack,
                                   std::string notes = {});

//---------------------------------------------------------------------------//
// A priori estimates for u_n
//---------------------------------------------------------------------------//

//! int_{|u|>=k} |u|^p  <=  int_{|u|>=k} |f|^p,  p = (gamma+2)/2.
CertificateReport check_estimate_aa(GridFunction const& u, Datum const& f, double gamma, double k,
                                    double slack = kDefaultSlack);

//! alpha (gamma/2) int_{|u|>=k} |u'|^2 / (1+|u|)^p  <=  int_{|u|>=k} |f| (1+|u|)^(gamma/2).
CertificateReport check_estimate_bb(GridFunction const& u, Datum const& f, double gamma, double k, double alpha,
                                    double slack = kDefaultSlack);

/*!
 * Cauchy-Schwarz step behind the W^{1,1} bound:
 *   int_{|u|>=k} |u'|  <=  (int_{|u|>=k} |u'|^2/(1+|u|)^p)^(1/2) (int_{|u|>=k} (1+|u|)^p)^(1/2).
 * The notes carry the fitted constant C = lhs / (int_{|u|>=k} |f|^p)^(1/(gamma+2)).
 */
CertificateReport check_estimate_cc(GridFunction const& u, Datum const& f, double gamma, double k,
                                    double slack = kDefaultSlack);

//! alpha int |(T_k u)'|^2  <=  k (1+k)^gamma ||f||_1.
CertificateReport check_estimate_dd(GridFunction const& u, Datum const& f, double gamma, double k, double alpha,
                                    double slack = kDefaultSlack);

//---------------------------------------------------------------------------//
// Contraction and ordering
//---------------------------------------------------------------------------//

//! ||u - z||_1 <= ||f - g||_1.  Throws mesh_mismatch.
CertificateReport check_l1_contraction(GridFunction const& u, GridFunction const& z, Datum const& f,
                                       Datum const& g, double slack = kDefaultSlack);

//! max(u - z) <= 0 at the nodes.  Throws hypothesis_violation unless f <= g at every node.
CertificateReport check_comparison(GridFunction const& u, GridFunction const& z, Datum const& f, Datum const& g);

/*!
 * Solution map S on the limits of two sequences:
 *   first:  ||S f - S g||_1 <= ||f - g||_1,
 *   second: ||S h||_p <= ||h||_p for h in {f, g}, reported for the tighter of the two.
 */
std::pair<CertificateReport, CertificateReport> check_nonexpansive_map(Datum const& f, Datum const& g,
                                                                       SequenceReport const& sf,
                                                                       SequenceReport const& sg,
                                                                       double slack = kDefaultSlack);

//! The two approximating sequences T_n f and T_n f (1 - 1/(2n)).
struct IndependenceRun
{
    SequenceReport truncated;
    SequenceReport deformed;
    CertificateReport report;
};

//! Limits of both sequences agree in L^1 within max(1e-6, 1% of the limit's L^1 norm).
IndependenceRun check_approximation_independence(ProblemSpec const& spec,
                                                 std::shared_ptr<RadialMesh const> const& mesh,
                                                 std::vector<int> const& n_list,
                                                 SolverConfig const& config);

//! (1 - 1/(2n)) T_n f.
Datum deformed_truncation(Datum const& f, int n);

//---------------------------------------------------------------------------//
// Substitutions
//---------------------------------------------------------------------------//

/*!
 * v = (4/(2-gamma)) ((1+|u|)^((2-gamma)/4) - 1) sgn(u), and v = log(1+|u|) sgn(u)
 * at gamma = 2.
 */
double substitution_v(double u, double gamma);
GridFunction substitution_v(GridFunction const& u, double gamma);

//! Inverse of substitution_v.  For gamma > 2 throws invalid_range when |v| >= 4/(gamma-2).
double substitution_v_inverse(double v, double gamma);
GridFunction substitution_v_inverse(GridFunction const& v, double gamma);

//! z = (1 - (1+u)^(1-gamma)) / (gamma-1) for gamma > 1.
double substitution_z(double u, double gamma);
GridFunction substitution_z(GridFunction const& u, double gamma);

//! (1 - (gamma-1) z)^(-1/(gamma-1)) - 1.  Throws invalid_range if (gamma-1) z >= 1.
double lower_order_term(double z, double gamma);
GridFunction lower_order_term(GridFunction const& z, double gamma);

/*!
 * Nodal weak residual of  -div(A grad z) + lower_order_term(z) = f  with z from
 * u, maximized over all but the Dirichlet node.  Requires gamma > 1 and a
 * linear coefficient.
 */
double substitution_z_residual(GridFunction const& u, ProblemSpec const& spec, RadialMesh const& mesh);

//---------------------------------------------------------------------------//
// Interpolation inequality
//---------------------------------------------------------------------------//

/*!
 * int |v'|  <=  (int |log(A+|v|)'|^2)^(1/2) (int (A+|v|)^2)^(1/2).
 * Requires A > 0 and v(1) = 0.
 */
CertificateReport check_interpolation(GridFunction const& v, double A, double slack = kDefaultSlack);

//---------------------------------------------------------------------------//
// Seeded random data
//---------------------------------------------------------------------------//

//! Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

//! Piecewise-linear datum on [0, 1] with 3-12 interior breakpoints, values in [lo, hi].
Datum random_piecewise_linear(std::mt19937_64& rng, double lo = -5, double hi = 5);

struct DatumPair
{
    Datum f;
    Datum g;
};

//! `count` pairs from `seed`.  With `ordered`, g = f + (nonnegative piecewise-linear bump).
std::vector<DatumPair> random_datum_pairs(std::uint64_t seed, int count, bool ordered);

//! Random nodal values in [-5, 5] with v(1) = 0.
GridFunction random_nodal_function(std::shared_ptr<RadialMesh const> const& mesh, std::mt19937_64& rng);

} // namespace degenelab
