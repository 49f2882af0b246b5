#pragma once

// Concentrating data f_n -> delta_0 on the unit ball: for gamma > 1 the
// approximate solutions vanish away from the origin while u_n f_n-pairings
// converge to the point mass.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "degenelab/certificates.hpp"
#include "degenelab/mesh.hpp"
#include "degenelab/problem.hpp"
#include "degenelab/solver.hpp"

namespace degenelab
{

//! N n^N / omega_{N-1} on [0, 1/n], zero beyond.
Datum mollified_dirac(int n, int dimension);

//! Probe phi_j(r) = (1 - r^2)^j with phi_j(0) = 1.
double probe(int j, double r);
double probe_derivative(int j, double r);

/*!
 * Ball mesh with a breakpoint at every 1/n, `per_segment` uniform elements
 * between consecutive breakpoints (and on [0, 1/max n]), and no element longer
 * than `max_length`.
 */
RadialMesh build_dirac_mesh(int dimension, std::vector<int> const& n_list, int per_segment = 16,
                            double max_length = 1.0 / 128);

struct DiracRecord
{
    int n = 0;
    int iterations = 0;
    //! max u_n over nodes with r >= r_cut.
    double sup_tail = 0;
    //! int u_n phi_j dx for j = 1, 2.
    double pairing_phi1 = 0;
    double pairing_phi2 = 0;
    //! int |u_n'|^2 / (1+|u_n|)^(2 gamma) dx.
    double energy = 0;
    //! int |a(u_n') / (1+|u_n|)^gamma|^2 dx.
    double flux_norm = 0;
    //! int a(u_n') phi_j' / (1+|u_n|)^gamma dx for j = 1, 2.
    double flux_phi1 = 0;
    double flux_phi2 = 0;
    //! int f_n dx.
    double mass = 0;
};

struct DiracExperimentReport
{
    double gamma = 0;
    int dimension = 0;
    double alpha = 1;
    double r_cut = 0.2;
    std::vector<DiracRecord> records;
    //! (a) tail sup eventually decreasing, final < 5% of initial.
    bool collapse = false;
    //! (b) |pairing - phi(0)| decreasing over the last three n, both probes.
    bool absorption = false;
    //! (c) alpha (gamma-1) energy <= mass (1 + 5%) for every n.
    bool energy_bound = false;
};

struct DiracConfig
{
    double gamma = 2;
    int dimension = 3;
    std::vector<int> n_list{8, 16, 32, 64};
    double r_cut = 0.2;
    CoefficientField coefficient = CoefficientField::identity();
    SolverConfig solver;
};

//! Data family indexed by n; defaults to mollified_dirac.
using DatumFamily = std::function<Datum(int n)>;

/*!
 * Solve with f_n = mollified_dirac(n) on `mesh` for each n.  Throws
 * gamma_not_supercritical for gamma <= 1.  With no mesh, build_dirac_mesh is used.
 */
DiracExperimentReport run_dirac_experiment(DiracConfig const& config,
                                           std::shared_ptr<RadialMesh const> mesh = nullptr);

/*!
 * Same pipeline without the gamma > 1 precondition, for control runs
 * (f = 0, subcritical contrast).  Verdicts are computed but carry no claim.
 */
DiracExperimentReport run_dirac_diagnostic(DiracConfig const& config, DatumFamily const& family,
                                           std::shared_ptr<RadialMesh const> mesh = nullptr);

//! Flux pairings eventually decreasing with final/initial below 10%, worst probe.
CertificateReport flux_collapse_check(DiracExperimentReport const& report);

//! Per-claim certificates for verdicts (a)-(c) followed by the flux check.
std::vector<CertificateReport> dirac_certificates(DiracExperimentReport const& report);

//---------------------------------------------------------------------------//
// Manufactured-solution convergence
//---------------------------------------------------------------------------//

//! ||u - u_exact||_2 by quadrature.
double manufactured_l2_error(GridFunction const& u, ManufacturedSolution const& ms);
//! int |u' - u_exact'| dx by quadrature.
double manufactured_w11_error(GridFunction const& u, ManufacturedSolution const& ms);

struct MmsRow
{
    int elements = 0;
    int n = 0;
    int iterations = 0;
    double residual = 0;
    double linf = 0;
    double l2_error = 0;
    double w11_error = 0;
};

struct MmsStudy
{
    std::vector<MmsRow> rows;
    //! log(e_k / e_{k+1}) / log(M_{k+1} / M_k) between successive meshes.
    std::vector<double> l2_orders;
    std::vector<double> w11_orders;
};

/*!
 * Solve with f = T_n(f_exact) on graded ball meshes with the given element
 * counts and smallest/largest element ratio; n_list pairs with `elements`.
 */
MmsStudy run_mms_study(ManufacturedSolution const& ms,
                       std::vector<int> const& elements,
                       std::vector<int> const& n_list,
                       SolverConfig const& config,
                       double size_ratio = kDefaultSizeRatio);

//! Monotone decrease of both errors and L^2 order >= min_order.
std::vector<CertificateReport> mms_certificates(MmsStudy const& study, double min_order = 0.8);

} // namespace degenelab
