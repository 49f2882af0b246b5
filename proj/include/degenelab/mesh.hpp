#pragma once

// Weighted one-dimensional P1 infrastructure.  A radially symmetric function on
// the unit ball of R^N is represented on (0, 1] with the measure
//   dx = omega_{N-1} r^(N-1) dr,
// and the unit interval uses dx = dr.  Every integral below is a physical
// integral over Omega computed by 3-point Gauss quadrature per element.

#include <array>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "degenelab/problem.hpp"

namespace degenelab
{

//! omega_{N-1} = 2 pi^(N/2) / Gamma(N/2), the area of the unit sphere in R^N.
double surface_area(int dimension);

//! Grading q giving smallest/largest element ratio `ratio` on `elements` cells.
double grading_for_ratio(int elements, double ratio);

//! Smallest/largest element ratio of a 64-element mesh with q = 0.85.
inline double const kDefaultSizeRatio = std::pow(0.85, 63);

class RadialMesh
{
  public:
    static constexpr int kQuadPoints = 3;

    //! Unit ball in R^N; element lengths grow by 1/q away from the origin.
    static RadialMesh ball(int dimension, int elements, double grading);
    //! Unit interval with weight 1; same grading convention.
    static RadialMesh interval(int elements, double grading = 1.0);
    static RadialMesh from_nodes(DomainKind domain, int dimension, std::vector<double> nodes);

    DomainKind domain() const { return domain_; }
    int dimension() const { return dimension_; }
    std::vector<double> const& nodes() const { return nodes_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_elements() const { return nodes_.size() - 1; }
    double length(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }

    //! r^(N-1) on the ball, 1 on the interval.
    double weight(double r) const;
    double surface_factor() const { return surface_; }

    //! Quadrature point q of element e.
    double point(std::size_t e, int q) const { return points_[e * kQuadPoints + q]; }
    //! Measure dx carried by quadrature point q of element e (weight and surface factor included).
    double measure(std::size_t e, int q) const { return measures_[e * kQuadPoints + q]; }
    //! P1 shape values at the reference quadrature points: left node, right node.
    static double shape_left(int q);
    static double shape_right(int q);

    //! Measure of element e.
    double element_measure(std::size_t e) const { return element_measure_[e]; }
    //! Lumped mass integral of phi_i dx.
    double lumped_mass(std::size_t i) const { return lumped_[i]; }
    std::span<double const> lumped_mass() const { return lumped_; }

    double volume() const;

    //! Same geometry (domain, dimension, nodes).
    bool same_as(RadialMesh const& other) const;

  private:
    RadialMesh(DomainKind domain, int dimension, std::vector<double> nodes);

    DomainKind domain_;
    int dimension_;
    double surface_;
    std::vector<double> nodes_;
    std::vector<double> points_;
    std::vector<double> measures_;
    std::vector<double> element_measure_;
    std::vector<double> lumped_;
};

//! build_radial_mesh(N, elements, q): the unit-ball mesh.
RadialMesh build_radial_mesh(int dimension, int elements, double grading);

/*!
 * Nodal values on a mesh with P1 interpolation.  With the boundary flag set,
 * the value at r = 1 is pinned to 0.
 */
class GridFunction
{
  public:
    GridFunction(std::shared_ptr<RadialMesh const> mesh, std::vector<double> values, bool pinned = true);

    static GridFunction zeros(std::shared_ptr<RadialMesh const> mesh);
    static GridFunction interpolate(std::shared_ptr<RadialMesh const> mesh,
                                    std::function<double(double)> const& fn,
                                    bool pinned = true);

    RadialMesh const& mesh() const { return *mesh_; }
    std::shared_ptr<RadialMesh const> const& mesh_ptr() const { return mesh_; }
    std::vector<double> const& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    bool pinned() const { return pinned_; }

    //! Interpolant at quadrature point q of element e.
    double at(std::size_t e, int q) const
    {
        return values_[e] * RadialMesh::shape_left(q) + values_[e + 1] * RadialMesh::shape_right(q);
    }
    //! Constant derivative on element e.
    double slope(std::size_t e) const { return (values_[e + 1] - values_[e]) / mesh_->length(e); }
    //! Interpolant at an arbitrary radius in [0, 1].
    double evaluate(double r) const;

    double max_abs() const;
    GridFunction map(std::function<double(double)> const& fn) const;

  private:
    std::shared_ptr<RadialMesh const> mesh_;
    std::vector<double> values_;
    bool pinned_;
};

//! u - z; throws mesh_mismatch on different meshes.
GridFunction operator-(GridFunction const& u, GridFunction const& z);

void require_same_mesh(RadialMesh const& a, RadialMesh const& b);

//---------------------------------------------------------------------------//
// Sampling data on a mesh
//---------------------------------------------------------------------------//

//! Datum values at every quadrature point, element-major.
std::vector<double> sample_quadrature(RadialMesh const& mesh, Datum const& f);
//! Datum values at the nodes.
std::vector<double> sample_nodes(RadialMesh const& mesh, Datum const& f);
//! max |f| over the quadrature points.
double quadrature_sup(RadialMesh const& mesh, Datum const& f);

//---------------------------------------------------------------------------//
// Norms and restricted integrals
//---------------------------------------------------------------------------//

//! (int |u|^p dx)^(1/p).
double lp_norm(GridFunction const& u, double p);
double lp_norm(RadialMesh const& mesh, Datum const& f, double p);

//! int |u'| dx.
double w11_seminorm(GridFunction const& u);
//! int over {|u| >= k} of |u'| dx, the indicator taken at quadrature points.
double restricted_w11(GridFunction const& u, double k);

//! int over {|u| >= k} of |g|^p dx, the indicator taken at quadrature points.
double restricted_integral(GridFunction const& u, GridFunction const& g, double k, double p);
double restricted_integral(GridFunction const& u, Datum const& g, double k, double p);

//! int over {|u| >= k} of |u'|^2 / (1 + |u|)^exponent dx.
double weighted_gradient_energy(GridFunction const& u, double exponent, double k = 0);

//! Plain Dirichlet energy int |u'|^2 dx.
inline double dirichlet_energy(GridFunction const& u) { return weighted_gradient_energy(u, 0.0); }

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

//! Header `r,value`, one row per node, 17 significant digits.
void write_csv(std::ostream& os, GridFunction const& u);
//! Returns (nodes, values) read from the `r,value` format.
std::pair<std::vector<double>, std::vector<double>> read_grid_csv(std::istream& is);

} // namespace degenelab
