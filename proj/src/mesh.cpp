#include "degenelab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "degenelab/error.hpp"

namespace degenelab
{

namespace
{
// Gauss-Legendre on [-1, 1], exact through degree 5
constexpr std::array<double, 3> kGaussPoint = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
constexpr std::array<double, 3> kGaussWeight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr std::array<double, 3> kShapeLeft = {
    0.5 * (1 + 0.77459666924148337704), 0.5, 0.5 * (1 - 0.77459666924148337704)};
constexpr std::array<double, 3> kShapeRight = {
    0.5 * (1 - 0.77459666924148337704), 0.5, 0.5 * (1 + 0.77459666924148337704)};

std::vector<double> graded_nodes(int elements, double grading)
{
    if (!(grading > 0 && grading <= 1))
    {
        throw Error(ErrorKind::invalid_grading, "grading must lie in (0, 1]");
    }
    if (elements < 1)
    {
        throw Error(ErrorKind::invalid_mesh, "need at least one element");
    }
    // lengths proportional to q^(M-1-i), smallest at the origin
    std::vector<double> len(elements);
    double total = 0;
    for (int i = 0; i < elements; ++i)
    {
        len[i] = std::pow(grading, elements - 1 - i);
        total += len[i];
    }
    std::vector<double> nodes(elements + 1, 0.0);
    double acc = 0;
    for (int i = 0; i < elements; ++i)
    {
        acc += len[i];
        nodes[i + 1] = acc / total;
    }
    nodes.back() = 1.0;
    return nodes;
}
} // namespace

double surface_area(int dimension)
{
    double const n = dimension;
    return 2 * std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2);
}

double grading_for_ratio(int elements, double ratio)
{
    if (!(ratio > 0 && ratio <= 1) || elements < 1)
    {
        throw Error(ErrorKind::invalid_grading, "size ratio must lie in (0, 1]");
    }
    if (elements == 1)
    {
        return 1.0;
    }
    return std::pow(ratio, 1.0 / (elements - 1));
}

double RadialMesh::shape_left(int q) { return kShapeLeft[q]; }
double RadialMesh::shape_right(int q) { return kShapeRight[q]; }

RadialMesh::RadialMesh(DomainKind domain, int dimension, std::vector<double> nodes)
    : domain_(domain), dimension_(dimension), nodes_(std::move(nodes))
{
    if (domain_ == DomainKind::radial_ball && dimension_ <= 2)
    {
        throw Error(ErrorKind::invalid_mesh, "radial-ball meshes need N > 2");
    }
    if (nodes_.size() < 2 || nodes_.front() != 0.0 || nodes_.back() != 1.0)
    {
        throw Error(ErrorKind::invalid_mesh, "nodes must run from 0 to 1");
    }
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    {
        if (!(nodes_[i + 1] > nodes_[i]))
        {
            throw Error(ErrorKind::invalid_mesh, "nodes must be strictly increasing");
        }
    }
    surface_ = domain_ == DomainKind::radial_ball ? surface_area(dimension_) : 1.0;

    std::size_t const ne = num_elements();
    points_.resize(ne * kQuadPoints);
    measures_.resize(ne * kQuadPoints);
    element_measure_.assign(ne, 0.0);
    lumped_.assign(nodes_.size(), 0.0);
    for (std::size_t e = 0; e < ne; ++e)
    {
        double const h = length(e);
        double const mid = 0.5 * (nodes_[e] + nodes_[e + 1]);
        for (int q = 0; q < kQuadPoints; ++q)
        {
            double const r = mid + 0.5 * h * kGaussPoint[q];
            double const dx = surface_ * 0.5 * h * kGaussWeight[q] * weight(r);
            points_[e * kQuadPoints + q] = r;
            measures_[e * kQuadPoints + q] = dx;
            element_measure_[e] += dx;
            lumped_[e] += dx * kShapeLeft[q];
            lumped_[e + 1] += dx * kShapeRight[q];
        }
    }
}

RadialMesh RadialMesh::ball(int dimension, int elements, double grading)
{
    if (dimension <= 2)
    {
        throw Error(ErrorKind::invalid_mesh, "radial-ball meshes need N > 2");
    }
    if (elements < 2)
    {
        throw Error(ErrorKind::invalid_mesh, "need at least two elements");
    }
    return RadialMesh(DomainKind::radial_ball, dimension, graded_nodes(elements, grading));
}

RadialMesh RadialMesh::interval(int elements, double grading)
{
    return RadialMesh(DomainKind::interval, 1, graded_nodes(elements, grading));
}

RadialMesh RadialMesh::from_nodes(DomainKind domain, int dimension, std::vector<double> nodes)
{
    return RadialMesh(domain, domain == DomainKind::interval ? 1 : dimension, std::move(nodes));
}

RadialMesh build_radial_mesh(int dimension, int elements, double grading)
{
    return RadialMesh::ball(dimension, elements, grading);
}

double RadialMesh::weight(double r) const
{
    return domain_ == DomainKind::radial_ball ? std::pow(r, dimension_ - 1) : 1.0;
}

double RadialMesh::volume() const
{
    double v = 0;
    for (double m : element_measure_)
    {
        v += m;
    }
    return v;
}

bool RadialMesh::same_as(RadialMesh const& other) const
{
    return this == &other
           || (domain_ == other.domain_ && dimension_ == other.dimension_ && nodes_ == other.nodes_);
}

void require_same_mesh(RadialMesh const& a, RadialMesh const& b)
{
    if (!a.same_as(b))
    {
        throw Error(ErrorKind::mesh_mismatch, "grid functions live on different meshes");
    }
}

//---------------------------------------------------------------------------//
// GridFunction
//---------------------------------------------------------------------------//

GridFunction::GridFunction(std::shared_ptr<RadialMesh const> mesh, std::vector<double> values, bool pinned)
    : mesh_(std::move(mesh)), values_(std::move(values)), pinned_(pinned)
{
    if (!mesh_ || values_.size() != mesh_->num_nodes())
    {
        throw Error(ErrorKind::invalid_argument, "grid function size does not match its mesh");
    }
    if (pinned_)
    {
        values_.back() = 0.0;
    }
}

GridFunction GridFunction::zeros(std::shared_ptr<RadialMesh const> mesh)
{
    auto const n = mesh->num_nodes();
    return GridFunction(std::move(mesh), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::interpolate(std::shared_ptr<RadialMesh const> mesh,
                                       std::function<double(double)> const& fn,
                                       bool pinned)
{
    std::vector<double> v;
    v.reserve(mesh->num_nodes());
    for (double r : mesh->nodes())
    {
        v.push_back(fn(r));
    }
    return GridFunction(std::move(mesh), std::move(v), pinned);
}

double GridFunction::evaluate(double r) const
{
    auto const& x = mesh_->nodes();
    if (r <= 0)
    {
        return values_.front();
    }
    if (r >= 1)
    {
        return values_.back();
    }
    auto it = std::upper_bound(x.begin(), x.end(), r);
    auto const i = static_cast<std::size_t>(it - x.begin()) - 1;
    double const t = (r - x[i]) / (x[i + 1] - x[i]);
    return (1 - t) * values_[i] + t * values_[i + 1];
}

double GridFunction::max_abs() const
{
    double m = 0;
    for (double v : values_)
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

GridFunction GridFunction::map(std::function<double(double)> const& fn) const
{
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return GridFunction(mesh_, std::move(v), pinned_);
}

GridFunction operator-(GridFunction const& u, GridFunction const& z)
{
    require_same_mesh(u.mesh(), z.mesh());
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        v[i] = u[i] - z[i];
    }
    return GridFunction(u.mesh_ptr(), std::move(v), u.pinned() && z.pinned());
}

//---------------------------------------------------------------------------//
// Sampling
//---------------------------------------------------------------------------//

std::vector<double> sample_quadrature(RadialMesh const& mesh, Datum const& f)
{
    std::vector<double> out(mesh.num_elements() * RadialMesh::kQuadPoints);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < RadialMesh::kQuadPoints; ++q)
        {
            out[e * RadialMesh::kQuadPoints + q] = f(mesh.point(e, q));
        }
    }
    return out;
}

std::vector<double> sample_nodes(RadialMesh const& mesh, Datum const& f)
{
    std::vector<double> out;
    out.reserve(mesh.num_nodes());
    for (double r : mesh.nodes())
    {
        out.push_back(f(r));
    }
    return out;
}

double quadrature_sup(RadialMesh const& mesh, Datum const& f)
{
    double m = 0;
    for (double v : sample_quadrature(mesh, f))
    {
        m = std::max(m, std::abs(v));
    }
    return m;
}

//---------------------------------------------------------------------------//
// Integrals
//---------------------------------------------------------------------------//

namespace
{
constexpr int Q = RadialMesh::kQuadPoints;

double pow_abs(double v, double p)
{
    double const a = std::abs(v);
    return p == 1 ? a : (p == 2 ? a * a : std::pow(a, p));
}

template<class G>
double restricted_sum(GridFunction const& u, G const& g, double k, double p)
{
    if (!(k >= 0) || !(p >= 1))
    {
        throw Error(ErrorKind::invalid_argument, "restricted integral needs k >= 0 and p >= 1");
    }
    RadialMesh const& mesh = u.mesh();
    double sum = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < Q; ++q)
        {
            if (std::abs(u.at(e, q)) >= k)
            {
                sum += pow_abs(g(e, q), p) * mesh.measure(e, q);
            }
        }
    }
    return sum;
}
} // namespace

double lp_norm(GridFunction const& u, double p)
{
    if (!(p >= 1))
    {
        throw Error(ErrorKind::invalid_argument, "lp_norm needs p >= 1");
    }
    RadialMesh const& mesh = u.mesh();
    double sum = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < Q; ++q)
        {
            sum += pow_abs(u.at(e, q), p) * mesh.measure(e, q);
        }
    }
    return std::pow(sum, 1 / p);
}

double lp_norm(RadialMesh const& mesh, Datum const& f, double p)
{
    if (!(p >= 1))
    {
        throw Error(ErrorKind::invalid_argument, "lp_norm needs p >= 1");
    }
    double sum = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int q = 0; q < Q; ++q)
        {
            sum += pow_abs(f(mesh.point(e, q)), p) * mesh.measure(e, q);
        }
    }
    return std::pow(sum, 1 / p);
}

double w11_seminorm(GridFunction const& u)
{
    return restricted_w11(u, 0.0);
}

double restricted_w11(GridFunction const& u, double k)
{
    return restricted_sum(u, [&u](std::size_t e, int) { return u.slope(e); }, k, 1.0);
}

double restricted_integral(GridFunction const& u, GridFunction const& g, double k, double p)
{
    require_same_mesh(u.mesh(), g.mesh());
    return restricted_sum(u, [&g](std::size_t e, int q) { return g.at(e, q); }, k, p);
}

double restricted_integral(GridFunction const& u, Datum const& g, double k, double p)
{
    RadialMesh const& mesh = u.mesh();
    return restricted_sum(u, [&](std::size_t e, int q) { return g(mesh.point(e, q)); }, k, p);
}

double weighted_gradient_energy(GridFunction const& u, double exponent, double k)
{
    if (!(exponent >= 0))
    {
        throw Error(ErrorKind::invalid_argument, "energy exponent must be >= 0");
    }
    RadialMesh const& mesh = u.mesh();
    double sum = 0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        double const s = u.slope(e);
        for (int q = 0; q < Q; ++q)
        {
            double const uq = u.at(e, q);
            if (std::abs(uq) >= k)
            {
                sum += s * s * std::pow(1 + std::abs(uq), -exponent) * mesh.measure(e, q);
            }
        }
    }
    return sum;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

void write_csv(std::ostream& os, GridFunction const& u)
{
    auto const old = os.precision(17);
    // RFC-4180 line endings, same as the report writers
    os << "r,value\r\n";
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        os << u.mesh().nodes()[i] << ',' << u[i] << "\r\n";
    }
    os.precision(old);
}

std::pair<std::vector<double>, std::vector<double>> read_grid_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("r,value", 0) != 0)
    {
        throw Error(ErrorKind::parse_error, "expected header 'r,value'");
    }
    std::vector<double> r, v;
    std::size_t lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty() || line == "\r")
        {
            continue;
        }
        auto const comma = line.find(',');
        try
        {
            if (comma == std::string::npos)
            {
                throw std::invalid_argument("missing comma");
            }
            r.push_back(std::stod(line.substr(0, comma)));
            v.push_back(std::stod(line.substr(comma + 1)));
        }
        catch (std::exception const&)
        {
            throw Error(ErrorKind::parse_error, "bad row at line " + std::to_string(lineno));
        }
    }
    return {std::move(r), std::move(v)};
}

} // namespace degenelab
