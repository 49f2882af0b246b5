// Python module _degenelab.  Reports cross the boundary as JSON text and are
// decoded by the degenelab package.

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degenelab/certificates.hpp"
#include "degenelab/cli.hpp"
#include "degenelab/error.hpp"
#include "degenelab/experiment.hpp"
#include "degenelab/report.hpp"

namespace py = pybind11;
using namespace degenelab;
using nlohmann::json;

namespace
{
std::string dump(json const& j)
{
    std::ostringstream os;
    write_json(os, j);
    return os.str();
}

//! Piecewise-linear datum through samples on every element split eight ways.
Datum sample_callable(py::function const& fn, RadialMesh const& mesh)
{
    constexpr int kSplit = 8;
    std::vector<double> r;
    std::vector<double> v;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    {
        for (int k = 0; k < kSplit; ++k)
        {
            r.push_back(mesh.nodes()[e] + mesh.length(e) * k / kSplit);
        }
    }
    r.push_back(mesh.nodes().back());
    for (double x : r)
    {
        v.push_back(fn(x).cast<double>());
    }
    return Datum::nodal(std::move(r), std::move(v), "python");
}

std::string solve(std::string const& config_text, py::object const& datum_fn)
{
    RunConfig const config = finalize_config(parse_config_text(config_text));
    ProblemSpec spec = make_spec(config, config.gamma);
    auto const mesh = make_mesh(config, config.elements.front());
    if (!datum_fn.is_none())
    {
        spec.datum = sample_callable(datum_fn.cast<py::function>(), *mesh);
    }
    int const n = config.n_list.back();
    spec.datum = truncate_datum(spec.datum, n);
    SolverConfig const solver = make_solver(config);
    py::gil_scoped_release release;
    return dump(to_json(solve_bounded(spec, mesh, solver)));
}

std::string mms_study(double sigma, int dimension, double gamma, std::vector<int> const& elements,
                      std::vector<int> const& n_list)
{
    auto const ms = manufactured_solution(sigma, dimension, gamma);
    py::gil_scoped_release release;
    auto const study = run_mms_study(ms, elements, n_list, SolverConfig{});
    json j = to_json(study);
    j["certificates"] = to_json(mms_certificates(study));
    return dump(j);
}

std::string dirac_experiment(double gamma, int dimension, std::vector<int> const& n_list, double r_cut)
{
    DiracConfig config;
    config.gamma = gamma;
    config.dimension = dimension;
    config.n_list = n_list;
    config.r_cut = r_cut;
    py::gil_scoped_release release;
    auto const report = run_dirac_experiment(config);
    json j = to_json(report);
    j["certificates"] = to_json(dirac_certificates(report));
    return dump(j);
}

py::tuple run_config(std::string const& config_text)
{
    RunConfig const config = finalize_config(parse_config_text(config_text));
    std::ostringstream out;
    int code = 0;
    {
        py::gil_scoped_release release;
        code = run(config, out);
    }
    return py::make_tuple(code, out.str());
}
} // namespace

PYBIND11_MODULE(_degenelab, m)
{
    m.doc() = "Radial finite element solver and certificate suite for degenerate elliptic problems";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
            {
                std::rethrow_exception(p);
            }
        }
        catch (Error const& e)
        {
            py::object instance = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            py::setattr(instance, "kind", py::str(std::string(to_string(e.kind()))));
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    m.def("truncate", py::overload_cast<double, double>(&truncate), py::arg("s"), py::arg("k"));
    m.def("substitution_v", py::overload_cast<double, double>(&substitution_v), py::arg("u"), py::arg("gamma"));
    m.def("substitution_v_inverse", py::overload_cast<double, double>(&substitution_v_inverse), py::arg("v"),
          py::arg("gamma"));
    m.def("substitution_z", py::overload_cast<double, double>(&substitution_z), py::arg("u"), py::arg("gamma"));
    m.def("lower_order_term", py::overload_cast<double, double>(&lower_order_term), py::arg("z"),
          py::arg("gamma"));

    py::class_<ManufacturedSolution>(m, "ManufacturedSolution")
        .def(py::init(&manufactured_solution), py::arg("sigma"), py::arg("dimension"), py::arg("gamma"))
        .def_property_readonly("sigma", &ManufacturedSolution::sigma)
        .def_property_readonly("dimension", &ManufacturedSolution::dimension)
        .def_property_readonly("gamma", &ManufacturedSolution::gamma)
        .def("u", &ManufacturedSolution::u, py::arg("r"))
        .def("du", &ManufacturedSolution::du, py::arg("r"))
        .def("f", &ManufacturedSolution::f, py::arg("r"));

    m.def("_solve", &solve, py::arg("config"), py::arg("datum") = py::none());
    m.def("_mms_study", &mms_study, py::arg("sigma"), py::arg("dimension"), py::arg("gamma"), py::arg("elements"),
          py::arg("n_list"));
    m.def("_dirac_experiment", &dirac_experiment, py::arg("gamma"), py::arg("dimension"), py::arg("n_list"),
          py::arg("r_cut"));
    m.def("_run", &run_config, py::arg("config"));
}
