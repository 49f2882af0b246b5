#pragma once

// Configuration and orchestration for the degenelab command-line tool.
//
//   degenelab <command> [--config FILE] [--gamma X] [--n-elems K] [--seed S]
//                       [--out DIR] [--format csv|json]
//
// Flags override keys read from the JSON configuration file.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "degenelab/mesh.hpp"
#include "degenelab/problem.hpp"
#include "degenelab/solver.hpp"

namespace degenelab
{

enum class Command
{
    solve,
    mms,
    estimates,
    contraction,
    independence,
    dirac,
    sweep,
};

std::string_view to_string(Command c);

enum class OutputFormat
{
    csv,
    json,
};

/*!
 * Fully resolved run configuration.  Fields left unset in the input are filled
 * with per-command defaults by finalize_config().
 */
struct RunConfig
{
    Command command = Command::solve;
    double gamma = 2;
    int dimension = 3;
    double sigma = 1.5;
    std::string domain = "ball";
    std::string coefficient = "identity";
    std::vector<double> coefficient_params;
    std::string datum = "manufactured";
    std::vector<double> datum_params;
    std::vector<int> elements;
    std::optional<double> grading;
    double tol = 1e-10;
    int max_iter = 200;
    double damping = 1.0;
    std::vector<int> n_list;
    std::vector<double> gammas;
    std::uint64_t seed = 42;
    int pairs = 20;
    double r_cut = 0.2;
    std::string out = "degenelab-out";
    OutputFormat format = OutputFormat::csv;
};

//! Parsed but not yet defaulted input; every member is optional.
struct ConfigOverrides
{
    nlohmann::json values = nlohmann::json::object();
};

//! Parse a JSON document.  Throws parse_error (with line and column) or validation_error.
ConfigOverrides parse_config_text(std::string_view text);
ConfigOverrides parse_config_file(std::string const& path);

//! Apply defaults for the command and validate.  Throws validation_error naming the key.
RunConfig finalize_config(ConfigOverrides const& overrides);

//! parse_config_text followed by finalize_config.
RunConfig parse_config(std::string_view text);

//! Problem, mesh and solver settings described by a finalized config.
ProblemSpec make_spec(RunConfig const& config, double gamma);
std::shared_ptr<RadialMesh const> make_mesh(RunConfig const& config, int elements);
SolverConfig make_solver(RunConfig const& config);

//! Run the pipeline, writing artifacts under config.out and one line per certificate to `out`.
//! Returns 0 when every asserted certificate passes, 2 otherwise.  Solver errors propagate.
int run(RunConfig const& config, std::ostream& out);

//! Full entry point: argument parsing, logging setup and error-to-exit-code mapping.
int cli_main(int argc, char const* const* argv);

} // namespace degenelab
