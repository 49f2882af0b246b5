#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace degenelab
{

enum class ErrorKind
{
    invalid_truncation_level,
    structural_assumption_violation,
    sigma_out_of_window,
    invalid_grading,
    invalid_mesh,
    degenerate_element,
    no_convergence,
    max_principle_violation,
    empty_n_list,
    mesh_mismatch,
    hypothesis_violation,
    invalid_range,
    gamma_not_supercritical,
    invalid_argument,
    parse_error,
    validation_error,
    io_error,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace degenelab
