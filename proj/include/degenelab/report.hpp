#pragma once

// CSV and JSON serialization of solver, certificate and experiment reports.
// CSV: RFC-4180 quoting, '.' decimal separator, 17 significant digits.
// JSON: keys in lexicographic order.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "degenelab/certificates.hpp"
#include "degenelab/experiment.hpp"
#include "degenelab/solver.hpp"

namespace degenelab
{

//! %.17g, locale independent; non-finite values as inf, -inf, nan.
std::string format_number(double v);
//! Quote a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

class CsvWriter
{
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void row(std::vector<std::string> const& fields);

  private:
    std::ostream& os_;
};

//! `n,iters,residual,linf,l_gamma2,w11`.
void write_sequence_csv(std::ostream& os, SequenceReport const& report);
//! Single summary row for one solve with datum index n.
void write_solve_csv(std::ostream& os, SolveReport const& report, int n, double gamma);
//! `name,k,lhs,rhs,slack,passed`.
void write_certificates_csv(std::ostream& os, std::vector<CertificateReport> const& reports);
//! `n,sup_tail,pairing_phi1,pairing_phi2,energy,flux_phi1,flux_phi2`.
void write_dirac_csv(std::ostream& os, DiracExperimentReport const& report);
//! `elements,n,iters,residual,linf,l2_error,w11_error,l2_order,w11_order`.
void write_mms_csv(std::ostream& os, MmsStudy const& study);

nlohmann::json to_json(SolveReport const& report);
nlohmann::json to_json(SequenceReport const& report);
nlohmann::json to_json(CertificateReport const& report);
nlohmann::json to_json(std::vector<CertificateReport> const& reports);
nlohmann::json to_json(DiracExperimentReport const& report);
nlohmann::json to_json(MmsStudy const& study);
nlohmann::json to_json(GridFunction const& u);

//! Pretty-printed with a trailing newline; non-finite numbers become null.
void write_json(std::ostream& os, nlohmann::json const& j);

} // namespace degenelab
