#include "degenelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace degenelab
{

namespace
{
using nlohmann::json;

std::string fmt_int(long long v)
{
    return std::to_string(v);
}

std::string fmt_bool(bool b)
{
    return b ? "true" : "false";
}

std::string fmt_optional(std::optional<double> const& v)
{
    return v ? format_number(*v) : std::string();
}

json json_number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json json_optional(std::optional<double> const& v)
{
    return v ? json_number(*v) : json(nullptr);
}
} // namespace

std::string format_number(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // snprintf honors LC_NUMERIC; force the '.' separator
    for (char& c : s)
    {
        if (c == ',')
        {
            c = '.';
        }
    }
    return s;
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
    {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
        {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(std::vector<std::string> const& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i > 0)
        {
            os_ << ',';
        }
        os_ << csv_field(fields[i]);
    }
    os_ << "\r\n";
}

void write_sequence_csv(std::ostream& os, SequenceReport const& report)
{
    CsvWriter w(os);
    w.row({"n", "iters", "residual", "linf", "l_gamma2", "w11"});
    for (auto const& r : report.records)
    {
        w.row({fmt_int(r.n), fmt_int(r.iterations), format_number(r.residual), format_number(r.linf),
               format_number(r.l_natural), format_number(r.w11)});
    }
}

void write_solve_csv(std::ostream& os, SolveReport const& report, int n, double gamma)
{
    CsvWriter w(os);
    w.row({"n", "iters", "residual", "linf", "l_gamma2", "w11"});
    GridFunction const& u = report.solution;
    w.row({fmt_int(n), fmt_int(report.iterations), format_number(report.final_residual()),
           format_number(u.max_abs()), format_number(lp_norm(u, (gamma + 2) / 2)), format_number(w11_seminorm(u))});
}

void write_certificates_csv(std::ostream& os, std::vector<CertificateReport> const& reports)
{
    CsvWriter w(os);
    w.row({"name", "k", "lhs", "rhs", "slack", "passed"});
    for (auto const& r : reports)
    {
        w.row({r.name, format_number(r.k), format_number(r.lhs), format_number(r.rhs), format_number(r.slack),
               fmt_bool(r.passed)});
    }
}

void write_dirac_csv(std::ostream& os, DiracExperimentReport const& report)
{
    CsvWriter w(os);
    w.row({"n", "sup_tail", "pairing_phi1", "pairing_phi2", "energy", "flux_phi1", "flux_phi2"});
    for (auto const& r : report.records)
    {
        w.row({fmt_int(r.n), format_number(r.sup_tail), format_number(r.pairing_phi1),
               format_number(r.pairing_phi2), format_number(r.energy), format_number(r.flux_phi1),
               format_number(r.flux_phi2)});
    }
}

void write_mms_csv(std::ostream& os, MmsStudy const& study)
{
    CsvWriter w(os);
    w.row({"elements", "n", "iters", "residual", "linf", "l2_error", "w11_error", "l2_order", "w11_order"});
    for (std::size_t i = 0; i < study.rows.size(); ++i)
    {
        auto const& r = study.rows[i];
        std::optional<double> l2o;
        std::optional<double> w11o;
        if (i > 0)
        {
            l2o = study.l2_orders[i - 1];
            w11o = study.w11_orders[i - 1];
        }
        w.row({fmt_int(r.elements), fmt_int(r.n), fmt_int(r.iterations), format_number(r.residual),
               format_number(r.linf), format_number(r.l2_error), format_number(r.w11_error), fmt_optional(l2o),
               fmt_optional(w11o)});
    }
}

json to_json(GridFunction const& u)
{
    json nodes = json::array();
    json values = json::array();
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        nodes.push_back(u.mesh().nodes()[i]);
        values.push_back(json_number(u[i]));
    }
    return json{{"r", nodes}, {"value", values}};
}

json to_json(SolveReport const& report)
{
    json trace = json::array();
    for (double r : report.residual_trace)
    {
        trace.push_back(json_number(r));
    }
    return json{{"iterations", report.iterations},
                {"newton_steps", report.newton_steps},
                {"residual_trace", trace},
                {"max_principle_margin", json_number(report.max_principle_margin)},
                {"truncation_level", json_number(report.truncation_level)},
                {"datum_sup", json_number(report.datum_sup)},
                {"solution", to_json(report.solution)}};
}

json to_json(SequenceReport const& report)
{
    json records = json::array();
    for (auto const& r : report.records)
    {
        records.push_back(json{{"n", r.n},
                               {"iterations", r.iterations},
                               {"residual", json_number(r.residual)},
                               {"linf", json_number(r.linf)},
                               {"l_gamma2", json_number(r.l_natural)},
                               {"w11", json_number(r.w11)},
                               {"diff_l_gamma2", json_optional(r.diff_l_natural)},
                               {"diff_w11", json_optional(r.diff_w11)}});
    }
    return json{{"gamma", report.gamma},
                {"records", records},
                {"cauchy_certified", report.cauchy_certified},
                {"limit", to_json(report.limit())}};
}

json to_json(CertificateReport const& r)
{
    return json{{"name", r.name},
                {"k", json_number(r.k)},
                {"lhs", json_number(r.lhs)},
                {"rhs", json_number(r.rhs)},
                {"slack", json_number(r.slack)},
                {"passed", r.passed},
                {"notes", r.notes}};
}

json to_json(std::vector<CertificateReport> const& reports)
{
    json arr = json::array();
    for (auto const& r : reports)
    {
        arr.push_back(to_json(r));
    }
    return arr;
}

json to_json(DiracExperimentReport const& report)
{
    json records = json::array();
    for (auto const& r : report.records)
    {
        records.push_back(json{{"n", r.n},
                               {"iterations", r.iterations},
                               {"sup_tail", json_number(r.sup_tail)},
                               {"pairing_phi1", json_number(r.pairing_phi1)},
                               {"pairing_phi2", json_number(r.pairing_phi2)},
                               {"energy", json_number(r.energy)},
                               {"flux_norm", json_number(r.flux_norm)},
                               {"flux_phi1", json_number(r.flux_phi1)},
                               {"flux_phi2", json_number(r.flux_phi2)},
                               {"mass", json_number(r.mass)}});
    }
    return json{{"gamma", report.gamma},
                {"N", report.dimension},
                {"alpha", report.alpha},
                {"r_cut", report.r_cut},
                {"records", records},
                {"verdicts", json{{"collapse", report.collapse},
                                  {"absorption", report.absorption},
                                  {"energy_bound", report.energy_bound}}}};
}

json to_json(MmsStudy const& study)
{
    json rows = json::array();
    for (auto const& r : study.rows)
    {
        rows.push_back(json{{"elements", r.elements},
                            {"n", r.n},
                            {"iterations", r.iterations},
                            {"residual", json_number(r.residual)},
                            {"linf", json_number(r.linf)},
                            {"l2_error", json_number(r.l2_error)},
                            {"w11_error", json_number(r.w11_error)}});
    }
    json l2 = json::array();
    json w11 = json::array();
    for (double o : study.l2_orders)
    {
        l2.push_back(json_number(o));
    }
    for (double o : study.w11_orders)
    {
        w11.push_back(json_number(o));
    }
    return json{{"rows", rows}, {"l2_orders", l2}, {"w11_orders", w11}};
}

void write_json(std::ostream& os, json const& j)
{
    os << j.dump(2) << '\n';
}

} // namespace degenelab
