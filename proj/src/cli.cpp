#include "degenelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "degenelab/certificates.hpp"
#include "degenelab/error.hpp"
#include "degenelab/experiment.hpp"
#include "degenelab/log.hpp"
#include "degenelab/report.hpp"

namespace degenelab
{

namespace
{
using nlohmann::json;

enum class KeyType
{
    string,
    number,
    integer,
    number_list,
    integer_list,
};

std::map<std::string, KeyType> const& known_keys()
{
    static std::map<std::string, KeyType> const keys{
        {"command", KeyType::string},
        {"gamma", KeyType::number},
        {"N", KeyType::integer},
        {"sigma", KeyType::number},
        {"domain", KeyType::string},
        {"coefficient", KeyType::string},
        {"coefficient_params", KeyType::number_list},
        {"datum", KeyType::string},
        {"datum_params", KeyType::number_list},
        {"elements", KeyType::integer},
        {"elements_list", KeyType::integer_list},
        {"grading", KeyType::number},
        {"tol", KeyType::number},
        {"max_iter", KeyType::integer},
        {"damping", KeyType::number},
        {"n_list", KeyType::integer_list},
        {"gammas", KeyType::number_list},
        {"seed", KeyType::integer},
        {"pairs", KeyType::integer},
        {"r_cut", KeyType::number},
        {"out", KeyType::string},
        {"format", KeyType::string},
    };
    return keys;
}

[[noreturn]] void invalid(std::string const& key, std::string const& what)
{
    throw Error(ErrorKind::validation_error, "key '" + key + "': " + what);
}

bool is_integer(json const& v)
{
    return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
}

void check_type(std::string const& key, json const& v, KeyType type)
{
    switch (type)
    {
    case KeyType::string:
        if (!v.is_string())
        {
            invalid(key, "must be a string");
        }
        break;
    case KeyType::number:
        if (!v.is_number())
        {
            invalid(key, "must be a number");
        }
        break;
    case KeyType::integer:
        if (!is_integer(v))
        {
            invalid(key, "must be an integer");
        }
        break;
    case KeyType::number_list:
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](json const& e) { return e.is_number(); }))
        {
            invalid(key, "must be a list of numbers");
        }
        break;
    case KeyType::integer_list:
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), is_integer))
        {
            invalid(key, "must be a list of integers");
        }
        break;
    }
}

std::optional<Command> parse_command(std::string const& s)
{
    static std::map<std::string, Command> const names{
        {"solve", Command::solve},
        {"mms", Command::mms},
        {"estimates", Command::estimates},
        {"contraction", Command::contraction},
        {"independence", Command::independence},
        {"dirac", Command::dirac},
        {"sweep", Command::sweep},
    };
    auto it = names.find(s);
    return it == names.end() ? std::nullopt : std::optional<Command>(it->second);
}

void require_increasing(std::string const& key, std::vector<int> const& v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (v[i] < 1 || (i > 0 && v[i] <= v[i - 1]))
        {
            invalid(key, "must be positive and strictly increasing");
        }
    }
}

std::string describe_location(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t const end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            column = 1;
        }
        else
        {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

//---------------------------------------------------------------------------//
// Problem construction from a RunConfig
//---------------------------------------------------------------------------//

DomainKind domain_of(RunConfig const& c)
{
    return c.domain == "interval" ? DomainKind::interval : DomainKind::radial_ball;
}

CoefficientField make_coefficient(RunConfig const& c)
{
    if (c.coefficient == "nonlinear-demo")
    {
        return CoefficientField::nonlinear_demo();
    }
    if (c.coefficient == "diagonal")
    {
        double const c0 = c.coefficient_params.at(0);
        double const c1 = c.coefficient_params.size() > 1 ? c.coefficient_params[1] : 0.0;
        return CoefficientField::diagonal([c0, c1](double r) { return c0 + c1 * r * r; }, std::min(c0, c0 + c1),
                                          std::max(c0, c0 + c1));
    }
    return CoefficientField::identity();
}

Datum make_datum(RunConfig const& c)
{
    // random-pl data are drawn per pair by the contraction pipeline
    if (c.datum == "zero" || c.datum == "random-pl")
    {
        return Datum::zero();
    }
    if (c.datum == "constant")
    {
        return Datum::constant(c.datum_params.at(0));
    }
    if (c.datum == "power")
    {
        double const scale = c.datum_params.at(0);
        double const p = c.datum_params.at(1);
        double const dim = domain_of(c) == DomainKind::interval ? 1.0 : c.dimension;
        double const m = p > 0 ? dim / p : std::numeric_limits<double>::infinity();
        std::ostringstream name;
        name << "power(" << scale << ", " << p << ")";
        return Datum::closed_form([scale, p](double r) { return scale * std::pow(r, -p); }, m, name.str());
    }
    return ManufacturedSolution(c.sigma, c.dimension, c.gamma).datum();
}

} // namespace

ProblemSpec make_spec(RunConfig const& c, double gamma)
{
    ProblemSpec spec;
    spec.gamma = gamma;
    spec.dimension = c.dimension;
    spec.domain = domain_of(c);
    spec.coefficient = make_coefficient(c);
    RunConfig copy = c;
    copy.gamma = gamma;
    spec.datum = make_datum(copy);
    return spec;
}

std::shared_ptr<RadialMesh const> make_mesh(RunConfig const& c, int elements)
{
    if (domain_of(c) == DomainKind::interval)
    {
        return std::make_shared<RadialMesh const>(RadialMesh::interval(elements, c.grading.value_or(1.0)));
    }
    double const q = c.grading.value_or(grading_for_ratio(elements, kDefaultSizeRatio));
    return std::make_shared<RadialMesh const>(RadialMesh::ball(c.dimension, elements, q));
}

SolverConfig make_solver(RunConfig const& c)
{
    SolverConfig s;
    s.picard_tol = c.tol;
    s.max_iterations = c.max_iter;
    s.damping = c.damping;
    s.damping_floor = std::min(s.damping_floor, c.damping);
    return s;
}

namespace
{

//---------------------------------------------------------------------------//
// Output
//---------------------------------------------------------------------------//

class Emitter
{
  public:
    Emitter(RunConfig const& config, std::ostream& out) : config_(config), out_(out)
    {
        std::filesystem::create_directories(config.out);
    }

    template<class CsvFn>
    void write(std::string const& stem, CsvFn const& csv, json const& js) const
    {
        bool const as_json = config_.format == OutputFormat::json;
        auto const path = std::filesystem::path(config_.out) / (stem + (as_json ? ".json" : ".csv"));
        std::ofstream os(path, std::ios::binary);
        if (!os)
        {
            throw Error(ErrorKind::io_error, "cannot open " + path.string());
        }
        if (as_json)
        {
            write_json(os, js);
        }
        else
        {
            csv(os);
        }
        if (!os)
        {
            throw Error(ErrorKind::io_error, "write failed for " + path.string());
        }
    }

    //! Print one line per certificate and write them under `stem`.  Returns true if all passed.
    bool certificates(std::string const& stem, std::vector<CertificateReport> const& reports) const
    {
        bool ok = true;
        for (auto const& r : reports)
        {
            ok = ok && r.passed;
            out_ << (r.passed ? "PASS " : "FAIL ") << r.name << " k=" << short_number(r.k)
                 << " lhs=" << short_number(r.lhs) << " rhs=" << short_number(r.rhs)
                 << " slack=" << short_number(r.slack);
            if (!r.notes.empty())
            {
                out_ << " (" << r.notes << ")";
            }
            out_ << '\n';
        }
        write(stem, [&](std::ostream& os) { write_certificates_csv(os, reports); }, to_json(reports));
        return ok;
    }

    std::ostream& out() const { return out_; }

  private:
    RunConfig const& config_;
    std::ostream& out_;

    static std::string short_number(double v)
    {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    }
};

//---------------------------------------------------------------------------//
// Pipelines
//---------------------------------------------------------------------------//

int run_solve(RunConfig const& c, Emitter const& emit)
{
    ProblemSpec spec = make_spec(c, c.gamma);
    int const n = c.n_list.back();
    Datum const f = spec.datum;
    spec.datum = truncate_datum(f, n);
    auto const mesh = make_mesh(c, c.elements.front());
    auto const report = solve_bounded(spec, mesh, make_solver(c));
    emit.write("solution", [&](std::ostream& os) { write_csv(os, report.solution); }, to_json(report.solution));
    emit.write("summary", [&](std::ostream& os) { write_solve_csv(os, report, n, c.gamma); }, to_json(report));
    bool const ok = emit.certificates("certificates", {check_estimate_aa(report.solution, f, c.gamma, 0.0)});
    return ok ? 0 : 2;
}

int run_mms(RunConfig const& c, Emitter const& emit)
{
    ManufacturedSolution const ms(c.sigma, c.dimension, c.gamma);
    std::vector<int> n_list = c.n_list;
    if (n_list.size() == 1)
    {
        n_list.assign(c.elements.size(), n_list.front());
    }
    auto const study = run_mms_study(ms, c.elements, n_list, make_solver(c));
    emit.write("mms", [&](std::ostream& os) { write_mms_csv(os, study); }, to_json(study));
    return emit.certificates("certificates", mms_certificates(study)) ? 0 : 2;
}

int run_estimates(RunConfig const& c, Emitter const& emit)
{
    ProblemSpec const spec = make_spec(c, c.gamma);
    auto const mesh = make_mesh(c, c.elements.front());
    auto const seq = approximate_sequence(spec, mesh, c.n_list, make_solver(c));
    emit.write("sequence", [&](std::ostream& os) { write_sequence_csv(os, seq); }, to_json(seq));

    GridFunction const& u = seq.limit();
    double const alpha = spec.coefficient.alpha();
    std::vector<CertificateReport> reports;
    for (double k : {0.0, 1.0, 2.0})
    {
        reports.push_back(check_estimate_aa(u, spec.datum, c.gamma, k));
    }
    for (double k : {0.0, 1.0})
    {
        reports.push_back(check_estimate_bb(u, spec.datum, c.gamma, k, alpha));
    }
    for (double k : {0.0, 1.0})
    {
        reports.push_back(check_estimate_cc(u, spec.datum, c.gamma, k));
    }
    for (double k : {0.5, 1.0, 2.0})
    {
        reports.push_back(check_estimate_dd(u, spec.datum, c.gamma, k, alpha));
    }
    return emit.certificates("certificates", reports) ? 0 : 2;
}

int run_contraction(RunConfig const& c, Emitter const& emit)
{
    ProblemSpec base = make_spec(c, c.gamma);
    auto const mesh = make_mesh(c, c.elements.front());
    SolverConfig const solver = make_solver(c);

    auto solve_pairs = [&](std::vector<DatumPair> const& pairs, bool ordered) {
        std::vector<std::future<CertificateReport>> jobs;
        for (auto const& p : pairs)
        {
            jobs.push_back(std::async(std::launch::async, [&, p] {
                ProblemSpec sf = base;
                sf.datum = p.f;
                ProblemSpec sg = base;
                sg.datum = p.g;
                auto const u = solve_bounded(sf, mesh, solver).solution;
                auto const z = solve_bounded(sg, mesh, solver).solution;
                return ordered ? check_comparison(u, z, p.f, p.g) : check_l1_contraction(u, z, p.f, p.g);
            }));
        }
        std::vector<CertificateReport> reports;
        for (auto& j : jobs)
        {
            reports.push_back(j.get());
        }
        return reports;
    };

    auto const contraction = solve_pairs(random_datum_pairs(c.seed, c.pairs, false), false);
    auto const comparison = solve_pairs(random_datum_pairs(c.seed + 1, c.pairs, true), true);
    bool ok = emit.certificates("contraction", contraction);
    ok = emit.certificates("comparison", comparison) && ok;
    return ok ? 0 : 2;
}

int run_independence(RunConfig const& c, Emitter const& emit)
{
    ProblemSpec const spec = make_spec(c, c.gamma);
    auto const mesh = make_mesh(c, c.elements.front());
    SolverConfig const solver = make_solver(c);
    auto const run = check_approximation_independence(spec, mesh, c.n_list, solver);
    emit.write("sequence_truncated", [&](std::ostream& os) { write_sequence_csv(os, run.truncated); },
               to_json(run.truncated));
    emit.write("sequence_deformed", [&](std::ostream& os) { write_sequence_csv(os, run.deformed); },
               to_json(run.deformed));

    ProblemSpec scaled = spec;
    scaled.datum = spec.datum.scaled(0.9);
    auto const seq_scaled = approximate_sequence(scaled, mesh, c.n_list, solver);
    auto const [l1, norm] = check_nonexpansive_map(spec.datum, scaled.datum, run.truncated, seq_scaled);
    return emit.certificates("certificates", {run.report, l1, norm}) ? 0 : 2;
}

int run_dirac(RunConfig const& c, Emitter const& emit)
{
    DiracConfig dc;
    dc.gamma = c.gamma;
    dc.dimension = c.dimension;
    dc.n_list = c.n_list;
    dc.r_cut = c.r_cut;
    dc.coefficient = make_coefficient(c);
    dc.solver = make_solver(c);
    auto const report = run_dirac_experiment(dc);
    emit.write("dirac", [&](std::ostream& os) { write_dirac_csv(os, report); }, to_json(report));
    return emit.certificates("certificates", dirac_certificates(report)) ? 0 : 2;
}

int run_sweep(RunConfig const& c, Emitter const& emit)
{
    SolverConfig const solver = make_solver(c);
    struct Row
    {
        double gamma;
        int elements;
        SequenceReport seq;
        Datum datum;
    };
    std::vector<std::future<Row>> jobs;
    for (double gamma : c.gammas)
    {
        for (int m : c.elements)
        {
            jobs.push_back(std::async(std::launch::async, [&, gamma, m] {
                ProblemSpec const spec = make_spec(c, gamma);
                auto const mesh = make_mesh(c, m);
                return Row{gamma, m, approximate_sequence(spec, mesh, c.n_list, solver, truncate_datum, false),
                           spec.datum};
            }));
        }
    }
    std::vector<Row> rows;
    for (auto& j : jobs)
    {
        rows.push_back(j.get());
    }

    json js = json::array();
    std::vector<CertificateReport> reports;
    auto csv = [&](std::ostream& os) {
        CsvWriter w(os);
        w.row({"gamma", "elements", "n", "iters", "residual", "linf", "l_gamma2", "w11"});
        for (auto const& row : rows)
        {
            for (auto const& r : row.seq.records)
            {
                w.row({format_number(row.gamma), std::to_string(row.elements), std::to_string(r.n),
                       std::to_string(r.iterations), format_number(r.residual), format_number(r.linf),
                       format_number(r.l_natural), format_number(r.w11)});
            }
        }
    };
    for (auto const& row : rows)
    {
        js.push_back(json{{"gamma", row.gamma}, {"elements", row.elements}, {"sequence", to_json(row.seq)}});
        auto cert = check_estimate_aa(row.seq.limit(), row.datum, row.gamma, 0.0);
        std::ostringstream notes;
        notes << "gamma=" << row.gamma << " elements=" << row.elements;
        cert.notes = notes.str();
        reports.push_back(std::move(cert));
    }
    emit.write("sweep", csv, js);
    return emit.certificates("certificates", reports) ? 0 : 2;
}

} // namespace

std::string_view to_string(Command c)
{
    switch (c)
    {
    case Command::solve:
        return "solve";
    case Command::mms:
        return "mms";
    case Command::estimates:
        return "estimates";
    case Command::contraction:
        return "contraction";
    case Command::independence:
        return "independence";
    case Command::dirac:
        return "dirac";
    case Command::sweep:
        return "sweep";
    }
    return "unknown";
}

ConfigOverrides parse_config_text(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (json::parse_error const& e)
    {
        throw Error(ErrorKind::parse_error, describe_location(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
    {
        throw Error(ErrorKind::validation_error, "configuration must be a JSON object");
    }
    auto const& keys = known_keys();
    for (auto const& [key, value] : doc.items())
    {
        auto it = keys.find(key);
        if (it == keys.end())
        {
            invalid(key, "unknown key");
        }
        check_type(key, value, it->second);
    }
    return ConfigOverrides{std::move(doc)};
}

ConfigOverrides parse_config_file(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
    {
        throw Error(ErrorKind::io_error, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

RunConfig finalize_config(ConfigOverrides const& overrides)
{
    json const& v = overrides.values;
    auto has = [&](char const* key) { return v.contains(key); };

    RunConfig c;
    if (!has("command"))
    {
        invalid("command", "required");
    }
    auto const cmd = parse_command(v["command"].get<std::string>());
    if (!cmd)
    {
        invalid("command", "must be one of solve, mms, estimates, contraction, independence, dirac, sweep");
    }
    c.command = *cmd;

    // per-command defaults
    switch (c.command)
    {
    case Command::solve:
        c.dimension = 3;
        c.datum = "constant";
        c.datum_params = {1.0};
        c.elements = {256};
        c.n_list = {160};
        break;
    case Command::mms:
        c.dimension = 5;
        c.elements = {64, 128, 256, 512};
        break;
    case Command::estimates:
        c.dimension = 5;
        c.elements = {512};
        c.n_list = {5, 10, 20, 40, 80};
        break;
    case Command::contraction:
        c.dimension = 3;
        c.elements = {256};
        break;
    case Command::independence:
        c.dimension = 5;
        c.elements = {512};
        c.n_list = {20, 40, 80, 160, 320};
        break;
    case Command::dirac:
        c.dimension = 3;
        c.n_list = {8, 16, 32, 64};
        break;
    case Command::sweep:
        c.dimension = 3;
        c.datum = "power";
        c.datum_params = {1.0, 1.0};
        c.elements = {64, 128, 256};
        c.n_list = {10, 40, 160};
        c.gammas = {0.5, 1.0, 2.0, 3.0};
        break;
    }

    if (has("gamma"))
    {
        c.gamma = v["gamma"].get<double>();
    }
    if (has("N"))
    {
        c.dimension = static_cast<int>(v["N"].get<double>());
    }
    if (has("sigma"))
    {
        c.sigma = v["sigma"].get<double>();
    }
    if (has("domain"))
    {
        c.domain = v["domain"].get<std::string>();
    }
    if (has("coefficient"))
    {
        c.coefficient = v["coefficient"].get<std::string>();
    }
    if (has("coefficient_params"))
    {
        c.coefficient_params = v["coefficient_params"].get<std::vector<double>>();
    }
    if (has("datum"))
    {
        std::string const datum = v["datum"].get<std::string>();
        if (datum != c.datum)
        {
            // default parameters belong to the default datum
            c.datum_params.clear();
        }
        c.datum = datum;
    }
    if (has("datum_params"))
    {
        c.datum_params = v["datum_params"].get<std::vector<double>>();
    }
    if (has("elements_list"))
    {
        c.elements.clear();
        for (auto const& e : v["elements_list"])
        {
            c.elements.push_back(static_cast<int>(e.get<double>()));
        }
    }
    if (has("elements"))
    {
        c.elements = {static_cast<int>(v["elements"].get<double>())};
    }
    if (has("grading"))
    {
        c.grading = v["grading"].get<double>();
    }
    if (has("tol"))
    {
        c.tol = v["tol"].get<double>();
    }
    if (has("max_iter"))
    {
        c.max_iter = static_cast<int>(v["max_iter"].get<double>());
    }
    if (has("damping"))
    {
        c.damping = v["damping"].get<double>();
    }
    if (has("n_list"))
    {
        c.n_list.clear();
        for (auto const& e : v["n_list"])
        {
            c.n_list.push_back(static_cast<int>(e.get<double>()));
        }
    }
    if (has("gammas"))
    {
        c.gammas = v["gammas"].get<std::vector<double>>();
    }
    if (has("seed"))
    {
        double const s = v["seed"].get<double>();
        if (s < 0)
        {
            invalid("seed", "must be >= 0");
        }
        c.seed = v["seed"].is_number_unsigned() ? v["seed"].get<std::uint64_t>() : static_cast<std::uint64_t>(s);
    }
    if (has("pairs"))
    {
        c.pairs = static_cast<int>(v["pairs"].get<double>());
    }
    if (has("r_cut"))
    {
        c.r_cut = v["r_cut"].get<double>();
    }
    if (has("out"))
    {
        c.out = v["out"].get<std::string>();
    }
    if (has("format"))
    {
        std::string const f = v["format"].get<std::string>();
        if (f == "csv")
        {
            c.format = OutputFormat::csv;
        }
        else if (f == "json")
        {
            c.format = OutputFormat::json;
        }
        else
        {
            invalid("format", "must be csv or json");
        }
    }

    // forced data for the fixed pipelines
    if (c.command == Command::mms || c.command == Command::dirac)
    {
        std::string const forced = c.command == Command::mms ? "manufactured" : "mollified-dirac";
        if (has("datum") && c.datum != forced)
        {
            invalid("datum", std::string(to_string(c.command)) + " always uses the " + forced + " datum");
        }
        c.datum = forced;
    }
    if (c.command == Command::mms && !has("n_list"))
    {
        // datum truncation grows with the cube of the refinement
        c.n_list.clear();
        for (int m : c.elements)
        {
            c.n_list.push_back(static_cast<int>(std::lround(160 * std::pow(m / 64.0, 3))));
        }
    }
    if (c.command == Command::contraction && !has("datum"))
    {
        c.datum = "random-pl";
    }

    // validation
    if (!(c.gamma > 0))
    {
        invalid("gamma", "must be > 0");
    }
    if (c.domain != "ball" && c.domain != "interval")
    {
        invalid("domain", "must be ball or interval");
    }
    if (c.domain == "ball" && c.dimension <= 2)
    {
        invalid("N", "must be > 2 on the ball");
    }
    if ((c.command == Command::mms || c.command == Command::dirac) && c.domain != "ball")
    {
        invalid("domain", std::string(to_string(c.command)) + " needs the ball");
    }
    if (c.command == Command::dirac && !(c.gamma > 1))
    {
        invalid("gamma", "gamma-not-supercritical: dirac needs gamma > 1");
    }
    if (c.coefficient == "diagonal")
    {
        if (c.coefficient_params.empty() || c.coefficient_params.size() > 2)
        {
            invalid("coefficient_params", "diagonal needs [c0] or [c0, c1] for d(r) = c0 + c1 r^2");
        }
        double const c0 = c.coefficient_params[0];
        double const c1 = c.coefficient_params.size() > 1 ? c.coefficient_params[1] : 0.0;
        if (!(c0 > 0) || !(c0 + c1 > 0))
        {
            invalid("coefficient_params", "d(r) = c0 + c1 r^2 must stay positive on [0, 1]");
        }
    }
    else if (c.coefficient != "identity" && c.coefficient != "nonlinear-demo")
    {
        invalid("coefficient", "must be identity, diagonal or nonlinear-demo");
    }

    static std::map<std::string, std::size_t> const datum_arity{
        {"zero", 0}, {"constant", 1}, {"power", 2}, {"manufactured", 0}, {"mollified-dirac", 0}, {"random-pl", 0}};
    auto const arity = datum_arity.find(c.datum);
    if (arity == datum_arity.end() || (c.datum == "mollified-dirac" && c.command != Command::dirac)
        || (c.datum == "random-pl" && c.command != Command::contraction))
    {
        invalid("datum", "must be zero, constant, power or manufactured");
    }
    if (c.datum_params.size() != arity->second)
    {
        invalid("datum_params", c.datum + " takes " + std::to_string(arity->second) + " parameter(s)");
    }
    if (c.datum == "power" && !(c.datum_params[1] >= 0))
    {
        invalid("datum_params", "power exponent must be >= 0");
    }
    if (c.datum == "manufactured")
    {
        if (c.domain != "ball")
        {
            invalid("datum", "manufactured needs the ball");
        }
        std::vector<double> gammas = c.command == Command::sweep ? c.gammas : std::vector<double>{c.gamma};
        for (double g : gammas)
        {
            if (!(2 / g < c.sigma && c.sigma < c.dimension - 2))
            {
                std::ostringstream os;
                os << "sigma-out-of-window: need " << 2 / g << " < sigma < " << c.dimension - 2 << ", got "
                   << c.sigma;
                invalid("sigma", os.str());
            }
        }
    }

    if (c.command != Command::dirac)
    {
        if (c.elements.empty())
        {
            invalid("elements", "at least one mesh is required");
        }
        for (int m : c.elements)
        {
            if (m < 2)
            {
                invalid("elements", "must be >= 2");
            }
        }
    }
    if (c.command == Command::mms)
    {
        require_increasing("elements_list", c.elements);
        if (c.n_list.size() != 1 && c.n_list.size() != c.elements.size())
        {
            invalid("n_list", "needs one entry or one per mesh");
        }
        for (int n : c.n_list)
        {
            if (n < 1)
            {
                invalid("n_list", "entries must be >= 1");
            }
        }
    }
    else if (c.command != Command::contraction)
    {
        if (c.n_list.empty())
        {
            invalid("n_list", "must not be empty");
        }
        require_increasing("n_list", c.n_list);
    }
    if (c.grading && !(*c.grading > 0 && *c.grading <= 1))
    {
        invalid("grading", "must lie in (0, 1]");
    }
    if (!(c.tol > 0))
    {
        invalid("tol", "must be > 0");
    }
    if (c.max_iter < 1)
    {
        invalid("max_iter", "must be >= 1");
    }
    if (!(c.damping > 0 && c.damping <= 1))
    {
        invalid("damping", "must lie in (0, 1]");
    }
    if (c.command == Command::sweep)
    {
        if (c.gammas.empty())
        {
            invalid("gammas", "must not be empty");
        }
        for (double g : c.gammas)
        {
            if (!(g > 0))
            {
                invalid("gammas", "entries must be > 0");
            }
        }
    }
    if (c.pairs < 1)
    {
        invalid("pairs", "must be >= 1");
    }
    if (!(c.r_cut > 0 && c.r_cut < 1))
    {
        invalid("r_cut", "must lie in (0, 1)");
    }
    if (c.out.empty())
    {
        invalid("out", "must not be empty");
    }
    return c;
}

RunConfig parse_config(std::string_view text)
{
    return finalize_config(parse_config_text(text));
}

int run(RunConfig const& config, std::ostream& out)
{
    spdlog::info("running {} (gamma {}, N {})", to_string(config.command), config.gamma, config.dimension);
    Emitter const emit(config, out);
    switch (config.command)
    {
    case Command::solve:
        return run_solve(config, emit);
    case Command::mms:
        return run_mms(config, emit);
    case Command::estimates:
        return run_estimates(config, emit);
    case Command::contraction:
        return run_contraction(config, emit);
    case Command::independence:
        return run_independence(config, emit);
    case Command::dirac:
        return run_dirac(config, emit);
    case Command::sweep:
        return run_sweep(config, emit);
    }
    return 1;
}

int cli_main(int argc, char const* const* argv)
{
    configure_logging();

    CLI::App app{"degenelab: solver and certificate laboratory for degenerate elliptic problems"};
    std::string command;
    std::string config_path;
    std::optional<double> gamma;
    std::optional<int> elements;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    app.add_option("command", command, "solve, mms, estimates, contraction, independence, dirac or sweep")
        ->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--gamma", gamma, "degeneracy exponent");
    app.add_option("--n-elems", elements, "number of mesh elements");
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        ConfigOverrides overrides = config_path.empty() ? ConfigOverrides{} : parse_config_file(config_path);
        json& v = overrides.values;
        if (v.contains("command") && v["command"] != command)
        {
            spdlog::warn("command '{}' on the command line overrides '{}' from the config",
                         command, v["command"].get<std::string>());
        }
        v["command"] = command;
        if (gamma)
        {
            v["gamma"] = *gamma;
        }
        if (elements)
        {
            v.erase("elements_list");
            v["elements"] = *elements;
        }
        if (seed)
        {
            v["seed"] = *seed;
        }
        if (out_dir)
        {
            v["out"] = *out_dir;
        }
        if (format)
        {
            v["format"] = *format;
        }
        RunConfig const config = finalize_config(overrides);
        return run(config, std::cout);
    }
    catch (Error const& e)
    {
        std::cerr << "degenelab: " << e.what() << '\n';
        return 1;
    }
    catch (std::exception const& e)
    {
        std::cerr << "degenelab: " << e.what() << '\n';
        return 1;
    }
}

} // namespace degenelab
