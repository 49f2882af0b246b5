#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "degenelab/cli.hpp"
#include "degenelab/error.hpp"

using namespace degenelab;
namespace fs = std::filesystem;

namespace
{
Error error_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (Error const& e)
    {
        return e;
    }
    FAIL("expected an Error");
    return Error(ErrorKind::invalid_argument, "");
}

fs::path scratch(std::string const& name)
{
    auto const p = fs::temp_directory_path() / ("degenelab_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "degenelab");
    std::vector<char const*> argv;
    for (auto const& a : args)
    {
        argv.push_back(a.c_str());
    }
    return cli_main(static_cast<int>(argv.size()), argv.data());
}
} // namespace

TEST_CASE("well-formed manufactured config")
{
    auto const c = parse_config(R"({"command":"mms","gamma":2,"N":5,"sigma":1.5,"elements":256})");
    CHECK(c.command == Command::mms);
    CHECK(c.gamma == 2);
    CHECK(c.dimension == 5);
    CHECK(c.sigma == 1.5);
    CHECK(c.elements == std::vector<int>{256});
    CHECK(c.format == OutputFormat::csv);
}

TEST_CASE("empty sigma window is a validation error")
{
    auto const e = error_of([] { parse_config(R"({"command":"mms","gamma":2,"N":3,"sigma":1.5})"); });
    CHECK(e.kind() == ErrorKind::validation_error);
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
}

TEST_CASE("subcritical dirac config is rejected")
{
    auto const e = error_of([] { parse_config(R"({"command":"dirac","gamma":0.5})"); });
    CHECK(e.kind() == ErrorKind::validation_error);
    CHECK(std::string(e.what()).find("gamma-not-supercritical") != std::string::npos);
}

TEST_CASE("unknown keys and wrong types name the key")
{
    auto const unknown = error_of([] { parse_config(R"({"command":"solve","gama":2})"); });
    CHECK(unknown.kind() == ErrorKind::validation_error);
    CHECK(std::string(unknown.what()).find("'gama'") != std::string::npos);

    auto const typed = error_of([] { parse_config(R"({"command":"solve","elements":"many"})"); });
    CHECK(std::string(typed.what()).find("'elements'") != std::string::npos);

    auto const missing = error_of([] { parse_config(R"({"gamma":2})"); });
    CHECK(std::string(missing.what()).find("'command'") != std::string::npos);
}

TEST_CASE("parse errors carry line and column")
{
    auto const e = error_of([] { parse_config_text("{\n  \"command\": \"solve\",\n  \"gamma\": ,\n}"); });
    CHECK(e.kind() == ErrorKind::parse_error);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
}

TEST_CASE("per-command defaults")
{
    auto const mms = parse_config(R"({"command":"mms"})");
    CHECK(mms.dimension == 5);
    CHECK(mms.elements == std::vector<int>{64, 128, 256, 512});
    CHECK(mms.n_list.size() == 4);

    auto const dirac = parse_config(R"({"command":"dirac"})");
    CHECK(dirac.n_list == std::vector<int>{8, 16, 32, 64});
    CHECK(dirac.datum == "mollified-dirac");

    auto const contraction = parse_config(R"({"command":"contraction"})");
    CHECK(contraction.pairs == 20);
    CHECK(contraction.seed == 42);

    CHECK_THROWS_AS(parse_config(R"({"command":"mms","datum":"zero"})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"command":"solve","n_list":[4,2]})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"command":"solve","format":"xml"})"), Error);
}

TEST_CASE("solve with zero datum writes zeros")
{
    auto const dir = scratch("zero");
    auto c = parse_config(R"({"command":"solve","datum":"zero","elements":16})");
    c.out = dir.string();
    std::ostringstream out;
    CHECK(run(c, out) == 0);
    CHECK(out.str().rfind("PASS ", 0) == 0);
    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "r,value\r");
    int rows = 0;
    while (std::getline(csv, line) && !line.empty())
    {
        CHECK(line.substr(line.find(',') + 1) == "0\r");
        ++rows;
    }
    CHECK(rows == 17);
    fs::remove_all(dir);
}

TEST_CASE("flags override the config file")
{
    auto const dir = scratch("flags");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"command":"solve","datum":"zero","elements":8,"gamma":3,"format":"csv","out":"ignored"})";
    }
    auto const out = dir / "run";
    CHECK(invoke({"solve", "--config", (dir / "cfg.json").string(), "--gamma", "1.5", "--n-elems", "12",
                  "--format", "json", "--out", out.string()})
          == 0);
    CHECK(fs::exists(out / "solution.json"));
    CHECK_FALSE(fs::exists(out / "solution.csv"));
    auto const j = nlohmann::json::parse(slurp(out / "solution.json"));
    CHECK(j["r"].size() == 13);
    CHECK_FALSE(fs::exists("ignored"));
    fs::remove_all(dir);
}

TEST_CASE("exit codes")
{
    auto const dir = scratch("exit");
    fs::create_directories(dir);
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"command":"mms","gamma":2,"N":3,"sigma":1.5})";
        std::ofstream broken(dir / "broken.json");
        broken << "{\"command\": ";
        // fixed truncation level: the error stalls at the truncation floor on the finest pair
        std::ofstream stall(dir / "stall.json");
        stall << R"({"command":"mms","elements_list":[256,512],"n_list":[160]})";
    }
    CHECK(invoke({"mms", "--config", (dir / "bad.json").string(), "--out", (dir / "o1").string()}) == 1);
    CHECK(invoke({"mms", "--config", (dir / "broken.json").string(), "--out", (dir / "o2").string()}) == 1);
    CHECK(invoke({"nonsense"}) == 1);
    CHECK(invoke({"mms", "--config", (dir / "stall.json").string(), "--out", (dir / "o3").string()}) == 2);
    fs::remove_all(dir);
}

TEST_CASE("fixed seed gives byte-identical artifacts")
{
    auto const a = scratch("seed_a");
    auto const b = scratch("seed_b");
    auto c = parse_config(R"({"command":"contraction","seed":7,"pairs":4,"elements":64})");
    std::ostringstream out_a;
    std::ostringstream out_b;
    c.out = a.string();
    CHECK(run(c, out_a) == 0);
    c.out = b.string();
    CHECK(run(c, out_b) == 0);
    CHECK(out_a.str() == out_b.str());
    for (char const* stem : {"contraction.csv", "comparison.csv"})
    {
        auto const sa = slurp(a / stem);
        CHECK_FALSE(sa.empty());
        CHECK(sa == slurp(b / stem));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}
