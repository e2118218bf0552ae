#include "lnrg/cli.hpp"
#include "lnrg/potentials.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lnrg;
namespace fs = std::filesystem;

namespace
{

fs::path tmpdir()
{
    const char *env = std::getenv("LNRG_TEST_TMPDIR");
    fs::path p = env ? fs::path(env) : fs::temp_directory_path() / "lnrg_cli_tmp";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Outcome
{
    int code;
    std::string out, err;
};

Outcome call(const std::vector<std::string> &args)
{
    std::ostringstream o, e;
    const int code = cli_main(args, o, e);
    return {code, o.str(), e.str()};
}

} // namespace

TEST_CASE("defaults per subcommand")
{
    const auto c = parse_args({"collapse"});
    CHECK(c.subcommand == "collapse");
    CHECK(c.m == 4);
    CHECK(c.N_list == std::vector<int>{200, 400, 800});
    CHECK(c.x_list.size() == 41);
    const auto s = parse_args({"spectrum"});
    CHECK(s.model == "vector");
    CHECK(s.m == 2);
    const auto e = parse_args({"exponents"});
    CHECK(e.model == "d0");
    CHECK(e.q == 0);
    CHECK(parse_args({"saddle"}).N_list == std::vector<int>{100});
    CHECK(parse_args({"flow"}).model == "VectorD0");
}

TEST_CASE("flags map onto the config")
{
    const auto c = parse_args({"flow", "--n-grid", "257", "--rho-max", "4", "--dtau", "0.01", "--steps", "7", "--record-every", "7", "--rho_0", "0.25",
                               "--format", "json"});
    CHECK(c.n_grid == 257);
    CHECK(c.rho_max == 4.0);
    CHECK(c.dtau == 0.01);
    CHECK(c.steps == 7);
    CHECK(c.rho_0 == 0.25);
    CHECK(c.format == "json");
    const auto q = parse_args({"fixed-point", "--gamma", "-0.4"});
    CHECK(q.gamma_set);
    CHECK(q.gamma == -0.4);
    const auto b = parse_args({"beta", "--g-range", "-1,2", "--points", "5"});
    CHECK(b.g_lo == -1.0);
    CHECK(b.g_hi == 2.0);
    CHECK(b.points == 5);
    const auto v = parse_args({"quadrature", "--N", "5,50"});
    CHECK(v.N_list == std::vector<int>{5, 50});
}

TEST_CASE("config file values lose to command-line flags")
{
    const auto path = tmpdir() / "run.cfg";
    {
        std::ofstream f(path);
        f << "# comment\n n = 5\nrho_max = 10\n\nformat = json\n";
    }
    const auto c = parse_args({"fixed-point", "--config", path.string(), "--n", "3"});
    CHECK(c.n == 3);
    CHECK(c.rho_max == 10.0);
    CHECK(c.format == "json");
    CHECK_THROWS_AS(parse_args({"fixed-point", "--config", (tmpdir() / "missing.cfg").string()}), UsageError);
}

TEST_CASE("exit codes: usage 2, help 0, runtime error 1")
{
    CHECK(call({"saddle", "--bogus"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"beta", "--format", "xml"}).code == 2);
    CHECK(call({"--help"}).code == 0);
    const auto r = call({"quadrature", "--potential", "model=VectorD0 coeffs=0,0.5,-0.25"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error:", 0) == 0);
    CHECK(call({"saddle", "--potential", "model=Nope coeffs=1"}).code != 0);
    CHECK(call({"spectrum", "--m", "0"}).code != 0);
}

TEST_CASE("csv output starts with the config echo")
{
    const auto path = tmpdir() / "saddle.csv";
    const auto r = call({"saddle", "--g", "2", "--out", path.string(), "--quiet"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto text = slurp(path);
    CHECK(text.rfind("# lnrg saddle ", 0) == 0);
    CHECK(text.find("coeffs=0,0.5,0.5") != std::string::npos);
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    CHECK(line == "rho,multiplicity,order_m,residual");
    std::getline(is, line);
    // g rho^2 + rho - 1 = 0 at g = 2: rho = 1/2
    CHECK(std::stod(line.substr(0, line.find(','))) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("json output carries _config first")
{
    const auto path = tmpdir() / "series.json";
    REQUIRE(call({"fixed-point", "--n", "2", "--emit-series", "12", "--format", "json", "--out", path.string(), "--quiet"}).code == 0);
    const auto j = nlohmann::ordered_json::parse(slurp(path));
    CHECK(j.begin().key() == "_config");
    CHECK(j["_config"].get<std::string>().find("emit_series=12") != std::string::npos);
    const auto &rows = j["coefficients"];
    REQUIRE(rows.size() == 13);
    CHECK(rows[0]["a_k"].get<double>() == 1.0);
    CHECK(rows[1]["a_k"].get<double>() == 0.5);
    CHECK(rows[2]["a_k"].get<double>() == 0.125);
}

TEST_CASE("identical invocations write identical bytes")
{
    const auto a = tmpdir() / "flow_a.csv", b = tmpdir() / "flow_b.csv";
    for (const auto &p : {a, b})
        REQUIRE(call({"flow", "--n-grid", "129", "--rho-max", "4", "--steps", "20", "--record-every", "5", "--dtau", "0.01", "--out", p.string(),
                      "--quiet"})
                    .code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("flow accepts a formatted potential of every tag")
{
    for (const auto &p : {Potential({0.0, 0.5, 0.25}, ModelTag::vector_qm()), Potential({0.0, 1.0, 0.5}, ModelTag::matrix()),
                          Potential({0.0, 0.5, 0.1}, ModelTag::vector_field(1.0))}) {
        const auto path = tmpdir() / "flow_tag.csv";
        const auto r =
            call({"flow", "--potential", format_potential(p), "--n-grid", "129", "--rho-max", "2", "--steps", "4", "--dtau", "0.001", "--out", path.string()});
        CHECK(r.code == 0);
        CHECK(slurp(path).find(format_potential(p)) != std::string::npos);
    }
}

TEST_CASE("beta summary for the matrix model")
{
    const auto path = tmpdir() / "beta.csv";
    const auto r = call({"beta", "--model", "matrix", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("g + 6g^2") != std::string::npos);
    CHECK(r.out.find("gamma_string = 0") != std::string::npos);
    CHECK(slurp(path).find("g,beta") != std::string::npos);
}

TEST_CASE("describe is stable and complete")
{
    const auto c = parse_args({"spectrum", "--m", "3"});
    const auto d = describe(c);
    CHECK(d == describe(parse_args({"spectrum", "--m", "3"})));
    for (const char *k : {"model=", "m=3", "n_grid=", "format=csv"})
        CHECK(d.find(k) != std::string::npos);
}
