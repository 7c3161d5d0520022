#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "cybersir/io.hpp"

using namespace cybersir;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() /
               ("cybersir_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter()
    {
        static int c = 0;
        return c;
    }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("portfolio csv round trip preserves every coefficient")
{
    TempDir dir;
    std::vector<firmmodel::Firm> firms;
    firmmodel::Firm a;
    a.id = "A1";
    a.sector = "Manufacturing";
    a.rho = 0.37;
    a.subunits = {{0.0123456789012345, 0.0004, 0.0126}, {0.02, 0.0005, 0.013}};
    firms.push_back(a);
    firmmodel::Firm b;
    b.id = "B2";
    b.sector = "Technology";
    b.rho = 0.0;
    b.subunits = {{1.5, -0.0001, 0.02}};
    firms.push_back(b);

    const std::string path = dir.file("portfolio.csv");
    io::write_portfolio_csv(path, firms);
    const std::vector<firmmodel::Firm> back = io::read_portfolio_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "A1");
    CHECK(back[0].sector == "Manufacturing");
    CHECK(back[0].rho == a.rho);
    REQUIRE(back[0].size() == 2);
    CHECK(back[0].subunits[0].z0 == a.subunits[0].z0);
    CHECK(back[0].subunits[0].drift == a.subunits[0].drift);
    CHECK(back[0].subunits[1].vol == a.subunits[1].vol);
    CHECK(back[1].subunits[0].drift == b.subunits[0].drift);
}

TEST_CASE("portfolio csv rejects malformed input with row context")
{
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    write_text(path,
               "firm_id,sector,K,rho,subunit_idx,z0,mu_daily,sigma_daily\n"
               "A,S,1,0.0,0,1.0,0.001,0.01\n"
               "B,S,1,0.0,0,-5.0,0.001,0.01\n");
    try {
        io::read_portfolio_csv(path);
        FAIL("expected SchemaError");
    } catch (const io::SchemaError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":3:") != std::string::npos);  // the offending line
        CHECK(msg.find("z0") != std::string::npos);
    }

    write_text(path, "firm,sector\nA,S\n");
    CHECK_THROWS_AS(io::read_portfolio_csv(path), io::SchemaError);
    CHECK_THROWS_AS(io::read_portfolio_csv(dir.file("missing.csv")), io::SchemaError);
}

TEST_CASE("infections csv round trip and validation")
{
    TempDir dir;
    calibration::InfectionPanel panel;
    panel.counts = {{3, 1, 0}, {5, 2, 1}, {4, 2, 2}};
    const std::string path = dir.file("infections.csv");
    io::write_infections_csv(path, panel);
    const calibration::InfectionPanel back = io::read_infections_csv(path);
    CHECK(back.counts == panel.counts);

    write_text(path, "day,size,count\n0,1,-3\n");
    try {
        io::read_infections_csv(path);
        FAIL("expected SchemaError");
    } catch (const io::SchemaError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    write_text(path, "day,size,count\n0,1,notanumber\n");
    CHECK_THROWS_AS(io::read_infections_csv(path), io::SchemaError);
}

TEST_CASE("revenues csv round trip groups years per firm")
{
    TempDir dir;
    std::vector<calibration::RevenueSeries> panel;
    panel.push_back({"A", "S1", {2.0, 2.2, 2.4}});
    panel.push_back({"B", "S2", {5.0, 5.5, 6.0}});
    const std::string path = dir.file("revenues.csv");
    io::write_revenues_csv(path, panel);
    const auto back = io::read_revenues_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].firm_id == "A");
    CHECK(back[0].by_year == panel[0].by_year);
    CHECK(back[1].sector == "S2");

    write_text(path, "firm_id,sector,year,revenue_meur\nA,S,1,2.0\nA,S,3,2.5\n");
    CHECK_THROWS_AS(io::read_revenues_csv(path), io::SchemaError);  // gap in years
}

TEST_CASE("sector rates csv validation")
{
    TempDir dir;
    const std::string path = dir.file("rates.csv");
    write_text(path, "sector,share\nManufacturing,0.2068\nTechnology,0.1322\n");
    const auto rates = io::read_sector_rates_csv(path);
    REQUIRE(rates.size() == 2);
    CHECK(rates[0].share == doctest::Approx(0.2068));

    write_text(path, "sector,share\nManufacturing,1.5\n");
    CHECK_THROWS_AS(io::read_sector_rates_csv(path), io::SchemaError);
}

TEST_CASE("theta json round trip")
{
    TempDir dir;
    io::ThetaDocument doc;
    doc.theta = {0.4474, 0.0151, 0.3466, 0.6782, 0.5471, 14210.0};
    doc.zipf = firmmodel::ZipfSpec(1.759, 0.784, 12);
    doc.j2 = 0.123;
    doc.converged = true;
    doc.evaluations = 777;
    doc.seed = 42;
    const std::string path = dir.file("theta.json");
    io::write_theta_json(path, doc);
    const io::ThetaDocument back = io::read_theta_json(path);
    CHECK(back.theta.kappa_a == doc.theta.kappa_a);
    CHECK(back.theta.h_star == doc.theta.h_star);
    CHECK(back.zipf.exponent == doc.zipf.exponent);
    CHECK(back.j2 == doc.j2);
    CHECK(back.evaluations == doc.evaluations);
    CHECK(back.seed == doc.seed);

    write_text(path, "{\"kappa_a\": 0.4}");
    CHECK_THROWS_AS(io::read_theta_json(path), io::SchemaError);
    write_text(path, "not json");
    CHECK_THROWS_AS(io::read_theta_json(path), io::SchemaError);
}

TEST_CASE("format_double survives a parse round trip")
{
    for (double v : {0.1, 1.0 / 3.0, 12345.678901234567, 1e-17, 0.0}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
