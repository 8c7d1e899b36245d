#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fbkde/cli.hpp"

using namespace fbkde;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fbkde_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("read_csv parses header plus numeric rows") {
    TempDir tmp;
    const std::string path = tmp.file("ok.csv");
    write_file(path, "x,y\n1.5,2.0\n-0.25, 3e-1\n4,5\n");
    const Eigen::MatrixXd data = cli::read_csv(path);
    REQUIRE(data.rows() == 3);
    REQUIRE(data.cols() == 2);
    CHECK(data(0, 0) == 1.5);
    CHECK(data(1, 1) == 0.3);
    CHECK(data(2, 0) == 4.0);
}

TEST_CASE("read_csv reports the offending row") {
    TempDir tmp;
    const std::string bad_cell = tmp.file("bad.csv");
    write_file(bad_cell, "x\n1.0\nfoo\n");
    CHECK_THROWS_WITH_AS(cli::read_csv(bad_cell),
                         doctest::Contains("row 3"), std::runtime_error);

    const std::string ragged = tmp.file("ragged.csv");
    write_file(ragged, "x,y\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(cli::read_csv(ragged),
                         doctest::Contains("row 3"), std::runtime_error);

    const std::string empty = tmp.file("empty.csv");
    write_file(empty, "");
    CHECK_THROWS_AS(cli::read_csv(empty), std::runtime_error);

    const std::string header_only = tmp.file("header.csv");
    write_file(header_only, "x,y\n");
    CHECK_THROWS_AS(cli::read_csv(header_only), std::runtime_error);

    CHECK_THROWS_AS(cli::read_csv(tmp.file("missing.csv")), std::runtime_error);
}

TEST_CASE("fit produces byte-identical models for the same seed") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.density = "bimodal";
    cfg.n = 80;
    cfg.seed = 42;
    cfg.method = "fbkde";
    cfg.tuning = "rot";

    cfg.out = tmp.file("a.json");
    CHECK(cli::cmd_fit(cfg) == 0);
    cfg.out = tmp.file("b.json");
    CHECK(cli::cmd_fit(cfg) == 0);
    CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));

    cfg.seed = 43;
    cfg.out = tmp.file("c.json");
    CHECK(cli::cmd_fit(cfg) == 0);
    CHECK(slurp(tmp.file("a.json")) != slurp(tmp.file("c.json")));
}

TEST_CASE("fit then eval round trip on a synthetic density") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.density = "bimodal";
    cfg.n = 100;
    cfg.seed = 7;
    cfg.method = "kde";
    cfg.out = tmp.file("model.json");
    REQUIRE(cli::cmd_fit(cfg) == 0);

    cli::RunConfig ev;
    ev.density = "bimodal";
    ev.n = 100;
    ev.seed = 8;
    ev.model = tmp.file("model.json");
    ev.out = tmp.file("report.json");
    CHECK(cli::cmd_eval(ev) == 0);

    const std::string report = slurp(tmp.file("report.json"));
    CHECK(report.find("\"j_test\"") != std::string::npos);
    CHECK(report.find("\"hoeffding_bound\"") != std::string::npos);
    CHECK(report.find("\"sup_error\"") != std::string::npos);
    CHECK(report.find("\"ise\"") != std::string::npos);
}

TEST_CASE("fit accepts CSV input") {
    TempDir tmp;
    const std::string csv = tmp.file("data.csv");
    std::ostringstream body;
    body << "x\n";
    for (int i = 0; i < 60; ++i) body << (0.05 * i - 1.5) << "\n";
    write_file(csv, body.str());

    cli::RunConfig cfg;
    cfg.csv = csv;
    cfg.method = "kde";
    cfg.out = tmp.file("model.json");
    CHECK(cli::cmd_fit(cfg) == 0);
    CHECK(slurp(tmp.file("model.json")).find("\"weights\"") != std::string::npos);

    cli::RunConfig both = cfg;
    both.density = "bimodal";
    CHECK_THROWS_AS(cli::cmd_fit(both), std::runtime_error);
}

TEST_CASE("plotdata emits the curve and stem CSVs") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.density = "bimodal";
    cfg.n = 80;
    cfg.seed = 4;
    cfg.grid_points = 101;
    cfg.out = tmp.file("plot.csv");
    REQUIRE(cli::cmd_plotdata(cfg) == 0);

    std::ifstream in(tmp.file("plot.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,pdf,fbkde,kde,vkde");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 101);

    const std::string stem = slurp(tmp.file("plot.csv") + ".stem.csv");
    CHECK(stem.rfind("z,alpha\n", 0) == 0);
}

TEST_CASE("sweep writes the aggregate CSV schema") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.density = "bimodal";
    cfg.seed = 2;
    cfg.repeats = 2;
    cfg.sweep_sizes = {40, 60};
    cfg.method = "fbkde";
    cfg.out = tmp.file("sweep.json");
    REQUIRE(cli::cmd_sweep(cfg) == 0);

    const std::string csv = slurp(tmp.file("sweep.json") + ".csv");
    CHECK(csv.rfind("n,method,metric,mean,std\n", 0) == 0);
    CHECK(csv.find("\n40,fbkde,") != std::string::npos);
    CHECK(csv.find("\n60,fbkde,") != std::string::npos);
}

TEST_CASE("unknown method or tuning is rejected") {
    cli::RunConfig cfg;
    cfg.density = "bimodal";
    cfg.n = 50;
    cfg.method = "magic";
    CHECK_THROWS_AS(cli::cmd_fit(cfg), std::runtime_error);
    cfg.method = "fbkde";
    cfg.tuning = "guess";
    CHECK_THROWS_AS(cli::cmd_fit(cfg), std::runtime_error);
}
