#include <doctest.h>

#include "etsim/cli.hpp"
#include "etsim/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace etsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "etsim_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("design report carries the full formula set") {
    DesignArgs a;
    a.A = 5.5651;
    a.M = 0.05;
    a.rho0 = 0.9;
    a.gamma = 0.1;
    std::ostringstream out;
    CHECK(cmd_design(a, out) == kExitOk);
    const std::string s = out.str();
    for (const char* key :
         {"min_J=", "J=", "delta=", "cells=5", "g_constructive=4", "g_paper_int=3",
          "tau_min=", "Rtr_bound=", "Rs_bound=", "datarate_threshold=8.02874"})
        CHECK(s.find(key) != std::string::npos);
}

TEST_CASE("design rejects an infeasible threshold with the floor value") {
    DesignArgs a;
    a.A = 5.5651;
    a.M = 0.2;
    a.rho0 = 0.1;
    a.gamma = 0.1;
    a.J = 0.01;
    std::ostringstream out;
    CHECK_THROWS_AS(cmd_design(a, out), FeasibilityError);
}

TEST_CASE("simulate writes the four artifacts and is byte-deterministic") {
    SimulateArgs a;
    a.scenario = "c";
    a.out_dir = fresh_dir("simc1").string();
    std::ostringstream log;
    REQUIRE(cmd_simulate(a, log) == kExitOk);
    for (const char* f : {"trace.csv", "events.csv", "stats.txt", "manifest.txt"})
        CHECK(fs::exists(fs::path(a.out_dir) / f));

    // every event row carries the 4-bit packet width
    std::istringstream events(slurp(fs::path(a.out_dir) / "events.csv"));
    std::string line;
    std::getline(events, line); // header
    int rows = 0;
    while (std::getline(events, line)) {
        CHECK(line.substr(line.rfind(',') + 1) == "4");
        ++rows;
    }
    CHECK(rows > 0);

    SimulateArgs b = a;
    b.out_dir = fresh_dir("simc2").string();
    REQUIRE(cmd_simulate(b, log) == kExitOk);
    CHECK(slurp(fs::path(a.out_dir) / "trace.csv") ==
          slurp(fs::path(b.out_dir) / "trace.csv"));
    CHECK(slurp(fs::path(a.out_dir) / "events.csv") ==
          slurp(fs::path(b.out_dir) / "events.csv"));
    CHECK(slurp(fs::path(a.out_dir) / "stats.txt") ==
          slurp(fs::path(b.out_dir) / "stats.txt"));
}

TEST_CASE("simulate rejects a delay bound below the grid step") {
    SimulateArgs a;
    a.scalar = true;
    a.A = 5.5651;
    a.B = 2.2513;
    a.M = 0.0;
    a.gamma = 0.0;
    a.out_dir = fresh_dir("simbad").string();
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_simulate(a, log), std::invalid_argument);
}

TEST_CASE("scalar simulate honors explicit seeds and runs clean") {
    SimulateArgs a;
    a.scalar = true;
    a.A = 5.5651;
    a.B = 2.2513;
    a.M = 0.05;
    a.gamma = 0.1;
    a.seed_delay = 7;
    a.seed_w = 8;
    a.out_dir = fresh_dir("simscalar").string();
    std::ostringstream log;
    REQUIRE(cmd_simulate(a, log) == kExitOk);
    const std::string stats = slurp(fs::path(a.out_dir) / "stats.txt");
    CHECK(stats.find("events=") != std::string::npos);
    CHECK(stats.find("kappa=") != std::string::npos);
    const std::string manifest = slurp(fs::path(a.out_dir) / "manifest.txt");
    CHECK(manifest.find("[simulate]") != std::string::npos);
    CHECK(manifest.find("seed-delay=7") != std::string::npos);
}

TEST_CASE("sweep writes the schema columns and flags infeasible points") {
    SweepArgs a;
    a.A = 5.5651;
    a.M = 0.2;
    a.rho0 = 0.1;
    a.J = 0.05; // infeasible beyond small gamma
    a.gamma_grid = {0.001, 0.2};
    a.out_file = (fresh_dir("sweep") / "sweep.csv").string();
    std::ostringstream log;
    REQUIRE(cmd_sweep(a, log) == kExitOk);
    const std::string csv = slurp(a.out_file);
    CHECK(csv.find("gamma,J,delta,g_paper_real,g_paper_int,g_constructive,tau_min,"
                   "Rtr_bound,Rs_bound,datarate_threshold,error") != std::string::npos);
    CHECK(csv.find("point 1") != std::string::npos);
    CHECK(fs::exists(a.out_file + ".manifest.txt"));
}

TEST_CASE("sweep with an empty grid is a usage error") {
    SweepArgs a;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_sweep(a, log), std::invalid_argument);
}

TEST_CASE("measured pendulum sweep fills the measured columns") {
    SweepArgs a;
    a.pendulum = true;
    a.measured = true;
    a.M = 0.05;
    a.gamma_grid = {0.005, 0.1};
    a.out_file = (fresh_dir("sweepm") / "sweep.csv").string();
    std::ostringstream log;
    REQUIRE(cmd_sweep(a, log) == kExitOk);
    const std::string csv = slurp(a.out_file);
    CHECK(csv.find("measured_Rs,measured_Rtr") != std::string::npos);
}
