#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include <unistd.h>

#include "mvsel/io.hpp"
#include "mvsel/rng.hpp"

using namespace mvsel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mvsel_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("matrices round-trip exactly") {
    TempDir d;
    SeededRng rng(1);
    Matrix m(7, 4);
    for (double& v : m.values()) v = rng.standard_normal() * std::pow(10.0, 20.0 * rng.uniform() - 10.0);
    m(0, 0) = 0.0;
    m(0, 1) = -0.0;
    m(1, 1) = std::numeric_limits<double>::denorm_min();
    m(2, 2) = 0.1;
    io::write_matrix_csv(d.path / "m.csv", m);
    CHECK(io::read_matrix_csv(d.path / "m.csv") == m);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(2.0) == "2");
}

TEST_CASE("masks and intervals round-trip") {
    TempDir d;
    Mask g(3, 2);
    g.set(0, 1, true);
    g.set(2, 0, true);
    io::write_mask_csv(d.path / "g.csv", g);
    CHECK(io::read_mask_csv(d.path / "g.csv") == g);
    CHECK(io::read_text(d.path / "g.csv") == "0,1\n0,0\n1,0\n");

    IntervalMatrix ci(2, 3);
    ci(0, 0) = Interval{-1.5, 2.25};
    ci(1, 2) = Interval{0.1, 0.1};
    io::write_intervals_csv(d.path / "ci.csv", ci);
    CHECK(io::read_intervals_csv(d.path / "ci.csv") == ci);
    const std::string text = io::read_text(d.path / "ci.csv");
    CHECK(text.rfind("1,1,-1.5,2.25\n1,2,NA,NA\n", 0) == 0);
}

TEST_CASE("draw files") {
    TempDir d;
    std::vector<Matrix> draws{Matrix{{1.0, 2.0}, {3.0, 4.0}}, Matrix{{0.0, -1.0}, {0.5, 1e-300}}};
    io::write_draws_csv(d.path / "dr.csv", draws);
    CHECK(io::read_draws_csv(d.path / "dr.csv", 2, 2) == draws);
    CHECK_THROWS(io::read_draws_csv(d.path / "dr.csv", 3, 2));
}

TEST_CASE("malformed input is rejected") {
    TempDir d;
    io::write_text(d.path / "ragged.csv", "1,2\n3\n");
    CHECK_THROWS(io::read_matrix_csv(d.path / "ragged.csv"));
    io::write_text(d.path / "junk.csv", "1,abc\n");
    CHECK_THROWS(io::read_matrix_csv(d.path / "junk.csv"));
    io::write_text(d.path / "trail.csv", "1,2x\n");
    CHECK_THROWS(io::read_matrix_csv(d.path / "trail.csv"));
    CHECK_THROWS(io::read_matrix_csv(d.path / "missing.csv"));
    CHECK_THROWS(io::write_text(d.path / "no" / "such" / "dir.txt", "x"));
}

TEST_CASE("header tables") {
    TempDir d;
    const std::vector<std::string> header{"a", "b"};
    const std::vector<std::vector<std::string>> rows{{"1", "x"}, {"2", "y"}};
    io::write_table_csv(d.path / "t.csv", header, rows);
    CHECK(io::read_text(d.path / "t.csv") == "a,b\n1,x\n2,y\n");
}
