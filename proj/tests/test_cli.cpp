#include "thermocone/cones.hpp"
#include "thermocone/core.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / ("thermocone_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("cli: Landauer erasure") {
    auto r = cli("distill --landauer --beta 1 --epsilon 0");
    CHECK(r.code == 0);
    CHECK(r.out == "W = 0.69314718056\n");
    auto j = json::parse(cli("distill --bits 3 --beta 2 --epsilon 0.25 --format json --out /dev/stdout").out);
    CHECK(j["W"].get<double>() == doctest::Approx((3 * std::log(2.0) + std::log(0.75)) / 2).epsilon(1e-11));
}

TEST_CASE("cli: vessels protocol") {
    auto r = cli("memtp --d 2 --p 1,0 --N 2 --beta 0");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["system"][0].get<double>() == 0.375);
    CHECK(j["system"][1].get<double>() == 0.625);
    CHECK(j["header"]["seed"].get<int>() == 12345);
    CHECK(cli("memtp --d 3 --p 1,0 --N 2").code == 2);
}

TEST_CASE("cli: cones output matches library calls") {
    auto r = cli("cones --p 0.7,0.2,0.1 --energies 0,1,2 --beta 0.3 --samples 2000 --seed 9 --threads 2");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    auto ctx = tc::GibbsContext::thermal({0, 1, 2}, 0.3);
    tc::Vec p{0.7, 0.2, 0.1};
    auto ex = tc::future_extremes(p, ctx);
    REQUIRE(j["future_extremes"].size() == ex.size());
    for (std::size_t k = 0; k < ex.size(); ++k)
        for (int i = 0; i < 3; ++i)
            CHECK(j["future_extremes"][k]["point"][i].get<double>() == doctest::Approx(ex[k].point[i]).epsilon(1e-11));
    auto v = tc::cone_volumes_mc(p, ctx, 2000, 9, 1);
    auto mc = j["volumes"]["monte_carlo"];
    CHECK(mc["plus"].get<double>() == doctest::Approx(v.plus).epsilon(1e-11));
    CHECK(mc["minus"].get<double>() == doctest::Approx(v.minus).epsilon(1e-11));
    CHECK(mc["samples"].get<int>() == 2000);
    CHECK(j["tangent_vectors"].size() == 3);

    auto flat = json::parse(cli("volume --p 0.7,0.2,0.1 --samples 0").out);
    auto cf = tc::cone_volumes_closed_form(p, tc::GibbsContext::uniform(3));
    CHECK(flat["volumes"]["closed_form"]["plus"].get<double>() == doctest::Approx(cf.plus).epsilon(1e-11));
}

TEST_CASE("cli: output is deterministic given the seed") {
    auto d = scratch_dir();
    std::string base = "volume --p 0.5,0.3,0.2 --beta 0.7 --energies 0,1,3 --samples 5000 --seed 4 ";
    REQUIRE(cli(base + "--threads 1 --out " + (d / "a.json").string()).code == 0);
    REQUIRE(cli(base + "--threads 3 --out " + (d / "b.json").string()).code == 0);
    CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
    CHECK(json::parse(slurp(d / "a.json"))["volumes"]["monte_carlo"]["seed"].get<int>() == 4);

    std::string cat = "catalysis --alpha 0.7071067811865476 --tau-range 1,3,0.5 --format csv --out ";
    REQUIRE(cli(cat + (d / "a.csv").string()).code == 0);
    REQUIRE(cli(cat + (d / "b.csv").string()).code == 0);
    std::string a = slurp(d / "a.csv");
    CHECK(a == slurp(d / "b.csv"));
    // header line, column row, five times
    CHECK(std::count(a.begin(), a.end(), '\n') == 7);
    CHECK(a.find("t,g2,residual,q,re_r,im_r,witness,feasible") != std::string::npos);
    fs::remove_all(d);
}

TEST_CASE("cli: seed from the environment") {
    auto e = json::parse(cli("volume --p 0.6,0.3,0.1 --samples 100").out);
    setenv("THERMOCONE_SEED", "77", 1);
    auto s = json::parse(cli("volume --p 0.6,0.3,0.1 --samples 100").out);
    unsetenv("THERMOCONE_SEED");
    CHECK(e["header"]["seed"].get<int>() == 12345);
    CHECK(s["header"]["seed"].get<int>() == 77);
    CHECK(s["volumes"]["monte_carlo"]["seed"].get<int>() == 77);
}

TEST_CASE("cli: exit codes") {
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("curve --p 0.5,0.6").code == 2);
    CHECK(cli("curve --p 0.5,-0.1,0.6").code == 2);
    CHECK(cli("curve --p 0.5,0.5 --energies 0,1,2").code == 2);
    CHECK(cli("distill --beta 1").code == 2);
    // tiny normalisation errors are repaired
    auto r = cli("curve --p 0.5,0.5000000001 --beta 1");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["p"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    // no interaction time: the catalytic constraint is singular
    CHECK(cli("catalysis --alpha 0.7071067811865476 --tau 0").code == 3);
    CHECK(cli("catalysis --alpha 0.7071067811865476 --tau 5").code == 0);
}

TEST_CASE("cli: curve csv") {
    auto r = cli("curve --p 0.7,0.2,0.1 --gamma 0.5,0.3,0.2 --format csv");
    REQUIRE(r.code == 0);
    std::istringstream s(r.out);
    std::string line;
    std::getline(s, line);
    CHECK(line.rfind("# thermocone", 0) == 0);
    std::getline(s, line);
    CHECK(line == "x,y");
    int rows = 0;
    double x = 0, y = 0;
    char comma;
    while (s >> x >> comma >> y) ++rows;
    CHECK(rows == 4);
    CHECK(x == 1);
    CHECK(y == 1);
}

TEST_CASE("cli: TOML spec with flag precedence") {
    auto d = scratch_dir();
    std::ofstream(d / "run.toml") << "[memtp]\np = [1, 0]\nN = 3\nbeta = 0\n";
    std::string cfg = "--config " + (d / "run.toml").string() + " memtp";
    auto from_file = json::parse(cli(cfg).out);
    auto flagged = json::parse(cli(cfg + " --N 2").out);
    CHECK(from_file["N"].get<int>() == 3);
    CHECK(flagged["N"].get<int>() == 2);
    CHECK(flagged["system"][0].get<double>() == 0.375);
    fs::remove_all(d);
}

TEST_CASE("cli: Wigner field export parses back") {
    auto d = scratch_dir();
    auto r = cli("catalysis --tau 5 --wigner-out " + (d / "w.csv").string());
    REQUIRE(r.code == 0);
    std::ifstream f(d / "w.csv");
    std::string line;
    std::getline(f, line);
    std::getline(f, line);
    CHECK(line == "x,p,W");
    double x, p, w, total = 0, abs_total = 0;
    char c1, c2;
    std::size_t n = 0;
    while (f >> x >> c1 >> p >> c2 >> w) {
        total += w;
        abs_total += std::abs(w);
        ++n;
    }
    const double h = 0.05;
    CHECK(n > 1000);
    CHECK(total * h * h == doctest::Approx(1).epsilon(1e-3));
    // the stored field keeps its negative regions
    CHECK(std::log(abs_total * h * h) > 0.05);
    fs::remove_all(d);
}
