#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "report.hpp"
#include "zdl/errors.hpp"

using namespace zdl;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "zdl_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run_cli(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const std::string cmd = std::string("cd '") + workdir().string() + "' && '" + ZDL_CLI_PATH + "' " + args + " > '" +
                            out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out);
    std::ostringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    return r;
}

// the CSV row following the column header that starts with `head`
std::vector<std::vector<std::string>> rows(const std::string& text, const std::string& head) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    bool body = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (!body) {
            body = line.rfind(head, 0) == 0;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        out.push_back(cells);
    }
    return out;
}

}  // namespace

TEST_CASE("grid syntax") {
    const auto g = cli::parse_grid("100:1000:50");
    REQUIRE(g.size() == 18);
    CHECK(g.front() == 100.0);
    CHECK(g.back() == 950.0);
    CHECK(cli::parse_grid("0.1:0.5:0.1").size() == 4);
    CHECK(cli::parse_grid("1,2.5,7") == std::vector<double>{1.0, 2.5, 7.0});
    CHECK(cli::parse_grid("42") == std::vector<double>{42.0});
    CHECK(cli::parse_int_list("0,1,3") == std::vector<int>{0, 1, 3});
    CHECK_THROWS_AS(cli::parse_grid("5:1:1"), Error);
    CHECK_THROWS_AS(cli::parse_grid("1:5:0"), Error);
    CHECK_THROWS_AS(cli::parse_grid("1:5"), Error);
    CHECK_THROWS_AS(cli::parse_grid("abc"), Error);
    CHECK_THROWS_AS(cli::parse_int_list("1.5"), Error);
}

TEST_CASE("report rendering") {
    cli::Report r;
    r.header_lines = {"tool_version=x"};
    r.notes = {"hello"};
    r.columns = {"a", "b"};
    r.add_row({"1", cli::fmt(0.1)});
    CHECK(r.render() == "# tool_version=x\n# note: hello\na,b\n1,0.10000000000000001\n");
}

TEST_CASE("count rows") {
    const Run a = run_cli("--store s.zdl count --k 1 --T 100");
    REQUIRE(a.code == 0);
    const auto r = rows(a.out, "k,T,n_exact,main_term,e_term,arg_Gk_top,arg_zeta_top,ratio_log,ratio_loglog,ratio_fgh");
    REQUIRE(r.size() == 1);
    CHECK(r[0][2] == "19");
    CHECK(std::stod(r[0][3]) == doctest::Approx(17.0956).epsilon(1e-5));
    CHECK(a.out.find("# tool_version=zdl ") == 0);
    CHECK(a.out.find("# policy_fingerprint=") != std::string::npos);
    CHECK(a.out.find("store_fingerprint=") != std::string::npos);

    const Run low = run_cli("--store s.zdl count --k 1 --T 34.159");
    REQUIRE(low.code == 0);
    const auto lr = rows(low.out, "k,T,");
    REQUIRE(lr.size() == 1);
    CHECK(std::fabs(std::stod(lr[0][3])) < 1e-3);

    // same config and store state: byte-identical report
    const Run again = run_cli("--store s.zdl count --k 1 --T 100");
    CHECK(again.out == a.out);
}

TEST_CASE("ratio sign grid is negative from t = 100 on") {
    const Run a = run_cli("--no-store diagnose lemma4 --ell 2 --t 50:1000:50 --sigma 0.1:0.5:0.1");
    REQUIRE(a.code == 0);
    const auto r = rows(a.out, "ell,sigma,t,re,im,sign");
    CHECK(r.size() == 19 * 4);
    for (const auto& row : r)
        if (std::stod(row[2]) >= 100.0) CHECK(row[5] == "negative");
}

TEST_CASE("scan, export and import through the CLI") {
    REQUIRE(run_cli("--store cli.zdl scan --k 0 --t-max 60").code == 0);
    const Run e1 = run_cli("--store cli.zdl export --k 0 --t0 1 --t1 60 --format jsonl");
    REQUIRE(e1.code == 0);
    CHECK(!e1.out.empty());
    std::ofstream(workdir() / "dump.jsonl", std::ios::binary) << e1.out;
    REQUIRE(run_cli("--store other.zdl import --k 0 --t0 1 --t1 60 --format jsonl --file dump.jsonl").code == 0);
    CHECK(run_cli("--store other.zdl export --k 0 --t0 1 --t1 60 --format jsonl").out == e1.out);

    REQUIRE(run_cli("--store cli.zdl --out reports scan --k 0 --t-max 30").code == 0);
    CHECK(fs::exists(workdir() / "reports" / "scan_k0_T30.csv"));
}

TEST_CASE("exit codes") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("count --k 1").code == 2);
    CHECK(run_cli("--no-store count --k 9 --T 100").code == 2);
    CHECK(run_cli("--no-store count --k 1 --T 5:1:1").code == 2);
    CHECK(run_cli("--no-store count --k 1 --T 100 --phi custom:-T").code == 2);
    const Run gaps = run_cli("--store empty.zdl export --k 3 --t0 1 --t1 9");
    CHECK(gaps.code == 3);
    CHECK(gaps.out.find("GapsPresent") != std::string::npos);
    CHECK(run_cli("--config /nonexistent.toml --no-store count --k 1 --T 100").code == 2);
}
