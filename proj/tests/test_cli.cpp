#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;  // stdout + stderr
};

const fs::path& workdir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("fdoc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path capture = workdir() / ("capture_" + std::to_string(counter++) + ".txt");
    std::string cmd = "cd " + workdir().string() + " && " + FDOC_CLI_PATH + " " + args + " > " +
                      capture.string() + " 2>&1";
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage and argument errors exit with code 2") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("").code == 2);                                   // missing subcommand
    CHECK(run_cli("solve").code == 2);                              // no problem source
    CHECK(run_cli("solve --config missing.cfg").code == 2);        // unreadable file
    CHECK(run_cli("solve --example ex3").code == 2);                // unknown builtin
    CHECK(run_cli("solve --example ex1 --config x.cfg").code == 2); // mutually exclusive
    CHECK(run_cli("solve --example ex1 --u 3").code == 2);          // outside the box
    CHECK(run_cli("spike --example ex1 --theta 0.25 --eps 0.05").code == 2);  // --v required
    CHECK(run_cli("check --example ex1 --u 0.1 0.2").code == 2);    // wrong control arity
}

TEST_CASE("solve reports the cost and writes trajectory plus manifest") {
    RunResult r = run_cli("solve --example ex2 --u -0.5 --N 200 --out traj.csv");
    REQUIRE(r.code == 0);
    REQUIRE(contains(r.output, "J = "));
    const double J = std::stod(r.output.substr(r.output.find("J = ") + 4));
    CHECK(std::abs(J + 0.125) < 1e-3);  // -u0^2 (T-h)^(2a) / Gamma(2a+1)

    REQUIRE(fs::exists(workdir() / "traj.csv"));
    const fs::path mpath = workdir() / "traj.csv.manifest.json";
    REQUIRE(fs::exists(mpath));
    nlohmann::json manifest = nlohmann::json::parse(slurp(mpath));
    CHECK(manifest["problem"] == "builtin ex2");
    CHECK(manifest["command"] == "solve");
    CHECK(manifest["alpha"] == 0.5);
    REQUIRE(manifest["outputs"].size() == 1);
    CHECK(fs::exists(workdir() / manifest["outputs"][0].get<std::string>()));
    CHECK(manifest.contains("resolved_config"));

    std::string head = slurp(workdir() / "traj.csv").substr(0, 40);
    CHECK(contains(head, "# fdoc trajectory v1"));
}

TEST_CASE("identical invocations write byte-identical csv") {
    RunResult a = run_cli("solve --example ex1 --alpha 0.7 --N 120 --u 0.25 --out rep_a.csv");
    RunResult b = run_cli("solve --example ex1 --alpha 0.7 --N 120 --u 0.25 --out rep_b.csv");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(slurp(workdir() / "rep_a.csv") == slurp(workdir() / "rep_b.csv"));
}

TEST_CASE("adjoint command reports the initial costate") {
    RunResult r = run_cli("adjoint --example ex1 --N 100 --out adj.csv");
    REQUIRE(r.code == 0);
    CHECK(contains(r.output, "psi(0) ="));
    CHECK(fs::exists(workdir() / "adj.csv"));
    // psi_1(0) = -1 and psi_2(0) = -sqrt(pi) at alpha = 1/2
    std::istringstream is(r.output.substr(r.output.find("psi(0) =") + 8));
    double p1 = 0.0, p2 = 0.0;
    is >> p1 >> p2;
    CHECK(p1 == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(p2 == doctest::Approx(-std::sqrt(M_PI)).epsilon(1e-6));
}

TEST_CASE("check rejects the linear benchmark for first-order reasons") {
    RunResult r = run_cli("check --example ex1 --N 100 --out chk1.csv");
    CHECK(r.code == 1);
    CHECK(contains(r.output, "first-order maximum condition violated"));
    CHECK(contains(r.output, "VIOLATED"));
    CHECK(fs::exists(workdir() / "chk1.csv"));
    CHECK(contains(slurp(workdir() / "chk1.csv"), "# verdict"));
}

TEST_CASE("check rejects the singular bilinear benchmark for second-order reasons") {
    RunResult r = run_cli("check --example ex2 --N 100 --out chk2.csv");
    CHECK(r.code == 1);
    CHECK(contains(r.output, "singular: yes"));
    CHECK(contains(r.output, "second-order condition violated on singular control"));
}

TEST_CASE("a pinned control passes every condition vacuously") {
    const fs::path cfg = workdir() / "pinned.cfg";
    std::ofstream os(cfg);
    os << "fdoc-problem v1\n"
          "alpha 0.5\nT 1\nh 0.5\nN 40\nn 2\nr 1\n"
          "dynamics.kind linear_delay\n"
          "dynamics.A1 0 1 0 0\n"
          "dynamics.B 1 1\n"
          "cost.terminal linear 1 0\n"
          "control.lower 0\ncontrol.upper 0\n"
          "y0 0 0\nhistory 0 0\n";
    os.close();
    RunResult r = run_cli("check --config pinned.cfg --out chk3.csv");
    CHECK(r.code == 0);
    CHECK(contains(r.output, "all necessary conditions pass"));
}

TEST_CASE("spike command prints the ladder and respects the horizon") {
    RunResult r = run_cli(
        "spike --example ex1 --N 400 --theta 0.25 --v -1 --eps 0.1 --ladder 3 --out spk.csv");
    REQUIRE(r.code == 0);
    CHECK(contains(r.output, "eps = 0.1"));
    CHECK(contains(r.output, "eps = 0.05"));
    CHECK(contains(r.output, "eps = 0.025"));
    CHECK(contains(r.output, "residual_ratio"));
    CHECK(fs::exists(workdir() / "spk.csv"));

    // window may not touch the horizon
    CHECK(run_cli("spike --example ex1 --N 400 --theta 0.9 --v -1 --eps 0.1").code == 2);
}

TEST_CASE("example command reproduces the published behaviour of both benchmarks") {
    RunResult r1 = run_cli("example ex1 --N 100");
    CHECK(r1.code == 0);
    CHECK(contains(r1.output, "PASS  costate_1 == -1"));
    CHECK(contains(r1.output, "PASS  costate_2 closed form"));
    CHECK(contains(r1.output, "PASS  first-order condition violated at u == 0"));
    CHECK(!contains(r1.output, "FAIL"));

    RunResult r2 = run_cli("example ex2 --N 100");
    CHECK(r2.code == 0);
    CHECK(contains(r2.output, "PASS  cost at u == -1/2 matches closed form"));
    CHECK(contains(r2.output, "PASS  u == 0 is singular"));
    CHECK(contains(r2.output, "PASS  second-order condition violated at u == 0"));
}

TEST_CASE("convergence command reports a shrinking error ladder") {
    RunResult r = run_cli("convergence --alpha 0.6 --out conv.csv");
    REQUIRE(r.code == 0);
    CHECK(contains(r.output, "N = 50"));
    CHECK(contains(r.output, "N = 400"));
    CHECK(contains(r.output, "order = 1."));  // roughly second order in practice
    CHECK(fs::exists(workdir() / "conv.csv"));
}
