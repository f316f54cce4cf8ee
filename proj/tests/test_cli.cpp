#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace std::string_literals;

namespace {

const std::string kCli = BELLSIM_CLI;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("bertrand subcommand emits the analytic fraction and a close estimate") {
    const auto r = run("bertrand --protocol offset --n 50000 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"analytic\": \"1/2\"") != std::string::npos);
    CHECK(r.out.find("\"estimate\"") != std::string::npos);

    const auto mid = run("bertrand --protocol midpoint --n 50000 --seed 7");
    CHECK(mid.exit_code == 0);
    CHECK(mid.out.find("\"analytic\": \"1/4\"") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("bertrand --protocol diagonal").exit_code == 2);
    CHECK(run("no-such-subcommand").exit_code == 2);
    CHECK(run("feasibility /nonexistent/problem.json").exit_code == 2);
    CHECK(run("collision --pair A:D").exit_code == 2);
}

TEST_CASE("help exits 0") {
    const auto r = run("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("bertrand") != std::string::npos);
}

TEST_CASE("same seed reproduces byte-identical output") {
    const auto a = run("collision --pair B:C --n 60000 --seed 13");
    const auto b = run("collision --pair B:C --n 60000 --seed 13");
    const auto c = run("collision --pair B:C --n 60000 --seed 14");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("output does not depend on the worker count") {
    const auto one = run("chsh --singlet --n 80000 --seed 5 --workers 1");
    const auto four = run("chsh --singlet --n 80000 --seed 5 --workers 4");
    CHECK(one.exit_code == 0);
    CHECK(one.out == four.out);
    CHECK(one.out.find("\"S\"") != std::string::npos);
}

TEST_CASE("collision all reports the Bell triple violation") {
    const auto r = run("collision --pair all --n 60000 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"violated_plus\": true") != std::string::npos);
    CHECK(r.out.find("\"analytic_e_bc\": -0.5") != std::string::npos);
}

TEST_CASE("deterministic strategy enumeration tops out at 2") {
    const auto r = run("chsh --enumerate-deterministic");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"max_abs_s\": 2") != std::string::npos);
}

TEST_CASE("feasibility subcommand on both branches") {
    const auto infeasible = write_temp("bellsim_cli_infeasible.json",
                                       R"({"n":3,"pairs":{"0,1":"1","0,2":"-1","1,2":"-1/2"}})");
    const auto r1 = run("feasibility " + infeasible.string());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("\"result\": \"infeasible\"") != std::string::npos);
    CHECK(r1.out.find("\"certificate\"") != std::string::npos);

    const auto feasible = write_temp("bellsim_cli_feasible.json",
                                     R"({"n":3,"pairs":{"0,1":"1","0,2":"1","1,2":"1"}})");
    const auto r2 = run("feasibility " + feasible.string());
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("\"result\": \"feasible\"") != std::string::npos);

    const auto malformed = write_temp("bellsim_cli_broken.json", "{ not json");
    CHECK(run("feasibility " + malformed.string()).exit_code == 2);
}

TEST_CASE("protocols subcommand compares the two sampling schemes") {
    const auto model = write_temp("bellsim_cli_model.json", R"({
        "type": "noncontextual",
        "lambdas": ["l0", "l1"],
        "weights": [0.6, 0.4],
        "response_a": {"x": {"l0": 1.0, "l1": 0.0}},
        "response_b": {"y": {"l0": 1.0, "l1": 0.0}}
    })");
    const auto r = run("protocols --model " + model.string() +
                       " --x x --y y --pairs 20000 --repeats 8 --seed 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"coincidence\"") != std::string::npos);
    CHECK(r.out.find("\"bell_protocol\"") != std::string::npos);
    CHECK(r.out.find("\"difference\"") != std::string::npos);
}

TEST_CASE("sweep emits one CSV row per grid point") {
    const auto r = run("sweep --target singlet --from 0 --to 90 --step 30 --n 20000 --seed 9");
    CHECK(r.exit_code == 0);
    int rows = 0;
    for (char c : r.out)
        if (c == '\n') rows++;
    CHECK(rows == 5); // header + 0,30,60,90

    CHECK(run("sweep --target singlet --from 90 --to 0 --step 30").exit_code == 2);
}
