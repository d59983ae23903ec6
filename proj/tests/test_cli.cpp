#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

// QMETRIC_CLI_PATH is injected by the build
namespace {

using nlohmann::json;

struct run_result {
    int status = -1;
    std::string out;
};

run_result run_cli(const std::string& args) {
    const std::string cmd = std::string(QMETRIC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int raw = pclose(pipe);
    run_result r;
    if (WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
    r.out = std::move(out);
    return r;
}

struct temp_file {
    std::string path;
    explicit temp_file(const std::string& name) : path("cli_test_" + name) {}
    ~temp_file() { std::remove(path.c_str()); }
};

void put(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("analyze reports exact constants and reruns byte-identically") {
    temp_file in("collinear.csv");
    put(in.path, "0,1,3\n1,0,2\n3,2,0\n");
    const auto r = run_cli("analyze --input " + in.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["command"] == "analyze");
    CHECK(j["mode"] == "exact");
    CHECK(j["n"] == 3);
    CHECK(j["labels"] == json::array({"0", "1", "2"}));
    CHECK(j["K"] == "3/2");
    CHECK(j["C"] == "1");
    CHECK(j["is_metric"] == true);
    CHECK(j["is_ultrametric"] == false);
    CHECK(j["worst_triple_K"] == json::array({0, 1, 2}));
    CHECK(j["worst_triple_C"] == json::array({0, 1, 2}));

    const auto again = run_cli("analyze --input " + in.path);
    CHECK(again.status == 0);
    CHECK(again.out == r.out);  // determinism down to the bytes
}

TEST_CASE("analyze float mode and labels file") {
    temp_file in("triangle.csv");
    temp_file lab("labels.txt");
    put(in.path, "0,3.0,5\n3.0,0,4\n5,4,0\n");
    put(lab.path, "A\nB\nC\n");
    const auto r = run_cli("analyze --input " + in.path + " --labels " + lab.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["mode"] == "float");
    CHECK(j["labels"] == json::array({"A", "B", "C"}));
    CHECK(j["K"].get<double>() == 1.25);
    CHECK(j["C"].get<double>() == 5.0 / 7.0);
    CHECK(j["is_metric"] == true);
}

TEST_CASE("metrize writes the closure and cross-checks the oracle") {
    temp_file in("stretched.csv");
    temp_file out("closure.csv");
    put(in.path, "0,1,3\n1,0,1\n3,1,0\n");
    const auto r = run_cli("metrize --input " + in.path + " --output " + out.path + " --oracle");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["K"] == "3");
    CHECK(j["applicable"] == false);
    CHECK(j["lower_ok"] == true);
    CHECK(j["upper_ok"] == true);
    CHECK(j["min_ratio"] == "2/3");
    CHECK(j["argmin_pair"] == json::array({0, 2}));
    CHECK(j["zero_pairs"] == 0);
    CHECK(j["oracle"]["checked"] == true);
    CHECK(j["oracle"]["max_interior"] == 1);
    CHECK(j["oracle"]["agrees"] == true);
    CHECK(slurp(out.path) == "0,1,2\n1,0,1\n2,1,0\n");
}

TEST_CASE("metrize on a metric leaves it alone and the bound applies") {
    temp_file in("triangle.csv");
    temp_file out("closure.csv");
    put(in.path, "0,3,5\n3,0,4\n5,4,0\n");
    const auto r = run_cli("metrize --input " + in.path + " --output " + out.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["K"] == "5/4");
    CHECK(j["applicable"] == true);
    CHECK(j["min_ratio"] == "1");
    CHECK(j["oracle"]["checked"] == false);
    CHECK(slurp(out.path) == "0,3,5\n3,0,4\n5,4,0\n");
}

TEST_CASE("exit codes separate validation failures from parse and I/O failures") {
    temp_file bad("asymmetric.csv");
    put(bad.path, "0,1\n2,0\n");
    temp_file garbage("garbage.csv");
    put(garbage.path, "hello world\n");
    temp_file out("unused.csv");

    CHECK(run_cli("analyze --input " + bad.path).status == 1);
    CHECK(run_cli("analyze --input " + garbage.path).status == 2);
    CHECK(run_cli("analyze --input no_such_file.csv").status == 2);
    CHECK(run_cli("analyze --input " + bad.path + " --bogus-flag").status == 2);
    CHECK(run_cli("metrize --input " + bad.path + " --output " + out.path).status == 1);
}

TEST_CASE("snowflake squares an exact matrix") {
    temp_file in("collinear.csv");
    temp_file out("flaked.csv");
    put(in.path, "0,1,3\n1,0,2\n3,2,0\n");
    const auto r = run_cli("snowflake --input " + in.path + " --p 2 --output " + out.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["p"] == "2");
    CHECK(j["K_before"] == "3/2");
    CHECK(j["K_after"] == "9/4");
    CHECK(slurp(out.path) == "0,1,9\n1,0,4\n9,4,0\n");

    // fractional exponents have no exact answer
    CHECK(run_cli("snowflake --input " + in.path + " --p 1/2 --output " + out.path).status == 1);
    CHECK(run_cli("snowflake --input " + in.path + " --p 0.5 --output " + out.path).status == 1);
}

TEST_CASE("snowflake accepts fractional exponents in float mode") {
    temp_file in("triangle.csv");
    temp_file out("flaked.csv");
    put(in.path, "0,4.0,16\n4.0,0,9\n16,9,0\n");
    const auto r = run_cli("snowflake --input " + in.path + " --p 0.5 --output " + out.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["mode"] == "float");
    CHECK(j["p"].get<double>() == 0.5);
    CHECK(slurp(out.path) == "0,2,4\n2,0,3\n4,3,0\n");
}

TEST_CASE("dyadic reports the truncation and emits its matrix") {
    temp_file out("dyadic.csv");
    const auto r = run_cli("dyadic --a 2/5 --depth 1 --emit-matrix " + out.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["a"] == "2/5");
    CHECK(j["depth"] == 1);
    CHECK(j["point_count"] == 3);
    CHECK(j["tau_limit"] == "2/3");
    CHECK(j["triangle_bound"] == "3/2");
    CHECK(j["tau"] == json::array({"4/5"}));
    CHECK(j["facts"].is_null());
    CHECK(j["ratios"].is_null());
    CHECK(j["collapse"].is_null());
    CHECK(j["matrix_output"] == out.path);
    CHECK(slurp(out.path) == "0,2/5,1\n2/5,0,2/5\n1,2/5,0\n");
}

TEST_CASE("dyadic flag blocks report errors distinctly") {
    CHECK(run_cli("dyadic --a 2/5 --depth 13").status == 1);   // over the depth budget
    CHECK(run_cli("dyadic --a 3/5 --depth 2").status == 1);    // base outside (0, 1/2]
    CHECK(run_cli("dyadic --a 0.4 --depth 2").status == 2);    // decimal where exact is required
    CHECK(run_cli("dyadic --a 2/5 --depth 2 --tent 1/2 --ratios").status == 2);  // exclusive flags
}

TEST_CASE("dyadic tent prints CSV rows bottom to top") {
    const auto r = run_cli("dyadic --a 2/5 --depth 0 --tent 11/64");
    REQUIRE(r.status == 0);
    CHECK(r.out == "0,0\n1/8,3\n5/32,5\n11/64,6\n3/16,4\n1/4,2\n1/2,1\n1,0\n");
}

TEST_CASE("dyadic collapse and ratio blocks carry exact strings") {
    const auto r = run_cli("dyadic --a 2/5 --depth 2 --collapse --ratios --check-facts");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["collapse"].size() == 2);
    CHECK(j["collapse"][0]["depth"] == 1);
    CHECK(j["collapse"][0]["distance"] == "4/5");
    CHECK(j["collapse"][0]["upper_bound"] == "4/5");
    CHECK(j["collapse"][1]["distance"] == "16/25");
    CHECK(j["collapse"][1]["upper_bound"] == "16/25");
    CHECK(j["ratios"]["bound"] == "3/2");
    CHECK(j["facts"]["level_coverage_ok"] == true);
    CHECK(j["facts"]["neighbor_jump_ok"] == true);
    CHECK(j["facts"]["edge_gap_ok"] == true);
}

TEST_CASE("gen is deterministic per seed") {
    temp_file a("gen_a.csv"), b("gen_b.csv"), c("gen_c.csv");
    REQUIRE(run_cli("gen --kind euclidean --n 6 --seed 42 --output " + a.path).status == 0);
    REQUIRE(run_cli("gen --kind euclidean --n 6 --seed 42 --output " + b.path).status == 0);
    REQUIRE(run_cli("gen --kind euclidean --n 6 --seed 43 --output " + c.path).status == 0);
    CHECK(slurp(a.path) == slurp(b.path));
    CHECK(slurp(a.path) != slurp(c.path));

    CHECK(run_cli("gen --kind moebius --n 6 --seed 42 --output " + a.path).status == 1);
}

TEST_CASE("gen output survives its own analyze") {
    temp_file a("gen_u.csv");
    REQUIRE(run_cli("gen --kind ultrametric --n 8 --seed 7 --output " + a.path).status == 0);
    const auto r = run_cli("analyze --input " + a.path);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["is_ultrametric"] == true);
}

TEST_CASE("version flag") {
    const auto r = run_cli("--version");
    CHECK(r.status == 0);
    CHECK(r.out == "0.1.0\n");
}
