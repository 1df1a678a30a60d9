#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(FPBA_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// Run with --out and read the JSON report back.
json report(const std::string& args, int expected_code = 0) {
    const auto path = fs::temp_directory_path() / ("fpba_cli_test_" + std::to_string(::getpid()) + ".json");
    auto r = run("--out " + path.string() + " " + args);
    CHECK_MESSAGE(r.code == expected_code, args << "\n" << r.out);
    std::ifstream in(path);
    json j = json::parse(in);
    fs::remove(path);
    return j;
}

std::string data(const char* name) { return std::string(FPBA_DATA_DIR) + "/" + name; }

fs::path write_temp(const std::string& name, const std::string& text) {
    auto p = fs::temp_directory_path() / (name + std::to_string(::getpid()));
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("build") {
    auto j = report("build " + data("tr_chain.model"));
    CHECK(j["points"] == 9);
    CHECK(j["atoms"] == 9);
    CHECK(j["cardinality"] == "512");

    auto free_model = write_temp("free", "h=1; J=2; D=1\n<>\n0\n1\n");
    auto f = report("build " + free_model.string());
    CHECK(f["points"] == 8);
    fs::remove(free_model);

    auto ptr = report("build " + data("ptr_small.model") + " --builder ptr --dump");
    CHECK(ptr["points"] == 10);
    CHECK(ptr.contains("presentation"));

    auto bad = write_temp("bad", "h=1; J=2; D=1\n<>\n0\n1/x\n");
    auto r = run("build " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("line 4") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("check") {
    auto z = report("check " + data("tr_chain.model") + " --term '(and x:0/0/* (not x:0))' --oracle-and-closed-form");
    CHECK(z["verdict"] == true);
    CHECK(z["agree"] == true);

    auto w = report("check " + data("tr_chain.model") + " --term '(and x:0 (not x:0/0))' --oracle-and-closed-form");
    CHECK(w["verdict"] == false);
    CHECK(w["witness_value"] == true);
    CHECK(w["witness"]["x:0"] == true);
    CHECK(w["witness"]["x:0/0"] == false);

    auto l = report("check free:2 --query leq --term '(and g:0 g:1)' --term2 g:0");
    CHECK(l["verdict"] == true);

    auto ind = report("check free:3 --query independence --x g:0 --x g:1 --base-gen g:2");
    CHECK(ind["independent"] == true);

    CHECK(run("check free:2 --term '(and g:0'").code == 2);
}

TEST_CASE("stats, surgery and schedules") {
    auto s = report("stats free:2");
    CHECK(s["points"] == 4);
    CHECK(s["length"] == 5);

    auto g = report("surgery atoms:2 atoms:2 --a-star '{0}'");
    CHECK(g["points"] == 3);
    CHECK(g["embedding_injective"] == true);

    auto sch = report("schedule " + data("schedule.txt") + " --b0 atoms:2");
    REQUIRE(sch["stages"].size() == 4);
    for (std::size_t i = 0; i + 1 < sch["stages"].size(); ++i) {
        const auto& st = sch["stages"][i];
        CHECK(st["embedding_injective"] == true);
        // (points − |a*|) + |a*|·|factor| with a single-point a*
        CHECK(sch["stages"][i + 1]["points"] ==
              st["points"].get<int>() - 1 + st["factor_points"].get<int>());
    }
}

TEST_CASE("quotient") {
    auto q = report("quotient " + data("trr_fork.model") + " --ideal '{0}'");
    CHECK(q["isomorphic"] == true);
    CHECK(q["quotient_points"] == q["rebuilt_points"]);
}

TEST_CASE("trees and suites") {
    auto t = report("trees --depth 4");
    for (const auto& [name, c] : t["checks"].items()) CHECK_MESSAGE(c["pass"] == true, name);
    report("trees --depth 3 --order as-printed", 1);

    auto s = report("suite trees --depth 4");
    CHECK(s["failure_count"] == 0);

    auto r = run("suite no-such-suite");
    CHECK(r.code == 2);
    CHECK(r.out.find("unknown suite") != std::string::npos);
    CHECK(run("frobnicate").code == 2);
}
