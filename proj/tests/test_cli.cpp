// End-to-end tests of the installed CLI surface: exit codes, report
// rendering, round trips. Paths are injected at configure time.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef LUMPBN_CLI_PATH
#error "LUMPBN_CLI_PATH must be defined"
#endif
#ifndef LUMPBN_MODEL_DIR
#error "LUMPBN_MODEL_DIR must be defined"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(LUMPBN_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string model(const std::string& name) {
    return std::string(LUMPBN_MODEL_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("check: simple_ex verdicts and exit codes") {
    CHECK(run("check " + model("simple_ex.json") + " --property d1").exit_code == 0);
    CHECK(run("check " + model("simple_ex.json") + " --property d2").exit_code == 0);
    const RunResult d3 =
        run("check " + model("simple_ex.json") + " --property d3");
    CHECK(d3.exit_code == 1);
    CHECK(d3.out.find("witness") != std::string::npos);
}

TEST_CASE("check: property all prints a summary with the implication chain") {
    const RunResult r = run("check " + model("ks_chain.json") + " --property all");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("summary:") != std::string::npos);
    CHECK(r.out.find("D3 => D2 => D1") != std::string::npos);
}

TEST_CASE("check: json and text renderings agree on the numbers") {
    const RunResult text =
        run("check " + model("ex_not_d1.json") + " --property d1 --format text");
    const RunResult js =
        run("check " + model("ex_not_d1.json") + " --property d1 --format json");
    CHECK(text.exit_code == 1);
    CHECK(js.exit_code == 1);
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["verdict"] == "fails");
    const std::string lhs = doc["witness"]["lhs"].get<std::string>();
    const std::string rhs = doc["witness"]["rhs"].get<std::string>();
    CHECK(text.out.find(lhs) != std::string::npos);
    CHECK(text.out.find(rhs) != std::string::npos);
}

TEST_CASE("check: malformed model exits 64 with a path") {
    const std::string path = "bad_model.json";
    {
        std::ofstream out(path);
        out << R"({"vertices": [{"name": "v1", "alphabet": ["a1","a2"],
                   "cpt": [["1/2","2/5"]]}]})";
    }
    const RunResult r = run("check " + path + " --property d1");
    CHECK(r.exit_code == 64);
    CHECK(r.out.find("/vertices") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("check: emit-dot prints the DAG") {
    const RunResult r = run("check " + model("simple_ex.json") +
                            " --property d1 --emit-dot");
    CHECK(r.out.find("digraph") != std::string::npos);
    CHECK(r.out.find("\"v1\" -> \"v2\"") != std::string::npos);
}

TEST_CASE("search: enumeration and filtering") {
    const RunResult all = run("search " + model("simple_ex.json"));
    CHECK(all.exit_code == 0);
    int lines = 0;
    for (char c : all.out) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 4);  // Bell(3) - 1 nontrivial shared partitions

    const RunResult ks = run("search " + model("ks_chain.json") + " --property ks");
    CHECK(ks.exit_code == 0);
    CHECK(ks.out.find("\"report\"") != std::string::npos);
    CHECK(ks.out.find("holds") != std::string::npos);

    // no D3-valid proper lumping of simple_ex except all-to-one
    const RunResult d3 = run("search " + model("simple_ex.json") + " --property d3");
    CHECK(d3.exit_code == 0);
}

TEST_CASE("markov: strong quotient and weak modes") {
    const RunResult strong =
        run("markov " + model("ks_matrix.txt") +
            " --lumping a1:b1,a2:b1,a3:b2 --mode strong --format json");
    CHECK(strong.exit_code == 0);
    const auto doc = nlohmann::json::parse(strong.out);
    CHECK(doc["extra"]["quotient_matrix"][0][0] == "3/4");

    const RunResult weak_bad =
        run("markov " + model("not_d1_matrix.txt") +
            " --lumping a1:b1,a2:b1,a3:b2 --mode weak --initial 1,0,0 --horizon 4");
    CHECK(weak_bad.exit_code == 1);

    const RunResult weak_cycle =
        run("markov " + model("cycle4_matrix.txt") +
            " --lumping a1:b1,a2:b2,a3:b3,a4:b1 --mode weak --initial 1,0,0,0"
            " --horizon 4 --format json");
    CHECK(weak_cycle.exit_code == 0);
    const auto cyc = nlohmann::json::parse(weak_cycle.out);
    CHECK(cyc["extra"]["dtmc"] == false);
}

TEST_CASE("witness: emits a model that re-checks as a D1 failure") {
    const std::string out_path = "counterexample.json";
    const RunResult w = run("witness " + model("chain3.dag.json") +
                            " --lumping a1:b1,a2:b1,a3:b2 --seed 5 --out " +
                            out_path);
    CHECK(w.exit_code == 0);
    const RunResult recheck = run("check " + out_path + " --property d1");
    CHECK(recheck.exit_code == 1);
    std::remove(out_path.c_str());
}

TEST_CASE("witness: inapplicable DAG exits 64") {
    const RunResult r = run("witness " + model("vee.dag.json") +
                            " --lumping a1:b1,a2:b1,a3:b2 --seed 1");
    CHECK(r.exit_code == 64);
}
