#include "catch_amalgamated.hpp"

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include "stabcat/io.hpp"

using namespace stabcat;

namespace {

const std::string sample_dir = STABCAT_SAMPLES_DIR;

struct result {
    int code = -1;
    std::string out;
};

result run(const std::string& args) {
    std::string cmd = std::string("\"") + STABCAT_CLI + "\" " + args + " 2>&1";
    result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& f) { return "\"" + sample_dir + "/" + f + "\""; }

} // namespace

TEST_CASE("exit codes", "[cli]") {
    CHECK(run("validate -a an:3 -d " + sample("a3-simples.json")).code == 0);
    CHECK(run("validate -a an:3 -d " + sample("a3-broken.json")).code == 1);
    CHECK(run("validate -a an:3 -d " + sample("a3-simples.json") + " --bogus").code == 2);
    CHECK(run("hn -a an:3 -d " + sample("a3-simples.json") + " -o S_7").code == 2);
    CHECK(run("validate -a klein:2 -d " + sample("a3-simples.json")).code == 2);
    CHECK(run("finest -a x2:window=-1..1 --family lm --m 9").code == 3);
    CHECK(run("validate -a an:3 -d /nonexistent.json").code == 5);
    CHECK(run("validate -a an:4 -d " + sample("a3-simples.json")).code == 6);
    CHECK(run("torsion -a p1:window=0..1").code == 6);
    CHECK(run("").code == 2);
}

TEST_CASE("budget exhaustion exits with its own code", "[cli]") {
    setenv("STABCAT_BUDGET", "1", 1);
    auto r = run("oracle-check middle-terms --field 2");
    unsetenv("STABCAT_BUDGET");
    CHECK(r.code == 4);
    CHECK(r.out.find("budget") != std::string::npos);
}

TEST_CASE("samples behave as documented", "[cli]") {
    auto hn = run("hn -a an:3 -d " + sample("a3-simples.json") + " -o P_1");
    CHECK(hn.code == 0);
    CHECK(hn.out.find("phase 3: M[3,3]@A3") != std::string::npos);
    auto cmp = run("compare -a an:3 --coarse " + sample("a3-two-phases.json") + " --fine " + sample("a3-simples.json"));
    CHECK(cmp.code == 0);
    CHECK(run("compare -a an:3 --coarse " + sample("a3-simples.json") + " --fine " + sample("a3-two-phases.json")).code ==
          1);
    auto ref = run("refine -a an:3 -d " + sample("a3-two-phases.json"));
    CHECK(ref.code == 0);
    CHECK(ref.out.find("4 phases") != std::string::npos);
    CHECK(run("validate -a tube:3 -d " + sample("t3-ray.json")).code == 0);
    CHECK(run("validate -a tube:3 -d " + sample("t3-not-a-pair.json")).code == 1);
}

TEST_CASE("JSON output parses", "[cli]") {
    auto r = run("--json torsion -a tube:3 --method cuts");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 18);
    CHECK(j["pairs"].size() == 18);
    auto f = run("--json finest -a an:2");
    REQUIRE(f.code == 0);
    CHECK(nlohmann::json::parse(f.out)["count"].get<int>() > 0);
}

TEST_CASE("table verification through the CLI", "[cli]") {
    CHECK(run("verify-table a2-torsion").code == 0);
    CHECK(run("verify-table a2-torsion --golden /nonexistent").code == 5);
    CHECK(run("verify-table nope").code == 2);
}
