// End-to-end checks of the canard-kit binary: exit codes and output shape.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    std::string out_file = "cli_test_stdout.tmp";
    std::string cmd = std::string(CANARD_KIT_BIN) + " " + args + " > " + out_file + " 2> cli_test_stderr.tmp";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.stdout_text = buf.str();
    return r;
}

const std::string kModels = CANARD_MODELS_DIR;

} // namespace

TEST_CASE("analyze: json output, exit 0, parses back") {
    RunResult r = run("analyze " + kModels + "/vdp.toml --format json");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["classification"]["kind"] == "slow_fast_hopf");
    CHECK(j["classification"]["subkind"] == "supercritical");
    CHECK(j["invariants"]["A"].get<double>() == doctest::Approx(-2.0));
    CHECK(j["invariants"]["sigma"].get<double>() == doctest::Approx(-1.0));
    CHECK(j["transversality"]["rank"].get<int>() == 1);
}

TEST_CASE("analyze: param override flips the verdict to jump") {
    RunResult r = run("analyze " + kModels + "/vdp.toml --format json --param lambda=0.3");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["classification"]["kind"] == "jump");
}

TEST_CASE("analyze: --guess selects the other contact point") {
    // the second contact point of the same model is a jump point
    RunResult r = run("analyze " + kModels + "/vdp.toml --guess=-0.9,0.2 --format json");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["contact_point"]["x"].get<double>() == doctest::Approx(-1.0));
    CHECK(j["classification"]["kind"] == "jump");
}

TEST_CASE("analyze: degenerate contact exits with code 2") {
    std::ofstream f("cli_cubic.toml");
    f << "[model]\nvars = [\"x\", \"y\"]\nF = \"y - x^3\"\nZ = [\"1\", \"0\"]\n"
         "Q = [\"0\", \"x\"]\n\n[point]\nguess = [0.05, 0.01]\n";
    f.close();
    RunResult r = run("analyze cli_cubic.toml");
    CHECK(r.exit_code == 2);
}

TEST_CASE("analyze: broken input exits with code 1") {
    CHECK(run("analyze /nonexistent.toml").exit_code == 1);
    std::ofstream f("cli_broken.toml");
    f << "[model]\nvars = [\"x\", \"y\"]\nF = \"y - q\"\nZ = [\"1\", \"0\"]\nQ = [\"0\", \"x\"]\n";
    f.close();
    CHECK(run("analyze cli_broken.toml").exit_code == 1);
}

TEST_CASE("verify: bundled models pass, exit 0") {
    RunResult r = run("verify " + kModels + "/twostroke.toml --format json");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["all_pass"].get<bool>());
    CHECK(j["checks"].size() >= 15);
}

TEST_CASE("simulate: writes CSV; missing --eps is a usage error (exit 1)") {
    RunResult ok = run("simulate " + kModels + "/vdp.toml --eps 0.05 --t-end 1 --dt 0.01");
    CHECK(ok.exit_code == 0);
    CHECK(ok.stdout_text.rfind("t,x,y\n", 0) == 0);
    CHECK(ok.stdout_text.find("\n1,") != std::string::npos); // reaches t = 1

    RunResult bad = run("simulate " + kModels + "/vdp.toml --t-end 1");
    CHECK(bad.exit_code == 1);
}
