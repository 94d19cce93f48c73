#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// run the CLI with stdout/stderr captured through temp files
RunResult run_cli(const std::string& args) {
    static int serial = 0;
    fs::path dir = fs::path("cli_scratch");
    fs::create_directories(dir);
    fs::path out = dir / ("out" + std::to_string(serial));
    fs::path err = dir / ("err" + std::to_string(serial));
    ++serial;

    std::string cmd = std::string(OMB_CLI_PATH) + " " + args + " >" +
                      out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());

    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

std::vector<std::string> fields(const std::string& csv_line) {
    std::vector<std::string> out;
    std::stringstream ss(csv_line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("point: CSV row, parameter echo, label") {
    auto r = run_cli("point --delta-c 0.55 --pump 0.3 --routes analytic");
    CHECK(r.exit_code == 0);

    auto body = lines(r.out);
    REQUIRE(body.size() == 2);
    CHECK(body[0] ==
          "axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label");
    auto row = fields(body[1]);
    REQUIRE(row.size() == 10);
    CHECK(row[0] == "delta_c");
    CHECK(row[2] == "analytic");
    // 0.55 is the pump-shifted single-photon resonance
    CHECK(std::stod(row[7]) == doctest::Approx(0.09 / 0.34).epsilon(1e-12));
    CHECK(row[9] == "OnePB");

    // first stderr line: the resolved parameters, a valid config document
    auto echo = nlohmann::json::parse(lines(r.err)[0]);
    CHECK(echo["delta_c"] == 0.55);
    CHECK(echo["G"] == 0.3);
    CHECK(echo["g0"] == 0.5);
    CHECK(echo.size() == 8);
}

TEST_CASE("point: failures carry a JSON diagnostic and exit code") {
    auto dark =
        run_cli("point --drive 0 --routes master --na 4 --nb 4 --m-max 4");
    CHECK(dark.exit_code == 3);
    auto diag = nlohmann::json::parse(lines(dark.err).back());
    CHECK(diag["error"]["kind"] == "numerical");
    CHECK(diag["error"]["code"] == 3);

    auto bad = run_cli("point --coupling 7");
    CHECK(bad.exit_code == 2);
    auto parse = nlohmann::json::parse(lines(bad.err).back());
    CHECK(parse["error"]["kind"] == "config");

    auto route = run_cli("point --routes sideways");
    CHECK(route.exit_code == 2);

    auto figure = run_cli("figure fig9");
    CHECK(figure.exit_code == 2);

    auto missing = run_cli("figure");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("config file round-trips through the echo line") {
    auto first =
        run_cli("point --delta-c 0.385 --pump 0.3 --routes analytic");
    REQUIRE(first.exit_code == 0);
    std::string echo = lines(first.err)[0];

    fs::create_directories("cli_scratch");
    std::ofstream("cli_scratch/roundtrip.json") << echo;
    auto second =
        run_cli("point --config cli_scratch/roundtrip.json --routes analytic");
    CHECK(second.exit_code == 0);
    CHECK(lines(second.err)[0] == echo);
    CHECK(second.out == first.out);

    // inline flags override the file
    auto overridden = run_cli(
        "point --config cli_scratch/roundtrip.json --delta-c 0.55 "
        "--routes analytic");
    auto echo2 = nlohmann::json::parse(lines(overridden.err)[0]);
    CHECK(echo2["delta_c"] == 0.55);
    CHECK(echo2["G"] == 0.3);
}

TEST_CASE("sweep: stdout by default, file plus sidecar with --out") {
    auto r = run_cli(
        "sweep --from 0.3 --to 0.5 --points 5 --routes analytic");
    CHECK(r.exit_code == 0);
    auto body = lines(r.out);
    REQUIRE(body.size() == 6);
    CHECK(body[0] ==
          "axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label");

    fs::create_directories("cli_scratch");
    auto f = run_cli(
        "sweep --from 0.3 --to 0.5 --points 5 --routes analytic "
        "--out cli_scratch/small.csv");
    CHECK(f.exit_code == 0);
    CHECK(fs::exists("cli_scratch/small.csv"));
    REQUIRE(fs::exists("cli_scratch/small.json"));
    auto side = nlohmann::json::parse(slurp("cli_scratch/small.json"));
    CHECK(side["points"] == 5);
    CHECK(side["routes"].size() == 1);
}

TEST_CASE("resonances table") {
    auto r = run_cli("resonances");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("kind,m,delta_c\n", 0) == 0);
    CHECK(r.out.find("spr,0,0.25") != std::string::npos);

    auto pumped = run_cli("resonances --pump 0.3");
    CHECK(pumped.out.find("spr,0,0.55") != std::string::npos);
}

TEST_CASE("figure presets write per-curve files") {
    auto r = run_cli(
        "figure fig4 --points 9 --na 4 --nb 8 --out cli_scratch/fig4");
    CHECK(r.exit_code == 0);
    for (const char* stem : {"fig4_dc0.3", "fig4_dc0.5"}) {
        CHECK(fs::exists(fs::path("cli_scratch") / (std::string(stem) + ".csv")));
        CHECK(fs::exists(fs::path("cli_scratch") / (std::string(stem) + ".json")));
    }
    auto side =
        nlohmann::json::parse(slurp("cli_scratch/fig4_dc0.3.json"));
    CHECK(side["axis"] == "pump_G");
    CHECK(side["params"]["delta_c"] == 0.3);
}

TEST_CASE("convergence exit reflects the verdict") {
    auto flat = run_cli("convergence --routes perturbative --g0 0");
    CHECK(flat.exit_code == 0);
    CHECK(flat.out.find("converged") != std::string::npos);

    auto unknown = run_cli("convergence --routes nowhere");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("validation suite: pass, negative control, seed robustness") {
    auto good = run_cli("validate --seed 5");
    CHECK(good.exit_code == 0);
    CHECK(good.out.find("FAIL") == std::string::npos);

    auto ctrl = run_cli("validate --seed 5 --as-printed");
    CHECK(ctrl.exit_code == 3);
    // the misprinted form still satisfies the shift law but breaks the
    // equivalence with the amplitude expansion
    bool shift_ok = false, appendix_broken = false;
    for (const auto& line : lines(ctrl.out)) {
        if (line.find("shift-covariance") != std::string::npos)
            shift_ok = line.find("PASS") != std::string::npos;
        if (line.find("appendix-equivalence") != std::string::npos)
            appendix_broken = line.find("FAIL") != std::string::npos;
    }
    CHECK(shift_ok);
    CHECK(appendix_broken);

    auto reseeded = run_cli("validate --seed 999");
    CHECK(reseeded.exit_code == 0);
}
