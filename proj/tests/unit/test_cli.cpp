#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tsms/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "tsms");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tsms::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tsms_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("rates prints the regime table") {
    const Run r = run({"rates", "--d", "5", "--p", "2", "--n", "10000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("regime=mid-dim") != std::string::npos);
    CHECK(r.out.find("alpha=4/11") != std::string::npos);
    CHECK(r.out.find("beta=1/3") != std::string::npos);
    std::ostringstream b;
    b.precision(10);
    b << "b=" << std::pow(10000.0, -2.0 / 11.0);
    CHECK(r.out.find(b.str()) != std::string::npos);
}

TEST_CASE("estimate on the two-point CSV") {
    const fs::path csv = scratch("two.csv");
    std::ofstream(csv) << "y,x1,x2\n1,0.5,0\n0,-0.5,0\n";
    const Run r = run({"estimate", "--data", csv.string(), "--estimator", "ms"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == 0.25);
    CHECK(j["estimator"] == "ms");
    CHECK(j["theta"].size() == 2);

    const Run s = run({"estimate", "--data", csv.string(), "--estimator", "sms", "--bandwidth", "1"});
    REQUIRE(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["bandwidth"].get<double>() == 1.0);
}

TEST_CASE("simulate is deterministic and round-trips through estimate") {
    const Run a = run({"simulate", "--n", "100", "--d", "2", "--seed", "1"});
    const Run b = run({"simulate", "--n", "100", "--d", "2", "--seed", "1"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("y,x1,x2\n", 0) == 0);
    const Run c = run({"simulate", "--n", "100", "--d", "2", "--seed", "2"});
    CHECK(c.out != a.out);

    const fs::path csv = scratch("sim.csv");
    CHECK(run({"simulate", "--n", "300", "--d", "3", "--seed", "4", "--out", csv.string()}).code == 0);
    const Run e = run({"estimate", "--data", csv.string(), "--estimator", "tsms", "--resolution", "500"});
    CHECK(e.code == 0);
    CHECK(nlohmann::json::parse(e.out)["d"] == 3);

    const fs::path multi = scratch("multi.csv");
    CHECK(run({"simulate", "--n", "200", "--d", "2", "--J", "2", "--out", multi.string()}).code == 0);
    const Run m = run({"estimate", "--data", multi.string(), "--estimator", "tsms-mmi"});
    CHECK(m.code == 0);
    CHECK(nlohmann::json::parse(m.out)["J"] == 2);
}

TEST_CASE("experiment writes JSON and CSV") {
    const fs::path cfg = scratch("exp.cfg");
    std::ofstream(cfg) << "estimator = ms\nd = 2\nn_grid = 100,200,400,800\nreplications = 50\nseed = 3\n";
    const fs::path js = scratch("exp.json");
    const fs::path cs = scratch("exp.csv");
    const Run r = run({"experiment", "--config", cfg.string(), "--json", js.string(), "--csv", cs.string()});
    REQUIRE(r.code == 0);
    std::ifstream jin(js);
    const auto j = nlohmann::json::parse(jin);
    CHECK(j.contains("slope"));
    std::ifstream cin(cs);
    std::string header;
    std::getline(cin, header);
    CHECK(header == "n,median,q25,q75,mean");
}

TEST_CASE("probe envelope emits JSON") {
    const Run r = run({"probe", "--kind", "envelope", "--m", "10000", "--deltas", "0.2,0.1,0.05"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"].size() == 3);
}

TEST_CASE("error paths") {
    const Run unknown = run({"rates", "--bogus", "1"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.rfind("error: usage: ", 0) == 0);
    CHECK(unknown.err.find("Usage") != std::string::npos);

    const Run none = run({});
    CHECK(none.code == 2);

    const Run bad_p = run({"rates", "--p", "3"});
    CHECK(bad_p.code == 2);
    CHECK(bad_p.err.rfind("error: validation: ", 0) == 0);
    CHECK(std::count(bad_p.err.begin(), bad_p.err.end(), '\n') == 1);

    const fs::path out_of_ball = scratch("bad.csv");
    std::ofstream(out_of_ball) << "y,x1,x2\n1,1.2,0\n";
    const Run ball = run({"estimate", "--data", out_of_ball.string()});
    CHECK(ball.code == 2);
    CHECK(ball.err.find("row 1") != std::string::npos);

    const Run missing = run({"estimate", "--data", scratch("nope.csv").string()});
    CHECK(missing.code == 2);

    const Run bad_est = run({"estimate", "--data", out_of_ball.string(), "--estimator", "xyz"});
    CHECK(bad_est.code == 2);

    const fs::path cfg = scratch("unwritable.cfg");
    std::ofstream(cfg) << "estimator = ms\nn_grid = 100,200,400,800\nreplications = 50\n";
    const Run unwritable = run({"experiment", "--config", cfg.string(), "--json", "/proc/forbidden/x.json"});
    CHECK(unwritable.code == 1);
    CHECK(unwritable.err.rfind("error: runtime: ", 0) == 0);
}
