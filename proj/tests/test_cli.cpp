#include "copmarkov/chain.hpp"
#include "copmarkov/cli.hpp"
#include "copmarkov/moment.hpp"
#include "copmarkov/report.hpp"

#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace copmarkov;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "copmarkov_cli");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / ("copmarkov_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("simulate and estimate through the command line")
{
    const fs::path dir = scratch_dir();
    const std::string chain = (dir / "chain.csv").string();
    auto sim = run({"simulate", "--family", "sine", "--params", "0.28,-0.15", "--n", "999", "--seed", "7", "--out",
                    chain});
    REQUIRE(sim.status == 0);
    std::ifstream in(chain);
    const Vector values = read_chain_csv(in);
    CHECK(values.size() == 1000);
    CHECK(slurp(chain + ".meta").find("seed = 7") != std::string::npos);

    auto est = run({"estimate", "--method", "moment", "--family", "sine", "--in", chain, "--alpha", "0.05"});
    REQUIRE(est.status == 0);
    const EstimateReport report = report_from_json(est.out);
    CHECK(report.method == Method::Moment);
    CHECK(report.n == 999);
    CHECK(report.estimates == estimate_lambda(values, Family::Sine));

    for (const char* method : {"mle", "robust_empirical", "robust_model"}) {
        auto r = run({"estimate", "--method", method, "--family", "sine", "--in", chain, "--seed", "3"});
        CHECK(r.status == 0);
        CHECK(report_from_json(r.out).method == parse_method(method));
    }
    auto again = run({"estimate", "--method", "robust_model", "--family", "sine", "--in", chain, "--seed", "3"});
    auto same = run({"estimate", "--method", "robust_model", "--family", "sine", "--in", chain, "--seed", "3"});
    CHECK(again.out == same.out);

    auto indep = run({"independence", "--family", "sine", "--in", chain, "--s", "2"});
    CHECK(indep.status == 0);
    CHECK(indep.out.find("\"statistic\"") != std::string::npos);

    const std::string grid = (dir / "grid.csv").string();
    auto g = run({"loglik-grid", "--family", "sine", "--in", chain, "--grid", "11", "--out", grid});
    CHECK(g.status == 0);
    CHECK(slurp(grid).rfind("lambda1,lambda2,loglik\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("coverage through the command line")
{
    const fs::path dir = scratch_dir();
    const fs::path config = dir / "exp.json";
    const fs::path report = dir / "coverage.csv";
    std::ofstream(config) << R"({"family": "legendre", "sample_sizes": [200], "replications": 3,
                                 "estimators": ["moment"], "output_path": ")"
                          << report.generic_string() << "\"}";
    auto r = run({"coverage", "--config", config.string()});
    REQUIRE(r.status == 0);
    const std::string csv = slurp(report);
    CHECK(csv.find("moment,lambda1,200,") != std::string::npos);
    CHECK(csv.find("moment,lambda2,200,") != std::string::npos);
    auto to_stdout = run({"coverage", "--config", config.string(), "--out", "-"});
    CHECK(to_stdout.out == csv);
    fs::remove_all(dir);
}

TEST_CASE("command-line errors return a nonzero status")
{
    auto bad_family = run({"simulate", "--family", "clayton"});
    CHECK(bad_family.status != 0);
    CHECK(bad_family.err.find("error") != std::string::npos);
    CHECK(run({"simulate", "--params", "0.4,0.2"}).status != 0);
    CHECK(run({"estimate", "--in", "/nonexistent/chain.csv"}).status != 0);
    CHECK(run({"bogus"}).status != 0);
    CHECK(run({}).status != 0);
}

TEST_CASE("installed binary is deterministic")
{
    const char* cli = std::getenv("COPMARKOV_CLI");
    if (cli == nullptr) {
        MESSAGE("COPMARKOV_CLI not set; skipping the subprocess check");
        return;
    }
    const fs::path dir = scratch_dir();
    const std::string a = (dir / "a.csv").string();
    const std::string b = (dir / "b.csv").string();
    const std::string base = std::string(cli) + " simulate --family sine-cosine --n 500 --seed 11 --out ";
    CHECK(std::system((base + a).c_str()) == 0);
    CHECK(std::system((base + b).c_str()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
    const std::string failing = std::string(cli) + " simulate --family nope > /dev/null 2>&1";
    CHECK(std::system(failing.c_str()) != 0);
    fs::remove_all(dir);
}
