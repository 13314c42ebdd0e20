#include "copmarkov/cli.hpp"

#include "copmarkov/chain.hpp"
#include "copmarkov/error.hpp"
#include "copmarkov/experiment.hpp"
#include "copmarkov/mle.hpp"
#include "copmarkov/moment.hpp"
#include "copmarkov/report.hpp"
#include "copmarkov/rng.hpp"
#include "copmarkov/robust.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace copmarkov {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vector read_chain(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    return read_chain_csv(in);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    }
    return out;
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& writer)
{
    if (path.empty() || path == "-") {
        writer(fallback);
        return;
    }
    auto out = open_output(path);
    writer(out);
}

CopulaSpec make_spec(const std::string& family_name, const std::string& params)
{
    CopulaSpec spec = CopulaSpec::preset(parse_family(family_name));
    if (!params.empty()) {
        spec.params = parse_params(params);
    }
    return spec;
}

std::string format_double(double x)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Estimation for copula-based Markov chains"};
    app.require_subcommand(1);

    std::string family = "sine";
    std::string params;
    Eigen::Index n = 999;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double alpha = 0.05;
    std::string method = "moment";
    std::string config_path;
    std::string in_path;
    std::string out_path;
    int s = 2;
    int grid = 41;

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a stationary chain U_0..U_n as CSV");
    simulate_cmd->add_option("--family", family, "sine | sine-cosine | legendre")->capture_default_str();
    simulate_cmd->add_option("--params", params, "Comma-separated parameters (default: family preset)");
    simulate_cmd->add_option("--n", n, "Number of transitions")->capture_default_str()->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    simulate_cmd->add_option("--stream", stream, "Stream id")->capture_default_str();
    simulate_cmd->add_option("--out", out_path, "Output CSV (default: standard output); metadata goes to <out>.meta");

    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate parameters from a chain CSV");
    estimate_cmd->add_option("--method", method, "moment | mle | robust_empirical | robust_model")
        ->capture_default_str();
    estimate_cmd->add_option("--family", family, "Model family")->capture_default_str();
    estimate_cmd->add_option("--in", in_path, "Chain CSV")->required();
    estimate_cmd->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    estimate_cmd->add_option("--seed", seed, "Seed of the kernel noise (robust methods)")->capture_default_str();
    estimate_cmd->add_option("--out", out_path, "Output JSON (default: standard output)");

    auto* coverage_cmd = app.add_subcommand("coverage", "Run a coverage study from a JSON config");
    coverage_cmd->add_option("--config", config_path, "Experiment config JSON")->required();
    coverage_cmd->add_option("--out", out_path, "Override the config's output_path ('-' for standard output)");

    auto* indep_cmd = app.add_subcommand("independence", "Chi-square test of independence on a chain CSV");
    indep_cmd->add_option("--family", family, "Basis family of the test")->capture_default_str();
    indep_cmd->add_option("--in", in_path, "Chain CSV")->required();
    indep_cmd->add_option("--s", s, "Number of basis functions")->capture_default_str();
    indep_cmd->add_option("--alpha", alpha, "Significance level")->capture_default_str();

    auto* grid_cmd = app.add_subcommand("loglik-grid", "Log-likelihood over a grid of the first two parameters");
    grid_cmd->add_option("--family", family, "Model family")->capture_default_str();
    grid_cmd->add_option("--in", in_path, "Chain CSV")->required();
    grid_cmd->add_option("--grid", grid, "Points per axis")->capture_default_str()->check(CLI::Range(2, 1001));
    grid_cmd->add_option("--out", out_path, "Output CSV (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (simulate_cmd->parsed()) {
            const CopulaSpec spec = make_spec(family, params);
            RngStream rng(seed, stream);
            const ChainSample chain = simulate(spec, n, rng);
            emit(out_path, out, [&](std::ostream& os) { write_chain_csv(os, chain.values); });
            if (!out_path.empty() && out_path != "-") {
                auto meta = open_output(out_path + ".meta");
                write_chain_metadata(meta, chain);
            }
        } else if (estimate_cmd->parsed()) {
            const Family fam = parse_family(family);
            const Vector path = read_chain(in_path);
            const Method m = parse_method(method);
            EstimateReport report;
            switch (m) {
            case Method::Moment: report = moment_report(path, fam, alpha); break;
            case Method::Mle: report = mle_report(fit_mle(path, fam), alpha); break;
            case Method::RobustEmpirical:
            case Method::RobustModel: {
                RngStream noise_rng(seed, kNoiseStreamOffset);
                const Vector noise = noise_rng.normals(path.size() - 1);
                report = robust_report(path, fam,
                                       m == Method::RobustEmpirical ? BandwidthVariant::Empirical
                                                                    : BandwidthVariant::Model,
                                       noise, alpha);
                break;
            }
            }
            emit(out_path, out, [&](std::ostream& os) { os << to_json(report) << '\n'; });
        } else if (coverage_cmd->parsed()) {
            ExperimentConfig config = parse_experiment_config(read_file(config_path));
            if (!out_path.empty()) {
                config.output_path = out_path;
            }
            const CoverageReport report = run_coverage(config);
            emit(config.output_path, out, [&](std::ostream& os) { write_coverage_csv(os, report); });
        } else if (indep_cmd->parsed()) {
            const Vector path = read_chain(in_path);
            const TestResult t = independence_test(path, basis_family(parse_family(family)), s, alpha);
            nlohmann::ordered_json doc;
            doc["statistic"] = t.statistic;
            doc["df"] = t.df;
            doc["critical_value"] = t.critical_value;
            doc["p_value"] = t.p_value;
            doc["reject"] = t.reject;
            doc["normal_approximation"] = t.normal_approximation.value_or(0.0);
            out << doc.dump(2) << '\n';
        } else if (grid_cmd->parsed()) {
            const Family fam = parse_family(family);
            const Vector path = read_chain(in_path);
            const Matrix g = pair_features(path, fam);
            const WeightedL1Region& region = family_region(fam);
            // Axis ranges are the extent of the region along the first two coordinates.
            const double r1 = region.radius() / region.weights()[0];
            const double r2 = region.radius() / region.weights()[1];
            emit(out_path, out, [&](std::ostream& os) {
                os << "lambda1,lambda2,loglik\n";
                Vector x = Vector::Zero(parameter_count(fam));
                for (int i = 0; i < grid; ++i) {
                    for (int j = 0; j < grid; ++j) {
                        x[0] = -r1 + 2.0 * r1 * i / (grid - 1);
                        x[1] = -r2 + 2.0 * r2 * j / (grid - 1);
                        if (region.slack(x) < 0.0) {
                            continue;
                        }
                        const Vector c = (g * x).array() + 1.0;
                        const double ll = (c.array() > 0.0).all() ? c.array().log().sum()
                                                                  : -std::numeric_limits<double>::infinity();
                        os << format_double(x[0]) << ',' << format_double(x[1]) << ','
                           << (std::isfinite(ll) ? format_double(ll) : std::string("-inf")) << '\n';
                    }
                }
            });
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace copmarkov
