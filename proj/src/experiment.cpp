#include "copmarkov/experiment.hpp"

#include "copmarkov/chain.hpp"
#include "copmarkov/error.hpp"
#include "copmarkov/mle.hpp"
#include "copmarkov/moment.hpp"
#include "copmarkov/rng.hpp"
#include "copmarkov/robust.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

namespace copmarkov {

namespace {

/// Outcome of one estimator on one replication.
struct FitOutcome {
    bool failed = false;
    IntervalList intervals;
    Vector estimates;
};

/// Region and independence-test outcome of one replication.
struct TestOutcome {
    bool failed = false;
    bool accepted = false;
    double statistic = 0.0;
    double critical = 0.0;
};

struct ReplicationRecord {
    std::vector<std::vector<FitOutcome>> fits;  // [size][estimator]
    std::vector<TestOutcome> region;            // [size]
    std::vector<TestOutcome> independence;      // [size]
};

FitOutcome run_estimator(Method method, const Vector& path, const ExperimentConfig& config, const Vector& noise)
{
    FitOutcome out;
    const Family family = config.spec.family;
    try {
        EstimateReport report;
        switch (method) {
        case Method::Moment: report = moment_report(path, family, config.alpha); break;
        case Method::Mle: {
            const MleResult fit = fit_mle(path, family);
            if (!fit.converged) {
                out.failed = true;
                return out;
            }
            out.intervals = mle_confidence_intervals(fit, config.alpha);
            out.estimates = fit.estimates;
            return out;
        }
        case Method::RobustEmpirical:
            report = robust_report(path, family, BandwidthVariant::Empirical, noise, config.alpha);
            break;
        case Method::RobustModel:
            report = robust_report(path, family, BandwidthVariant::Model, noise, config.alpha);
            break;
        }
        out.intervals = std::move(report.intervals);
        out.estimates = std::move(report.estimates);
    } catch (const Error&) {
        out.failed = true;
    }
    return out;
}

ReplicationRecord run_replication(const ExperimentConfig& config, int r)
{
    ReplicationRecord record;
    const Eigen::Index n_max = *std::max_element(config.sample_sizes.begin(), config.sample_sizes.end());
    const bool needs_noise =
        std::any_of(config.estimators.begin(), config.estimators.end(),
                    [](Method m) { return m == Method::RobustEmpirical || m == Method::RobustModel; });
    const auto sid = static_cast<std::uint64_t>(r);
    for (const Eigen::Index n : config.sample_sizes) {
        RngStream chain_rng(config.base_seed, sid);
        const ChainSample chain = simulate(config.spec, n, chain_rng);
        Vector noise;
        if (needs_noise) {
            // One noise vector per replication; shorter chains use its prefix.
            RngStream noise_rng(config.base_seed, sid + kNoiseStreamOffset);
            noise = noise_rng.normals(n_max).head(n);
        }
        std::vector<FitOutcome> fits;
        fits.reserve(config.estimators.size());
        for (const Method m : config.estimators) {
            fits.push_back(run_estimator(m, chain.values, config, noise));
        }
        record.fits.push_back(std::move(fits));

        TestOutcome region;
        if (config.region) {
            try {
                const Vector est = estimate_lambda(chain.values, config.spec.family);
                const SigmaMatrix sigma =
                    asymptotic_sigma(config.spec.family, plug_in_point(config.spec.family, est));
                const TestResult q = region_statistic(est, config.spec.params, sigma, n, config.alpha);
                region = {false, !q.reject, q.statistic, q.critical_value};
            } catch (const Error&) {
                region.failed = true;
            }
        }
        record.region.push_back(region);

        TestOutcome indep;
        if (config.independence_s) {
            try {
                const TestResult t = independence_test(chain.values, basis_family(config.spec.family),
                                                       *config.independence_s, config.alpha);
                indep = {false, !t.reject, t.statistic, t.critical_value};
            } catch (const Error&) {
                indep.failed = true;
            }
        }
        record.independence.push_back(indep);
    }
    return record;
}

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

CoverageRow test_row(const std::string& estimator, const std::string& parameter, Eigen::Index n,
                     const std::vector<ReplicationRecord>& records, std::size_t size_index,
                     std::vector<TestOutcome> ReplicationRecord::*member)
{
    CoverageRow row{estimator, parameter, n};
    double critical = 0.0;
    double statistic = 0.0;
    for (const auto& rec : records) {
        const TestOutcome& t = (rec.*member)[size_index];
        if (t.failed) {
            ++row.failures;
            continue;
        }
        ++row.replications;
        row.coverage_count += t.accepted ? 1 : 0;
        critical += t.critical;
        statistic += t.statistic;
    }
    const double denom = row.replications > 0 ? row.replications : std::numeric_limits<double>::quiet_NaN();
    row.mean_ci_length = critical / denom;
    row.mean_estimate = statistic / denom;
    return row;
}

}  // namespace

void ExperimentConfig::validate() const
{
    require_positive_density(spec);
    if (sample_sizes.empty() ||
        std::any_of(sample_sizes.begin(), sample_sizes.end(), [](Eigen::Index n) { return n < 1; })) {
        throw Error(ErrorCode::DomainError, "sample_sizes must be a non-empty list of positive integers");
    }
    if (replications < 1) {
        throw Error(ErrorCode::DomainError, "replications must be at least 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
    }
    if (independence_s && *independence_s < 1) {
        throw Error(ErrorCode::DomainError, "independence_s must be at least 1");
    }
    if (threads < 0) {
        throw Error(ErrorCode::DomainError, "threads must be nonnegative");
    }
}

ExperimentConfig parse_experiment_config(std::string_view json_text)
{
    try {
        const auto doc = nlohmann::json::parse(json_text);
        ExperimentConfig config;
        const Family family = parse_family(doc.at("family").get<std::string>());
        config.spec = CopulaSpec::preset(family);
        if (doc.contains("params")) {
            const auto p = doc.at("params").get<std::vector<double>>();
            config.spec.params = Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
        }
        if (doc.contains("sample_sizes")) {
            config.sample_sizes = doc.at("sample_sizes").get<std::vector<Eigen::Index>>();
        }
        config.replications = doc.value("replications", config.replications);
        config.alpha = doc.value("alpha", config.alpha);
        if (doc.contains("estimators")) {
            config.estimators.clear();
            for (const auto& name : doc.at("estimators")) {
                config.estimators.push_back(parse_method(name.get<std::string>()));
            }
        }
        config.base_seed = doc.value("base_seed", config.base_seed);
        config.output_path = doc.value("output_path", config.output_path);
        config.region = doc.value("region", config.region);
        if (doc.contains("independence_s") && !doc.at("independence_s").is_null()) {
            config.independence_s = doc.at("independence_s").get<int>();
        }
        config.threads = doc.value("threads", config.threads);
        config.validate();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("experiment config: ") + e.what());
    }
}

const CoverageRow* CoverageReport::find(std::string_view estimator, std::string_view parameter,
                                        Eigen::Index n) const
{
    for (const auto& row : rows) {
        if (row.estimator == estimator && row.parameter == parameter && row.n == n) {
            return &row;
        }
    }
    return nullptr;
}

CoverageReport run_coverage(const ExperimentConfig& config)
{
    config.validate();
    const auto m = static_cast<std::size_t>(config.replications);
    std::vector<ReplicationRecord> records(m);

    // Fill the basis moment cache before the workers start.
    (void)general_sigma(family_basis(config.spec.family), Vector::Zero(parameter_count(config.spec.family)));

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(m));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t r = next++; r < m; r = next++) {
            records[r] = run_replication(config, static_cast<int>(r));
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
    }

    CoverageReport report;
    const auto& names = parameter_names(config.spec.family);
    for (std::size_t si = 0; si < config.sample_sizes.size(); ++si) {
        const Eigen::Index n = config.sample_sizes[si];
        for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
            for (std::size_t k = 0; k < names.size(); ++k) {
                CoverageRow row{to_string(config.estimators[ei]), names[k], n};
                double length = 0.0;
                double estimate = 0.0;
                const auto kk = static_cast<Eigen::Index>(k);
                for (const auto& rec : records) {
                    const FitOutcome& fit = rec.fits[si][ei];
                    if (fit.failed) {
                        ++row.failures;
                        continue;
                    }
                    ++row.replications;
                    const Interval& iv = fit.intervals[k];
                    row.coverage_count += iv.contains(config.spec.params[kk]) ? 1 : 0;
                    length += iv.length();
                    estimate += fit.estimates[kk];
                }
                const double denom =
                    row.replications > 0 ? row.replications : std::numeric_limits<double>::quiet_NaN();
                row.mean_ci_length = length / denom;
                row.mean_estimate = estimate / denom;
                report.rows.push_back(row);
            }
        }
        if (config.region) {
            report.rows.push_back(test_row("moment_region", "joint", n, records, si, &ReplicationRecord::region));
        }
        if (config.independence_s) {
            report.rows.push_back(
                test_row("chi2_independence", "W", n, records, si, &ReplicationRecord::independence));
        }
    }
    return report;
}

void write_coverage_csv(std::ostream& out, const CoverageReport& report)
{
    out << "estimator,parameter,n,coverage_count,replications,mean_ci_length,mean_estimate,failures\n";
    for (const auto& row : report.rows) {
        out << row.estimator << ',' << row.parameter << ',' << row.n << ',' << row.coverage_count << ','
            << row.replications << ',' << format_double(row.mean_ci_length) << ','
            << format_double(row.mean_estimate) << ',' << row.failures << '\n';
    }
}

}  // namespace copmarkov
