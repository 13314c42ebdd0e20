#pragma once

#include "copmarkov/copula.hpp"
#include "copmarkov/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace copmarkov {

/// Offset added to the replication index to obtain the stream of the kernel noise.
inline constexpr std::uint64_t kNoiseStreamOffset = std::uint64_t{1} << 32;

struct ExperimentConfig {
    CopulaSpec spec = CopulaSpec::preset(Family::Sine);
    std::vector<Eigen::Index> sample_sizes{1999, 4999};
    int replications = 100;
    double alpha = 0.05;
    std::vector<Method> estimators{Method::Moment, Method::Mle, Method::RobustEmpirical, Method::RobustModel};
    std::uint64_t base_seed = 20240601;
    std::string output_path = "coverage.csv";
    bool region = false;                      ///< add joint confidence-region rows for the moment estimator
    std::optional<int> independence_s;        ///< add chi-square independence test rows with this s
    int threads = 0;                          ///< 0 = hardware concurrency

    /// Throws InvalidSpec / NonInteriorSpec / DomainError.
    void validate() const;
};

/**
 * @brief JSON config. Keys: family, params (array; omitted = preset), sample_sizes,
 * replications, alpha, estimators, base_seed, output_path, region, independence_s, threads.
 */
[[nodiscard]] ExperimentConfig parse_experiment_config(std::string_view json_text);

/// One aggregated line of the coverage table.
struct CoverageRow {
    std::string estimator;
    std::string parameter;
    Eigen::Index n = 0;
    int coverage_count = 0;
    int replications = 0;  ///< successful fits; failures are excluded
    double mean_ci_length = 0.0;
    double mean_estimate = 0.0;
    int failures = 0;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;

    [[nodiscard]] const CoverageRow* find(std::string_view estimator, std::string_view parameter,
                                          Eigen::Index n) const;
};

/**
 * @brief Monte Carlo coverage study.
 *
 * Replication r simulates with stream (base_seed, r) and draws kernel noise
 * from (base_seed, r + kNoiseStreamOffset). Replications run in parallel and
 * are reduced in index order, so the report is deterministic.
 *
 * Extra rows: "moment_region"/"joint" counts confidence regions containing the
 * truth (mean_ci_length holds the chi-square critical value, mean_estimate the
 * mean Q); "chi2_independence"/"W" counts non-rejections (mean_estimate holds
 * the mean statistic).
 */
[[nodiscard]] CoverageReport run_coverage(const ExperimentConfig& config);

/// CSV: estimator,parameter,n,coverage_count,replications,mean_ci_length,mean_estimate,failures
void write_coverage_csv(std::ostream& out, const CoverageReport& report);

}  // namespace copmarkov
