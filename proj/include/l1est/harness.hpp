#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l1est/estimators.hpp"

namespace l1est {

// ---------------------------------------------------------------------------
// theta families

struct ZeroVector {};
struct ConstantAt {
    double value = 0.0;
};
/// theta_i i.i.d. from the order-k least-favorable prior scaled to [-M, M].
/// which = 1 draws from nu1, which = 0 from nu0.
struct AlternationAtoms {
    int k = 2;
    double M = 1.0;
    int which = 1;
};
/// The first `count` coordinates are +value, -value, +value, ...; the rest are 0.
struct TwoSpike {
    std::size_t count = 0;
    double value = 0.0;
};
struct Custom {
    std::vector<double> theta;
};

using ThetaFamily = std::variant<ZeroVector, ConstantAt, AlternationAtoms, TwoSpike, Custom>;

std::string describe(const ThetaFamily& family);
/// True when theta is redrawn for every replication.
bool is_random(const ThetaFamily& family) noexcept;

struct Scenario {
    std::string id;
    ThetaFamily family;
    std::size_t n = 0;
    std::size_t replications = 2;
    EstimatorSpec estimator;

    void validate() const;
};

/// Writes the scenario's theta for one replication into out (size n).
void draw_theta(const Scenario& s, std::uint64_t seed, std::uint32_t scenario_index,
                std::uint32_t replication, std::span<double> out);

// ---------------------------------------------------------------------------
// Monte Carlo risk

struct RiskReport {
    std::string scenario_id;
    std::size_t n = 0;
    Variant variant = Variant::Bounded;
    int K = 0;
    /// Effective bound on |theta_i| (M, or M_n for the growing / hybrid variants).
    double M = 0.0;
    std::size_t replications = 0;
    double estimate_mean = 0.0;
    /// Mean of T_hat - T(theta).
    double bias = 0.0;
    /// Mean of (error - bias)^2, so that mse = bias^2 + variance.
    double variance = 0.0;
    double mse = 0.0;
    /// Standard error of mse.
    double mc_stderr = 0.0;
    double bias_bound = 0.0;
    double var_bound = 0.0;

    /// Standard error of bias, sqrt(variance / (replications - 1)).
    double bias_stderr() const noexcept;
};

/// Runs all replications. Results depend on (s, seed, scenario_index) only,
/// never on workers. Estimator failures are rethrown with the scenario id and
/// replication index prepended.
RiskReport run_scenario(const Scenario& s, std::uint64_t seed, std::uint32_t scenario_index = 0,
                        std::size_t workers = 1);

/// Summation by recursive halving in index order.
double pairwise_sum(std::span<const double> values) noexcept;

// ---------------------------------------------------------------------------
// configuration and persistence

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::vector<Scenario> scenarios;
    std::uint64_t seed = 0;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    std::size_t workers = 1;
    double slack = 2.0;
};

/// Throws DomainError on schema violations.
RunConfig parse_run_config(std::string_view json_text);
/// Throws std::system_error when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);

/// Worker count after the L1EST_WORKERS environment override (if set and > 0).
std::size_t resolve_workers(std::size_t configured);

std::vector<RiskReport> run_all(const RunConfig& config, std::size_t workers);

inline constexpr std::string_view kCsvHeader =
    "scenario_id,n,variant,K,M,replications,bias,variance,mse,mc_stderr,bias_bound,var_bound";

std::string to_csv(const std::vector<RiskReport>& reports);
std::string to_json(const std::vector<RiskReport>& reports, const RunConfig& config);

struct ComplianceRow {
    std::string scenario_id;
    double bias = 0.0;
    double bias_limit = 0.0;
    bool bias_ok = true;
    double variance = 0.0;
    double var_limit = 0.0;
    bool var_ok = true;
};

struct ComplianceReport {
    double slack = 2.0;
    std::vector<ComplianceRow> rows;

    bool all_pass() const noexcept;
    std::string to_text() const;
};

/// |bias| <= slack * bias_bound and variance <= slack * var_bound per report.
ComplianceReport bound_compliance_report(const std::vector<RiskReport>& reports, double slack = 2.0);

/// One decimal value per line; blank lines are skipped. Throws DataError
/// (with the 0-based line number) on unparsable or non-finite entries.
std::vector<double> read_observations(const std::filesystem::path& path);
void write_observations(const std::filesystem::path& path, std::span<const double> y);

}  // namespace l1est
