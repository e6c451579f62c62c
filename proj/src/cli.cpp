#include "l1est/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "l1est/errors.hpp"
#include "l1est/estimators.hpp"
#include "l1est/harness.hpp"
#include "l1est/lowerbound.hpp"
#include "l1est/polyapprox.hpp"
#include "l1est/selftest.hpp"

namespace l1est {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int run_approx(int K, bool best) {
    if (best) {
        const auto sol = remez_best_approx(K);
        fmt::print("basis best\nK {}\ndelta {:.17g}\niterations {}\n", K, sol.delta, sol.iterations);
        fmt::print("alternation_points {}\n", sol.alternation_points.size());
        for (std::size_t i = 0; i < sol.alternation_points.size(); ++i)
            fmt::print("{:.17g} {}\n", sol.alternation_points[i], sol.alternation_signs[i] > 0 ? '+' : '-');
        fmt::print("coefficients {}\n", K + 1);
        for (int k = 0; k <= K; ++k) fmt::print("{} {:.17g}\n", k, sol.poly.half_coeffs()[k]);
    } else {
        const auto G = build_G_K(K);
        fmt::print("basis chebyshev\nK {}\ndelta {:.17g}\n", K, uniform_error(G));
        fmt::print("coefficients {}\n", K + 1);
        for (int k = 0; k <= K; ++k) fmt::print("{} {:.17g}\n", k, G.half_coeffs()[k]);
    }
    return 0;
}

struct EstimateArgs {
    std::string variant;
    std::string input;
    std::optional<double> M;
    std::optional<int> K;
    std::optional<std::size_t> kn;
    std::uint64_t seed = 0;
    std::optional<std::string> basis;
    double c = 2.0;
};

int run_estimate(const EstimateArgs& a) {
    EstimatorSpec spec;
    spec.variant = parse_variant(a.variant);
    spec.M = a.M;
    spec.K_override = a.K;
    spec.k_n = a.kn;
    spec.seed = a.seed;
    spec.c = a.c;
    if (a.basis) spec.basis = parse_basis(*a.basis);
    const auto y = read_observations(a.input);
    spec.n = y.size();
    spec.validate();
    fmt::print("{:.17g}\n", estimate(spec, y));
    return 0;
}

struct RiskArgs {
    std::string config;
    std::optional<std::size_t> workers;
    std::optional<std::string> output;
    std::optional<std::string> format;
};

int run_risk(const RiskArgs& a) {
    RunConfig config = load_run_config(a.config);
    if (a.output) config.output_path = *a.output;
    if (a.format) {
        if (*a.format == "csv") config.format = OutputFormat::Csv;
        else if (*a.format == "json") config.format = OutputFormat::Json;
        else throw DomainError(fmt::format("unknown format '{}'", *a.format));
    }
    const std::size_t workers = resolve_workers(a.workers.value_or(config.workers));
    const auto reports = run_all(config, workers);
    const std::string body = config.format == OutputFormat::Csv ? to_csv(reports) : to_json(reports, config);
    const auto compliance = bound_compliance_report(reports, config.slack);
    if (config.output_path.empty() || config.output_path == "-") {
        std::fwrite(body.data(), 1, body.size(), stdout);
        fmt::print(stderr, "{}", compliance.to_text());
    } else {
        std::ofstream out(config.output_path, std::ios::binary);
        if (!out) throw std::system_error(std::make_error_code(std::errc::io_error), config.output_path);
        out << body;
        fmt::print("{}", compliance.to_text());
    }
    return compliance.all_pass() ? 0 : kExitFail;
}

int run_lowerbound(std::size_t n, double M, std::optional<int> k) {
    if (!(M > 0.0)) throw DomainError("--M must be positive");
    const int kn = k.value_or(select_kn_bounded(n));
    const PriorPair pair = construct_prior_pair(kn);
    const auto mu0 = scale_prior(pair.nu0, M);
    const auto mu1 = scale_prior(pair.nu1, M);
    const PriorMoments pm = prior_moments(mu0, mu1, n);
    const double I1_sq = chi_square_mixture_1d(mu0, mu1);
    const double I_sq = chi_square_product(I1_sq, n);
    const double I = std::sqrt(I_sq);
    const MinimaxBound mb = minimax_lower_bound(pm, I);
    auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    const nlohmann::json out{{"n", n},
                             {"M", M},
                             {"k_n", kn},
                             {"delta_k", pair.delta_k},
                             {"condition", pair.condition},
                             {"m0", pm.m0},
                             {"m1", pm.m1},
                             {"m_gap", pm.m1 - pm.m0},
                             {"v0_sq", pm.v0_sq},
                             {"I1_sq", I1_sq},
                             {"I_sq", finite_or_null(I_sq)},
                             {"I", finite_or_null(I)},
                             {"I_sq_bound", finite_or_null(chi_square_bound_n(M, kn, n))},
                             {"hypothesis_holds", mb.hypothesis_holds},
                             {"bound_value", mb.value}};
    fmt::print("{}\n", out.dump(2));
    return 0;
}

int run_selftest_command() {
    bool ok = true;
    for (const auto& c : run_selftest()) {
        fmt::print("{} {}{}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail.empty() ? "" : ": " + c.detail);
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitFail;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Estimation of the average absolute value of a normal mean vector", "l1est"};
    app.require_subcommand(1);

    int approx_K = 1;
    bool approx_best = false;
    auto* approx = app.add_subcommand("approx", "Polynomial approximation of |x| on [-1, 1]");
    approx->add_option("--K", approx_K, "Half-degree K (degree 2K)")->required()->check(CLI::Range(0, 100));
    approx->add_flag("--best", approx_best, "Best approximation by Remez exchange instead of Chebyshev truncation");

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate n^{-1} sum |theta_i| from a data file");
    estimate_cmd->add_option("--variant", est.variant, "b, g, u or s")->required();
    estimate_cmd->add_option("--input", est.input, "One observation per line")->required();
    estimate_cmd->add_option("--M", est.M, "Bound on |theta_i| (bounded variant)");
    estimate_cmd->add_option("--K", est.K, "Half-degree override");
    estimate_cmd->add_option("--kn", est.kn, "Sparsity count (sparse variant)");
    estimate_cmd->add_option("--seed", est.seed, "Seed for sample splitting");
    estimate_cmd->add_option("--basis", est.basis, "best or chebyshev");
    estimate_cmd->add_option("--c", est.c, "Growing-bound constant in sqrt(c ln n)");

    RiskArgs risk;
    auto* risk_cmd = app.add_subcommand("risk", "Monte Carlo risk of configured scenarios");
    risk_cmd->add_option("--config", risk.config, "JSON run configuration")->required();
    risk_cmd->add_option("--workers", risk.workers, "Worker threads (overridden by L1EST_WORKERS)");
    risk_cmd->add_option("--output", risk.output, "Output path, '-' for stdout");
    risk_cmd->add_option("--format", risk.format, "csv or json");

    std::size_t lb_n = 0;
    double lb_M = 1.0;
    std::optional<int> lb_k;
    auto* lb = app.add_subcommand("lowerbound", "Least-favorable priors and the minimax lower bound");
    lb->add_option("--n", lb_n, "Number of coordinates")->required();
    lb->add_option("--M", lb_M, "Parameter bound")->required();
    lb->add_option("--k", lb_k, "Moment order (even); default chosen from n");

    auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*approx) return run_approx(approx_K, approx_best);
        if (*estimate_cmd) return run_estimate(est);
        if (*risk_cmd) return run_risk(risk);
        if (*lb) return run_lowerbound(lb_n, lb_M, lb_k);
        if (*selftest) return run_selftest_command();
    } catch (const DataError& e) {
        fmt::print(stderr, "data error: {}\n", e.what());
        return kExitData;
    } catch (const ConvergenceError& e) {
        fmt::print(stderr, "convergence error: {}\n", e.what());
        return kExitNumeric;
    } catch (const ConditioningError& e) {
        fmt::print(stderr, "conditioning error: {}\n", e.what());
        return kExitNumeric;
    } catch (const IntegrationError& e) {
        fmt::print(stderr, "integration error: {}\n", e.what());
        return kExitNumeric;
    } catch (const ConstructionError& e) {
        fmt::print(stderr, "construction error: {}\n", e.what());
        return kExitNumeric;
    } catch (const RangeError& e) {
        fmt::print(stderr, "range error: {}\n", e.what());
        return kExitNumeric;
    } catch (const std::system_error& e) {
        fmt::print(stderr, "cannot open {}\n", e.what());
        return kExitUsage;
    } catch (const std::logic_error& e) {
        // DomainError, DegreeOverflowError
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace l1est
