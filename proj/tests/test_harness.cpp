#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "l1est/errors.hpp"
#include "l1est/harness.hpp"
#include "l1est/lowerbound.hpp"

using namespace l1est;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Scenario bounded_scenario(std::string id, ThetaFamily family, std::size_t n, std::size_t reps, double M,
                          std::optional<int> K = std::nullopt) {
    Scenario s;
    s.id = std::move(id);
    s.family = std::move(family);
    s.n = n;
    s.replications = reps;
    s.estimator.variant = Variant::Bounded;
    s.estimator.M = M;
    s.estimator.K_override = K;
    return s;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("l1est_test_" + name);
}

const char* kConfig = R"({
  "seed": 7,
  "format": "csv",
  "workers": 2,
  "scenarios": [
    {"id": "zero", "n": 500, "replications": 40, "theta": {"family": "zero"},
     "estimator": {"variant": "bounded", "M": 1, "K": 2}},
    {"id": "atoms", "n": 500, "replications": 40, "theta": {"family": "alternation", "k": 4, "M": 1, "prior": 0},
     "estimator": {"variant": "b", "M": 1}},
    {"id": "spikes", "n": 500, "replications": 20, "theta": {"family": "two_spike", "count": 5, "value": 20},
     "estimator": {"variant": "sparse", "k_n": 5}},
    {"id": "custom", "n": 3, "replications": 5, "theta": {"family": "custom", "values": [0, 1, -2]},
     "estimator": {"variant": "b", "M": 2, "K": 1, "basis": "chebyshev"}}
  ]
})";

}  // namespace

TEST_CASE("harness: zero vector bias equals G*(0)", "[harness]") {
    const auto s = bounded_scenario("zero", ZeroVector{}, 10000, 10000, 1.0, 1);
    const auto r = run_scenario(s, 2024);
    CHECK(std::fabs(r.bias - 0.125) <= 5.0 * r.bias_stderr());
    CHECK(r.K == 1);
    CHECK(r.M == 1.0);
    CHECK(r.replications == 10000);
}

TEST_CASE("harness: reports are reproducible and independent of worker count", "[harness]") {
    const auto s = bounded_scenario("atoms", AlternationAtoms{4, 1.0, 1}, 300, 37, 1.0);
    const auto a = run_scenario(s, 5, 3, 1);
    const auto b = run_scenario(s, 5, 3, 1);
    const auto c = run_scenario(s, 5, 3, 4);
    CHECK(to_csv({a}) == to_csv({b}));
    CHECK(to_csv({a}) == to_csv({c}));
    CHECK(a.estimate_mean == c.estimate_mean);
    CHECK(to_csv({run_scenario(s, 6, 3, 1)}) != to_csv({a}));
}

TEST_CASE("harness: risk arithmetic", "[harness][property]") {
    for (double value : {0.0, 0.4, 1.0}) {
        const auto r = run_scenario(bounded_scenario("c", ConstantAt{value}, 200, 50, 1.0), 9);
        CHECK_THAT(r.mse, WithinRel(r.bias * r.bias + r.variance, 1e-12));
        CHECK(r.mc_stderr > 0.0);
        CHECK(r.variance >= 0.0);
    }
}

TEST_CASE("harness: prior pair is separated by the estimator", "[harness]") {
    // Degree-6 estimator against the k = 2 pair. The priors share moments up to
    // order 2 only, so the expected difference is E_nu1 G - E_nu0 G for G*_3.
    const int K = 3;
    const auto pair = construct_prior_pair(2);
    const auto& G = cached_approximant(K, ApproxBasis::BestApprox);
    double exact = 0.0;
    for (const auto& a : pair.nu1.atoms()) exact += a.w * G(a.t);
    for (const auto& a : pair.nu0.atoms()) exact -= a.w * G(a.t);
    CHECK_THAT(exact, WithinAbs(0.25, 2.0 * remez_best_approx(K).delta));

    const auto r1 = run_scenario(bounded_scenario("nu1", AlternationAtoms{2, 1.0, 1}, 10000, 1000, 1.0, K), 31);
    const auto r0 = run_scenario(bounded_scenario("nu0", AlternationAtoms{2, 1.0, 0}, 10000, 1000, 1.0, K), 31);
    // Var(T_hat) <= 2 Var(error) + 2 Var(T), and Var(T) <= 1 / n on [-1, 1].
    const double var_est1 = 2.0 * r1.variance + 2.0 / 10000.0;
    const double var_est0 = 2.0 * r0.variance + 2.0 / 10000.0;
    const double se = std::sqrt(var_est1 / 1000.0 + var_est0 / 1000.0);
    const double diff = r1.estimate_mean - r0.estimate_mean;
    CHECK(std::fabs(diff - exact) <= 5.0 * se);
}

TEST_CASE("harness: theta families", "[harness]") {
    Scenario s = bounded_scenario("t", TwoSpike{3, 2.5}, 6, 2, 1.0);
    std::vector<double> theta(6);
    draw_theta(s, 1, 0, 0, theta);
    CHECK(theta == std::vector<double>{2.5, -2.5, 2.5, 0, 0, 0});
    s.family = AlternationAtoms{2, 2.0, 0};
    s.n = 2000;
    theta.resize(2000);
    draw_theta(s, 1, 0, 0, theta);
    std::size_t zeros = 0;
    for (double t : theta) {
        CHECK((t == 0.0 || std::fabs(std::fabs(t) - 2.0) < 1e-9));
        zeros += t == 0.0 ? 1 : 0;
    }
    CHECK(std::fabs(zeros / 2000.0 - 0.75) < 0.05);
    std::vector<double> again(2000);
    draw_theta(s, 1, 0, 0, again);
    CHECK(again == theta);
    draw_theta(s, 1, 0, 1, again);
    CHECK(again != theta);
    CHECK(is_random(s.family));
    CHECK_FALSE(is_random(ZeroVector{}));
    CHECK(describe(ConstantAt{1.5}) == "ConstantAt(1.5)");
}

TEST_CASE("harness: scenario validation", "[harness]") {
    auto s = bounded_scenario("v", ZeroVector{}, 100, 1, 1.0);
    CHECK_THROWS_AS(s.validate(), DomainError);
    s.replications = 2;
    CHECK_NOTHROW(s.validate());
    s.family = Custom{{1.0, 2.0}};
    CHECK_THROWS_AS(s.validate(), DomainError);
    s.family = TwoSpike{101, 1.0};
    CHECK_THROWS_AS(s.validate(), DomainError);
    s.family = AlternationAtoms{3, 1.0, 1};
    CHECK_THROWS_AS(s.validate(), DomainError);
    s.family = ZeroVector{};
    s.estimator.M.reset();
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("harness: config parsing", "[harness]") {
    const auto c = parse_run_config(kConfig);
    CHECK(c.seed == 7);
    CHECK(c.workers == 2);
    CHECK(c.format == OutputFormat::Csv);
    CHECK(c.slack == 2.0);
    REQUIRE(c.scenarios.size() == 4);
    CHECK(std::holds_alternative<AlternationAtoms>(c.scenarios[1].family));
    CHECK(std::get<AlternationAtoms>(c.scenarios[1].family).which == 0);
    CHECK(c.scenarios[2].estimator.variant == Variant::Sparse);
    CHECK(*c.scenarios[2].estimator.k_n == 5);
    CHECK(*c.scenarios[3].estimator.basis == ApproxBasis::ChebyshevTruncation);

    CHECK_THROWS_AS(parse_run_config("{"), DomainError);
    CHECK_THROWS_AS(parse_run_config(R"({"scenarios": []})"), DomainError);
    CHECK_THROWS_AS(parse_run_config(R"({"seed": 1, "scenarios": []})"), DomainError);
    CHECK_THROWS_AS(parse_run_config(R"({"seed": 1, "format": "xml", "scenarios": [{}]})"), DomainError);
    CHECK_THROWS_AS(parse_run_config(R"({"seed": 1, "scenarios": [{"id": "a", "n": 20, "replications": 2,
        "theta": {"family": "nope"}, "estimator": {"variant": "b", "M": 1}}]})"),
                    DomainError);
    CHECK_THROWS_AS(load_run_config(temp_file("does_not_exist.json")), std::system_error);
}

TEST_CASE("harness: CSV and JSON output", "[harness]") {
    const auto c = parse_run_config(kConfig);
    const auto reports = run_all(c, 1);
    const auto csv = to_csv(reports);
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("\nspikes,500,sparse,") != std::string::npos);
    CHECK(csv == to_csv(run_all(c, 3)));
    const auto json = to_json(reports, c);
    CHECK(json.find("philox4x32-10/box-muller") != std::string::npos);
    CHECK(json.find("\"scenario_id\": \"custom\"") != std::string::npos);

    RiskReport odd;
    odd.scenario_id = "a,b";
    CHECK(to_csv({odd}).find("\"a,b\",") != std::string::npos);
}

TEST_CASE("harness: compliance report", "[harness]") {
    RiskReport good;
    good.scenario_id = "good";
    good.bias = 0.1;
    good.bias_bound = 0.1;
    good.variance = 1.0;
    good.var_bound = 1.0;
    CHECK(bound_compliance_report({good}).all_pass());
    RiskReport bad = good;
    bad.scenario_id = "bad";
    bad.bias = -10.0 * good.bias_bound;
    const auto rep = bound_compliance_report({good, bad});
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.rows[0].bias_ok);
    CHECK_FALSE(rep.rows[1].bias_ok);
    CHECK(rep.rows[1].var_ok);
    CHECK(rep.to_text().find("bad") != std::string::npos);
    CHECK(bound_compliance_report({bad}, 20.0).all_pass());
    CHECK_THROWS_AS(bound_compliance_report({}), DomainError);
}

TEST_CASE("harness: bounded suite at M = 1 passes at slack 2", "[harness]") {
    std::vector<RiskReport> reports;
    std::uint32_t idx = 0;
    for (ThetaFamily f : {ThetaFamily{ZeroVector{}}, ThetaFamily{ConstantAt{1.0}}, ThetaFamily{AlternationAtoms{10, 1.0, 1}}})
        reports.push_back(run_scenario(bounded_scenario("m1", f, 1000000, 20, 1.0), 77, idx++));
    CHECK(bound_compliance_report(reports, 2.0).all_pass());
}

TEST_CASE("harness: worker override", "[harness]") {
    unsetenv("L1EST_WORKERS");
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) == 1);
    setenv("L1EST_WORKERS", "5", 1);
    CHECK(resolve_workers(3) == 5);
    setenv("L1EST_WORKERS", "abc", 1);
    CHECK_THROWS_AS(resolve_workers(3), DomainError);
    unsetenv("L1EST_WORKERS");
}

TEST_CASE("harness: observation files round-trip", "[harness]") {
    std::vector<double> y(200);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::sin(0.37 * i) * 3.0 + 1e-9 * i;
    const auto path = temp_file("obs.txt");
    write_observations(path, y);
    const auto back = read_observations(path);
    CHECK(back == y);
    EstimatorSpec spec;
    spec.variant = Variant::Bounded;
    spec.M = 3.0;
    CHECK(estimate(spec, back) == estimate(spec, y));

    const auto bad = temp_file("bad.txt");
    {
        std::ofstream out(bad);
        out << "1.0\n\n2.5\nnan\n";
    }
    try {
        read_observations(bad);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.index() == 3);
    }
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}
