#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "l1est/errors.hpp"
#include "l1est/lowerbound.hpp"
#include "l1est/rng.hpp"

namespace l1est {

namespace {

void check_distribution(const std::vector<double>& p, std::size_t size, const char* what) {
    if (p.size() != size) throw DomainError(fmt::format("{} has length {}, expected {}", what, p.size(), size));
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(fmt::format("{} has a negative entry", what));
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError(fmt::format("{} sums to {:.17g}", what, total));
}

bool at_least(double lhs, double rhs) {
    return lhs >= rhs - 1e-12 * (1.0 + std::fabs(lhs) + std::fabs(rhs));
}

std::vector<double> random_simplex(const CounterRng& rng, std::uint64_t stream, std::uint64_t& index,
                                   std::size_t size) {
    std::vector<double> p(size);
    double total = 0.0;
    for (auto& v : p) {
        v = -std::log1p(-rng.uniform(stream, index++)) + 1e-3;
        total += v;
    }
    for (auto& v : p) v /= total;
    return p;
}

std::uint64_t selftest_stream(std::uint64_t index, std::uint32_t sub) {
    return stream_id(StreamDomain::Selftest, sub, static_cast<std::uint32_t>(index)) ^
           ((index >> 32) << 40);
}

}  // namespace

void FiniteModel::validate() const {
    if (T.empty() || P.size() != T.size()) throw DomainError("model needs one outcome distribution per parameter");
    const std::size_t m = outcomes();
    if (m == 0) throw DomainError("model needs at least one outcome");
    for (double t : T)
        if (!std::isfinite(t)) throw DomainError("functional values must be finite");
    for (const auto& row : P) check_distribution(row, m, "outcome distribution");
}

double bayes_risk_bound(double lambda, double m_gap, double v0, double I) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
    const double num = std::fabs(m_gap) - v0 * I;
    if (num <= 0.0) return 0.0;
    const double denom = lambda + (1.0 - lambda) * (I + 1.0) * (I + 1.0);
    return lambda * (1.0 - lambda) * num * num / denom;
}

RiskInequalityRecord verify_constrained_risk(const FiniteModel& model, const FinitePrior& mu0,
                                             const FinitePrior& mu1, const DecisionRule& rule,
                                             double eps, int lambda_grid) {
    model.validate();
    const std::size_t p = model.parameters();
    const std::size_t m = model.outcomes();
    check_distribution(mu0, p, "mu0");
    check_distribution(mu1, p, "mu1");
    if (rule.size() != m) throw DomainError("decision rule must assign a value to every outcome");
    if (!(eps >= 0.0)) throw DomainError("eps must be non-negative");
    if (lambda_grid < 2) throw DomainError("lambda grid needs at least two points");

    RiskInequalityRecord r;
    r.eps = eps;
    std::vector<double> bias(p), risk(p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0, mse = 0.0;
        for (std::size_t x = 0; x < m; ++x) {
            mean += model.P[j][x] * rule[x];
            mse += model.P[j][x] * (rule[x] - model.T[j]) * (rule[x] - model.T[j]);
        }
        bias[j] = mean - model.T[j];
        risk[j] = mse;
    }
    double b0 = 0.0, b1 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        r.m0 += mu0[j] * model.T[j];
        r.m1 += mu1[j] * model.T[j];
        r.avg_risk0 += mu0[j] * risk[j];
        r.avg_risk1 += mu1[j] * risk[j];
        b0 += mu0[j] * bias[j];
        b1 += mu1[j] * bias[j];
    }
    double v0_sq = 0.0;
    for (std::size_t j = 0; j < p; ++j) v0_sq += mu0[j] * (model.T[j] - r.m0) * (model.T[j] - r.m0);
    r.v0 = std::sqrt(v0_sq);

    if (!at_least(eps * eps, r.avg_risk0))
        throw PreconditionError(fmt::format("average risk {:.6g} under mu0 exceeds eps^2 = {:.6g}",
                                            r.avg_risk0, eps * eps));

    double I_sq = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
        double f0 = 0.0, f1 = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            f0 += mu0[j] * model.P[j][x];
            f1 += mu1[j] * model.P[j][x];
        }
        if (f0 == 0.0) {
            if (f1 > 0.0) I_sq = std::numeric_limits<double>::infinity();
            continue;
        }
        I_sq += (f1 - f0) * (f1 - f0) / f0;
    }
    r.I = std::sqrt(I_sq);

    const double gap = std::fabs(r.m1 - r.m0);
    r.bias_change = std::fabs(b1 - b0);
    r.lb1_rhs = gap - (eps + r.v0) * r.I;
    r.gap = r.bias_change - r.lb1_rhs;
    r.lb1_holds = !std::isfinite(r.I) || at_least(r.bias_change, r.lb1_rhs);

    r.bayes_applicable = std::isfinite(r.I) && gap > r.v0 * r.I;
    r.bayes_min_margin = std::numeric_limits<double>::infinity();
    if (r.bayes_applicable) {
        auto check = [&](double lambda) {
            const double lhs = lambda * r.avg_risk0 + (1.0 - lambda) * r.avg_risk1;
            const double rhs = bayes_risk_bound(lambda, gap, r.v0, r.I);
            r.bayes_min_margin = std::min(r.bayes_min_margin, lhs - rhs);
            if (!at_least(lhs, rhs)) r.bayes_holds = false;
        };
        for (int i = 0; i < lambda_grid; ++i) check(static_cast<double>(i) / (lambda_grid - 1));
        const double lambda_star = (r.I + 1.0) / (r.I + 2.0);
        check(lambda_star);

        r.minimax_lhs = std::max(r.avg_risk0, r.avg_risk1);
        const double num = gap - r.v0 * r.I;
        r.minimax_rhs = num * num / ((r.I + 2.0) * (r.I + 2.0));
        r.minimax_holds = at_least(r.minimax_lhs, r.minimax_rhs);
        r.lambda_star_discrepancy = std::fabs(bayes_risk_bound(lambda_star, gap, r.v0, r.I) - r.minimax_rhs);
    }
    return r;
}

RandomRiskCase random_risk_case(std::uint64_t seed, std::uint64_t index, std::size_t max_params,
                                std::size_t max_outcomes) {
    if (max_params < 2 || max_outcomes < 2) throw DomainError("random models need at least two parameters and outcomes");
    const CounterRng rng(seed);
    const std::uint64_t stream = selftest_stream(index, 0);
    std::uint64_t k = 0;
    const std::size_t p = 2 + static_cast<std::size_t>(rng.uniform(stream, k++) * (max_params - 1));
    const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform(stream, k++) * (max_outcomes - 1));

    RandomRiskCase c;
    c.model.T.resize(p);
    for (auto& t : c.model.T) t = 4.0 * rng.uniform(stream, k++) - 2.0;
    c.model.P.resize(p);
    for (auto& row : c.model.P) row = random_simplex(rng, stream, k, m);
    c.mu0 = random_simplex(rng, stream, k, p);
    c.mu1 = random_simplex(rng, stream, k, p);
    return c;
}

DecisionRule random_decision_rule(const FiniteModel& model, std::uint64_t seed, std::uint64_t index,
                                  std::uint64_t rule) {
    model.validate();
    const CounterRng rng(seed);
    const std::uint64_t stream = selftest_stream(index, 1 + static_cast<std::uint32_t>(rule & 0xFFFF));
    const auto [lo, hi] = std::minmax_element(model.T.begin(), model.T.end());
    const double scale = std::max(*hi - *lo, 1e-3);
    DecisionRule d(model.outcomes());
    for (std::size_t x = 0; x < d.size(); ++x) d[x] = scale * (4.0 * rng.uniform(stream, x) - 2.0);
    return d;
}

}  // namespace l1est
