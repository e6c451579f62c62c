#include "l1est/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "l1est/errors.hpp"
#include "l1est/hermite.hpp"
#include "l1est/rng.hpp"

namespace l1est {

namespace {

constexpr std::size_t kChunk = 4096;

void check_finite(std::span<const double> y) {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(y[i]))
            throw DataError(fmt::format("observation {} is not finite", i), i);
}

void require_sample_size(double n) {
    if (!(n >= static_cast<double>(kMinSampleSize)))
        throw DomainError(fmt::format("n = {} is below 17: log log n must exceed 1", n));
}

// Polynomial estimator sum_k coeff[k] * mean_i H_{2k}(y_i).
double hermite_moment_estimate(std::span<const double> y, const std::vector<double>& coeff) {
    const std::size_t K = coeff.size() - 1;
    std::vector<double> sums(K + 1, 0.0);
    std::vector<double> h(2 * K + 1);
    for (double yi : y) {
        hermite_fill(h, yi);
        for (std::size_t k = 0; k <= K; ++k) sums[k] += h[2 * k];
    }
    const double inv_n = 1.0 / static_cast<double>(y.size());
    double est = 0.0;
    for (std::size_t k = 0; k <= K; ++k) est += coeff[k] * sums[k] * inv_n;
    return est;
}

std::vector<double> rescaled(const std::vector<double>& g, double M) {
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = g[k] * std::pow(M, 1.0 - 2.0 * k);
    return out;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Bounded: return "bounded";
        case Variant::GrowingBound: return "growing";
        case Variant::Unbounded: return "unbounded";
        case Variant::Sparse: return "sparse";
    }
    return "unknown";
}

Variant parse_variant(std::string_view text) {
    if (text == "b" || text == "bounded") return Variant::Bounded;
    if (text == "g" || text == "growing") return Variant::GrowingBound;
    if (text == "u" || text == "unbounded") return Variant::Unbounded;
    if (text == "s" || text == "sparse") return Variant::Sparse;
    throw DomainError(fmt::format("unknown estimator variant '{}'", text));
}

ApproxBasis parse_basis(std::string_view text) {
    if (text == "best" || text == "best_approx") return ApproxBasis::BestApprox;
    if (text == "chebyshev" || text == "cheb") return ApproxBasis::ChebyshevTruncation;
    throw DomainError(fmt::format("unknown approximation basis '{}'", text));
}

ApproxBasis EstimatorSpec::resolved_basis() const noexcept {
    if (basis) return *basis;
    return variant == Variant::Bounded ? ApproxBasis::BestApprox : ApproxBasis::ChebyshevTruncation;
}

void EstimatorSpec::validate() const {
    if (n < 1) throw DomainError("empty sample");
    // Only the bounded estimator with an explicit K avoids log log n.
    if (n < kMinSampleSize && !(variant == Variant::Bounded && K_override))
        throw DomainError(fmt::format("n = {} is below 17: log log n must exceed 1", n));
    if (K_override && *K_override < 1) throw DomainError("K must be at least 1");
    switch (variant) {
        case Variant::Bounded:
            if (!M || !(*M > 0.0) || !std::isfinite(*M))
                throw DomainError("bounded estimator requires a finite M > 0");
            break;
        case Variant::GrowingBound:
            if (!(c > 1.0)) throw DomainError("growing-bound estimator requires c > 1");
            break;
        case Variant::Unbounded: break;
        case Variant::Sparse:
            if (!k_n || *k_n < 1 || *k_n > n)
                throw DomainError("sparse estimator requires 1 <= k_n <= n");
            break;
    }
}

int select_K_star(std::size_t n) {
    require_sample_size(static_cast<double>(n));
    const double ln = std::log(static_cast<double>(n));
    return std::max(1, static_cast<int>(std::lround(ln / (2.0 * std::log(ln)))));
}

int growing_half_degree(double n) {
    require_sample_size(n);
    const double raw = std::log2(n) / 7.0 - std::sqrt(std::log(n));
    return std::max(1, static_cast<int>(std::floor(raw)));
}

int hybrid_half_degree(double n) {
    require_sample_size(n);
    return std::max(1, static_cast<int>(std::floor(std::log2(n) / 12.0)));
}

double growing_bound(double n, double c) { return std::sqrt(c * std::log(n)); }

double estimate_bounded(std::span<const double> y, double M, int K, ApproxBasis basis) {
    if (y.empty()) throw DomainError("empty sample");
    if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("M must be finite and positive");
    if (K < 1) throw DomainError("K must be at least 1");
    check_finite(y);
    const auto& g = cached_approximant(K, basis).half_coeffs();
    return hermite_moment_estimate(y, rescaled(g, M));
}

double estimate_growing(std::span<const double> y, double c, std::optional<int> K) {
    if (!(c > 1.0)) throw DomainError("growing-bound estimator requires c > 1");
    const double n = static_cast<double>(y.size());
    require_sample_size(n);
    check_finite(y);
    const int half = K ? *K : growing_half_degree(n);
    if (half < 1) throw DomainError("K must be at least 1");
    const auto& g = cached_approximant(half, ApproxBasis::ChebyshevTruncation).half_coeffs();
    return hermite_moment_estimate(y, rescaled(g, growing_bound(n, c)));
}

HybridParams HybridParams::unbounded(double n) {
    require_sample_size(n);
    HybridParams p;
    p.n = n;
    p.M_n = 8.0 * std::sqrt(std::log(n));
    p.K = hybrid_half_degree(n);
    p.threshold = 2.0 * std::sqrt(2.0 * std::log(n));
    p.truncation = n;
    p.first_term = 0;
    return p;
}

HybridParams HybridParams::sparse(double n) {
    HybridParams p = unbounded(n);
    p.truncation = n * n;
    p.first_term = 1;
    return p;
}

std::vector<double> HybridParams::scaled_coeffs() const {
    auto c = rescaled(cached_approximant(K, basis).half_coeffs(), M_n);
    for (int k = 0; k < first_term && k < static_cast<int>(c.size()); ++k) c[k] = 0.0;
    return c;
}

namespace {

// Evaluates the hybrid series with precomputed scaled coefficients.
struct HybridEvaluator {
    const HybridParams& p;
    std::vector<double> coeff;
    std::vector<double> h;

    explicit HybridEvaluator(const HybridParams& params)
        : p(params), coeff(params.scaled_coeffs()), h(2 * coeff.size() - 1) {}

    double series(double x) {
        hermite_fill(h, x);
        double s = 0.0;
        for (std::size_t k = 0; k < coeff.size(); ++k) s += coeff[k] * h[2 * k];
        return s;
    }
    double delta(double x) { return std::min(series(x), p.truncation); }
    double xi(double x1, double x2) {
        return std::fabs(x2) <= p.threshold ? delta(x1) : std::fabs(x1);
    }
};

}  // namespace

double hybrid_series(double x, const HybridParams& p) {
    if (!std::isfinite(x)) throw DataError("hybrid series argument is not finite", 0);
    HybridEvaluator ev(p);
    return ev.series(x);
}

double delta_component(double x, std::size_t n) {
    if (!std::isfinite(x)) throw DataError("delta argument is not finite", 0);
    const auto p = HybridParams::unbounded(static_cast<double>(n));
    HybridEvaluator ev(p);
    return ev.delta(x);
}

double xi_component(double x1, double x2, const HybridParams& p) {
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw DataError("xi arguments must be finite", 0);
    HybridEvaluator ev(p);
    return ev.xi(x1, x2);
}

std::pair<std::vector<double>, std::vector<double>> split_samples(std::span<const double> y,
                                                                  std::span<const double> z) {
    if (y.size() != z.size()) throw DomainError("split_samples: y and z differ in length");
    std::pair<std::vector<double>, std::vector<double>> out;
    out.first.resize(y.size());
    out.second.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.first[i] = (y[i] + z[i]) / std::numbers::sqrt2;
        out.second[i] = (y[i] - z[i]) / std::numbers::sqrt2;
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> split_samples(std::span<const double> y,
                                                                  std::uint64_t seed) {
    if (y.empty()) throw DomainError("empty sample");
    std::vector<double> z(y.size());
    CounterRng(seed).fill_normal(stream_id(StreamDomain::Split, 0, 0), 0, z);
    return split_samples(y, z);
}

double estimate_hybrid(std::span<const double> y, std::uint64_t seed, const HybridParams& p, double scale) {
    check_finite(y);
    HybridEvaluator ev(p);
    const CounterRng rng(seed);
    const auto stream = stream_id(StreamDomain::Split, 0, 0);
    std::array<double, kChunk> z{};
    double sum = 0.0;
    for (std::size_t start = 0; start < y.size(); start += kChunk) {
        const std::size_t len = std::min(kChunk, y.size() - start);
        rng.fill_normal(stream, start, std::span<double>(z.data(), len));
        for (std::size_t j = 0; j < len; ++j) {
            const double yi = y[start + j];
            const double x1 = (yi + z[j]) / std::numbers::sqrt2;
            const double x2 = (yi - z[j]) / std::numbers::sqrt2;
            sum += ev.xi(x1, x2);
        }
    }
    return std::numbers::sqrt2 * scale * sum;
}

double estimate_unbounded(std::span<const double> y, std::uint64_t seed) {
    const double n = static_cast<double>(y.size());
    const auto p = HybridParams::unbounded(n);
    return estimate_hybrid(y, seed, p, 1.0 / n);
}

double estimate_sparse(std::span<const double> y, std::size_t k_n, std::uint64_t seed) {
    const double n = static_cast<double>(y.size());
    if (k_n < 1 || k_n > y.size())
        throw DomainError(fmt::format("k_n = {} outside [1, n = {}]", k_n, y.size()));
    const auto p = HybridParams::sparse(n);
    return estimate_hybrid(y, seed, p, 1.0 / static_cast<double>(k_n));
}

int resolved_half_degree(const EstimatorSpec& spec) {
    if (spec.K_override) return *spec.K_override;
    const double n = static_cast<double>(spec.n);
    switch (spec.variant) {
        case Variant::Bounded: return select_K_star(spec.n);
        case Variant::GrowingBound: return growing_half_degree(n);
        case Variant::Unbounded:
        case Variant::Sparse: return hybrid_half_degree(n);
    }
    return 1;
}

double estimate(const EstimatorSpec& spec, std::span<const double> y) {
    EstimatorSpec local = spec;
    local.n = y.size();
    local.validate();
    const int K = resolved_half_degree(local);
    const double n = static_cast<double>(y.size());
    switch (local.variant) {
        case Variant::Bounded: return estimate_bounded(y, *local.M, K, local.resolved_basis());
        case Variant::GrowingBound: {
            if (local.resolved_basis() == ApproxBasis::ChebyshevTruncation)
                return estimate_growing(y, local.c, K);
            check_finite(y);
            const auto& g = cached_approximant(K, local.resolved_basis()).half_coeffs();
            return hermite_moment_estimate(y, rescaled(g, growing_bound(n, local.c)));
        }
        case Variant::Unbounded: {
            auto p = HybridParams::unbounded(n);
            p.K = K;
            p.basis = local.resolved_basis();
            return estimate_hybrid(y, local.seed, p, 1.0 / n);
        }
        case Variant::Sparse: {
            auto p = HybridParams::sparse(n);
            p.K = K;
            p.basis = local.resolved_basis();
            return estimate_hybrid(y, local.seed, p, 1.0 / static_cast<double>(*local.k_n));
        }
    }
    return 0.0;
}

AnalyticBounds analytic_bounds(const EstimatorSpec& spec, std::size_t n_count) {
    EstimatorSpec local = spec;
    local.n = n_count;
    local.validate();
    const int K = resolved_half_degree(local);
    const double n = static_cast<double>(n_count);
    const double ln = std::log(n);
    AnalyticBounds out;
    switch (local.variant) {
        case Variant::Bounded: {
            const double M = *local.M;
            out.bias = M * cached_uniform_error(K, local.resolved_basis());
            const double log_var = std::log(2.0) + M * M + 8.0 * K * std::log(2.0) +
                                   2.0 * K * std::log(static_cast<double>(K)) - ln;
            out.variance = std::exp(log_var);
            break;
        }
        case Variant::GrowingBound: {
            const double Mn = growing_bound(n, local.c);
            out.bias = 2.0 * Mn / (std::numbers::pi * (2.0 * K + 1.0));
            out.variance = 4.0 * Mn * Mn * std::exp2(7.0 * K) / n;
            break;
        }
        case Variant::Unbounded:
        case Variant::Sparse: {
            const double Mn = 8.0 * std::sqrt(ln);
            out.bias = std::numbers::sqrt2 * Mn / (std::numbers::pi * K);
            out.variance = 2.0 * std::pow(n, -0.5) * std::pow(ln, 5.0);
            if (local.variant == Variant::Sparse) {
                const double ratio = n / static_cast<double>(*local.k_n);
                out.bias *= ratio;
                out.variance *= ratio * ratio;
            }
            break;
        }
    }
    return out;
}

}  // namespace l1est
