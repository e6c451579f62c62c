#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "l1est/polyapprox.hpp"

namespace l1est {

// Estimators of T(theta) = n^{-1} sum |theta_i| from y_i ~ N(theta_i, 1).
//
// Logarithm conventions: K* and every threshold / bound M_n use natural logs;
// the growing-bound and hybrid half-degrees use log2 n for their leading term.

enum class Variant { Bounded, GrowingBound, Unbounded, Sparse };

std::string_view to_string(Variant v) noexcept;
/// Accepts "b"/"bounded", "g"/"growing", "u"/"unbounded", "s"/"sparse".
Variant parse_variant(std::string_view text);
ApproxBasis parse_basis(std::string_view text);

inline constexpr std::size_t kMinSampleSize = 17;

struct EstimatorSpec {
    Variant variant = Variant::Bounded;
    /// Bound on |theta_i|; Bounded only.
    std::optional<double> M;
    std::optional<int> K_override;
    /// Defaults: BestApprox for Bounded, ChebyshevTruncation otherwise.
    std::optional<ApproxBasis> basis;
    std::size_t n = 0;
    /// Sparsity count; Sparse only.
    std::optional<std::size_t> k_n;
    /// Growing-bound constant c in M_n = sqrt(c ln n).
    double c = 2.0;
    std::uint64_t seed = 0;

    ApproxBasis resolved_basis() const noexcept;
    /// Throws DomainError when the invariants of the variant do not hold.
    void validate() const;
};

/// K* = max(1, round(ln n / (2 ln ln n))). Requires n >= 17.
int select_K_star(std::size_t n);
/// max(1, floor(log2(n) / 7 - sqrt(ln n))). n is real so that synthetic sizes
/// beyond 2^64 can be checked.
int growing_half_degree(double n);
/// max(1, floor(log2(n) / 12)).
int hybrid_half_degree(double n);

/// sum_{k=0}^{K} g_{2k} M^{1-2k} Bbar_{2k}, Bbar_{2k} = n^{-1} sum_i H_{2k}(y_i),
/// with g from G*_K (BestApprox) or G_K (ChebyshevTruncation).
double estimate_bounded(std::span<const double> y, double M, int K,
                        ApproxBasis basis = ApproxBasis::BestApprox);

/// Same polynomial estimator with the G_K coefficients, M_n = sqrt(c ln n) and
/// K = growing_half_degree(n) unless overridden.
double estimate_growing(std::span<const double> y, double c, std::optional<int> K = std::nullopt);

/// Growing-bound M_n = sqrt(c ln n).
double growing_bound(double n, double c);

/// Polynomial part for one coordinate of the hybrid estimator.
struct HybridParams {
    double n = 0.0;
    double M_n = 0.0;         // 8 sqrt(ln n)
    int K = 1;                // hybrid_half_degree(n)
    double threshold = 0.0;   // 2 sqrt(2 ln n), applied to |x2|
    double truncation = 0.0;  // n (unbounded) or n^2 (sparse)
    int first_term = 0;       // 0 keeps g_0; 1 drops it (sparse)
    ApproxBasis basis = ApproxBasis::ChebyshevTruncation;

    static HybridParams unbounded(double n);
    static HybridParams sparse(double n);

    /// g_{2k} M_n^{1-2k}, zero below first_term.
    std::vector<double> scaled_coeffs() const;
};

/// S_K(x) = sum_{k=first_term}^{K} g_{2k} M_n^{1-2k} H_{2k}(x).
double hybrid_series(double x, const HybridParams& p);

/// delta(x) = min(S_K(x), n) with the unbounded-case parameters for sample size n.
double delta_component(double x, std::size_t n);

/// xi = delta(x1) if |x2| <= threshold, else |x1|.
double xi_component(double x1, double x2, const HybridParams& p);

/// x1 = (y + z) / sqrt 2, x2 = (y - z) / sqrt 2 for z_i ~ N(0, 1) drawn from
/// the Split stream of seed at index i.
std::pair<std::vector<double>, std::vector<double>> split_samples(std::span<const double> y,
                                                                  std::uint64_t seed);
/// Same transform with caller-supplied z.
std::pair<std::vector<double>, std::vector<double>> split_samples(std::span<const double> y,
                                                                  std::span<const double> z);

/// sqrt(2) * scale * sum_i xi(x_{i1}, x_{i2}); scale = 1/n (unbounded) or 1/k_n (sparse).
double estimate_hybrid(std::span<const double> y, std::uint64_t seed, const HybridParams& p,
                       double scale);

double estimate_unbounded(std::span<const double> y, std::uint64_t seed);
double estimate_sparse(std::span<const double> y, std::size_t k_n, std::uint64_t seed);

/// Half-degree the spec resolves to for sample size spec.n.
int resolved_half_degree(const EstimatorSpec& spec);

/// Dispatch on spec.variant. spec.n is ignored; y.size() is used.
double estimate(const EstimatorSpec& spec, std::span<const double> y);

/// Analytic bias and variance bounds for the estimator described by spec at
/// sample size n:
///   Bounded:   M * uniform_error(approximant), 2 e^{M^2} 2^{8K} K^{2K} / n
///   Growing:   2 M_n / (pi (2K + 1)),           4 M_n^2 2^{7K} / n
///   Unbounded: sqrt2 M_n / (pi K),              2 n^{-1/2} ln^5 n
///   Sparse:    the unbounded bounds scaled by n / k_n (bias) and (n / k_n)^2 (variance)
struct AnalyticBounds {
    double bias = 0.0;
    double variance = 0.0;
};
AnalyticBounds analytic_bounds(const EstimatorSpec& spec, std::size_t n);

}  // namespace l1est
