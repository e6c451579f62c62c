#include "l1est/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "l1est/errors.hpp"
#include "l1est/polyapprox.hpp"
#include "l1est/quadrature.hpp"

namespace l1est {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kMaxCondition = 1e12;

}  // namespace

DiscretePrior::DiscretePrior(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("prior needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.t) || !std::isfinite(a.w)) throw DomainError("prior atoms must be finite");
        if (a.w < 0.0) throw DomainError("prior weights must be non-negative");
        total += a.w;
    }
    if (std::fabs(total - 1.0) > kWeightTol)
        throw DomainError(fmt::format("prior weights sum to {:.17g}, not 1", total));
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
}

double DiscretePrior::support_radius() const noexcept {
    double r = 0.0;
    for (const auto& a : atoms_) r = std::max(r, std::fabs(a.t));
    return r;
}

double DiscretePrior::moment(int l) const noexcept {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.w * std::pow(a.t, l);
    return s;
}

double DiscretePrior::abs_mean() const noexcept {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.w * std::fabs(a.t);
    return s;
}

double DiscretePrior::abs_variance() const noexcept {
    const double m = abs_mean();
    double s = 0.0;
    for (const auto& a : atoms_) s += a.w * (std::fabs(a.t) - m) * (std::fabs(a.t) - m);
    return s;
}

bool DiscretePrior::is_symmetric(double tol) const noexcept {
    const std::size_t n = atoms_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Atom& a = atoms_[i];
        const Atom& b = atoms_[n - 1 - i];
        if (std::fabs(a.t + b.t) > tol || std::fabs(a.w - b.w) > tol) return false;
    }
    return true;
}

SymmetricDiscretePrior::SymmetricDiscretePrior(std::vector<Atom> atoms, double M)
    : DiscretePrior(std::move(atoms)), M_(M) {
    if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("prior scale M must be finite and positive");
    if (!is_symmetric(1e-12)) throw DomainError("prior is not symmetric about 0");
    if (support_radius() > M * (1.0 + 1e-12)) throw DomainError("prior support exceeds [-M, M]");
}

PriorPair construct_prior_pair(int k) {
    if (k < 2 || k > 80 || k % 2 != 0)
        throw DomainError(fmt::format("prior order k must be even with 2 <= k <= 80, got {}", k));
    const int K = k / 2;
    const BestApproxSolution sol = remez_best_approx(K);

    // Distinct |x| values of the alternation set: 0 and K+1 positive points.
    const std::size_t mid = sol.alternation_points.size() / 2;
    std::vector<double> xs(sol.alternation_points.begin() + mid, sol.alternation_points.end());
    std::vector<int> sigma(sol.alternation_signs.begin() + mid, sol.alternation_signs.end());
    const int m = static_cast<int>(xs.size());  // K + 2

    // a_i = signed total mass at |x| = xs[i]. Rows 0..K annihilate T_{2l},
    // hence every even moment up to k; the last row fixes total variation 2.
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        const double u = 2.0 * xs[i] * xs[i] - 1.0;
        double t_prev = 1.0, t_cur = u;
        A(0, i) = 1.0;
        for (int l = 1; l <= K; ++l) {
            A(l, i) = t_cur;
            const double t_next = 2.0 * u * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
        }
        A(K + 1, i) = sigma[i];
    }
    rhs(K + 1) = 2.0;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double condition = sv(0) / sv(sv.size() - 1);
    if (!(condition < kMaxCondition))
        throw ConditioningError(
            fmt::format("prior weight system for k = {} is ill-conditioned ({:.3g})", k, condition), condition);
    const Eigen::VectorXd a = svd.solve(rhs);

    std::vector<Atom> lower, upper;
    for (int i = 0; i < m; ++i) {
        if (a(i) * sigma[i] <= 0.0)
            throw ConstructionError(fmt::format(
                "weight {:.3g} at alternation point {:.17g} has the wrong sign", a(i), xs[i]));
        auto& target = sigma[i] > 0 ? upper : lower;
        const double mass = std::fabs(a(i));
        if (xs[i] == 0.0) {
            target.push_back({0.0, mass});
        } else {
            target.push_back({-xs[i], 0.5 * mass});
            target.push_back({xs[i], 0.5 * mass});
        }
    }
    // Rounding leaves the totals off by a few ulps; renormalise.
    auto normalise = [](std::vector<Atom>& atoms) {
        double total = 0.0;
        for (const auto& at : atoms) total += at.w;
        for (auto& at : atoms) at.w /= total;
    };
    normalise(lower);
    normalise(upper);

    PriorPair out;
    out.nu0 = SymmetricDiscretePrior(std::move(lower), 1.0);
    out.nu1 = SymmetricDiscretePrior(std::move(upper), 1.0);
    out.delta_k = sol.delta;
    out.condition = condition;
    return out;
}

SymmetricDiscretePrior scale_prior(const SymmetricDiscretePrior& nu, double M) {
    if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("scale M must be finite and positive");
    std::vector<Atom> atoms = nu.atoms();
    for (auto& a : atoms) a.t *= M;
    return SymmetricDiscretePrior(std::move(atoms), nu.M() * M);
}

PriorMoments prior_moments(const DiscretePrior& mu0, const DiscretePrior& mu1, std::size_t n) {
    if (n < 1) throw DomainError("n must be positive");
    PriorMoments pm;
    pm.m0 = mu0.abs_mean();
    pm.m1 = mu1.abs_mean();
    pm.v0_sq = mu0.abs_variance() / static_cast<double>(n);
    return pm;
}

double chi_square_mixture_1d(const DiscretePrior& mu0, const DiscretePrior& mu1, double abs_tol) {
    const auto& a0 = mu0.atoms();
    const auto& a1 = mu1.atoms();
    if (a0.empty() || a1.empty()) throw DomainError("chi-square needs non-empty priors");
    const double R = std::max(mu0.support_radius(), mu1.support_radius());
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    // f_i(y) = phi(y) e^{A} S_i with S_i = sum_j w_ij exp(y t_ij - t_ij^2/2 - A).
    auto integrand = [&](double y) {
        double A = -std::numeric_limits<double>::infinity();
        for (const auto& a : a0) A = std::max(A, y * a.t - 0.5 * a.t * a.t);
        for (const auto& a : a1) A = std::max(A, y * a.t - 0.5 * a.t * a.t);
        double s0 = 0.0, s1 = 0.0;
        for (const auto& a : a0) s0 += a.w * std::exp(y * a.t - 0.5 * a.t * a.t - A);
        for (const auto& a : a1) s1 += a.w * std::exp(y * a.t - 0.5 * a.t * a.t - A);
        const double d = s1 - s0;
        return inv_sqrt_2pi * std::exp(A - 0.5 * y * y) * d * d / s0;
    };
    return integrate_adaptive(integrand, -R - 10.0, R + 10.0, abs_tol).value;
}

double chi_square_product(double I1_sq, std::size_t n) {
    if (!(I1_sq >= 0.0)) throw DomainError("chi-square value must be non-negative");
    return std::expm1(static_cast<double>(n) * std::log1p(I1_sq));
}

double chi_square_product_tensor(const DiscretePrior& mu0, const DiscretePrior& mu1, int n, int nodes) {
    if (n < 1) throw DomainError("dimension must be positive");
    const GaussRule rule = gauss_hermite_rule(nodes);
    // r_i(y) = f_i(y) / phi(y) = sum_j w_ij exp(y t_ij - t_ij^2 / 2).
    auto ratio = [](const DiscretePrior& mu, double y) {
        double s = 0.0;
        for (const auto& a : mu.atoms()) s += a.w * std::exp(y * a.t - 0.5 * a.t * a.t);
        return s;
    };
    const std::size_t q = rule.nodes.size();
    std::vector<double> r0(q), r1(q);
    for (std::size_t j = 0; j < q; ++j) {
        r0[j] = ratio(mu0, rule.nodes[j]);
        r1[j] = ratio(mu1, rule.nodes[j]);
    }

    // Depth-first walk over the tensor grid carrying prefix products.
    double total = 0.0;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> w(n + 1, 1.0), p0(n + 1, 1.0), p1(n + 1, 1.0);
    int depth = 0;
    while (true) {
        if (depth == n) {
            const double d = p1[n] - p0[n];
            total += w[n] * d * d / p0[n];
            --depth;
            while (depth >= 0 && ++idx[depth] == q) {
                idx[depth] = 0;
                --depth;
            }
            if (depth < 0) break;
        }
        const std::size_t j = idx[depth];
        w[depth + 1] = w[depth] * rule.weights[j];
        p0[depth + 1] = p0[depth] * r0[j];
        p1[depth + 1] = p1[depth] * r1[j];
        ++depth;
    }
    return total;
}

double chi_square_tail_bound(double M, int k_n) {
    if (!(M >= 0.0) || k_n < 0) throw DomainError("tail bound needs M >= 0 and k_n >= 0");
    if (M == 0.0) return 0.0;
    const double M2 = M * M;
    int k = k_n + 1;
    double term = std::exp(k * std::log(M2) - std::lgamma(k + 1.0));
    double sum = 0.0;
    while (term > 1e-18 * sum || k <= k_n + 1 + static_cast<int>(M2)) {
        sum += term;
        ++k;
        term *= M2 / k;
        if (k > 100000) break;
    }
    return std::exp(0.5 * M2) * sum;
}

double chi_square_single_term_bound(double M, int k_n) {
    if (!(M > 0.0) || k_n < 0) throw DomainError("single-term bound needs M > 0 and k_n >= 0");
    return std::exp(1.5 * M * M + 2.0 * k_n * std::log(M) - std::lgamma(k_n + 1.0));
}

double chi_square_bound_n(double M, int k_n, std::size_t n) {
    if (!(M > 0.0) || k_n < 1 || n < 1) throw DomainError("bound needs M > 0, k_n >= 1, n >= 1");
    const double log_x = 1.5 * M * M + k_n * (1.0 + 2.0 * std::log(M) - std::log(static_cast<double>(k_n)));
    const double x = std::exp(log_x);
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    const double r = static_cast<double>(n) * std::log1p(x);
    if (r > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
    return std::expm1(r);
}

int select_kn_bounded(std::size_t n) {
    if (n < 17) throw DomainError(fmt::format("n = {} is below 17: log log n must exceed 1", n));
    const double ln = std::log(static_cast<double>(n));
    const double lln = std::log(ln);
    const double target = ln / lln + ln / std::pow(lln, 1.5);
    int k = static_cast<int>(std::ceil(target));
    if (k % 2 != 0) ++k;
    return std::max(k, 2);
}

MinimaxBound minimax_lower_bound(const PriorMoments& pm, double I) {
    if (!(I >= 0.0)) throw DomainError("chi-square distance must be non-negative");
    const double gap = std::fabs(pm.m1 - pm.m0);
    const double v0 = std::sqrt(std::max(pm.v0_sq, 0.0));
    MinimaxBound out;
    if (!std::isfinite(I)) return out;
    if (gap > v0 * I) {
        out.hypothesis_holds = true;
        const double num = gap - v0 * I;
        out.value = num * num / ((I + 2.0) * (I + 2.0));
    }
    return out;
}

}  // namespace l1est
