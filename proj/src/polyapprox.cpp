#include "l1est/polyapprox.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "l1est/errors.hpp"

namespace l1est {

namespace {

// Row j holds the monomial half-coefficients of T_{2j}, built with
// T_{2j+2} = 2 T_2 T_{2j} - T_{2j-2}, T_2 = 2u - 1 in u = x^2.
std::vector<std::vector<double>> even_chebyshev_table(int m_max) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(m_max) + 1);
    rows.push_back({1.0});
    if (m_max >= 1) rows.push_back({-1.0, 2.0});
    for (int j = 1; j < m_max; ++j) {
        const auto& cur = rows[j];
        const auto& prev = rows[j - 1];
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t l = 0; l < next.size(); ++l) {
            const double shifted = l >= 1 ? cur[l - 1] : 0.0;
            const double same = l < cur.size() ? cur[l] : 0.0;
            const double older = l < prev.size() ? prev[l] : 0.0;
            next[l] = 2.0 * (2.0 * shifted - same) - older;
        }
        rows.push_back(std::move(next));
    }
    return rows;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

std::string_view to_string(ApproxBasis basis) noexcept {
    return basis == ApproxBasis::BestApprox ? "best" : "chebyshev";
}

EvenPolynomial EvenPolynomial::from_chebyshev(std::vector<double> even_cheb) {
    EvenPolynomial p;
    if (even_cheb.empty()) return p;
    const int K = static_cast<int>(even_cheb.size()) - 1;
    const auto table = even_chebyshev_table(K);
    p.mono_.assign(even_cheb.size(), 0.0);
    for (int j = 0; j <= K; ++j)
        for (std::size_t l = 0; l < table[j].size(); ++l) p.mono_[l] += even_cheb[j] * table[j][l];
    p.cheb_ = std::move(even_cheb);
    return p;
}

EvenPolynomial EvenPolynomial::from_monomial(std::vector<double> half_coeffs) {
    EvenPolynomial p;
    if (half_coeffs.empty()) return p;
    const int K = static_cast<int>(half_coeffs.size()) - 1;
    p.cheb_.assign(half_coeffs.size(), 0.0);
    // x^{2k} = 2^{1-2k} sum_{j<k} C(2k, j) T_{2k-2j} + 2^{-2k} C(2k, k) T_0
    for (int k = 0; k <= K; ++k) {
        const double g = half_coeffs[k];
        if (g == 0.0) continue;
        for (int j = 0; j < k; ++j)
            p.cheb_[k - j] += g * std::ldexp(binomial(2 * k, j), 1 - 2 * k);
        p.cheb_[0] += g * std::ldexp(binomial(2 * k, k), -2 * k);
    }
    p.mono_ = std::move(half_coeffs);
    return p;
}

double EvenPolynomial::operator()(double x) const noexcept {
    if (cheb_.empty()) return 0.0;
    const double u = 2.0 * x * x - 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t j = cheb_.size() - 1; j >= 1; --j) {
        const double b0 = cheb_[j] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return cheb_[0] + u * b1 - b2;
}

double EvenPolynomial::evaluate_horner(double x) const noexcept {
    const double u = x * x;
    double acc = 0.0;
    for (auto it = mono_.rbegin(); it != mono_.rend(); ++it) acc = acc * u + *it;
    return acc;
}

EvenPolynomial chebyshev_even_coeffs(int m) {
    if (m < 0) throw DomainError("half-degree must be non-negative");
    if (m > 100) throw DegreeOverflowError(fmt::format("T_{} coefficients exceed supported range", 2 * m));
    std::vector<double> cheb(static_cast<std::size_t>(m) + 1, 0.0);
    cheb[m] = 1.0;
    return EvenPolynomial::from_chebyshev(std::move(cheb));
}

EvenPolynomial build_G_K(int K) {
    if (K < 0) throw DomainError("half-degree must be non-negative");
    if (K > 60) throw DegreeOverflowError(fmt::format("G_K with K = {} exceeds supported range (60)", K));
    std::vector<double> cheb(static_cast<std::size_t>(K) + 1);
    cheb[0] = 2.0 / std::numbers::pi;
    for (int k = 1; k <= K; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        cheb[k] = 4.0 / std::numbers::pi * sign / (4.0 * k * k - 1.0);
    }
    return EvenPolynomial::from_chebyshev(std::move(cheb));
}

double uniform_error(const EvenPolynomial& poly, int grid_size) {
    if (poly.empty()) throw DomainError("uniform_error of an empty polynomial");
    if (grid_size < 1001 || grid_size % 2 == 0)
        throw DomainError(fmt::format("grid size must be odd and >= 1001, got {}", grid_size));
    // Both |x| and poly are even: the non-negative half of the grid suffices.
    const int half = (grid_size - 1) / 2;
    double worst = 0.0;
    for (int j = 0; j <= half; ++j) {
        const double x = static_cast<double>(j) / half;
        worst = std::max(worst, std::fabs(x - poly(x)));
    }
    return worst;
}

std::vector<double> BestApproxSolution::lower_set() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < alternation_points.size(); ++i)
        if (alternation_signs[i] < 0) out.push_back(alternation_points[i]);
    return out;
}

std::vector<double> BestApproxSolution::upper_set() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < alternation_points.size(); ++i)
        if (alternation_signs[i] > 0) out.push_back(alternation_points[i]);
    return out;
}

namespace {

struct ApproxCache {
    std::mutex mutex;
    std::map<std::pair<int, ApproxBasis>, std::unique_ptr<const EvenPolynomial>> polys;
    std::map<std::pair<int, ApproxBasis>, double> errors;
};

ApproxCache& approx_cache() {
    static ApproxCache cache;
    return cache;
}

}  // namespace

const EvenPolynomial& cached_approximant(int K, ApproxBasis basis) {
    auto& cache = approx_cache();
    const auto key = std::make_pair(K, basis);
    {
        std::lock_guard lock(cache.mutex);
        if (auto it = cache.polys.find(key); it != cache.polys.end()) return *it->second;
    }
    // Built outside the lock; a racing duplicate build is discarded.
    auto poly = std::make_unique<const EvenPolynomial>(
        basis == ApproxBasis::BestApprox ? remez_best_approx(K).poly : build_G_K(K));
    std::lock_guard lock(cache.mutex);
    auto [it, inserted] = cache.polys.emplace(key, std::move(poly));
    return *it->second;
}

double cached_uniform_error(int K, ApproxBasis basis) {
    auto& cache = approx_cache();
    const auto key = std::make_pair(K, basis);
    {
        std::lock_guard lock(cache.mutex);
        if (auto it = cache.errors.find(key); it != cache.errors.end()) return it->second;
    }
    const double err = uniform_error(cached_approximant(K, basis));
    std::lock_guard lock(cache.mutex);
    cache.errors.emplace(key, err);
    return err;
}

}  // namespace l1est
