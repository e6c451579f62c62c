#include "l1est/hermite.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "l1est/errors.hpp"

namespace l1est {

namespace {

void check_args(int k, double y, int max_degree) {
    if (k < 0) throw DomainError(fmt::format("hermite degree must be non-negative, got {}", k));
    if (k > max_degree)
        throw DegreeOverflowError(
            fmt::format("hermite degree {} exceeds configured maximum {}", k, max_degree));
    if (!std::isfinite(y)) throw DomainError("hermite argument must be finite");
}

constexpr double kLinearLimit = 1e300;

}  // namespace

void hermite_fill(std::span<double> out, double y) noexcept {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = y;
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = y * out[k] - static_cast<double>(k) * out[k - 1];
}

double hermite_eval(int k, double y, int max_degree) {
    check_args(k, y, max_degree);
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = y;
    for (int j = 1; j < k; ++j) {
        const double next = y * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_eval_batch(int k_max, double y, int max_degree) {
    check_args(k_max, y, max_degree);
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
    hermite_fill(out, y);
    return out;
}

double log_hermite_second_moment(int k, double mu) {
    if (k < 0) throw DomainError("hermite degree must be non-negative");
    if (!std::isfinite(mu)) throw DomainError("mean must be finite");
    // log of term_j = lgamma(k+1) + log C(k,j) + 2j log|mu| - lgamma(j+1)
    const double log_kfact = std::lgamma(k + 1.0);
    if (mu == 0.0) return log_kfact;
    const double log_mu2 = 2.0 * std::log(std::fabs(mu));
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        const double log_binom = std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0);
        logs[j] = log_kfact + log_binom + j * log_mu2 - std::lgamma(j + 1.0);
        peak = std::max(peak, logs[j]);
    }
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    return peak + std::log(acc);
}

double hermite_second_moment(int k, double mu) {
    if (k < 0) throw DomainError("hermite degree must be non-negative");
    if (!std::isfinite(mu)) throw DomainError("mean must be finite");

    // term_0 = k!, term_{j+1} = term_j * (k-j)/(j+1) * mu^2/(j+1)
    double term = 1.0;
    bool linear = true;
    for (int j = 2; j <= k; ++j) {
        term *= j;
        if (term > kLinearLimit) {
            linear = false;
            break;
        }
    }
    if (linear) {
        const double mu2 = mu * mu;
        double sum = term;
        for (int j = 0; j < k && linear; ++j) {
            term *= static_cast<double>(k - j) / (j + 1.0) * mu2 / (j + 1.0);
            sum += term;
            if (term > kLinearLimit || sum > kLinearLimit) linear = false;
        }
        if (linear) return sum;
    }

    const double log_value = log_hermite_second_moment(k, mu);
    if (log_value >= std::log(std::numeric_limits<double>::max()))
        throw RangeError(fmt::format(
            "second moment of H_{}(X), X ~ N({}, 1), overflows double (log value {})", k, mu,
            log_value));
    return std::exp(log_value);
}

}  // namespace l1est
