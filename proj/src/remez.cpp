// Remez exchange for the best even approximation of |x| on [-1, 1].
//
// Works on the non-negative half x in [0, 1] with the basis T_{2j}(x),
// j = 0..K. The reference holds K + 2 points; x = 0 is always an extremum of
// the error x - p(x) (its slope there is 1), so mirroring the final reference
// gives the 2K + 3 alternation points on [-1, 1].

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "l1est/errors.hpp"
#include "l1est/polyapprox.hpp"

namespace l1est {

namespace {

constexpr int kSamplesPerLobe = 33;
constexpr double kMinRcond = 1e-13;

// Extremum of sign * err on [lo, hi]: coarse scan, then Brent around the best sample.
template <class Err>
double locate_extremum(const Err& err, double lo, double hi, double sign) {
    auto score = [&](double x) { return sign * err(x); };
    double best_x = lo;
    double best = score(lo);
    int best_i = 0;
    for (int i = 1; i < kSamplesPerLobe; ++i) {
        const double x = i == kSamplesPerLobe - 1 ? hi : lo + (hi - lo) * i / (kSamplesPerLobe - 1);
        const double s = score(x);
        if (s > best) {
            best = s;
            best_x = x;
            best_i = i;
        }
    }
    const double step = (hi - lo) / (kSamplesPerLobe - 1);
    const double a = std::max(lo, lo + (best_i - 1) * step);
    const double b = std::min(hi, lo + (best_i + 1) * step);
    const auto [x, neg] = boost::math::tools::brent_find_minima(
        [&](double t) { return -score(t); }, a, b, std::numeric_limits<double>::digits / 2 + 8);
    if (-neg > best) return x;
    return best_x;
}

}  // namespace

BestApproxSolution remez_best_approx(int K, double tol, int max_iterations) {
    if (K < 1) throw DomainError(fmt::format("remez half-degree must be >= 1, got {}", K));
    if (K > 40) throw DegreeOverflowError(fmt::format("remez half-degree {} exceeds 40", K));
    if (!(tol >= 1e-12)) throw DomainError("remez tolerance must be >= 1e-12");

    const int m = K + 2;
    // Nonnegative extrema of T_{2K+2}, ascending: sin(i pi / (2K + 2)).
    std::vector<double> ref(m);
    for (int i = 0; i < m; ++i) ref[i] = std::sin(i * std::numbers::pi / (2.0 * (K + 1)));
    ref.front() = 0.0;
    ref.back() = 1.0;

    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs(m);
    std::vector<double> cheb(K + 1);
    double last_spread = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= max_iterations; ++iter) {
        // p(x_i) + s_i E = x_i with s_0 = -1 alternating: |x| - p is -E at x = 0.
        for (int i = 0; i < m; ++i) {
            const double u = 2.0 * ref[i] * ref[i] - 1.0;
            double t_prev = 1.0;
            double t_cur = u;
            A(i, 0) = 1.0;
            for (int j = 1; j <= K; ++j) {
                A(i, j) = t_cur;
                const double t_next = 2.0 * u * t_cur - t_prev;
                t_prev = t_cur;
                t_cur = t_next;
            }
            A(i, K + 1) = (i % 2 == 0) ? -1.0 : 1.0;
            rhs(i) = ref[i];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        const double rcond = lu.rcond();
        if (!(rcond > kMinRcond))
            throw ConditioningError(
                fmt::format("remez reference system is singular (condition estimate {:.3g})", 1.0 / rcond),
                1.0 / rcond);
        const Eigen::VectorXd sol = lu.solve(rhs);
        for (int j = 0; j <= K; ++j) cheb[j] = sol(j);
        const double level = sol(K + 1);
        if (!(level > 0.0) || !std::isfinite(level))
            throw ConvergenceError(fmt::format("remez level lost its sign at iteration {}", iter), last_spread);

        const EvenPolynomial poly = EvenPolynomial::from_chebyshev(cheb);
        auto err = [&poly](double x) { return x - poly(x); };

        // Sign changes between consecutive reference points bound the lobes.
        std::vector<double> bounds(m + 1);
        bounds.front() = 0.0;
        bounds.back() = 1.0;
        for (int i = 0; i + 1 < m; ++i) {
            boost::math::tools::eps_tolerance<double> stop(std::numeric_limits<double>::digits - 3);
            std::uintmax_t max_iter = 200;
            const auto [lo, hi] = boost::math::tools::toms748_solve(
                err, ref[i], ref[i + 1], err(ref[i]), err(ref[i + 1]), stop, max_iter);
            bounds[i + 1] = 0.5 * (lo + hi);
        }

        std::vector<double> next(m);
        double hi_abs = 0.0;
        double lo_abs = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double sign = (i % 2 == 0) ? -1.0 : 1.0;
            next[i] = locate_extremum(err, bounds[i], bounds[i + 1], sign);
            const double e = std::fabs(err(next[i]));
            hi_abs = std::max(hi_abs, e);
            lo_abs = std::min(lo_abs, e);
        }
        last_spread = (hi_abs - lo_abs) / hi_abs;
        ref = next;

        if (last_spread < tol) {
            BestApproxSolution out;
            out.poly = poly;
            out.iterations = iter;
            out.spread = last_spread;
            out.delta = hi_abs;
            for (int i = m - 1; i >= 1; --i) {
                out.alternation_points.push_back(-ref[i]);
                out.alternation_signs.push_back((i % 2 == 0) ? -1 : 1);
            }
            for (int i = 0; i < m; ++i) {
                out.alternation_points.push_back(ref[i]);
                out.alternation_signs.push_back((i % 2 == 0) ? -1 : 1);
            }
            return out;
        }
    }
    throw ConvergenceError(
        fmt::format("remez did not converge in {} iterations (spread {:.3g})", max_iterations, last_spread),
        last_spread);
}

std::vector<std::pair<int, double>> bernstein_estimate(const std::vector<int>& K_list) {
    std::vector<std::pair<int, double>> out;
    out.reserve(K_list.size());
    for (int K : K_list) {
        const auto sol = remez_best_approx(K);
        out.emplace_back(2 * K, 2.0 * K * sol.delta);
    }
    return out;
}

}  // namespace l1est
