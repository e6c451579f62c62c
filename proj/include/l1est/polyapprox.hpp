#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace l1est {

/// Even polynomial p(x) = sum_k g_{2k} x^{2k} on [-1, 1].
///
/// Two representations are kept: monomial half-coefficients g_{2k} (what the
/// estimators consume) and coefficients on the even Chebyshev basis T_{2j}.
/// Evaluation goes through the Chebyshev form; the monomial form of a degree-80
/// approximant to |x| has coefficients near 1e20 and Horner loses every digit.
class EvenPolynomial {
public:
    EvenPolynomial() = default;

    static EvenPolynomial from_chebyshev(std::vector<double> even_cheb);
    static EvenPolynomial from_monomial(std::vector<double> half_coeffs);

    bool empty() const noexcept { return cheb_.empty(); }
    int half_degree() const noexcept { return static_cast<int>(cheb_.size()) - 1; }

    /// g_{2k} at index k.
    const std::vector<double>& half_coeffs() const noexcept { return mono_; }
    /// c_j multiplying T_{2j}(x) at index j.
    const std::vector<double>& chebyshev_coeffs() const noexcept { return cheb_; }

    /// Clenshaw recurrence in u = 2x^2 - 1, using T_{2j}(x) = T_j(2x^2 - 1).
    double operator()(double x) const noexcept;
    /// Horner in x^2 on the monomial coefficients. Accurate only for small K.
    double evaluate_horner(double x) const noexcept;

private:
    std::vector<double> cheb_;
    std::vector<double> mono_;
};

enum class ApproxBasis { BestApprox, ChebyshevTruncation };

std::string_view to_string(ApproxBasis basis) noexcept;

/// Monomial coefficients [t_0, t_2, ..., t_{2m}] of the Chebyshev polynomial T_{2m}.
/// Throws DegreeOverflowError for m > 100.
EvenPolynomial chebyshev_even_coeffs(int m);

/// Truncated Chebyshev expansion of |x|:
///   G_K(x) = (2/pi) T_0 + (4/pi) sum_{k=1}^{K} (-1)^{k+1} T_{2k}(x) / (4k^2 - 1).
/// Uniform error on [-1, 1] is at most 2 / (pi (2K + 1)), attained at 0.
/// Throws DegreeOverflowError for K > 60.
EvenPolynomial build_G_K(int K);

inline constexpr int kDefaultErrorGrid = 100001;

/// max over a uniform grid on [-1, 1] of ||x| - poly(x)|. grid_size must be odd
/// (so the grid contains 0) and at least 1001.
double uniform_error(const EvenPolynomial& poly, int grid_size = kDefaultErrorGrid);

/// Best uniform approximation of |x| of degree 2K and its alternation structure.
struct BestApproxSolution {
    EvenPolynomial poly;
    /// delta_{2K}: the levelled uniform error, indexed by full degree 2K.
    double delta = 0.0;
    /// Ordered points in [-1, 1] where |x| - poly(x) = sign * delta.
    std::vector<double> alternation_points;
    std::vector<int> alternation_signs;
    int iterations = 0;
    /// Relative spread of |error| over the final reference set.
    double spread = 0.0;

    /// Points where |x| - G*(x) = -delta. Always an odd count (0 is among them).
    std::vector<double> lower_set() const;
    /// Points where |x| - G*(x) = +delta.
    std::vector<double> upper_set() const;
};

inline constexpr double kBernsteinConstant = 0.280169499;

/// Remez exchange in the even Chebyshev basis on [0, 1], iterated until the
/// relative spread of |error| over the reference set falls below tol.
/// Requires 1 <= K <= 40 and tol >= 1e-12. Throws ConvergenceError after
/// max_iterations, ConditioningError if the reference system is singular.
BestApproxSolution remez_best_approx(int K, double tol = 1e-10, int max_iterations = 200);

/// (2K, 2K * delta_{2K}) for each K; the scaled error tends to the Bernstein
/// constant 0.280169499 from below.
std::vector<std::pair<int, double>> bernstein_estimate(const std::vector<int>& K_list);

/// Process-wide cached approximant of half-degree K: G*_K for BestApprox, G_K
/// for ChebyshevTruncation. Thread-safe; the returned reference stays valid.
const EvenPolynomial& cached_approximant(int K, ApproxBasis basis);

/// Cached uniform error of cached_approximant(K, basis) on the default grid.
double cached_uniform_error(int K, ApproxBasis basis);

}  // namespace l1est
