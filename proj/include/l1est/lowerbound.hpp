#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace l1est {

struct Atom {
    double t = 0.0;
    double w = 0.0;
};

/// Finitely supported probability measure on the real line. Weights are
/// non-negative and sum to 1 within 1e-12; atoms are kept sorted by position.
class DiscretePrior {
public:
    DiscretePrior() = default;
    explicit DiscretePrior(std::vector<Atom> atoms);

    static DiscretePrior point_mass(double t) { return DiscretePrior({{t, 1.0}}); }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    /// max |t| over the support.
    double support_radius() const noexcept;

    /// int t^l d(prior).
    double moment(int l) const noexcept;
    /// int |t| d(prior).
    double abs_mean() const noexcept;
    /// Variance of |t| under the prior.
    double abs_variance() const noexcept;

    /// True when every atom (t, w) has a partner (-t, w) within tol.
    bool is_symmetric(double tol = 1e-12) const noexcept;

private:
    std::vector<Atom> atoms_;
};

/// DiscretePrior symmetric about 0 and supported on [-M, M].
class SymmetricDiscretePrior : public DiscretePrior {
public:
    SymmetricDiscretePrior() = default;
    SymmetricDiscretePrior(std::vector<Atom> atoms, double M);

    double M() const noexcept { return M_; }

private:
    double M_ = 1.0;
};

/// Least-favorable pair on [-1, 1] for moment order k: equal moments of
/// orders 0..k, symmetric, and int |t| d(nu1) - int |t| d(nu0) = 2 delta_k.
/// nu0 lives on the alternation points where |x| - G* = -delta, nu1 on those
/// where it is +delta.
struct PriorPair {
    SymmetricDiscretePrior nu0;
    SymmetricDiscretePrior nu1;
    double delta_k = 0.0;
    /// 2-norm condition number of the weight system.
    double condition = 0.0;
};

/// Requires even k with 2 <= k <= 80. Throws ConditioningError when the
/// weight system is numerically singular (condition > 1e12) and
/// ConstructionError when a weight comes out with the wrong sign.
PriorPair construct_prior_pair(int k);

/// Pushforward under t -> M t.
SymmetricDiscretePrior scale_prior(const SymmetricDiscretePrior& nu, double M);

struct PriorMoments {
    double m0 = 0.0;
    double m1 = 0.0;
    /// Var of T(theta) = n^{-1} sum |theta_i| under the product prior mu0^n.
    double v0_sq = 0.0;
};

PriorMoments prior_moments(const DiscretePrior& mu0, const DiscretePrior& mu1, std::size_t n);

/// I^2 = int (f1 - f0)^2 / f0 for the normal location mixtures
/// f_i(y) = sum_j w_ij phi(y - t_ij), by adaptive Gauss-Kronrod quadrature on
/// [-R - 10, R + 10] (R the larger support radius), absolute tolerance 1e-10.
double chi_square_mixture_1d(const DiscretePrior& mu0, const DiscretePrior& mu1,
                             double abs_tol = 1e-10);

/// Chi-square of the n-fold product mixtures from the one-coordinate value:
/// (1 + I1^2)^n - 1, evaluated as expm1(n log1p(I1^2)).
double chi_square_product(double I1_sq, std::size_t n);

/// Same quantity by direct n-dimensional tensor Gauss-Hermite quadrature of
/// int (prod f1 - prod f0)^2 / prod f0. Cost grows as nodes^n.
double chi_square_product_tensor(const DiscretePrior& mu0, const DiscretePrior& mu1, int n,
                                 int nodes = 40);

/// e^{M^2/2} sum_{k > k_n} M^{2k} / k!: bound on the one-coordinate I^2 for
/// priors on [-M, M] whose moments agree up to order k_n.
double chi_square_tail_bound(double M, int k_n);

/// e^{3M^2/2} M^{2 k_n} / k_n!, which dominates the tail bound.
double chi_square_single_term_bound(double M, int k_n);

/// (1 + e^{3M^2/2} (e M^2 / k_n)^{k_n})^n - 1 in log space; +inf on overflow.
double chi_square_bound_n(double M, int k_n, std::size_t n);

/// Smallest even integer >= ln n / ln ln n + ln n / (ln ln n)^{3/2}. n >= 17.
int select_kn_bounded(std::size_t n);

struct MinimaxBound {
    double value = 0.0;
    /// |m1 - m0| > v0 I; value is 0 when false.
    bool hypothesis_holds = false;
};

/// (|m1 - m0| - v0 I)^2 / (I + 2)^2 with v0 = sqrt(v0_sq). I is the
/// chi-square distance (not its square).
MinimaxBound minimax_lower_bound(const PriorMoments& pm, double I);

// ---------------------------------------------------------------------------
// Constrained risk inequality on finite models.

/// Parameters 0..p-1 with functional values T[j] and outcome distributions
/// P[j][x] over a common finite alphabet.
struct FiniteModel {
    std::vector<double> T;
    std::vector<std::vector<double>> P;

    std::size_t parameters() const noexcept { return T.size(); }
    std::size_t outcomes() const noexcept { return P.empty() ? 0 : P.front().size(); }
    void validate() const;
};

/// Estimate attached to each outcome.
using DecisionRule = std::vector<double>;
/// Weights over parameter indices.
using FinitePrior = std::vector<double>;

struct RiskInequalityRecord {
    double m0 = 0.0, m1 = 0.0, v0 = 0.0;
    double I = 0.0;
    double eps = 0.0;
    double avg_risk0 = 0.0, avg_risk1 = 0.0;
    /// |int B d(mu1) - int B d(mu0)|.
    double bias_change = 0.0;
    /// |m1 - m0| - (eps + v0) I.
    double lb1_rhs = 0.0;
    bool lb1_holds = false;
    /// Whether |m1 - m0| > v0 I, the hypothesis of the Bayes and minimax bounds.
    bool bayes_applicable = false;
    /// min over the lambda grid of (Bayes risk - bound); +inf when not applicable.
    double bayes_min_margin = 0.0;
    bool bayes_holds = true;
    double minimax_lhs = 0.0, minimax_rhs = 0.0;
    bool minimax_holds = true;
    /// |Bayes bound at lambda = (I+1)/(I+2) - (|m1-m0| - v0 I)^2 / (I+2)^2|.
    double lambda_star_discrepancy = 0.0;
    /// bias_change - lb1_rhs.
    double gap = 0.0;

    bool all_hold() const noexcept { return lb1_holds && bayes_holds && minimax_holds; }
};

/// Bayes-risk lower bound lambda (1-lambda) (|m1-m0| - v0 I)^2 / (lambda + (1-lambda)(I+1)^2).
double bayes_risk_bound(double lambda, double m_gap, double v0, double I);

/// Exact enumeration of both sides of the constrained risk inequality and the
/// Bayes / minimax bounds for one decision rule. Throws PreconditionError when
/// the mu0-average risk exceeds eps^2.
RiskInequalityRecord verify_constrained_risk(const FiniteModel& model, const FinitePrior& mu0,
                                             const FinitePrior& mu1, const DecisionRule& rule,
                                             double eps, int lambda_grid = 21);

/// Random model with 2..max_params parameters and 2..max_outcomes outcomes,
/// full-support outcome distributions and two full-support priors. Fully
/// determined by (seed, index).
struct RandomRiskCase {
    FiniteModel model;
    FinitePrior mu0;
    FinitePrior mu1;
};
RandomRiskCase random_risk_case(std::uint64_t seed, std::uint64_t index, std::size_t max_params = 4,
                                std::size_t max_outcomes = 6);
/// Random decision rule over the model's outcomes, values in [-2, 2] scaled by the range of T.
DecisionRule random_decision_rule(const FiniteModel& model, std::uint64_t seed, std::uint64_t index,
                                  std::uint64_t rule);

}  // namespace l1est
