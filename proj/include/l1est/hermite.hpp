#pragma once

#include <span>
#include <vector>

namespace l1est {

/// Largest Hermite degree accepted unless a caller raises the cap explicitly.
inline constexpr int kDefaultMaxHermiteDegree = 200;

/// Probabilists' Hermite polynomial H_k(y), orthogonal under the standard
/// normal density with E H_k(Z)^2 = k!. Evaluated by the three-term
/// recurrence H_{k+1} = y H_k - k H_{k-1}.
///
/// For X ~ N(mu, 1), H_k(X) is an unbiased estimator of mu^k.
///
/// Throws DomainError for k < 0 or non-finite y, DegreeOverflowError for
/// k > max_degree.
double hermite_eval(int k, double y, int max_degree = kDefaultMaxHermiteDegree);

/// [H_0(y), ..., H_{k_max}(y)] from one recurrence pass.
std::vector<double> hermite_eval_batch(int k_max, double y,
                                       int max_degree = kDefaultMaxHermiteDegree);

/// Unchecked hot-loop variant: fills out[j] = H_j(y) for j < out.size().
void hermite_fill(std::span<double> out, double y) noexcept;

/// Exact second moment E H_k(X)^2 for X ~ N(mu, 1):
///   k! * sum_{j=0}^{k} C(k, j) mu^{2j} / j!.
/// Switches to log-space accumulation once terms pass 1e300; throws
/// RangeError if the final value does not fit in a double.
double hermite_second_moment(int k, double mu);

/// Natural log of hermite_second_moment; never overflows.
double log_hermite_second_moment(int k, double mu);

}  // namespace l1est
