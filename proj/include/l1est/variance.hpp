#pragma once

#include <cstdint>
#include <vector>

namespace l1est {

// Finite-support enumeration of the two variance facts the hybrid estimator
// analysis leans on: the variance of a randomly switched variable, and the
// effect of truncation from above.

/// Joint law of (X, Y) on a finite grid: P(X = x[i], Y = y[j]) = p[i][j].
struct JointDiscrete {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> p;
};

struct SwitchVariance {
    /// Var(X 1_A + Y 1_{A^c}) by enumerating (X, Y, A).
    double enumerated = 0.0;
    /// Var X P(A) + Var Y P(A^c) + (EX - EY)^2 P(A) P(A^c).
    double formula = 0.0;
};

/// A independent of (X, Y) with P(A) = p_a.
SwitchVariance switch_variance(const JointDiscrete& xy, double p_a);

struct TruncationVariance {
    double var_min = 0.0;  // Var min(X, Y)
    double var_x = 0.0;
    double var_y = 0.0;
};

TruncationVariance truncation_variance(const JointDiscrete& xy);
/// Var min(X, C) and Var X for X with values x and probabilities p.
TruncationVariance truncation_variance(const std::vector<double>& x, const std::vector<double>& p, double c);

/// Random joint law with 1..max_support values per margin, deterministic in (seed, index).
JointDiscrete random_joint(std::uint64_t seed, std::uint64_t index, std::size_t max_support = 6);

}  // namespace l1est
