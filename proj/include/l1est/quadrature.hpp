#pragma once

#include <functional>
#include <vector>

namespace l1est {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integration on [a, b]: the panel
/// with the largest error estimate is bisected until the summed estimate is
/// below abs_tol. Throws IntegrationError if max_intervals is reached first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_intervals = 4000);

/// m-point Gauss rule for the standard normal weight: sum_j w_j g(x_j)
/// approximates E g(Z), exact for polynomials of degree <= 2m - 1.
/// Nodes and weights come from the Golub-Welsch eigenproblem.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_hermite_rule(int m);

}  // namespace l1est
