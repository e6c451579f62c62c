#include "l1est/quadrature.hpp"

#include <cmath>
#include <queue>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "l1est/errors.hpp"

namespace l1est {

namespace {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
    double err = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_intervals) {
    if (!(b > a)) throw DomainError("integration interval must satisfy a < b");
    if (!(abs_tol > 0.0)) throw DomainError("absolute tolerance must be positive");

    std::priority_queue<Panel> panels;
    panels.push(evaluate_panel(f, a, b));
    double total = panels.top().value;
    double error = panels.top().error;

    while (error > abs_tol) {
        if (static_cast<int>(panels.size()) >= max_intervals)
            throw IntegrationError(
                fmt::format("adaptive quadrature reached {} panels with error {:.3g} > {:.3g}",
                            max_intervals, error, abs_tol),
                error);
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = evaluate_panel(f, worst.a, mid);
        const Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from scratch: the running totals drift by cancellation.
    QuadratureResult out;
    out.intervals = static_cast<int>(panels.size());
    while (!panels.empty()) {
        out.value += panels.top().value;
        out.abs_error += panels.top().error;
        panels.pop();
    }
    return out;
}

GaussRule gauss_hermite_rule(int m) {
    if (m < 1) throw DomainError("Gauss rule needs at least one node");
    // Jacobi matrix of the monic probabilists' Hermite recurrence:
    // x He_k = He_{k+1} + k He_{k-1}.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        J(k, k - 1) = std::sqrt(static_cast<double>(k));
        J(k - 1, k) = J(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int j = 0; j < m; ++j) {
        rule.nodes[j] = eig.eigenvalues()(j);
        const double v0 = eig.eigenvectors()(0, j);
        rule.weights[j] = v0 * v0;
    }
    return rule;
}

}  // namespace l1est
