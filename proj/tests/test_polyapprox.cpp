#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "l1est/errors.hpp"
#include "l1est/polyapprox.hpp"

using namespace l1est;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Closed-form monomial coefficients of T_n:
//   T_n(x) = (n/2) sum_k (-1)^k (n-k-1)! / (k! (n-2k)!) (2x)^{n-2k}.
std::vector<double> chebyshev_closed_form(int n) {
    std::vector<double> c(n / 2 + 1, 0.0);
    for (int k = 0; 2 * k <= n; ++k) {
        const double log_mag = std::lgamma(n - k) - std::lgamma(k + 1) - std::lgamma(n - 2 * k + 1);
        const double v = 0.5 * n * std::exp(log_mag) * std::pow(2.0, n - 2 * k);
        c[(n - 2 * k) / 2] = std::round(k % 2 == 0 ? v : -v);
    }
    return c;
}

}  // namespace

TEST_CASE("polyapprox: even Chebyshev coefficients", "[polyapprox]") {
    CHECK(chebyshev_even_coeffs(0).half_coeffs() == std::vector<double>{1});
    CHECK(chebyshev_even_coeffs(1).half_coeffs() == std::vector<double>{-1, 2});
    CHECK(chebyshev_even_coeffs(2).half_coeffs() == std::vector<double>{1, -8, 8});
    for (int m = 1; m <= 12; ++m) CHECK(chebyshev_even_coeffs(m).half_coeffs() == chebyshev_closed_form(2 * m));
    CHECK_THROWS_AS(chebyshev_even_coeffs(101), DegreeOverflowError);
}

TEST_CASE("polyapprox: T_2m satisfies the defining identity", "[polyapprox][property]") {
    for (int m : {1, 3, 7, 15}) {
        const auto T = chebyshev_even_coeffs(m);
        for (double x : {0.0, 0.1, 0.45, 0.8, 1.0})
            CHECK_THAT(T(x), WithinAbs(std::cos(2 * m * std::acos(x)), 1e-12));
    }
}

TEST_CASE("polyapprox: G_1 coefficients", "[polyapprox]") {
    const auto G = build_G_K(1);
    REQUIRE(G.half_coeffs().size() == 2);
    CHECK_THAT(G.half_coeffs()[0], WithinRel(2.0 / (3.0 * std::numbers::pi), 1e-15));
    CHECK_THAT(G.half_coeffs()[1], WithinRel(8.0 / (3.0 * std::numbers::pi), 1e-15));
    CHECK_THROWS_AS(build_G_K(61), DegreeOverflowError);
}

TEST_CASE("polyapprox: truncation error bound is attained at 0", "[polyapprox][property]") {
    for (int K = 1; K <= 40; ++K) {
        const auto G = build_G_K(K);
        const double bound = 2.0 / (std::numbers::pi * (2 * K + 1));
        const double err = uniform_error(G);
        CHECK(err <= bound + 1e-13);
        CHECK_THAT(err, WithinRel(bound, 1e-10));
        CHECK_THAT(G(0.0), WithinRel(bound, 1e-12));
        for (double g : G.half_coeffs()) CHECK(std::fabs(g) <= std::pow(2.0, 3 * K));
    }
}

TEST_CASE("polyapprox: Clenshaw and Horner agree at low degree", "[polyapprox]") {
    for (int K = 1; K <= 6; ++K) {
        const auto G = build_G_K(K);
        for (double x = -1.0; x <= 1.0; x += 0.125) CHECK_THAT(G.evaluate_horner(x), WithinAbs(G(x), 1e-12));
    }
    const auto p = EvenPolynomial::from_monomial({0.5, -1.0, 2.0});
    CHECK_THAT(p(0.5), WithinAbs(0.5 - 0.25 + 2.0 / 16.0, 1e-15));
    CHECK_THAT(EvenPolynomial::from_chebyshev(p.chebyshev_coeffs()).half_coeffs()[2], WithinAbs(2.0, 1e-14));
}

TEST_CASE("polyapprox: uniform_error grid validation", "[polyapprox]") {
    const auto G = build_G_K(2);
    CHECK_THROWS_AS(uniform_error(G, 1000), DomainError);
    CHECK_THROWS_AS(uniform_error(G, 999), DomainError);
    CHECK_THROWS_AS(uniform_error(EvenPolynomial{}), DomainError);
}

TEST_CASE("remez: quadratic case is exact", "[remez]") {
    const auto sol = remez_best_approx(1);
    CHECK_THAT(sol.delta, WithinAbs(0.125, 1e-12));
    CHECK_THAT(sol.poly.half_coeffs()[0], WithinAbs(0.125, 1e-12));
    CHECK_THAT(sol.poly.half_coeffs()[1], WithinAbs(1.0, 1e-12));
    const std::vector<double> pts{-1.0, -0.5, 0.0, 0.5, 1.0};
    const std::vector<int> signs{-1, 1, -1, 1, -1};
    REQUIRE(sol.alternation_points.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK_THAT(sol.alternation_points[i], WithinAbs(pts[i], 1e-9));
        CHECK(sol.alternation_signs[i] == signs[i]);
    }
    CHECK(sol.lower_set().size() == 3);
    CHECK(sol.upper_set().size() == 2);
}

TEST_CASE("remez: levels match a linear-programming oracle", "[remez]") {
    // Discrete minimax by LP on 20001 Chebyshev-spaced points in [0, 1].
    CHECK_THAT(remez_best_approx(2).delta, WithinAbs(0.06762089914048046, 1e-8));
    CHECK_THAT(remez_best_approx(3).delta, WithinAbs(0.04592906142410097, 1e-8));
    CHECK_THAT(remez_best_approx(5).delta, WithinAbs(0.027845116200375376, 1e-8));
}

TEST_CASE("remez: equioscillation and sup-norm agreement", "[remez][property]") {
    for (int K = 1; K <= 16; ++K) {
        const auto sol = remez_best_approx(K);
        REQUIRE(sol.alternation_points.size() == static_cast<std::size_t>(2 * K + 3));
        for (std::size_t i = 0; i < sol.alternation_points.size(); ++i) {
            const double x = sol.alternation_points[i];
            const double e = std::fabs(x) - sol.poly(x);
            CHECK_THAT(e, WithinAbs(sol.alternation_signs[i] * sol.delta, 1e-9 * sol.delta + 1e-13));
            if (i > 0) CHECK(sol.alternation_signs[i] == -sol.alternation_signs[i - 1]);
        }
        CHECK(sol.lower_set().size() % 2 == 1);
        CHECK_THAT(uniform_error(sol.poly), WithinRel(sol.delta, 1e-8));
        CHECK(sol.delta < 2.0 / (std::numbers::pi * (2 * K + 1)));
    }
}

TEST_CASE("remez: scaled error approaches the Bernstein constant", "[remez]") {
    const auto est = bernstein_estimate({5, 10, 20, 40});
    double prev = 0.0;
    for (const auto& [deg, scaled] : est) {
        CHECK(scaled >= 0.25);
        CHECK(scaled <= 0.30);
        CHECK(scaled > prev);
        CHECK(scaled < kBernsteinConstant);
        prev = scaled;
    }
    CHECK_THAT(est.back().second, WithinAbs(kBernsteinConstant, 1e-4));
    double prev_delta = 1.0;
    for (int K = 1; K <= 12; ++K) {
        const double d = remez_best_approx(K).delta;
        CHECK(d < prev_delta);
        prev_delta = d;
    }
}

TEST_CASE("remez: argument validation", "[remez]") {
    CHECK_THROWS_AS(remez_best_approx(0), DomainError);
    CHECK_THROWS_AS(remez_best_approx(41), DegreeOverflowError);
    CHECK_THROWS_AS(remez_best_approx(3, 1e-14), DomainError);
}

TEST_CASE("polyapprox: cached approximants", "[polyapprox]") {
    const auto& a = cached_approximant(4, ApproxBasis::BestApprox);
    const auto& b = cached_approximant(4, ApproxBasis::BestApprox);
    CHECK(&a == &b);
    CHECK(a.half_coeffs() == remez_best_approx(4).poly.half_coeffs());
    CHECK(cached_approximant(4, ApproxBasis::ChebyshevTruncation).half_coeffs() == build_G_K(4).half_coeffs());
    CHECK_THAT(cached_uniform_error(4, ApproxBasis::BestApprox), WithinRel(remez_best_approx(4).delta, 1e-8));
    CHECK(to_string(ApproxBasis::BestApprox) == "best");
    CHECK(to_string(ApproxBasis::ChebyshevTruncation) == "chebyshev");
}
