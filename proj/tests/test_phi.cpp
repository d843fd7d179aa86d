#include <catch2/catch_amalgamated.hpp>

#include "hypergeo/phi.hpp"

using namespace hypergeo;
using Catch::Matchers::WithinAbs;

TEST_CASE("phi point values", "[phi]") {
    REQUIRE(phi(0.0) == 1.0);
    REQUIRE(phi(1.0) == 0.0);
    REQUIRE_THAT(phi(std::exp(1.0)), WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(phi(2.0), WithinAbs(2.0 * std::log(2.0) - 1.0, 1e-15));
    REQUIRE_THROWS_AS(phi(-0.1), NegativeInput);
}

TEST_CASE("phi series branch is continuous with the direct branch", "[phi]") {
    for (double d : {-9.9e-5, -1e-5, 1e-5, 9.9e-5, 1.01e-4, 2e-4}) {
        double x = 1.0 + d;
        long double direct = static_cast<long double>(x) * std::log(static_cast<long double>(x)) -
                             (static_cast<long double>(x) - 1.0L);
        REQUIRE_THAT(phi(x), WithinAbs(static_cast<double>(direct), 1e-18));
    }
}

TEST_CASE("phi sandwich values", "[phi]") {
    PhiEval e1 = phi_sandwich(1.0);
    REQUIRE(e1.phi == 0.0);
    REQUIRE(e1.taylor3_lower == 0.0);
    REQUIRE(e1.taylor4_upper == 0.0);
    REQUIRE(e1.chi_upper == 0.0);

    PhiEval e0 = phi_sandwich(0.0);
    REQUIRE(e0.phi == 1.0);
    REQUIRE(e0.chi_upper == 1.0);
    REQUIRE_THAT(e0.taylor3_lower, WithinAbs(2.0 / 3.0, 1e-15));
    REQUIRE_THAT(e0.taylor4_upper, WithinAbs(1.0, 1e-15));

    PhiEval e2 = phi_sandwich(2.0);
    REQUIRE_THAT(e2.phi, WithinAbs(0.3862943611198906, 1e-15));
    REQUIRE(e2.chi_upper == 1.0);
    REQUIRE_THAT(e2.taylor3_lower, WithinAbs(1.0 / 3.0, 1e-15));
    REQUIRE_THAT(e2.taylor4_upper, WithinAbs(2.0 / 3.0, 1e-15));
}

TEST_CASE("Taylor brackets hold on the log-spaced grid", "[phi]") {
    // x = 0 plus 10^5 points log-spaced in [1e-6, 1e3]
    auto check = [](double x) {
        PhiEval e = phi_sandwich(x);
        double slack = 1e-12 * std::max(1.0, std::fabs(e.phi));
        REQUIRE(e.phi >= -slack);
        REQUIRE(e.phi - e.taylor3_lower >= -slack);
        REQUIRE(e.chi_upper - e.phi >= -slack);
        REQUIRE(e.taylor4_upper - e.phi >= -slack);
        // the proof device g(x) = (x-1)^2 - phi(x) stays nonnegative
        REQUIRE(e.chi_upper - e.phi >= -slack);
    };
    check(0.0);
    const int points = 100000;
    for (int i = 0; i <= points; ++i) {
        double x = std::pow(10.0, -6.0 + 9.0 * i / points);
        check(x);
    }
}

TEST_CASE("one-sided quartic upper bound with coefficient 1/12 on x >= 1", "[phi]") {
    for (int i = 0; i <= 2000; ++i) {
        double x = 1.0 + i * (20.0 / 2000.0);
        double d = x - 1.0;
        double upper = 0.5 * d * d - d * d * d / 6.0 + d * d * d * d / 12.0;
        REQUIRE(upper - phi(x) >= -1e-12 * std::max(1.0, phi(x)));
    }
}

TEST_CASE("derivative table and finite differences", "[phi]") {
    REQUIRE(phi_derivative(1.0, 2) == 1.0);
    REQUIRE(phi_derivative(1.0, 5) == -6.0);
    REQUIRE_THAT(phi_derivative(std::exp(1.0), 1), WithinAbs(1.0, 1e-15));
    REQUIRE(phi_derivative(1.0, 0) == 0.0);
    REQUIRE(phi_derivative(1.0, 3) == -1.0);
    REQUIRE(phi_derivative(1.0, 4) == 2.0);
    REQUIRE_THROWS_AS(phi_derivative(0.0, 2), NonpositiveInput);
    REQUIRE_THROWS_AS(phi_derivative(1.0, 6), InvalidOrder);

    // fourth-order central differences at 20 interior points
    for (int i = 1; i <= 20; ++i) {
        double x = 0.1 + (10.0 - 0.1) * i / 21.0;
        for (int order = 1; order <= 5; ++order) {
            double h = 0.01 * x;
            auto f = [&](double t) { return phi_derivative(t, order - 1); };
            double fd = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
                        (12.0 * h);
            double want = phi_derivative(x, order);
            REQUIRE_THAT(fd, WithinAbs(want, 1e-6 * std::max(1.0, std::fabs(want))));
        }
    }
}
