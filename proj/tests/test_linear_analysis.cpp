#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rcp/fluid_model.hpp"
#include "rcp/linear_analysis.hpp"

using namespace rcp;

namespace {
constexpr double kPi = std::numbers::pi;

FluidParams wq(double a, double b, double kappa = 1.0) {
    FluidParams p;
    p.variant = Variant::WithQueue;
    p.a = a;
    p.b = b;
    p.C = 10.0;
    p.tau = 100.0;
    p.kappa = kappa;
    return p;
}

FluidParams nq(double a, double gamma = 1.0, double kappa = 1.0) {
    FluidParams p;
    p.variant = Variant::WithoutQueue;
    p.a = a;
    p.gamma = gamma;
    p.C = 10.0;
    p.tau = 1.0;
    p.kappa = kappa;
    return p;
}
}  // namespace

TEST_SUITE_BEGIN("linear_analysis");

TEST_CASE("stability verdicts") {
    CHECK(stability(nq(1.5)).stable);          // 1.5 < pi/2
    CHECK_FALSE(stability(nq(1.6)).stable);
    CHECK_FALSE(stability(nq(kPi / 2.0)).stable);  // boundary counts as unstable

    // Numerical example operating points: kappa_c within 0.005 of 1.
    const StabilityVerdict v1 = stability(wq(1.01, 0.736));
    CHECK(std::fabs(v1.kappa_c - 1.0) <= 0.005);
    CHECK(v1.kappa_c == doctest::Approx(1.00333210055257).epsilon(1e-10));
    const StabilityVerdict v2 = stability(wq(0.924, 0.257));
    CHECK(std::fabs(v2.kappa_c - 1.0) <= 0.005);
    const StabilityVerdict v3 = stability(wq(0.827, 0.022));
    CHECK(std::fabs(v3.kappa_c - 1.0) <= 0.005);

    // kappa_c * (gain/kappa) = pi/2 identically.
    for (const auto& v : {v1, v2, v3})
        CHECK(v.kappa_c * v.effective_gain == doctest::Approx(kPi / 2.0).epsilon(1e-14));

    // kappa scales the effective gain.
    CHECK(stability(wq(1.01, 0.736, 1.05)).stable == false);
    CHECK(stability(wq(1.01, 0.736, 0.95)).stable == true);
    CHECK(stability(wq(1.01, 0.736, 0.95)).margin > 0.0);
}

TEST_CASE("stability boundary in the (a,b) plane") {
    const std::vector<double> grid = {0.7,  kPi / 4.0, 0.79, 3.0 * kPi / 8.0,
                                      1.5, kPi / 2.0, 1.6};
    const auto pts = stability_boundary(grid);
    REQUIRE(pts.size() == grid.size());
    CHECK_FALSE(pts[0].exists);
    CHECK_FALSE(pts[1].exists);  // a = pi/4: rho -> 1 needs b -> infinity
    CHECK(pts[2].exists);
    CHECK(pts[3].exists);
    CHECK(pts[4].exists);
    CHECK_FALSE(pts[5].exists);  // a = pi/2: rho -> 0 needs b -> infinity
    CHECK_FALSE(pts[6].exists);

    // a = 3*pi/8: rho = 1/3, b = 2*(2/3)^2/(1/3) = 8/3.
    CHECK(pts[3].rho_star == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(pts[3].b == doctest::Approx(8.0 / 3.0).epsilon(1e-12));

    // Returned points satisfy the boundary equation.
    for (const auto& pt : pts) {
        if (!pt.exists) continue;
        const double gain = pt.a * (pt.b + 8.0 - std::sqrt(pt.b * pt.b + 8.0 * pt.b)) / 4.0;
        CHECK(std::fabs(gain - kPi / 2.0) <= 1e-10);
    }
}

TEST_CASE("robust stability condition") {
    CHECK(robust_stability(nq(0.99)));
    CHECK_FALSE(robust_stability(nq(1.0)));
    CHECK(robust_stability(wq(0.6, b_for_utilization(0.55))));       // 0.6*1.55 = 0.93
    CHECK_FALSE(robust_stability(wq(0.924, b_for_utilization(0.70))));  // 0.924*1.7 > 1
    // kappa multiplies the gain.
    CHECK_FALSE(robust_stability(nq(0.99, 1.0, 1.1)));
}

TEST_CASE("hayes g function") {
    CHECK(hayes_g(1e-14) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(hayes_g(kPi / 2.0) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(hayes_g(3.14) > 1e3);
    CHECK_THROWS_AS((void)hayes_g(kPi), std::invalid_argument);
    CHECK_THROWS_AS((void)hayes_g(-0.1), std::invalid_argument);

    // Strictly increasing over the whole range that stays representable
    // (g overflows to +inf a little past u = 3.1).
    double prev = 0.0;
    for (int i = 1; i <= 3000; ++i) {
        const double u = i * 3.1 / 3000.0;
        const double g = hayes_g(u);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("convergence rate: branches and spot values") {
    const double a_star = std::exp(-1.0);

    SUBCASE("maximum at a = 1/e") {
        const ConvergenceReport r = convergence_rate(a_star, 1.0);
        CHECK(std::fabs(r.sigma - 1.0) <= 1e-10);
        CHECK(r.branch == Branch::Sigma2);
    }
    SUBCASE("slow decay just below the Hopf condition") {
        const ConvergenceReport r = convergence_rate(1.5707, 1.0);
        CHECK(r.branch == Branch::Sigma3);
        CHECK(r.sigma > 0.0);
        CHECK(r.sigma < 1e-2);
    }
    SUBCASE("bisection against the frozen root of s*e^{-s} = 0.2") {
        const ConvergenceReport r = convergence_rate(0.2, 1.0);
        CHECK(r.sigma == doctest::Approx(0.2591711018190737).epsilon(1e-9));
        CHECK(r.branch == Branch::Sigma2);
        CHECK(r.candidates[0] == 1.0);
        CHECK(std::isinf(r.candidates[2]));
    }
    SUBCASE("unstable gains") {
        CHECK(convergence_rate(kPi / 2.0, 1.0).branch == Branch::Unstable);
        CHECK(convergence_rate(kPi / 2.0, 1.0).sigma == 0.0);
        CHECK(convergence_rate(2.0, 3.0).branch == Branch::Unstable);
    }
    SUBCASE("rejects nonpositive gain") {
        CHECK_THROWS_AS((void)convergence_rate(0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)convergence_rate(-1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("convergence rate: shape of the sigma(a) curve") {
    const double a_star = std::exp(-1.0);
    // Strictly increasing below 1/e, strictly decreasing above.
    double prev = 0.0;
    for (int i = 1; i <= 60; ++i) {
        const double a = 0.005 + (a_star - 0.006) * i / 60.0;
        const double s = convergence_rate(a, 1.0).sigma;
        CHECK(s > prev);
        prev = s;
    }
    prev = 2.0;
    for (int i = 1; i <= 60; ++i) {
        const double a = a_star + 0.001 + (kPi / 2.0 - a_star - 0.002) * i / 60.0;
        const double s = convergence_rate(a, 1.0).sigma;
        CHECK(s < prev);
        prev = s;
    }
    // sigma*tau <= 1, and sigma*tau depends only on the gain.
    for (double a : {0.05, 0.2, a_star, 0.5, 1.0, 1.4}) {
        const double st = convergence_rate(a, 1.0).sigma;
        CHECK(st <= 1.0 + 1e-12);
        for (double tau : {0.01, 1.0, 100.0}) {
            CHECK(convergence_rate(a, tau).sigma * tau == doctest::Approx(st).epsilon(1e-12));
        }
    }
}

TEST_CASE("rightmost characteristic root via Lambert W") {
    SUBCASE("branch point: double root at -1") {
        const auto lam = rightmost_root(std::exp(-1.0), 1.0);
        CHECK(std::fabs(lam.real() + 1.0) < 1e-6);
        CHECK(std::fabs(lam.imag()) < 1e-6);
    }
    SUBCASE("Hopf point: purely imaginary pair") {
        const auto lam = rightmost_root(kPi / 2.0, 1.0);
        CHECK(std::fabs(lam.real()) < 1e-9);
        CHECK(lam.imag() == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    }
    SUBCASE("real root below 1/e") {
        const auto lam = rightmost_root(0.2, 1.0);
        CHECK(lam.real() == doctest::Approx(-0.2591711018190737).epsilon(1e-10));
        CHECK(lam.imag() == 0.0);
    }
    SUBCASE("tau scaling") {
        const auto l1 = rightmost_root(0.8, 1.0);
        const auto l2 = rightmost_root(0.8, 50.0);
        CHECK(l2.real() * 50.0 == doctest::Approx(l1.real()).epsilon(1e-12));
        CHECK(l2.imag() * 50.0 == doctest::Approx(l1.imag()).epsilon(1e-12));
    }
}

TEST_CASE("Hayes construction agrees with the Lambert-W oracle") {
    for (int i = 0; i < 200; ++i) {
        const double a = 0.01 + (kPi / 2.0 - 0.02) * i / 199.0;
        const double sigma = convergence_rate(a, 1.0).sigma;
        const double w = -rightmost_root(a, 1.0).real();
        CHECK(std::fabs(sigma - w) <= 1e-8);
    }
}

TEST_CASE("stability verdict matches the convergence branch") {
    for (double a : {0.1, 0.3, 1.0, 1.5, kPi / 2.0, 1.7, 3.0}) {
        const FluidParams p = nq(a);
        const StabilityVerdict v = stability(p);
        const ConvergenceReport r = convergence_rate(p.kappa * effective_gain_base(p), p.tau);
        CHECK(v.stable == (r.branch != Branch::Unstable));
    }
    for (double rho : {0.2, 0.55, 0.9}) {
        for (double a : {0.3, 0.9, 1.2}) {
            const FluidParams p = wq(a, b_for_utilization(rho));
            const StabilityVerdict v = stability(p);
            const ConvergenceReport r = convergence_rate(p.kappa * effective_gain_base(p), p.tau);
            CHECK(v.stable == (r.branch != Branch::Unstable));
        }
    }
}

TEST_SUITE_END();
