#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rcp/dde_sim.hpp"
#include "rcp/hopf.hpp"
#include "rcp/linear_analysis.hpp"

using namespace rcp;

namespace {
constexpr double kPi = std::numbers::pi;

FluidParams ex1(double kappa) {
    FluidParams p;
    p.variant = Variant::WithQueue;
    p.a = 1.01;
    p.b = 0.736;
    p.C = 10.0;
    p.tau = 100.0;
    p.kappa = kappa;
    return p;
}

FluidParams ex3(double kappa) {
    FluidParams p = ex1(kappa);
    p.a = 0.827;
    p.b = 0.022;
    return p;
}

FluidParams nq(double a, double kappa = 1.0, double C = 10.0, double tau = 1.0) {
    FluidParams p;
    p.variant = Variant::WithoutQueue;
    p.a = a;
    p.gamma = 1.0;
    p.C = C;
    p.tau = tau;
    p.kappa = kappa;
    return p;
}
}  // namespace

TEST_SUITE_BEGIN("dde_sim");

TEST_CASE("equilibrium is preserved to 1e-9 over 100 delay periods") {
    const FluidParams p = ex1(1.0);
    const double r_star = equilibrium(p).R_star;
    const Trajectory tr = integrate(p, r_star, 100.0 * p.tau, p.tau / 1000.0);
    CHECK_FALSE(tr.diverged);
    for (double r : tr.R) CHECK(std::fabs(r - r_star) <= 1e-9 * r_star);
}

TEST_CASE("below the critical kappa the rate converges to R*") {
    const FluidParams p = ex1(0.95);
    const double r_star = equilibrium(p).R_star;
    const Trajectory tr = integrate(p, 5.6, 500.0 * p.tau, p.tau / 1000.0);
    CHECK_FALSE(tr.diverged);
    CHECK(std::fabs(tr.R.back() - r_star) < 1e-3);
}

TEST_CASE("past the critical kappa a stable limit cycle emerges") {
    const FluidParams p = ex1(1.05);
    const double r_star = equilibrium(p).R_star;
    const Trajectory tr = integrate(p, 5.6, 500.0 * p.tau, p.tau / 1000.0);
    CHECK_FALSE(tr.diverged);
    const double amp = tail_amplitude(tr);
    CHECK(amp > 0.05 * r_star);
    CHECK(amp < 0.9 * r_star);
}

TEST_CASE("oscillation period near onset is about four delays") {
    const FluidParams p = ex1(1.05);
    const double r_star = equilibrium(p).R_star;
    const Trajectory tr = integrate(p, 5.6, 500.0 * p.tau, p.tau / 1000.0);
    // Ascending zero crossings of R - R* over the tail.
    std::vector<double> crossings;
    for (std::size_t i = tr.R.size() / 2; i + 1 < tr.R.size(); ++i) {
        if (tr.R[i] < r_star && tr.R[i + 1] >= r_star) crossings.push_back(tr.time_of(i));
    }
    REQUIRE(crossings.size() >= 5);
    const double period = (crossings.back() - crossings.front()) / (crossings.size() - 1);
    CHECK(std::fabs(period - 4.0 * p.tau) < 0.4 * p.tau);
}

TEST_CASE("high-utilization sub-critical case escapes to the queue pole") {
    const Trajectory up = integrate(ex3(1.05), 8.9, 1000.0 * 100.0, 0.1);
    CHECK(up.diverged);
    CHECK(up.divergence_time > 0.0);

    const FluidParams down = ex3(0.95);
    const Trajectory tr = integrate(down, 8.9, 500.0 * down.tau, down.tau / 1000.0);
    CHECK_FALSE(tr.diverged);
    CHECK(std::fabs(tr.R.back() - equilibrium(down).R_star) < 1e-3);
}

TEST_CASE("tail amplitude on synthetic inputs") {
    Trajectory tr;
    tr.params = nq(1.0);
    tr.params.tau = 1.0;
    tr.steps_per_delay = 100;
    tr.dt = 0.01;
    const std::size_t n = 100 + 80 * 100 + 1;  // 80 delay periods
    tr.R.resize(n);
    tr.dR.assign(n, 0.0);

    SUBCASE("constant trajectory has zero amplitude") {
        for (auto& r : tr.R) r = 5.0;
        CHECK(tail_amplitude(tr) == 0.0);
    }
    SUBCASE("a sampled sinusoid reports its amplitude") {
        const double A = 2.5;
        for (std::size_t i = 0; i < n; ++i)
            tr.R[i] = 10.0 + A * std::sin(2.0 * kPi * tr.time_of(i) / 4.0);  // period 4, 400 samples
        CHECK(tail_amplitude(tr) == doctest::Approx(A).epsilon(1e-3));
    }
    SUBCASE("window shorter than ten delays is rejected") {
        for (auto& r : tr.R) r = 5.0;
        tr.R.resize(100 + 20 * 100 + 1);
        tr.dR.resize(tr.R.size());
        CHECK_THROWS_AS((void)tail_amplitude(tr, 0.25), std::invalid_argument);
    }
}

TEST_CASE("step halving shows fourth-order convergence") {
    const FluidParams p = ex1(0.98);
    const double t_end = 40.0 * p.tau;
    const double r1 = integrate(p, 5.6, t_end, p.tau / 200.0).R.back();
    const double r2 = integrate(p, 5.6, t_end, p.tau / 400.0).R.back();
    const double r3 = integrate(p, 5.6, t_end, p.tau / 800.0).R.back();
    const double e1 = std::fabs(r1 - r2);
    const double e2 = std::fabs(r2 - r3);
    REQUIRE(e2 > 0.0);
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("supercritical tail amplitude matches the first-order law") {
    FluidParams p = nq(kPi / 2.0);  // kappa_c = 1
    p.kappa = 1.02;
    const Trajectory tr = integrate(p, equilibrium(p).R_star * 1.01, 3000.0, 1.0 / 500.0);
    REQUIRE_FALSE(tr.diverged);
    const double amp = tail_amplitude(tr, 0.05);
    const double law = supercritical_amplitude(nq(kPi / 2.0), 1.02);
    CHECK(std::fabs(amp - law) <= 0.10 * law);
}

TEST_CASE("decay rate estimate against the characteristic root") {
    SUBCASE("fastest decay at gain 1/e") {
        const FluidParams p = nq(std::exp(-1.0), 1.0, 1.0, 1.0);
        const Trajectory tr =
            integrate(p, equilibrium(p).R_star * 1.001, 80.0, 1.0 / 1000.0);
        const double est = decay_rate_estimate(tr);
        CHECK(std::fabs(est - 1.0) <= 0.05);
    }
    SUBCASE("real-root regime") {
        const FluidParams p = nq(0.2, 1.0, 1.0, 1.0);
        const Trajectory tr =
            integrate(p, equilibrium(p).R_star * 1.001, 80.0, 1.0 / 1000.0);
        const double est = decay_rate_estimate(tr);
        CHECK(std::fabs(est - 0.2591711018190737) <= 0.05 * 0.2591711018190737);
    }
    SUBCASE("oscillatory regime") {
        const FluidParams p = nq(1.2, 1.0, 1.0, 1.0);
        const Trajectory tr =
            integrate(p, equilibrium(p).R_star * 1.001, 120.0, 1.0 / 1000.0);
        const double est = decay_rate_estimate(tr);
        const double expect = -rightmost_root(1.2, 1.0).real();
        CHECK(std::fabs(est - expect) <= 0.05 * expect);
    }
    SUBCASE("refused for unstable parameters") {
        const FluidParams p = nq(1.7, 1.0, 1.0, 1.0);
        const Trajectory tr = integrate(p, equilibrium(p).R_star * 1.001, 40.0, 1.0 / 500.0);
        CHECK_THROWS_AS((void)decay_rate_estimate(tr), std::invalid_argument);
    }
}

TEST_CASE("dde onset scan brackets the analytic critical kappa") {
    const FluidParams p = nq(1.01 * kPi / 2.0);
    const double kappa_c = stability(p).kappa_c;
    std::vector<double> grid;
    for (double k = 0.96; k <= 1.0301; k += 0.005) grid.push_back(k);
    const double onset = oscillation_onset(p, grid);
    REQUIRE(std::isfinite(onset));
    CHECK(std::fabs(onset - kappa_c) <= 0.01 * kappa_c);
}

TEST_CASE("warm-continuation sweep of a supercritical system") {
    const FluidParams p = nq(kPi / 2.0);  // kappa_c = 1
    std::vector<double> grid;
    for (double k = 0.95; k <= 1.0501; k += 0.01) grid.push_back(k);
    SweepOptions opt;
    opt.t_end_per_point = 1000.0;
    opt.dt_request = 1.0 / 500.0;
    const auto fwd = sweep_bifurcation(p, grid, SweepDirection::Forward, opt);
    const auto bwd = sweep_bifurcation(p, grid, SweepDirection::Backward, opt);
    REQUIRE(fwd.size() == grid.size());
    REQUIRE(bwd.size() == grid.size());
    CHECK(fwd.front().converged_to_equilibrium);
    CHECK(fwd.back().amplitude > 0.3);
    // Amplitudes grow with kappa on the unstable side.
    CHECK(fwd.back().amplitude > fwd[grid.size() - 3].amplitude);
    // A macroscopic gap marks coexisting attractors; near kappa_c the
    // critical slowing-down leaves finite-time residuals, so the bar is 15%
    // of the equilibrium rate.
    const double r_star = equilibrium(p).R_star;
    const auto hys = detect_hysteresis(fwd, bwd, 0.15 * r_star);
    CHECK_FALSE(hys.hysteresis);

    CHECK_THROWS_AS((void)sweep_bifurcation(p, std::vector<double>{1.0, 0.9},
                                            SweepDirection::Forward, opt),
                    std::invalid_argument);
}

TEST_CASE("integrate validates its inputs") {
    const FluidParams p = ex1(1.0);
    CHECK_THROWS_AS((void)integrate(p, -1.0, 10.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(p, 11.0, 10.0, 0.1), std::invalid_argument);  // at the pole
    CHECK_THROWS_AS((void)integrate(p, 5.0, -1.0, 0.1), std::invalid_argument);
    DdeHistory h = DdeHistory::constant(5.0, 7);  // wrong length for N = 1000
    CHECK_THROWS_AS((void)integrate(p, h, 10.0, p.tau / 1000.0), std::invalid_argument);
}

TEST_SUITE_END();
