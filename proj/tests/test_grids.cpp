#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcp/grids.hpp"
#include "rcp/hopf.hpp"

using namespace rcp;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

TEST_SUITE_BEGIN("grids");

// The parallel kernels must produce exactly what the serial references
// produce, element for element, independent of thread count.

TEST_CASE("convergence curve: parallel equals serial") {
    const auto grid = linspace(0.01, 1.55, 4001);
    const auto par = convergence_curve(grid, 2.0);
    const auto ser = convergence_curve_serial(grid, 2.0);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].sigma == ser[i].sigma);
        CHECK(par[i].branch == ser[i].branch);
        CHECK(par[i].candidates == ser[i].candidates);
    }
    // And the kernel is just the scalar operation mapped over the grid.
    CHECK(par[17].sigma == convergence_rate(grid[17], 2.0).sigma);
}

TEST_CASE("mu2 surfaces: parallel equals serial") {
    const auto xs = linspace(-5.0, 5.0, 101);
    const auto ys = linspace(-5.0, 5.0, 103);
    CHECK(mu2_quadratics_surface(xs, ys, -1.0) == mu2_quadratics_surface_serial(xs, ys, -1.0));
    CHECK(mu2_cubics_surface(xs, ys, -1.0) == mu2_cubics_surface_serial(xs, ys, -1.0));

    const auto q = mu2_quadratics_surface(xs, ys, -1.0);
    CHECK(q[7 * ys.size() + 11] == mu2_quadratics_only(xs[7], ys[11], -1.0));
}

TEST_CASE("mu2 numerator curve: parallel equals serial and changes sign once") {
    const auto rho = linspace(0.01, 0.99, 2001);
    const auto par = mu2_numerator_curve(rho);
    CHECK(par == mu2_numerator_curve_serial(rho));
    int sign_changes = 0;
    for (std::size_t i = 1; i < par.size(); ++i)
        if ((par[i] > 0.0) != (par[i - 1] > 0.0)) ++sign_changes;
    CHECK(sign_changes == 1);
}

TEST_CASE("packet batch: parallel equals serial") {
    std::vector<PacketSimConfig> configs;
    for (int i = 0; i < 4; ++i) {
        PacketSimConfig c;
        c.variant = i % 2 == 0 ? Variant::WithQueue : Variant::WithoutQueue;
        c.capacity = 12500.0;
        c.n_sources = 10;
        c.rtt = 50.0;
        c.a = 0.4 + 0.3 * i;
        c.duration = 2000.0;
        c.seed = 100 + static_cast<std::uint64_t>(i);
        configs.push_back(c);
    }
    const auto par = run_packet_batch(configs);
    const auto ser = run_packet_batch_serial(configs);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].t == ser[i].t);
        CHECK(par[i].queue_pkts == ser[i].queue_pkts);
        CHECK(par[i].rate == ser[i].rate);
        CHECK(par[i].generated == ser[i].generated);
        CHECK(par[i].served == ser[i].served);
        CHECK(par[i].dropped == ser[i].dropped);
    }
}

TEST_SUITE_END();
