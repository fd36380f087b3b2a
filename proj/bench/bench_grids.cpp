// Timing comparison of the serial reference kernels against their OpenMP
// versions, with an elementwise equality check on every pair.
//
//   ./rcp-bench [--quick]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcp/grids.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

void report(const char* name, double t_serial, double t_parallel, bool identical) {
    std::printf("%-24s %10.3f ms %10.3f ms %7.2fx   %s\n", name, 1e3 * t_serial, 1e3 * t_parallel,
                t_serial / t_parallel, identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serially\n");
#endif
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const auto grid = linspace(0.01, 1.57, quick ? 20000 : 200000);
        const auto t0 = Clock::now();
        const auto ser = rcp::convergence_curve_serial(grid, 1.0);
        const auto t1 = Clock::now();
        const auto par = rcp::convergence_curve(grid, 1.0);
        const auto t2 = Clock::now();
        bool same = ser.size() == par.size();
        for (std::size_t i = 0; same && i < ser.size(); ++i)
            same = ser[i].sigma == par[i].sigma && ser[i].branch == par[i].branch;
        report("convergence_curve", seconds(t0, t1), seconds(t1, t2), same);
    }
    {
        const auto axis = linspace(-5.0, 5.0, quick ? 400 : 2000);
        const auto t0 = Clock::now();
        const auto ser = rcp::mu2_quadratics_surface_serial(axis, axis, -1.0);
        const auto t1 = Clock::now();
        const auto par = rcp::mu2_quadratics_surface(axis, axis, -1.0);
        const auto t2 = Clock::now();
        report("mu2_quadratics_surface", seconds(t0, t1), seconds(t1, t2), ser == par);
    }
    {
        const auto axis = linspace(-4.0, 0.0, quick ? 400 : 2000);
        const auto t0 = Clock::now();
        const auto ser = rcp::mu2_cubics_surface_serial(axis, axis, -1.0);
        const auto t1 = Clock::now();
        const auto par = rcp::mu2_cubics_surface(axis, axis, -1.0);
        const auto t2 = Clock::now();
        report("mu2_cubics_surface", seconds(t0, t1), seconds(t1, t2), ser == par);
    }
    {
        const auto rho = linspace(0.001, 0.999, quick ? 100000 : 2000000);
        const auto t0 = Clock::now();
        const auto ser = rcp::mu2_numerator_curve_serial(rho);
        const auto t1 = Clock::now();
        const auto par = rcp::mu2_numerator_curve(rho);
        const auto t2 = Clock::now();
        report("mu2_numerator_curve", seconds(t0, t1), seconds(t1, t2), ser == par);
    }
    {
        std::vector<rcp::PacketSimConfig> cfgs;
        for (int i = 0; i < (quick ? 4 : 8); ++i) {
            rcp::PacketSimConfig c;
            c.variant = i % 2 ? rcp::Variant::WithoutQueue : rcp::Variant::WithQueue;
            c.capacity = 12500.0;
            c.n_sources = 20;
            c.rtt = 100.0;
            c.a = i % 2 ? 1.6 : 0.8;
            c.duration = quick ? 4000.0 : 10000.0;
            c.seed = 40 + static_cast<std::uint64_t>(i);
            cfgs.push_back(c);
        }
        const auto t0 = Clock::now();
        const auto ser = rcp::run_packet_batch_serial(cfgs);
        const auto t1 = Clock::now();
        const auto par = rcp::run_packet_batch(cfgs);
        const auto t2 = Clock::now();
        bool same = ser.size() == par.size();
        for (std::size_t i = 0; same && i < ser.size(); ++i)
            same = ser[i].rate == par[i].rate && ser[i].queue_pkts == par[i].queue_pkts;
        report("run_packet_batch", seconds(t0, t1), seconds(t1, t2), same);
    }
    return 0;
}
