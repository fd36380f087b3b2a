#include "rcp/grids.hpp"

#include "rcp/hopf.hpp"

namespace rcp {

namespace {
using std::size_t;
using idx_t = long long;
}  // namespace

std::vector<ConvergenceReport> convergence_curve_serial(std::span<const double> gain_grid,
                                                        double tau) {
    std::vector<ConvergenceReport> out(gain_grid.size());
    for (size_t i = 0; i < gain_grid.size(); ++i) out[i] = convergence_rate(gain_grid[i], tau);
    return out;
}

std::vector<ConvergenceReport> convergence_curve(std::span<const double> gain_grid, double tau) {
    std::vector<ConvergenceReport> out(gain_grid.size());
#pragma omp parallel for schedule(static)
    for (idx_t i = 0; i < static_cast<idx_t>(gain_grid.size()); ++i)
        out[static_cast<size_t>(i)] = convergence_rate(gain_grid[static_cast<size_t>(i)], tau);
    return out;
}

std::vector<double> mu2_quadratics_surface_serial(std::span<const double> xs,
                                                  std::span<const double> ys, double xi_y) {
    std::vector<double> out(xs.size() * ys.size());
    for (size_t ix = 0; ix < xs.size(); ++ix)
        for (size_t iy = 0; iy < ys.size(); ++iy)
            out[ix * ys.size() + iy] = mu2_quadratics_only(xs[ix], ys[iy], xi_y);
    return out;
}

std::vector<double> mu2_quadratics_surface(std::span<const double> xs, std::span<const double> ys,
                                           double xi_y) {
    std::vector<double> out(xs.size() * ys.size());
#pragma omp parallel for schedule(static)
    for (idx_t ix = 0; ix < static_cast<idx_t>(xs.size()); ++ix)
        for (size_t iy = 0; iy < ys.size(); ++iy)
            out[static_cast<size_t>(ix) * ys.size() + iy] =
                mu2_quadratics_only(xs[static_cast<size_t>(ix)], ys[iy], xi_y);
    return out;
}

std::vector<double> mu2_cubics_surface_serial(std::span<const double> xs,
                                              std::span<const double> ys, double xi_y) {
    std::vector<double> out(xs.size() * ys.size());
    for (size_t ix = 0; ix < xs.size(); ++ix)
        for (size_t iy = 0; iy < ys.size(); ++iy)
            out[ix * ys.size() + iy] = mu2_cubics_only(xs[ix], ys[iy], xi_y);
    return out;
}

std::vector<double> mu2_cubics_surface(std::span<const double> xs, std::span<const double> ys,
                                       double xi_y) {
    std::vector<double> out(xs.size() * ys.size());
#pragma omp parallel for schedule(static)
    for (idx_t ix = 0; ix < static_cast<idx_t>(xs.size()); ++ix)
        for (size_t iy = 0; iy < ys.size(); ++iy)
            out[static_cast<size_t>(ix) * ys.size() + iy] =
                mu2_cubics_only(xs[static_cast<size_t>(ix)], ys[iy], xi_y);
    return out;
}

std::vector<double> mu2_numerator_curve_serial(std::span<const double> rho_grid) {
    std::vector<double> out(rho_grid.size());
    for (size_t i = 0; i < rho_grid.size(); ++i) out[i] = mu2_numerator(rho_grid[i]);
    return out;
}

std::vector<double> mu2_numerator_curve(std::span<const double> rho_grid) {
    std::vector<double> out(rho_grid.size());
#pragma omp parallel for schedule(static)
    for (idx_t i = 0; i < static_cast<idx_t>(rho_grid.size()); ++i)
        out[static_cast<size_t>(i)] = mu2_numerator(rho_grid[static_cast<size_t>(i)]);
    return out;
}

std::vector<PacketTrace> run_packet_batch_serial(std::span<const PacketSimConfig> configs) {
    std::vector<PacketTrace> out(configs.size());
    for (size_t i = 0; i < configs.size(); ++i) out[i] = run(configs[i]);
    return out;
}

std::vector<PacketTrace> run_packet_batch(std::span<const PacketSimConfig> configs) {
    std::vector<PacketTrace> out(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (idx_t i = 0; i < static_cast<idx_t>(configs.size()); ++i)
        out[static_cast<size_t>(i)] = run(configs[static_cast<size_t>(i)]);
    return out;
}

}  // namespace rcp
