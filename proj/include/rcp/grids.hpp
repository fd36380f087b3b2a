#ifndef RCP_GRIDS_HPP
#define RCP_GRIDS_HPP

#include <span>
#include <vector>

#include "rcp/linear_analysis.hpp"
#include "rcp/packet_sim.hpp"

namespace rcp {

/// Grid evaluations behind the chart/surface commands.  Every point is an
/// independent pure-function call, so the default kernels run the grid under
/// OpenMP; each has a serial twin that the tests compare elementwise for
/// exact equality.  Outputs do not depend on the thread count.

/// sigma(a) curve: one ConvergenceReport per grid gain.
std::vector<ConvergenceReport> convergence_curve(std::span<const double> gain_grid, double tau);
std::vector<ConvergenceReport> convergence_curve_serial(std::span<const double> gain_grid,
                                                        double tau);

/// mu2 over a (xi_xy, xi_yy) grid at fixed xi_y, row-major with the x index
/// outermost: out[ix * ys.size() + iy].
std::vector<double> mu2_quadratics_surface(std::span<const double> xs, std::span<const double> ys,
                                           double xi_y);
std::vector<double> mu2_quadratics_surface_serial(std::span<const double> xs,
                                                  std::span<const double> ys, double xi_y);

/// mu2 over a (xi_xyy, xi_yyy) grid at fixed xi_y, same layout.
std::vector<double> mu2_cubics_surface(std::span<const double> xs, std::span<const double> ys,
                                       double xi_y);
std::vector<double> mu2_cubics_surface_serial(std::span<const double> xs,
                                              std::span<const double> ys, double xi_y);

/// Sign-carrying numerator of the closed-form mu2 along a utilization grid.
std::vector<double> mu2_numerator_curve(std::span<const double> rho_grid);
std::vector<double> mu2_numerator_curve_serial(std::span<const double> rho_grid);

/// Batch of independent packet simulations (one run per config).  Each run is
/// single-threaded and seeded; the batch order of results matches the input.
std::vector<PacketTrace> run_packet_batch(std::span<const PacketSimConfig> configs);
std::vector<PacketTrace> run_packet_batch_serial(std::span<const PacketSimConfig> configs);

}  // namespace rcp

#endif
